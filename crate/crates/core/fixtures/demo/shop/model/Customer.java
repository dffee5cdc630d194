package shop.model;

import java.util.ArrayList;
import java.util.List;

public class Customer {
    private final String id;
    private String email;
    private Address address;
    private final List<Order> orders = new ArrayList<>();
    private int loyaltyPoints;

    public Customer(String id, String email) {
        this.id = id;
        this.email = email;
    }

    public String getId() {
        return id;
    }

    public String getEmail() {
        return email;
    }

    public Address getAddress() {
        return address;
    }

    public void setAddress(Address address) {
        this.address = address;
    }

    public void addOrder(Order order) {
        if (order == null) {
            throw new IllegalArgumentException("order");
        }
        orders.add(order);
        loyaltyPoints += (int) (order.totalCents() / 100);
    }

    public int getLoyaltyPoints() {
        return loyaltyPoints;
    }

    public boolean isVip() {
        return loyaltyPoints > 500 || orders.size() > 20;
    }
}
