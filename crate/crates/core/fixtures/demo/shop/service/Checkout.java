package shop.service;

import shop.model.Customer;
import shop.model.Order;

public class Checkout {
    private final PricingEngine pricing;
    private final Inventory inventory;
    private final PaymentGateway payments;
    private int failures;

    public Checkout(PricingEngine pricing, Inventory inventory, PaymentGateway payments) {
        this.pricing = pricing;
        this.inventory = inventory;
        this.payments = payments;
    }

    public boolean place(Order order, Customer customer, String account) {
        if (order.getLines().isEmpty()) {
            failures++;
            return false;
        }
        if (!inventory.reserve(order)) {
            failures++;
            return false;
        }
        long amount = pricing.quote(order, customer);
        try {
            if (!payments.charge(account, amount)) {
                inventory.release(order);
                failures++;
                return false;
            }
            order.advance();
            customer.addOrder(order);
            return true;
        } catch (IllegalStateException e) {
            payments.refund(account, amount);
            inventory.release(order);
            failures++;
            return false;
        }
    }

    public int getFailures() {
        return failures;
    }
}
