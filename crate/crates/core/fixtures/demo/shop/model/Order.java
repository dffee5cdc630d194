package shop.model;

import java.util.ArrayList;
import java.util.Collections;
import java.util.List;

public class Order {
    public enum Status { NEW, PAID, SHIPPED, CANCELLED }

    private final String number;
    private final List<OrderLine> lines = new ArrayList<>();
    private Status status = Status.NEW;
    private long discountCents;

    public Order(String number) {
        this.number = number;
    }

    public String getNumber() {
        return number;
    }

    public void addLine(Item item, int quantity) {
        for (OrderLine line : lines) {
            if (line.getItem().getSku().equals(item.getSku())) {
                int merged = line.getQuantity() + quantity;
                lines.remove(line);
                lines.add(new OrderLine(item, merged));
                return;
            }
        }
        lines.add(new OrderLine(item, quantity));
    }

    public List<OrderLine> getLines() {
        return Collections.unmodifiableList(lines);
    }

    public long totalCents() {
        long total = 0;
        for (OrderLine line : lines) {
            total += line.subtotalCents();
        }
        return Math.max(0, total - discountCents);
    }

    public void applyDiscount(long cents) {
        discountCents = cents;
    }

    public Status getStatus() {
        return status;
    }

    public void advance() {
        switch (status) {
            case NEW:
                status = Status.PAID;
                break;
            case PAID:
                status = Status.SHIPPED;
                break;
            default:
                throw new IllegalStateException("cannot advance from " + status);
        }
    }

    public void cancel() {
        if (status == Status.SHIPPED) {
            throw new IllegalStateException("already shipped");
        }
        status = Status.CANCELLED;
    }
}
