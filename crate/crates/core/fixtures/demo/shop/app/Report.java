package shop.app;

import java.util.ArrayList;
import java.util.List;
import shop.model.Order;
import shop.util.Strings;

public class Report {
    private final List<Order> orders = new ArrayList<>();

    public void add(Order order) {
        orders.add(order);
    }

    public long revenueCents() {
        long sum = 0;
        for (Order o : orders) {
            if (o.getStatus() != Order.Status.CANCELLED) {
                sum += o.totalCents();
            }
        }
        return sum;
    }

    public String table() {
        StringBuilder b = new StringBuilder();
        for (Order o : orders) {
            b.append(Strings.padLeft(o.getNumber(), 10, ' '))
                .append(' ')
                .append(Strings.padLeft(String.valueOf(o.totalCents()), 12, ' '))
                .append('\n');
        }
        return b.toString();
    }
}
