package shop.service;

import shop.model.Money;
import shop.model.Order;
import shop.model.OrderLine;

public class InvoicePrinter {
    private final StringBuilder out = new StringBuilder();

    public String render(Order order) {
        out.setLength(0);
        out.append("Invoice ").append(order.getNumber()).append('\n');
        int i = 1;
        for (OrderLine line : order.getLines()) {
            out.append(i++).append(". ")
                .append(line.getItem().getName())
                .append(" x").append(line.getQuantity())
                .append(" = ").append(Money.format(line.subtotalCents()))
                .append('\n');
        }
        out.append("Total: ").append(Money.format(order.totalCents()));
        return out.toString();
    }

    public void print(Order order) {
        System.out.println(render(order));
    }
}
