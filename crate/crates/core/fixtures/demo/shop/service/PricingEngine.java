package shop.service;

import java.util.HashMap;
import java.util.Map;
import shop.model.Customer;
import shop.model.Item;
import shop.model.Order;

public class PricingEngine {
    private final Map<String, Long> overrides = new HashMap<>();
    private DiscountPolicy policy;
    private double taxRate = 0.2;

    public PricingEngine(DiscountPolicy policy) {
        this.policy = policy;
    }

    public void override(Item item, long cents) {
        overrides.put(item.getSku(), cents);
    }

    public long priceOf(Item item) {
        Long o = overrides.get(item.getSku());
        return o != null ? o : item.getPriceCents();
    }

    public long quote(Order order, Customer customer) {
        long total = order.totalCents();
        long discount = policy == null ? 0 : policy.discountFor(order);
        if (customer != null && customer.isVip()) {
            discount += total / 20;
        }
        long net = Math.max(0, total - discount);
        long tax = Math.round(net * taxRate);
        return net + tax;
    }

    public void setTaxRate(double taxRate) {
        if (taxRate < 0 || taxRate > 1) {
            throw new IllegalArgumentException("tax rate");
        }
        this.taxRate = taxRate;
    }
}
