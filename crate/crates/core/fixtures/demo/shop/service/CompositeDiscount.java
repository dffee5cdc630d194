package shop.service;

import java.util.ArrayList;
import java.util.List;
import shop.model.Order;

public class CompositeDiscount implements DiscountPolicy {
    private final List<DiscountPolicy> policies = new ArrayList<>();
    private final boolean stack;

    public CompositeDiscount(boolean stack) {
        this.stack = stack;
    }

    public CompositeDiscount add(DiscountPolicy p) {
        policies.add(p);
        return this;
    }

    @Override
    public long discountFor(Order order) {
        long best = 0;
        long sum = 0;
        for (DiscountPolicy p : policies) {
            long d = p.discountFor(order);
            sum += d;
            if (d > best) {
                best = d;
            }
        }
        long result = stack ? sum : best;
        return Math.min(result, order.totalCents());
    }
}
