package shop.service;

import shop.model.Order;

public class PercentDiscount implements DiscountPolicy {
    private final int percent;

    public PercentDiscount(int percent) {
        if (percent < 0 || percent > 100) {
            throw new IllegalArgumentException("percent out of range: " + percent);
        }
        this.percent = percent;
    }

    @Override
    public long discountFor(Order order) {
        return order.totalCents() * percent / 100;
    }
}
