package shop.service;

import shop.model.Order;
import shop.model.OrderLine;

public class BulkDiscount implements DiscountPolicy {
    private final int threshold;
    private final long perUnitCents;

    public BulkDiscount(int threshold, long perUnitCents) {
        this.threshold = threshold;
        this.perUnitCents = perUnitCents;
    }

    @Override
    public long discountFor(Order order) {
        long discount = 0;
        for (OrderLine line : order.getLines()) {
            int extra = line.getQuantity() - threshold;
            if (extra > 0) {
                discount += extra * perUnitCents;
            }
        }
        return discount;
    }
}
