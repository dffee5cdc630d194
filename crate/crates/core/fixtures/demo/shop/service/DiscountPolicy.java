package shop.service;

import shop.model.Order;

public interface DiscountPolicy {
    long discountFor(Order order);
}
