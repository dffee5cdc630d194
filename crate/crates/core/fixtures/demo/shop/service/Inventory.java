package shop.service;

import java.util.HashMap;
import java.util.Map;
import shop.model.Item;
import shop.model.Order;
import shop.model.OrderLine;

public class Inventory {
    private final Map<String, Integer> stock = new HashMap<>();
    private final Map<String, Integer> reserved = new HashMap<>();

    public void restock(Item item, int quantity) {
        stock.merge(item.getSku(), quantity, Integer::sum);
    }

    public int available(Item item) {
        int s = stock.getOrDefault(item.getSku(), 0);
        int r = reserved.getOrDefault(item.getSku(), 0);
        return s - r;
    }

    public boolean reserve(Order order) {
        for (OrderLine line : order.getLines()) {
            if (available(line.getItem()) < line.getQuantity()) {
                return false;
            }
        }
        for (OrderLine line : order.getLines()) {
            reserved.merge(line.getItem().getSku(), line.getQuantity(), Integer::sum);
        }
        return true;
    }

    public void release(Order order) {
        for (OrderLine line : order.getLines()) {
            String sku = line.getItem().getSku();
            int left = reserved.getOrDefault(sku, 0) - line.getQuantity();
            if (left <= 0) {
                reserved.remove(sku);
            } else {
                reserved.put(sku, left);
            }
        }
    }
}
