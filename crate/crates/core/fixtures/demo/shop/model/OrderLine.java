package shop.model;

public class OrderLine {
    private final Item item;
    private final int quantity;

    public OrderLine(Item item, int quantity) {
        if (quantity <= 0) {
            throw new IllegalArgumentException("quantity must be positive");
        }
        this.item = item;
        this.quantity = quantity;
    }

    public Item getItem() {
        return item;
    }

    public int getQuantity() {
        return quantity;
    }

    public long subtotalCents() {
        return item.getPriceCents() * quantity;
    }
}
