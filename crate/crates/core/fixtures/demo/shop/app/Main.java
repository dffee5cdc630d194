package shop.app;

import shop.model.Customer;
import shop.model.Item;
import shop.model.Order;
import shop.service.CardPayment;
import shop.service.Checkout;
import shop.service.Inventory;
import shop.service.PercentDiscount;
import shop.service.PricingEngine;

public class Main {
    public static void main(String[] args) {
        CommandParser cli = new CommandParser();
        if (!cli.parse(args)) {
            System.err.println("usage: shop <command> [--key value]");
            return;
        }
        Inventory inventory = new Inventory();
        Item pen = new Item("P1", "Pen", 150);
        inventory.restock(pen, cli.intOption("stock", 10));
        Checkout checkout = new Checkout(new PricingEngine(new PercentDiscount(10)), inventory, new CardPayment(100000));
        Customer c = new Customer("c1", "c1@example.com");
        Order o = new Order("O-1");
        o.addLine(pen, 3);
        boolean ok = checkout.place(o, c, cli.option("account", "acct"));
        System.out.println(ok ? "placed" : "failed");
    }
}
