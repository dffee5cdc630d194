package shop.model;

public final class Money {
    public static String format(long cents) { return (cents / 100) + "." + String.format("%02d", cents % 100); }
}
