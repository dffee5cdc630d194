package shop.util;

public class Ids {
    private static int next;
    public static synchronized String fresh(String prefix) { return prefix + (++next); }
}
