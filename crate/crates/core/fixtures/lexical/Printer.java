package fx;

import java.util.List;

public class Printer {
    /* block comment with if while tokens */
    public static void show(List<String> items, boolean upper) {
        for (String s : items) {
            String t = upper ? s.toUpperCase() : s;
            System.out.println(t);
        }
    }
}
