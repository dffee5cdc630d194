package fx.util;

import java.util.*;

@SuppressWarnings("unchecked")
public final class Cache<K, V> extends Base {
    private final Map<K, List<V>> store = new HashMap<>();

    /** Returns "if" text; while comments are ignored. */
    @Override
    public String describe() {
        String s = "return new super";
        char c = '?';
        int n = store.size() > 2 ? 1 : 0;
        n *= 2;
        System.out.printf("%s%d", s, n);
        return s + c + super.describe();
    }
}
