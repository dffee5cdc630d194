package shop.util;

import java.util.HashMap;
import java.util.Map;

public class LruCache<K, V> {
    private static class Node<K, V> {
        K key;
        V value;
        Node<K, V> prev;
        Node<K, V> next;
    }

    private final int capacity;
    private final Map<K, Node<K, V>> map = new HashMap<>();
    private Node<K, V> head;
    private Node<K, V> tail;
    private int hits;
    private int misses;

    public LruCache(int capacity) {
        this.capacity = capacity;
    }

    public V get(K key) {
        Node<K, V> n = map.get(key);
        if (n == null) {
            misses++;
            return null;
        }
        hits++;
        unlink(n);
        pushFront(n);
        return n.value;
    }

    public void put(K key, V value) {
        Node<K, V> n = map.get(key);
        if (n != null) {
            n.value = value;
            unlink(n);
            pushFront(n);
            return;
        }
        if (map.size() == capacity && tail != null) {
            map.remove(tail.key);
            unlink(tail);
        }
        n = new Node<>();
        n.key = key;
        n.value = value;
        map.put(key, n);
        pushFront(n);
    }

    private void unlink(Node<K, V> n) {
        if (n.prev != null) {
            n.prev.next = n.next;
        } else {
            head = n.next;
        }
        if (n.next != null) {
            n.next.prev = n.prev;
        } else {
            tail = n.prev;
        }
        n.prev = null;
        n.next = null;
    }

    private void pushFront(Node<K, V> n) {
        n.next = head;
        if (head != null) {
            head.prev = n;
        }
        head = n;
        if (tail == null) {
            tail = n;
        }
    }

    public double hitRate() {
        int total = hits + misses;
        return total == 0 ? 0.0 : (double) hits / total;
    }
}
