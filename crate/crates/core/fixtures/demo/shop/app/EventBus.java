package shop.app;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

public class EventBus {
    private final Map<String, List<Listener>> listeners = new HashMap<>();
    private final List<Event> deadLetters = new ArrayList<>();
    private long clock;

    public void subscribe(String topic, Listener listener) {
        listeners.computeIfAbsent(topic, k -> new ArrayList<>()).add(listener);
    }

    public boolean unsubscribe(String topic, Listener listener) {
        List<Listener> l = listeners.get(topic);
        return l != null && l.remove(listener);
    }

    public int publish(String topic, Object payload) {
        Event e = new Event(topic, payload, ++clock);
        List<Listener> l = listeners.get(topic);
        if (l == null || l.isEmpty()) {
            deadLetters.add(e);
            return 0;
        }
        int delivered = 0;
        for (Listener x : new ArrayList<>(l)) {
            try {
                x.on(e);
                delivered++;
            } catch (RuntimeException ex) {
                deadLetters.add(e);
            }
        }
        return delivered;
    }

    public List<Event> getDeadLetters() {
        return deadLetters;
    }
}
