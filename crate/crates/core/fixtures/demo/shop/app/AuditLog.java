package shop.app;

import java.util.ArrayList;
import java.util.List;

public class AuditLog implements Listener {
    private final List<String> entries = new ArrayList<>();
    private final int max;

    public AuditLog(int max) {
        this.max = max;
    }

    @Override
    public void on(Event event) {
        if (entries.size() >= max) {
            entries.remove(0);
        }
        entries.add(event.getTimestamp() + " " + event.getTopic());
    }

    public List<String> getEntries() {
        return entries;
    }
}
