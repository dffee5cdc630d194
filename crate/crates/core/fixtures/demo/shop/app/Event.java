package shop.app;

public class Event {
    private final String topic;
    private final Object payload;
    private final long timestamp;

    public Event(String topic, Object payload, long timestamp) {
        this.topic = topic;
        this.payload = payload;
        this.timestamp = timestamp;
    }

    public String getTopic() {
        return topic;
    }

    public Object getPayload() {
        return payload;
    }

    public long getTimestamp() {
        return timestamp;
    }
}
