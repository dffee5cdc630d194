package shop.app;

public interface Listener {
    void on(Event event);
}
