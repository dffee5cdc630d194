package shop.app;

import java.util.function.Supplier;

public class Retry {
    private final int attempts;
    private final long backoffMillis;
    private int lastAttempts;

    public Retry(int attempts, long backoffMillis) {
        this.attempts = attempts;
        this.backoffMillis = backoffMillis;
    }

    public <T> T run(Supplier<T> action) {
        RuntimeException last = null;
        for (int i = 1; i <= attempts; i++) {
            lastAttempts = i;
            try {
                return action.get();
            } catch (RuntimeException e) {
                last = e;
                sleep(backoffMillis * i);
            }
        }
        throw last != null ? last : new IllegalStateException("no attempts");
    }

    private void sleep(long millis) {
        try {
            Thread.sleep(millis);
        } catch (InterruptedException e) {
            Thread.currentThread().interrupt();
        }
    }

    public int getLastAttempts() {
        return lastAttempts;
    }
}
