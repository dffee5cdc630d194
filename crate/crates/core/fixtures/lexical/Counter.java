package fx;

// A counter.
public class Counter {
    private int count = 0;

    public void inc() {
        count++;
    }

    public int get() {
        return count;
    }
}
