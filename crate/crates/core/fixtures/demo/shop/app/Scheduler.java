package shop.app;

import java.util.PriorityQueue;

public class Scheduler {
    private static class Job implements Comparable<Job> {
        final long due;
        final Runnable task;

        Job(long due, Runnable task) {
            this.due = due;
            this.task = task;
        }

        @Override
        public int compareTo(Job o) {
            return Long.compare(due, o.due);
        }
    }

    private final PriorityQueue<Job> queue = new PriorityQueue<>();
    private long now;

    public void at(long time, Runnable task) {
        if (time < now) {
            throw new IllegalArgumentException("time in the past");
        }
        queue.add(new Job(time, task));
    }

    public int advanceTo(long time) {
        int ran = 0;
        while (!queue.isEmpty() && queue.peek().due <= time) {
            Job j = queue.poll();
            now = j.due;
            j.task.run();
            ran++;
        }
        now = Math.max(now, time);
        return ran;
    }

    public int pending() {
        return queue.size();
    }
}
