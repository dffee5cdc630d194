package shop.util;

import java.util.ArrayDeque;
import java.util.ArrayList;
import java.util.Deque;
import java.util.List;

public class Graph {
    private final List<List<Integer>> adj = new ArrayList<>();

    public Graph(int n) {
        for (int i = 0; i < n; i++) {
            adj.add(new ArrayList<>());
        }
    }

    public void edge(int u, int v) {
        adj.get(u).add(v);
    }

    public int[] distances(int source) {
        int[] dist = new int[adj.size()];
        java.util.Arrays.fill(dist, -1);
        Deque<Integer> queue = new ArrayDeque<>();
        dist[source] = 0;
        queue.add(source);
        while (!queue.isEmpty()) {
            int u = queue.poll();
            for (int v : adj.get(u)) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    queue.add(v);
                }
            }
        }
        return dist;
    }

    public boolean hasCycle() {
        int[] color = new int[adj.size()];
        for (int i = 0; i < adj.size(); i++) {
            if (color[i] == 0 && visit(i, color)) {
                return true;
            }
        }
        return false;
    }

    private boolean visit(int u, int[] color) {
        color[u] = 1;
        for (int v : adj.get(u)) {
            if (color[v] == 1) {
                return true;
            }
            if (color[v] == 0 && visit(v, color)) {
                return true;
            }
        }
        color[u] = 2;
        return false;
    }

    public List<Integer> topologicalOrder() {
        int n = adj.size();
        int[] indeg = new int[n];
        for (List<Integer> out : adj) {
            for (int v : out) {
                indeg[v]++;
            }
        }
        Deque<Integer> ready = new ArrayDeque<>();
        for (int i = 0; i < n; i++) {
            if (indeg[i] == 0) {
                ready.add(i);
            }
        }
        List<Integer> order = new ArrayList<>();
        while (!ready.isEmpty()) {
            int u = ready.poll();
            order.add(u);
            for (int v : adj.get(u)) {
                if (--indeg[v] == 0) {
                    ready.add(v);
                }
            }
        }
        if (order.size() != n) {
            throw new IllegalStateException("graph has a cycle");
        }
        return order;
    }
}
