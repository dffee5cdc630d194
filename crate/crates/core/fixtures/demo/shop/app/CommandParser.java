package shop.app;

import java.util.HashMap;
import java.util.Map;

public class CommandParser {
    private final Map<String, String> options = new HashMap<>();
    private String command;

    public boolean parse(String[] args) {
        if (args.length == 0) {
            return false;
        }
        command = args[0];
        for (int i = 1; i < args.length; i++) {
            String a = args[i];
            if (a.startsWith("--")) {
                String key = a.substring(2);
                int eq = key.indexOf('=');
                if (eq >= 0) {
                    options.put(key.substring(0, eq), key.substring(eq + 1));
                } else if (i + 1 < args.length && !args[i + 1].startsWith("--")) {
                    options.put(key, args[++i]);
                } else {
                    options.put(key, "true");
                }
            } else {
                return false;
            }
        }
        return true;
    }

    public String getCommand() {
        return command;
    }

    public String option(String key, String fallback) {
        String v = options.get(key);
        return v == null ? fallback : v;
    }

    public int intOption(String key, int fallback) {
        try {
            return Integer.parseInt(option(key, String.valueOf(fallback)));
        } catch (NumberFormatException e) {
            return fallback;
        }
    }
}
