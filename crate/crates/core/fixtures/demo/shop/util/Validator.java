package shop.util;

import java.util.ArrayList;
import java.util.List;

public class Validator {
    private final List<String> errors = new ArrayList<>();

    public Validator require(boolean condition, String message) {
        if (!condition) {
            errors.add(message);
        }
        return this;
    }

    public Validator email(String value) {
        int at = value == null ? -1 : value.indexOf('@');
        return require(at > 0 && at < value.length() - 1, "invalid email: " + value);
    }

    public Validator range(int value, int lo, int hi, String name) {
        return require(value >= lo && value <= hi, name + " out of range");
    }

    public boolean ok() {
        return errors.isEmpty();
    }

    public List<String> errors() {
        return errors;
    }
}
