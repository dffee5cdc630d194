package shop.util;

import java.util.ArrayList;
import java.util.List;

public class Tokenizer {
    private final String text;
    private int pos;

    public Tokenizer(String text) {
        this.text = text;
    }

    public List<String> tokens() {
        List<String> out = new ArrayList<>();
        while (pos < text.length()) {
            char c = text.charAt(pos);
            if (Character.isWhitespace(c)) {
                pos++;
            } else if (Character.isDigit(c)) {
                out.add(number());
            } else if (Character.isLetter(c)) {
                out.add(word());
            } else if (c == '"') {
                out.add(quoted());
            } else {
                out.add(String.valueOf(c));
                pos++;
            }
        }
        return out;
    }

    private String number() {
        int start = pos;
        while (pos < text.length() && (Character.isDigit(text.charAt(pos)) || text.charAt(pos) == '.')) {
            pos++;
        }
        return text.substring(start, pos);
    }

    private String word() {
        int start = pos;
        while (pos < text.length() && Character.isLetterOrDigit(text.charAt(pos))) {
            pos++;
        }
        return text.substring(start, pos);
    }

    private String quoted() {
        StringBuilder b = new StringBuilder();
        pos++;
        while (pos < text.length() && text.charAt(pos) != '"') {
            if (text.charAt(pos) == '\\' && pos + 1 < text.length()) {
                pos++;
            }
            b.append(text.charAt(pos));
            pos++;
        }
        pos++;
        return b.toString();
    }
}
