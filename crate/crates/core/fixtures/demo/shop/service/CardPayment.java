package shop.service;

import java.util.ArrayList;
import java.util.List;

public class CardPayment implements PaymentGateway {
    private final List<String> log = new ArrayList<>();
    private long limitCents;

    public CardPayment(long limitCents) {
        this.limitCents = limitCents;
    }

    @Override
    public boolean charge(String account, long cents) {
        if (account == null || account.isEmpty()) {
            log.add("rejected: no account");
            return false;
        }
        if (cents > limitCents) {
            log.add("rejected: over limit " + cents);
            return false;
        }
        limitCents -= cents;
        log.add("charged " + account + " " + cents);
        return true;
    }

    @Override
    public void refund(String account, long cents) {
        limitCents += cents;
        log.add("refunded " + account + " " + cents);
    }

    public List<String> history() {
        return new ArrayList<>(log);
    }
}
