package shop.service;

public interface PaymentGateway {
    boolean charge(String account, long cents);

    void refund(String account, long cents);
}
