package shop.app;

class Version {
    static final String NAME = "1.0";
}
