package shop.model;

public class Tag {
    public String label;
    public int weight;
}
