package fx;

public class Loader extends Base {
    public Loader() throws Exception {
        super();
        try {
            load("a.txt");
        } catch (RuntimeException e) {
            throw new Exception(e);
        } finally {
            done = true;
        }
    }
}
