public class Bootstrap {
    public static void main(String[] args) throws Exception {
        int code = 0;
        for (String a : args) {
            if (a.equals("--fail")) {
                code = 1;
            }
        }
        if (code != 0) {
            throw new Exception("bootstrap failed");
        }
        shop.app.Main.main(args);
    }
}
