package fx;

public class Flow {
    int run(int n) {
        int acc = 0;
        while (n > 0) {
            switch (n % 3) {
                case 0:
                    acc += n;
                    break;
                default:
                    n -= 2;
                    continue;
            }
            n--;
        }
        java.util.function.IntUnaryOperator f = x -> x << 1;
        return f.applyAsInt(acc);
    }
}
