package shop.util;

public class Matrix {
    private final double[][] a;
    private final int rows;
    private final int cols;

    public Matrix(int rows, int cols) {
        this.rows = rows;
        this.cols = cols;
        this.a = new double[rows][cols];
    }

    public static Matrix identity(int n) {
        Matrix m = new Matrix(n, n);
        for (int i = 0; i < n; i++) {
            m.a[i][i] = 1.0;
        }
        return m;
    }

    public double get(int i, int j) {
        return a[i][j];
    }

    public void set(int i, int j, double v) {
        a[i][j] = v;
    }

    public Matrix times(Matrix o) {
        if (cols != o.rows) {
            throw new IllegalArgumentException("shape mismatch");
        }
        Matrix r = new Matrix(rows, o.cols);
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < o.cols; j++) {
                double s = 0;
                for (int k = 0; k < cols; k++) {
                    s += a[i][k] * o.a[k][j];
                }
                r.a[i][j] = s;
            }
        }
        return r;
    }

    public Matrix transpose() {
        Matrix t = new Matrix(cols, rows);
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < cols; j++) {
                t.a[j][i] = a[i][j];
            }
        }
        return t;
    }

    public double trace() {
        double s = 0;
        for (int i = 0; i < Math.min(rows, cols); i++) {
            s += a[i][i];
        }
        return s;
    }
}
