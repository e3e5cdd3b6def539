package pixeldraw;

public class Rect implements Shape {
    private final int width;
    private final int height;

    public Rect(int width, int height) {
        this.width = width;
        this.height = height;
    }

    public int area() {
        return width * height;
    }

    public double aspect() {
        return 1.0 * width / height;
    }

    public int getWidth() {
        return width;
    }

    public int getHeight() {
        return height;
    }
}
