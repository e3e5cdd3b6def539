package pixeldraw;

public class FrameBuffer {
    private final int width;
    private final int height;
    private final int[] pixels;

    public FrameBuffer(int width, int height) {
        this.width = width;
        this.height = height;
        this.pixels = new int[width * height];
    }

    public int getIndex(int x, int y) {
        if (x < 0 || y < 0 || x >= width || y >= height) {
            throw new IllegalArgumentException("pixel out of range");
        }
        return y * width + x;
    }

    public int[] getPixels() {
        return pixels;
    }

    public void draw(int x, int y, int color) {
        pixels[getIndex(x, y)] = color;
    }

    public void clear() {
        for (int i = 0; i < pixels.length; i = i + 1) {
            pixels[i] = 0;
        }
    }

    public boolean isEmpty() {
        for (int i = 0; i < pixels.length; i = i + 1) {
            if (pixels[i] != 0) {
                return false;
            }
        }
        return true;
    }

    public int getWidth() {
        return width;
    }
}
