package pixeldraw;

public class Canvas {
    private final FrameBuffer buffer;
    private int shapesDrawn;

    public Canvas(int width, int height) {
        this.buffer = new FrameBuffer(width, height);
        this.shapesDrawn = 0;
    }

    public int fill(Rect rect, int color) {
        int painted = 0;
        for (int y = 0; y < rect.getHeight(); y = y + 1) {
            for (int x = 0; x < rect.getWidth(); x = x + 1) {
                buffer.draw(x, y, color);
                painted = painted + 1;
            }
        }
        shapesDrawn = shapesDrawn + 1;
        return painted;
    }

    public boolean isBlank() {
        return buffer.isEmpty();
    }

    public int getShapesDrawn() {
        return shapesDrawn;
    }
}
