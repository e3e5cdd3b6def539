namespace PixelDraw
{
    public class Canvas
    {
        private readonly FrameBuffer buffer;
        private int shapesDrawn;

        public Canvas(int width, int height)
        {
            this.buffer = new FrameBuffer(width, height);
            this.shapesDrawn = 0;
        }

        public int Fill(Rect rect, int color)
        {
            int painted = 0;
            for (int y = 0; y < rect.GetHeight(); y = y + 1)
            {
                for (int x = 0; x < rect.GetWidth(); x = x + 1)
                {
                    buffer.Draw(x, y, color);
                    painted = painted + 1;
                }
            }
            shapesDrawn = shapesDrawn + 1;
            return painted;
        }

        public bool IsBlank()
        {
            return buffer.IsEmpty();
        }

        public int GetShapesDrawn()
        {
            return shapesDrawn;
        }
    }
}
