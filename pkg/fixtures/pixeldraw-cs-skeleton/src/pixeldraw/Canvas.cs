namespace PixelDraw
{
    public class Canvas
    {
        private readonly FrameBuffer buffer;
        private int shapesDrawn;

        public Canvas(int width, int height)
        {
        }

        public int Fill(Rect rect, int color)
        {
            return 0;
        }

        public bool IsBlank()
        {
            return false;
        }

        public int GetShapesDrawn()
        {
            return 0;
        }
    }
}
