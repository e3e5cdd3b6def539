namespace PixelDraw
{
    public class FrameBuffer
    {
        private readonly int width;
        private readonly int height;
        private readonly int[] pixels;

        public FrameBuffer(int width, int height)
        {
        }

        public int GetIndex(int x, int y)
        {
            return 0;
        }

        public int[] GetPixels()
        {
            return null;
        }

        public void Draw(int x, int y, int color)
        {
        }

        public void Clear()
        {
        }

        public bool IsEmpty()
        {
            return false;
        }

        public int GetWidth()
        {
            return 0;
        }
    }
}
