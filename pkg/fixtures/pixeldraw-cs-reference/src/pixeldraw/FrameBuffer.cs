namespace PixelDraw
{
    public class FrameBuffer
    {
        private readonly int width;
        private readonly int height;
        private readonly int[] pixels;

        public FrameBuffer(int width, int height)
        {
            this.width = width;
            this.height = height;
            this.pixels = new int[width * height];
        }

        public int GetIndex(int x, int y)
        {
            if (x < 0 || y < 0 || x >= width || y >= height)
            {
                throw new ArgumentException("pixel out of range");
            }
            return y * width + x;
        }

        public int[] GetPixels()
        {
            return pixels;
        }

        public void Draw(int x, int y, int color)
        {
            pixels[GetIndex(x, y)] = color;
        }

        public void Clear()
        {
            for (int i = 0; i < pixels.Length; i = i + 1)
            {
                pixels[i] = 0;
            }
        }

        public bool IsEmpty()
        {
            for (int i = 0; i < pixels.Length; i = i + 1)
            {
                if (pixels[i] != 0)
                {
                    return false;
                }
            }
            return true;
        }

        public int GetWidth()
        {
            return width;
        }
    }
}
