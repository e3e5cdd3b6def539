namespace PixelDraw
{
    public class Rect : Shape
    {
        private readonly int width;
        private readonly int height;

        public Rect(int width, int height)
        {
            this.width = width;
            this.height = height;
        }

        public int Area()
        {
            return width * height;
        }

        public double Aspect()
        {
            return 1.0 * width / height;
        }

        public int GetWidth()
        {
            return width;
        }

        public int GetHeight()
        {
            return height;
        }
    }
}
