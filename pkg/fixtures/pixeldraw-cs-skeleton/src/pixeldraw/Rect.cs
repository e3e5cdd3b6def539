namespace PixelDraw
{
    public class Rect : Shape
    {
        private readonly int width;
        private readonly int height;

        public Rect(int width, int height)
        {
        }

        public int Area()
        {
            return 0;
        }

        public double Aspect()
        {
            return 0.0;
        }

        public int GetWidth()
        {
            return 0;
        }

        public int GetHeight()
        {
            return 0;
        }
    }
}
