namespace PixelDraw
{
    public interface Shape
    {
        int Area();
    }
}
