namespace PixelDraw
{
    public enum Mode
    {
        FAST,
        SAFE
    }
}
