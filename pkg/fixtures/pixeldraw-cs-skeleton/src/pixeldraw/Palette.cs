namespace PixelDraw
{
    public class Palette
    {
        private static readonly string Vendor = "pixeldraw";
        private static int[] defaults;
        private static string signature;

        static Palette()
        {
            defaults = new int[4];
            defaults[1] = 7;
            defaults[2] = 12;
            defaults[3] = 42;
            signature = "builtin";
        }

        private readonly string name;

        public Palette(string name)
        {
        }

        public string GetName()
        {
            return null;
        }

        public int ColorAt(int slot)
        {
            return 0;
        }

        public bool HasColor(int color)
        {
            return false;
        }

        public static string Describe(int slot)
        {
            return null;
        }
    }
}
