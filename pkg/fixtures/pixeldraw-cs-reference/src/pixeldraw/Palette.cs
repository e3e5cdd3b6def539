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
            for (int i = 0; i < defaults.Length; i = i + 1)
            {
                if (defaults[i] < 0)
                {
                    defaults[i] = 0;
                }
            }
        }

        private readonly string name;

        public Palette(string name)
        {
            this.name = name;
        }

        public string GetName()
        {
            return name;
        }

        public int ColorAt(int slot)
        {
            return defaults[slot];
        }

        public bool HasColor(int color)
        {
            for (int i = 0; i < defaults.Length; i = i + 1)
            {
                if (defaults[i] == color)
                {
                    return true;
                }
            }
            return false;
        }

        public static string Describe(int slot)
        {
            return signature + ":" + slot;
        }
    }
}
