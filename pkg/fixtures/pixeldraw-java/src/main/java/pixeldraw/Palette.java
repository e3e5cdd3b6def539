package pixeldraw;

public class Palette {
    private static final String VENDOR = "pixeldraw";
    private static int[] defaults;
    private static String signature;

    static {
        defaults = new int[4];
        defaults[1] = 7;
        defaults[2] = 12;
        defaults[3] = 42;
        signature = "builtin";
        for (int i = 0; i < defaults.length; i = i + 1) {
            if (defaults[i] < 0) {
                defaults[i] = 0;
            }
        }
    }

    private final String name;

    public Palette(String name) {
        this.name = name;
    }

    public String getName() {
        return name;
    }

    public int colorAt(int slot) {
        return defaults[slot];
    }

    public boolean hasColor(int color) {
        for (int i = 0; i < defaults.length; i = i + 1) {
            if (defaults[i] == color) {
                return true;
            }
        }
        return false;
    }

    public static String describe(int slot) {
        return signature + ":" + slot;
    }
}
