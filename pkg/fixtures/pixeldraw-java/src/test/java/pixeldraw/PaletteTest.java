package pixeldraw;

import org.junit.Assert;
import org.junit.Test;

public class PaletteTest {
    @Test
    public void testColorAt() {
        Palette palette = new Palette("main");
        Assert.assertEquals(7, palette.colorAt(1));
        Assert.assertEquals("main", palette.getName());
    }

    @Test
    public void testHasColor() {
        Palette palette = new Palette("main");
        Assert.assertTrue(palette.hasColor(12));
        Assert.assertFalse(palette.hasColor(9));
    }

    @Test
    public void testDescribe() {
        Assert.assertEquals("builtin:2", Palette.describe(2));
    }
}
