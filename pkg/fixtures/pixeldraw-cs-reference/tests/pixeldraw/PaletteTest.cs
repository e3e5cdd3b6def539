using NUnit.Framework;
using PixelDraw;

namespace PixelDraw.Tests
{
    public class PaletteTest
    {
        [Test]
        public void TestColorAt()
        {
            Palette palette = new Palette("main");
            Assert.AreEqual(7, palette.ColorAt(1));
            Assert.AreEqual("main", palette.GetName());
        }

        [Test]
        public void TestHasColor()
        {
            Palette palette = new Palette("main");
            Assert.IsTrue(palette.HasColor(12));
            Assert.IsFalse(palette.HasColor(9));
        }

        [Test]
        public void TestDescribe()
        {
            Assert.AreEqual("builtin:2", Palette.Describe(2));
        }
    }
}
