using NUnit.Framework;
using PixelDraw;

namespace PixelDraw.Tests
{
    public class CanvasTest
    {
        [Test]
        public void TestFillCountsPixels()
        {
            Canvas canvas = new Canvas(4, 4);
            Rect rect = new Rect(2, 3);
            Assert.AreEqual(6, canvas.Fill(rect, 9));
            Assert.AreEqual(1, canvas.GetShapesDrawn());
        }

        [Test]
        public void TestBlankUntilFilled()
        {
            Canvas canvas = new Canvas(2, 2);
            Assert.IsTrue(canvas.IsBlank());
            canvas.Fill(new Rect(1, 1), 3);
            Assert.IsFalse(canvas.IsBlank());
        }

        [Test]
        public void TestRectArea()
        {
            Rect rect = new Rect(3, 5);
            Assert.AreEqual(15, rect.Area());
        }

        [Test]
        public void TestRectAspect()
        {
            Rect rect = new Rect(3, 2);
            Assert.AreEqual(1.5, rect.Aspect(), 0.0001);
        }
    }
}
