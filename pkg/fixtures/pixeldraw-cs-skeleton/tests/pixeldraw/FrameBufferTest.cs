using NUnit.Framework;
using PixelDraw;

namespace PixelDraw.Tests
{
    public class FrameBufferTest
    {
        [Test]
        public void TestGetIndex()
        {
            FrameBuffer fb = new FrameBuffer(4, 3);
            Assert.AreEqual(9, fb.GetIndex(1, 2));
            Assert.AreEqual(0, fb.GetIndex(0, 0));
        }

        [Test]
        public void TestGetPixels()
        {
            FrameBuffer fb = new FrameBuffer(2, 2);
            Assert.AreEqual(4, fb.GetPixels().Length);
        }

        [Test]
        public void TestDraw()
        {
            FrameBuffer fb = new FrameBuffer(4, 3);
            fb.Draw(1, 2, 5);
            Assert.AreEqual(5, fb.GetPixels()[fb.GetIndex(1, 2)]);
        }

        [Test]
        public void TestClearEmptiesBuffer()
        {
            FrameBuffer fb = new FrameBuffer(2, 2);
            fb.Draw(0, 1, 3);
            fb.Clear();
            Assert.IsTrue(fb.IsEmpty());
        }
    }
}
