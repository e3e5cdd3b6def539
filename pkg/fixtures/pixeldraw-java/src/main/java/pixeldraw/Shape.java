package pixeldraw;

public interface Shape {
    int area();
}
