package pixeldraw;

public enum Mode {
    FAST,
    SAFE
}
