"""Visualize what a set refit did: shared-basis 2-D projection.

Both frames are projected through one PCA basis fitted on their union, so
an arrow from a word's old position to its new one is meaningful. Saves a
scatter plot next to this script when matplotlib is available; prints the
coordinates either way.
"""

from pathlib import Path

from refitlab import EmbeddingStore, Journal, Workbench, joint_projection, load_path

DATA = Path(__file__).parent / "data" / "toy_vectors.txt"
WORDS = ["science", "physics", "chemistry", "sociology", "psychology", "economics"]


def main():
    base = load_path(DATA)
    bench = Workbench(EmbeddingStore(base), Journal())
    bench.refit(mode="set", words=WORDS, base_version=1)
    after_space = bench.store.current

    before_frame, after_frame = joint_projection(
        [base.vector(w) for w in WORDS],
        [after_space.vector(w) for w in WORDS],
        words=WORDS,
    )

    print(f"{'word':<12}{'before':>18}{'after':>18}")
    for i, word in enumerate(WORDS):
        bx, by = before_frame.coords[i]
        ax, ay = after_frame.coords[i]
        print(f"{word:<12}({bx:+7.3f},{by:+7.3f})   ({ax:+7.3f},{ay:+7.3f})")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not installed; skipping the plot")
        return

    fig, ax = plt.subplots(figsize=(7, 6))
    b = before_frame.coords
    a = after_frame.coords
    ax.scatter(b[:, 0], b[:, 1], c="tab:gray", label="before")
    ax.scatter(a[:, 0], a[:, 1], c="tab:blue", label="after")
    for i, word in enumerate(WORDS):
        ax.annotate(word, b[i], fontsize=9, color="tab:gray")
        ax.annotate(
            "", xy=a[i], xytext=b[i],
            arrowprops={"arrowstyle": "->", "color": "tab:blue", "alpha": 0.7},
        )
    ax.legend()
    ax.set_title("set refit: words pulled toward one another")
    out = Path(__file__).parent / "before_after.png"
    fig.savefig(out, dpi=120, bbox_inches="tight")
    print(f"\nwrote {out}")


if __name__ == "__main__":
    main()
