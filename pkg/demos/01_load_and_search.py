"""Load a vector space and explore it with cosine search.

The bundled toy space has 24 words in 8 dimensions, arranged in a few loose
clusters (science fields, lab tools, everyday things) so that neighborhood
queries have visible structure.
"""

from pathlib import Path

from refitlab import distance_report, load_path, top_k

DATA = Path(__file__).parent / "data" / "toy_vectors.txt"


def main():
    space = load_path(DATA)
    print(f"loaded version {space.version_id}: {len(space)} words, dim {space.dim}\n")

    for query in ("science", "telescope", "coffee"):
        print(f"nearest to {query!r}:")
        for word, score in top_k(space, query, 5).hits:
            print(f"  {word:<14} cosine {score:+.4f}")
        print()

    words = ["science", "physics", "sociology", "coffee"]
    report = distance_report(space, words)
    print("pairwise Euclidean distances:")
    header = " " * 12 + "".join(f"{w:>12}" for w in words)
    print(header)
    for i, w in enumerate(words):
        row = "".join(f"{report.euclidean[i, j]:>12.3f}" for j in range(len(words)))
        print(f"{w:<12}{row}")


if __name__ == "__main__":
    main()
