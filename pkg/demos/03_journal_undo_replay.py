"""A journaled editing session: search, refit, undo, then replay it all.

Every interaction lands in an append-only NDJSON journal. Undo reverts the
space but never erases history, so the whole session can be re-executed
from the base space and must land on the exact same vectors.
"""

import tempfile
from pathlib import Path

import numpy as np

from refitlab import (
    EmbeddingStore,
    Journal,
    Workbench,
    load_path,
    replay,
    validate_chain,
)

DATA = Path(__file__).parent / "data" / "toy_vectors.txt"


def main():
    base = load_path(DATA)
    journal_path = Path(tempfile.mkdtemp()) / "session.ndjson"
    bench = Workbench(EmbeddingStore(base), Journal(journal_path))

    bench.search("science", 5)
    bench.refit(mode="set", words=["science", "sociology", "psychology"], base_version=1)
    bench.refit(mode="target", words=["laboratory", "reactor", "microscope"],
                target="laboratory", base_version=2)
    bench.undo()  # drop the laboratory tweak
    bench.refit(mode="set", words=["coffee", "bread"], base_version=2)

    print(f"journal at {journal_path}:")
    for record in bench.journal.records:
        print(f"  #{record.record_id} {record.kind:<8} "
              f"v{record.base_version} -> v{record.result_version}")

    validate_chain(bench.journal, base_version=1)
    print("\nchain integrity: ok")

    final = replay(Journal(journal_path), base)
    live = bench.store.current
    assert final.version_id == live.version_id
    assert np.array_equal(final.matrix, live.matrix)
    print(f"replay reproduced version {final.version_id} component-exact")


if __name__ == "__main__":
    main()
