"""Regenerate the enhanced-pair fixture corpus shipped with the package.

    python scripts/make_corpus.py [--seed N]
"""

import argparse
from pathlib import Path

from boxtimes.io import dumps, write_atomic
from boxtimes.search import corpus_to_json, generate_corpus

OUT = Path(__file__).resolve().parents[1] / "src" / "boxtimes" / "data" / "corpus" / "enhanced_pairs.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("-o", "--output", type=Path, default=OUT)
    args = ap.parse_args()
    records = generate_corpus(args.seed)
    write_atomic(args.output, dumps(corpus_to_json(records)))
    for r in records:
        print(f"{r['name']:34s} {r['kind']}")


if __name__ == "__main__":
    main()
