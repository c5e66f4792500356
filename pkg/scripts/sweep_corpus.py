"""Run verification checks over a graph6 corpus with resumable state.

    python3 scripts/sweep_corpus.py --corpus conn10.g6 --checks ke --state ke10.json

Checks: ke, deming, egervary, larson, andrasfai.  ``--stride k --offset j``
takes every k-th graph; ``--time-limit`` stops after that many seconds at the
next checkpoint (rerun to continue).
"""

import argparse
import gzip
import json
import sys

from kegraph.checks import sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--corpus", required=True)
    ap.add_argument("--checks", required=True, help="comma-separated")
    ap.add_argument("--state", default=None)
    ap.add_argument("--stride", type=int, default=1)
    ap.add_argument("--offset", type=int, default=0)
    ap.add_argument("--time-limit", type=float, default=None)
    a = ap.parse_args(argv)
    opener = gzip.open if a.corpus.endswith(".gz") else open
    with opener(a.corpus, "rt") as fh:
        st = sweep(fh, a.checks.split(","), a.state, a.stride, a.offset, time_limit=a.time_limit)
    summary = {k: st[k] for k in ("cursor", "processed", "matchable", "counts", "andrasfai", "complete")}
    summary["failures"] = len(st["failures"])
    print(json.dumps(summary))
    for f in st["failures"][:20]:
        print(json.dumps(f))
    return 1 if st["failures"] else 0


if __name__ == "__main__":
    sys.exit(main())
