"""Count intransitive dice families by size, face count and value range.

    python3 scripts/dice_search_census.py --sets 3 --faces 3 --max-value 7 --jobs 4
"""

import argparse
import time
from collections import Counter

from intransitive.dice import SearchSpec, search_intransitive_sets, verify_cycle


def census(sets, faces, lo, hi_max, jobs):
    rows = []
    for hi in range(lo + 1, hi_max + 1):
        spec = SearchSpec(sets, faces, lo, hi)
        t = time.perf_counter()
        hits = list(search_intransitive_sets(spec, jobs=jobs))
        assert all(verify_cycle(h.cycle_items()) for h in hits)
        margins = Counter(min(_margins(h)) for h in hits)
        rows.append((hi, len(hits), time.perf_counter() - t, margins))
    return rows


def _margins(hit):
    return [t.margin for _, _, t in verify_cycle(hit.cycle_items()).tallies]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sets", type=int, default=3)
    ap.add_argument("--faces", type=int, default=3)
    ap.add_argument("--min-value", type=int, default=1)
    ap.add_argument("--max-value", type=int, default=6)
    ap.add_argument("--jobs", type=int, default=1)
    a = ap.parse_args()
    print(f"{'range':>8} {'families':>9} {'seconds':>8}  weakest-link margin histogram")
    for hi, n, dt, margins in census(a.sets, a.faces, a.min_value, a.max_value, a.jobs):
        hist = ", ".join(f"{m}:{c}" for m, c in sorted(margins.items()))
        print(f"{a.min_value}..{hi:<5} {n:>9} {dt:>8.2f}  {hist}")


if __name__ == "__main__":
    main()
