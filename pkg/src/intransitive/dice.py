"""Exact duels between value multisets: dice, stick sets, pencil teams.

A duel compares the sum of ``copies`` independent draws from each side over
the full product space. Everything is counted in integers and reported as
``Fraction``; no floating point is used anywhere.
"""

from __future__ import annotations

import enum
from bisect import bisect_left, bisect_right
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, islice, product
from typing import Iterator, Sequence

from .errors import (
    CopiesOutOfRange,
    DuplicateLabel,
    KOutOfRange,
    RaggedMatrix,
    SpecInvalid,
    TooFewItems,
)
from .rational import to_fraction
from .relations import TournamentGraph, build_graph, find_beat_cycles


@dataclass(frozen=True)
class ValueMultiset:
    label: str
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(sorted(to_fraction(v) for v in self.values))
        if not vals:
            raise ValueError(f"{self.label!r}: a multiset needs at least one value")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, label: str, *values) -> "ValueMultiset":
        return cls(label, tuple(values))

    def to_json(self) -> dict:
        return {"label": self.label, "values": [_num_json(v) for v in self.values]}


def _num_json(v: Fraction):
    return int(v) if v.denominator == 1 else str(v)


@dataclass(frozen=True)
class BeatTally:
    wins: int
    ties: int
    losses: int

    @property
    def total(self) -> int:
        return self.wins + self.ties + self.losses

    @property
    def p_win(self) -> Fraction:
        return Fraction(self.wins, self.total)

    @property
    def p_tie(self) -> Fraction:
        return Fraction(self.ties, self.total)

    @property
    def p_loss(self) -> Fraction:
        return Fraction(self.losses, self.total)

    @property
    def margin(self) -> Fraction:
        return abs(self.p_win - self.p_loss)

    def to_json(self) -> dict:
        return {
            "wins": self.wins,
            "ties": self.ties,
            "losses": self.losses,
            "p_win": str(self.p_win),
            "p_tie": str(self.p_tie),
            "p_loss": str(self.p_loss),
        }


class Outcome(enum.Enum):
    A_WINS = "a_wins"
    B_WINS = "b_wins"
    BALANCED = "balanced"


def sum_distribution(values: Sequence, copies: int) -> Counter:
    """Counts of each total over all ``len(values) ** copies`` ordered draws."""
    face = Counter(values)
    dist = Counter({0: 1})
    for _ in range(copies):
        nxt = Counter()
        for s, n in dist.items():
            for v, k in face.items():
                nxt[s + v] += n * k
        dist = nxt
    return dist


@lru_cache(maxsize=None)
def _tally(a: tuple, b: tuple, copies: int) -> tuple[int, int, int]:
    da = sum_distribution(a, copies)
    db = sum_distribution(b, copies)
    keys = sorted(db)
    # prefix[i] = number of b outcomes with total < keys[i]
    prefix = [0]
    for k in keys:
        prefix.append(prefix[-1] + db[k])
    total_b = prefix[-1]
    wins = ties = losses = 0
    for s, n in da.items():
        lo = bisect_left(keys, s)
        hi = bisect_right(keys, s)
        below = prefix[lo]
        equal = prefix[hi] - prefix[lo]
        wins += n * below
        ties += n * equal
        losses += n * (total_b - below - equal)
    return wins, ties, losses


def _check_copies(copies):
    if not isinstance(copies, int) or copies < 1:
        raise CopiesOutOfRange(f"copies must be an integer >= 1, got {copies!r}")


def beat_tally(a: ValueMultiset, b: ValueMultiset, copies: int = 1) -> BeatTally:
    _check_copies(copies)
    return BeatTally(*_tally(a.values, b.values, copies))


def beats(a: ValueMultiset, b: ValueMultiset, copies: int = 1) -> Outcome:
    t = beat_tally(a, b, copies)
    if t.wins > t.losses:
        return Outcome.A_WINS
    if t.wins < t.losses:
        return Outcome.B_WINS
    return Outcome.BALANCED


def _check_labels(items):
    labels = [it.label for it in items]
    dup = {x for x in labels if labels.count(x) > 1}
    if dup:
        raise DuplicateLabel(f"duplicate labels: {sorted(dup)}")


def duel_graph(items: Sequence[ValueMultiset], copies: int = 1) -> TournamentGraph:
    if len(items) < 2:
        raise TooFewItems("a duel graph needs at least two items")
    _check_labels(items)
    _check_copies(copies)
    results = []
    for a, b in combinations(items, 2):
        t = beat_tally(a, b, copies)
        winner = a.label if t.wins >= t.losses else b.label
        results.append((a.label, b.label, winner, t.margin))
    return build_graph(results)


@dataclass(frozen=True)
class CycleCheck:
    holds: bool
    tallies: tuple[tuple[str, str, BeatTally], ...]

    def __bool__(self):
        return self.holds


def verify_cycle(items: Sequence[ValueMultiset], copies: int = 1) -> CycleCheck:
    """Check that each item beats the next and the last beats the first."""
    if len(items) < 3:
        raise TooFewItems("a cycle needs at least three items")
    _check_copies(copies)
    tallies = []
    ok = True
    for i, a in enumerate(items):
        b = items[(i + 1) % len(items)]
        t = beat_tally(a, b, copies)
        tallies.append((a.label, b.label, t))
        ok = ok and t.wins > t.losses
    return CycleCheck(ok, tuple(tallies))


def sets_from_square(matrix: Sequence[Sequence]) -> list[ValueMultiset]:
    """One multiset per matrix row, labelled ``Row1..RowN``."""
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        raise RaggedMatrix("matrix must be nonempty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise RaggedMatrix("matrix rows differ in length")
    return [ValueMultiset(f"Row{i}", tuple(r)) for i, r in enumerate(rows, 1)]


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class SearchSpec:
    n_sets: int
    n_faces: int
    value_min: int
    value_max: int
    copies: int = 1
    required_cycle_len: int | None = None
    min_margin: Fraction | None = None

    def __post_init__(self):
        if self.n_sets < 3:
            raise SpecInvalid("n_sets must be >= 3")
        if self.n_faces < 1:
            raise SpecInvalid("n_faces must be >= 1")
        if self.value_min > self.value_max:
            raise SpecInvalid("value_min must not exceed value_max")
        if self.copies < 1:
            raise SpecInvalid("copies must be >= 1")
        if self.required_cycle_len is None:
            object.__setattr__(self, "required_cycle_len", self.n_sets)
        if not 3 <= self.required_cycle_len <= self.n_sets:
            raise SpecInvalid("required_cycle_len must lie in [3, n_sets]")
        if self.min_margin is not None:
            object.__setattr__(self, "min_margin", to_fraction(self.min_margin))


@dataclass(frozen=True)
class SearchHit:
    family: tuple[tuple[int, ...], ...]
    cycle: tuple[int, ...]  # indices into family, in beating order

    def items(self) -> list[ValueMultiset]:
        return [ValueMultiset(f"S{i + 1}", f) for i, f in enumerate(self.family)]

    def cycle_items(self) -> list[ValueMultiset]:
        its = self.items()
        return [its[i] for i in self.cycle]

    def to_json(self) -> dict:
        return {"family": [list(f) for f in self.family], "cycle": [f"S{i + 1}" for i in self.cycle]}


def is_order_canonical(family, value_min: int) -> bool:
    """True iff the family's combined values are exactly value_min, value_min+1, ...

    Any family can be mapped by a strictly increasing relabelling onto this
    dense form without changing a single comparison, so only dense families
    need to be visited.
    """
    used = sorted({v for f in family for v in f})
    return used == list(range(value_min, value_min + len(used)))


def _family_hit(family, spec: SearchSpec) -> SearchHit | None:
    n = len(family)
    results = []
    for i, j in combinations(range(n), 2):
        w, t, l = _tally(family[i], family[j], spec.copies)
        a, b = f"{i:04d}", f"{j:04d}"
        results.append((a, b, a if w >= l else b, Fraction(abs(w - l), w + t + l)))
    g = build_graph(results)
    L = spec.required_cycle_len
    for cyc in find_beat_cycles(g, L):
        if len(cyc) != L:
            continue
        if spec.min_margin is not None:
            pairs = zip(cyc, cyc[1:] + cyc[:1])
            if any(g.margin(a, b) < spec.min_margin for a, b in pairs):
                continue
        return SearchHit(tuple(family), tuple(int(x) for x in cyc))
    return None


def _multisets(spec: SearchSpec) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(spec.value_min, spec.value_max + 1), spec.n_faces))


def _search_chunk(spec: SearchSpec, first: int) -> list[SearchHit]:
    ms = _multisets(spec)
    beat = {}

    def wins(i, j):
        key = (i, j)
        if key not in beat:
            w, _, l = _tally(ms[i], ms[j], spec.copies)
            beat[i, j], beat[j, i] = w > l, l > w
        return beat[key]

    hits = []
    for rest in combinations(range(first + 1, len(ms)), spec.n_sets - 1):
        idx = (first,) + rest
        family = tuple(ms[r] for r in idx)
        if not is_order_canonical(family, spec.value_min):
            continue
        # a set on a cycle must beat, and lose to, something else in the family
        if not any(wins(first, j) for j in rest) or not any(wins(j, first) for j in rest):
            if spec.required_cycle_len == spec.n_sets:
                continue
        hit = _family_hit(family, spec)
        if hit is not None:
            if not verify_cycle(hit.cycle_items(), spec.copies):
                raise AssertionError(f"search emitted a non-cycle: {hit}")
            hits.append(hit)
    return hits


def search_intransitive_sets(spec: SearchSpec, jobs: int = 1) -> Iterator[SearchHit]:
    """Stream every canonical family whose duel graph has the required cycle.

    Families are sets of distinct sorted multisets, listed in lexicographic
    order, one representative per order-isomorphism class. Work is split by
    the first multiset of the family; with ``jobs > 1`` chunks run in worker
    processes but are merged back in chunk order, so the stream is identical
    for every ``jobs`` value.
    """
    n_ms = len(_multisets(spec))
    firsts = range(n_ms - spec.n_sets + 1) if n_ms >= spec.n_sets else range(0)
    if jobs <= 1:
        for f in firsts:
            yield from _search_chunk(spec, f)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for chunk in pool.map(_search_chunk, [spec] * len(firsts), firsts):
            yield from chunk


def take(stream, limit: int | None):
    return stream if limit is None else islice(stream, limit)


# ---------------------------------------------------------------------------
# multiplayer dominance


@dataclass(frozen=True)
class DominanceResult:
    holds: bool
    semantics: str
    witness: dict  # subset labels -> dominating label
    counterexample: tuple[str, ...] | None = None

    def __bool__(self):
        return self.holds


def _joint_advantage(x: ValueMultiset, group: Sequence[ValueMultiset], copies: int):
    """(ways x's total strictly exceeds every total in group,
    ways some group total strictly exceeds x's) over one joint draw."""
    dists = [sum_distribution(it.values, copies) for it in (x, *group)]
    top = under = 0
    for combo in product(*(d.items() for d in dists)):
        n = 1
        for _, k in combo:
            n *= k
        sx = combo[0][0]
        others = [s for s, _ in combo[1:]]
        if all(sx > s for s in others):
            top += n
        if any(s > sx for s in others):
            under += n
    return top, under


def verify_k_player_dominance(
    items: Sequence[ValueMultiset],
    k: int,
    copies: int = 1,
    semantics: str = "pairwise",
) -> DominanceResult:
    """For every k-subset of items, is there an outside item beating it?

    ``pairwise``: the dominator beats each subset member in its own duel.
    ``simultaneous``: in one joint roll, the dominator strictly tops all of
    the subset more often than any subset member strictly tops it.
    """
    if not 1 <= k < len(items):
        raise KOutOfRange(f"k must satisfy 1 <= k < {len(items)}, got {k}")
    if semantics not in ("pairwise", "simultaneous"):
        raise ValueError(f"unknown semantics {semantics!r}")
    _check_labels(items)
    _check_copies(copies)
    witness = {}
    for subset in combinations(items, k):
        key = tuple(s.label for s in subset)
        for x in items:
            if x in subset:
                continue
            if semantics == "pairwise":
                ok = all(beats(x, s, copies) is Outcome.A_WINS for s in subset)
            else:
                top, under = _joint_advantage(x, subset, copies)
                ok = top > under
            if ok:
                witness[key] = x.label
                break
        else:
            return DominanceResult(False, semantics, witness, key)
    return DominanceResult(True, semantics, witness)


EFRON = (
    ValueMultiset.of("blue", 4, 4, 4, 4, 0, 0),
    ValueMultiset.of("yellow", 3, 3, 3, 3, 3, 3),
    ValueMultiset.of("red", 6, 6, 2, 2, 2, 2),
    ValueMultiset.of("green", 5, 5, 5, 1, 1, 1),
)

LO_SHU = ((4, 9, 2), (3, 5, 7), (8, 1, 6))
