"""One-dimensional lane-contact model for towers, combs and birds.

A device facade is a row of lanes, each holding one protrusion. Two devices
approach head-on with lanes aligned index to index; they first touch in the
lanes where the two protrusions add up to the most. What happens there is
decided by a small rule table:

    Marker vs anything           -> the marker's owner marks the opponent
    Wedge vs Block/Tooth/Gap     -> the wedge's owner lifts the opponent
    everything else              -> nothing acts (stall)

Wedge vs Wedge stalls: the tips meet symmetrically. Lane numbers in reports
are 1-based.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .errors import LaneCountMismatch, SchemaViolation, SpecInvalid
from .rational import to_fraction
from .relations import TournamentGraph, build_graph
from .voting import rotate

MARKER, BLOCK, WEDGE, TOOTH, GAP = "Marker", "Block", "Wedge", "Tooth", "Gap"
KINDS = (BLOCK, GAP, MARKER, TOOTH, WEDGE)

MARKS, LIFTS, STALLS = "Marks", "Lifts", "Stalls"
A_ACTS, B_ACTS, MUTUAL, NONE = "AActsOnB", "BActsOnA", "Mutual", "None"

INDEX_ALIGNED, MIRRORED = "index-aligned", "mirrored"


@dataclass(frozen=True, order=True)
class LaneElement:
    kind: str
    length: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaViolation(f"unknown lane kind {self.kind!r}")
        n = to_fraction(self.length)
        if self.kind == GAP and n != 0:
            raise SchemaViolation("a Gap has length 0")
        if self.kind != GAP and n <= 0:
            raise SchemaViolation(f"a {self.kind} needs positive length")
        object.__setattr__(self, "length", n)

    def code(self) -> str:
        return "G" if self.kind == GAP else f"{self.kind[0]}{self.length}"

    def to_json(self) -> dict:
        if self.kind == GAP:
            return {"kind": GAP}
        return {"kind": self.kind, "length": str(self.length)}


def el(code: str) -> LaneElement:
    """Parse a short code: ``M3`` marker 3, ``B1`` block, ``W2`` wedge, ``T1`` tooth, ``G`` gap."""
    names = {"M": MARKER, "B": BLOCK, "W": WEDGE, "T": TOOTH, "G": GAP}
    head, tail = code[:1].upper(), code[1:]
    if head not in names:
        raise SchemaViolation(f"bad lane code {code!r}")
    if head == "G":
        return LaneElement(GAP)
    return LaneElement(names[head], to_fraction(tail))


@dataclass(frozen=True)
class LaneProfile:
    label: str
    lanes: tuple[LaneElement, ...]

    def __post_init__(self):
        lanes = tuple(self.lanes)
        if not lanes:
            raise SchemaViolation(f"profile {self.label!r} has no lanes")
        object.__setattr__(self, "lanes", lanes)

    @classmethod
    def parse(cls, label: str, codes: str) -> "LaneProfile":
        """``LaneProfile.parse("A", "M3 G B1")``"""
        return cls(label, tuple(el(c) for c in codes.split()))

    def code(self) -> str:
        return " ".join(e.code() for e in self.lanes)

    def to_json(self) -> dict:
        return {"label": self.label, "elements": [e.to_json() for e in self.lanes]}


@dataclass(frozen=True)
class Contact:
    distance: Fraction
    lanes: tuple[int, ...]


@dataclass(frozen=True)
class DuelOutcome:
    verdict: str
    action: str
    contact_distance: Fraction
    contact_lanes: tuple[int, ...]
    alignment: str = INDEX_ALIGNED

    def __post_init__(self):
        if self.verdict == NONE and self.action != STALLS:
            raise ValueError("verdict None implies action Stalls")


def _check_lanes(a, b):
    if len(a.lanes) != len(b.lanes):
        raise LaneCountMismatch(f"{a.label} has {len(a.lanes)} lanes, {b.label} has {len(b.lanes)}")


def first_contact(a: LaneProfile, b: LaneProfile) -> Contact:
    _check_lanes(a, b)
    reach = [x.length + y.length for x, y in zip(a.lanes, b.lanes)]
    d = max(reach)
    return Contact(d, tuple(i for i, r in enumerate(reach, 1) if r == d))


def acts(own: str, other: str) -> str | None:
    """Action an element of kind ``own`` performs on an opposing ``other``, if any."""
    if own == MARKER:
        return MARKS
    if own == WEDGE and other in (BLOCK, TOOTH, GAP):
        return LIFTS
    return None


def duel_outcome(a: LaneProfile, b: LaneProfile, mirrored: bool = False) -> DuelOutcome:
    if mirrored:
        _check_lanes(a, b)
        b = LaneProfile(b.label, b.lanes[::-1])
    contact = first_contact(a, b)
    only_a = only_b = both = False
    action = None
    for lane in contact.lanes:
        x, y = a.lanes[lane - 1].kind, b.lanes[lane - 1].kind
        ax, by = acts(x, y), acts(y, x)
        if ax and by:
            both = True
        elif ax:
            only_a = True
        elif by:
            only_b = True
        if action is None:
            action = ax or by
    if both or (only_a and only_b):
        verdict = MUTUAL
    elif only_a:
        verdict = A_ACTS
    elif only_b:
        verdict = B_ACTS
    else:
        verdict = NONE
    return DuelOutcome(verdict, action or STALLS, contact.distance, contact.lanes,
                       MIRRORED if mirrored else INDEX_ALIGNED)


def action_graph(profiles: Sequence[LaneProfile], mirrored: bool = False) -> TournamentGraph:
    """Edge actor -> acted-on for every pair with a one-sided outcome."""
    results = []
    for i, a in enumerate(profiles):
        for b in profiles[i + 1:]:
            out = duel_outcome(a, b, mirrored)
            if out.verdict == A_ACTS:
                results.append((a.label, b.label, a.label, 1))
            elif out.verdict == B_ACTS:
                results.append((a.label, b.label, b.label, 1))
            else:
                results.append((a.label, b.label, a.label, 0))
    return build_graph(results, nodes=[p.label for p in profiles])


def condorcet_profiles(base: Sequence[LaneElement], direction: str = "right",
                       labels: Sequence[str] = ("A", "B", "C")) -> list[LaneProfile]:
    return [LaneProfile(lab, rotate(base, direction, i)) for i, lab in enumerate(labels)]


def is_strict_triple(base: Sequence[LaneElement], direction: str = "right") -> bool:
    """Each rotation acts on the next one-sidedly, and the last on the first."""
    ps = condorcet_profiles(base, direction)
    return all(duel_outcome(ps[i], ps[(i + 1) % 3]).verdict == A_ACTS for i in range(3))


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class PaletteEntry:
    kind: str
    lengths: tuple[Fraction, ...] = ()

    def elements(self) -> list[LaneElement]:
        if self.kind == GAP:
            return [LaneElement(GAP)]
        return [LaneElement(self.kind, n) for n in self.lengths]


def parse_palette(text: str) -> list[PaletteEntry]:
    """``"Marker:1-3,Block:1-3,Gap"`` -> palette entries."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        kind, _, rng = part.partition(":")
        kind = kind.strip().capitalize()
        if kind not in KINDS:
            raise SpecInvalid(f"unknown palette kind {kind!r}")
        if kind == GAP:
            out.append(PaletteEntry(GAP))
            continue
        if not rng:
            raise SpecInvalid(f"{kind} needs a length range")
        lo, _, hi = rng.partition("-")
        lo, hi = int(lo), int(hi or lo)
        if lo < 1 or hi < lo:
            raise SpecInvalid(f"bad length range {rng!r}")
        out.append(PaletteEntry(kind, tuple(Fraction(n) for n in range(lo, hi + 1))))
    return out


def _alphabet(palette: Sequence[PaletteEntry]) -> list[LaneElement]:
    if not palette:
        raise SpecInvalid("palette is empty")
    return sorted({e for p in palette for e in p.elements()})


def _triples_chunk(alphabet, lanes, direction, first) -> list[tuple[LaneElement, ...]]:
    hits = []
    for rest in product(alphabet, repeat=lanes - 1):
        base = (first,) + rest
        if is_strict_triple(base, direction):
            hits.append(base)
    return hits


def search_condorcet_triples(palette: Sequence[PaletteEntry], lanes: int, direction: str = "right",
                             jobs: int = 1) -> Iterator[tuple[LaneElement, ...]]:
    """Stream every base whose three rotations form a strict acting cycle.

    Bases come out in lexicographic order of their ``(kind, length)``
    encodings, whatever the value of ``jobs``.
    """
    if lanes < 1:
        raise SpecInvalid("lanes must be >= 1")
    alphabet = _alphabet(palette)
    if jobs <= 1:
        for first in alphabet:
            yield from _triples_chunk(alphabet, lanes, direction, first)
        return
    n = len(alphabet)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for chunk in pool.map(_triples_chunk, [alphabet] * n, [lanes] * n, [direction] * n, alphabet):
            yield from chunk


TOWERS_BASE = (el("M3"), el("G"), el("B1"))
COMBS_BASE = (el("W2"), el("G"), el("T1"))
BIRDS_BASE = (el("M2"), el("G"), el("B1"))
