"""Preference profiles, pairwise majorities, and the rotation that builds them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import MalformedBallot, RowsOutOfRange, SchemaViolation
from .relations import TournamentGraph, build_graph, find_beat_cycles

ROTATION_NOTE = (
    "left rotation moves the first symbol to the end (ABC, BCA, CAB); "
    "right rotation moves the last symbol to the front (XYZ, ZXY, YZX). "
    "The voting profile reads as left, the gear listing as right."
)


@dataclass(frozen=True)
class PreferenceProfile:
    candidates: tuple[str, ...]
    ballots: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        cands = tuple(self.candidates)
        ballots = tuple(tuple(b) for b in self.ballots)
        if len(set(cands)) != len(cands):
            raise MalformedBallot("candidates must be distinct")
        if not ballots:
            raise MalformedBallot("a profile needs at least one ballot")
        want = sorted(cands)
        for b in ballots:
            if sorted(b) != want:
                raise MalformedBallot(f"ballot {''.join(b)!r} is not a permutation of the candidates")
        object.__setattr__(self, "candidates", cands)
        object.__setattr__(self, "ballots", ballots)

    @classmethod
    def from_strings(cls, *ballots: str) -> "PreferenceProfile":
        """``from_strings("ABC", "BCA")`` for single-character candidates."""
        return cls(tuple(sorted(ballots[0])), tuple(tuple(b) for b in ballots))

    def to_json(self) -> dict:
        return {
            "kind": "preference_profile",
            "candidates": list(self.candidates),
            "ballots": [list(b) for b in self.ballots],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PreferenceProfile":
        try:
            return cls(tuple(obj["candidates"]), tuple(tuple(b) for b in obj["ballots"]))
        except (KeyError, TypeError) as exc:
            raise SchemaViolation(f"malformed preference profile: {exc}") from exc


def pairwise_counts(profile: PreferenceProfile) -> dict[tuple[str, str], int]:
    """Raw ballot counts: ``counts[a, b]`` ballots rank a above b."""
    pos = [{c: i for i, c in enumerate(b)} for b in profile.ballots]
    counts = {}
    for a, b in combinations(profile.candidates, 2):
        ab = sum(p[a] < p[b] for p in pos)
        counts[a, b] = ab
        counts[b, a] = len(pos) - ab
    return counts


def pairwise_margins(profile: PreferenceProfile) -> TournamentGraph:
    """Majority graph; margin is the count difference over the ballot count."""
    counts = pairwise_counts(profile)
    n = len(profile.ballots)
    results = []
    for a, b in combinations(profile.candidates, 2):
        ab, ba = counts[a, b], counts[b, a]
        results.append((a, b, a if ab >= ba else b, Fraction(abs(ab - ba), n)))
    return build_graph(results, nodes=profile.candidates)


def detect_condorcet_cycle(profile: PreferenceProfile, max_len: int | None = None):
    if max_len is None:
        max_len = max(3, len(profile.candidates))
    return find_beat_cycles(pairwise_margins(profile), max_len)


@dataclass(frozen=True)
class RotationScheme:
    base: tuple
    direction: str = "left"

    def __post_init__(self):
        base = tuple(self.base)
        if not base:
            raise ValueError("rotation base must be nonempty")
        if len(set(base)) != len(base):
            raise ValueError("rotation base symbols must be distinct")
        if self.direction not in ("left", "right"):
            raise ValueError(f"direction must be 'left' or 'right', got {self.direction!r}")
        object.__setattr__(self, "base", base)


def rotate(seq: Sequence, direction: str, steps: int = 1) -> tuple:
    seq = tuple(seq)
    if not seq:
        return seq
    s = steps % len(seq)
    if direction == "left":
        return seq[s:] + seq[:s]
    if direction == "right":
        return seq[len(seq) - s:] + seq[: len(seq) - s]
    raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")


def condorcet_rotation(scheme: RotationScheme, rows: int) -> list[tuple]:
    k = len(scheme.base)
    if not 1 <= rows <= k:
        raise RowsOutOfRange(f"rows must satisfy 1 <= rows <= {k}, got {rows}")
    return [rotate(scheme.base, scheme.direction, i) for i in range(rows)]
