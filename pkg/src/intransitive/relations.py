"""Tournament graphs of a strict "beats" relation, with cycle discovery.

Ties are absent edges, so a graph is always a strict relation: at most one
directed edge per unordered pair, never a self-loop.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import DuplicatePair, SchemaViolation, SelfDuel
from .rational import to_fraction


@dataclass(frozen=True, order=True)
class Edge:
    winner: str
    loser: str
    margin: Fraction = Fraction(1)


@dataclass(frozen=True)
class TournamentGraph:
    nodes: frozenset[str]
    edges: frozenset[Edge] = frozenset()
    _succ: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        seen = set()
        succ: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.edges:
            if e.winner == e.loser:
                raise SelfDuel(f"self-edge on {e.winner!r}")
            if e.winner not in self.nodes or e.loser not in self.nodes:
                raise SchemaViolation(f"edge {e.winner}->{e.loser} leaves the node set")
            if e.margin < 0:
                raise SchemaViolation(f"negative margin on {e.winner}->{e.loser}")
            pair = frozenset((e.winner, e.loser))
            if pair in seen:
                raise DuplicatePair(f"more than one edge between {sorted(pair)}")
            seen.add(pair)
            succ[e.winner].append(e.loser)
        for v in succ.values():
            v.sort()
        object.__setattr__(self, "_succ", succ)

    def successors(self, node: str) -> list[str]:
        return self._succ[node]

    def has_edge(self, winner: str, loser: str) -> bool:
        return loser in self._succ.get(winner, ())

    def margin(self, winner: str, loser: str) -> Fraction | None:
        for e in self.edges:
            if e.winner == winner and e.loser == loser:
                return e.margin
        return None

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_json(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "edges": [
                {"winner": e.winner, "loser": e.loser, "margin": str(e.margin)}
                for e in self.sorted_edges()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TournamentGraph":
        try:
            nodes = frozenset(obj["nodes"])
            edges = frozenset(
                Edge(e["winner"], e["loser"], to_fraction(e["margin"])) for e in obj["edges"]
            )
        except (KeyError, TypeError) as exc:
            raise SchemaViolation(f"malformed graph object: {exc}") from exc
        return cls(nodes, edges)


@dataclass(frozen=True)
class TransitivityReport:
    is_transitively_closed: bool
    has_directed_cycle: bool
    shortest_cycle: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.has_directed_cycle != (self.shortest_cycle is not None):
            raise ValueError("has_directed_cycle must match shortest_cycle presence")
        if self.is_transitively_closed and self.has_directed_cycle:
            raise ValueError("a transitively closed strict relation cannot contain a cycle")


def build_graph(
    results: Iterable[tuple[str, str, str, object]],
    nodes: Iterable[str] = (),
) -> TournamentGraph:
    """Build a graph from ``(label_a, label_b, winner, margin)`` duel results.

    Zero-margin results register both labels but add no edge (a tie).
    Extra isolated ``nodes`` may be supplied.
    """
    all_nodes = set(nodes)
    pairs = set()
    edges = set()
    for a, b, winner, margin in results:
        if not a or not b:
            raise SchemaViolation("labels must be nonempty")
        if a == b:
            raise SelfDuel(f"{a!r} cannot duel itself")
        pair = frozenset((a, b))
        if pair in pairs:
            raise DuplicatePair(f"duplicate result for {sorted(pair)}")
        pairs.add(pair)
        all_nodes.update((a, b))
        m = to_fraction(margin)
        if m < 0:
            raise SchemaViolation(f"negative margin for {a}/{b}")
        if m == 0:
            continue
        if winner not in (a, b):
            raise SchemaViolation(f"winner {winner!r} is not one of {a!r}, {b!r}")
        loser = b if winner == a else a
        edges.add(Edge(winner, loser, m))
    return TournamentGraph(frozenset(all_nodes), frozenset(edges))


def canonical_rotation(cycle) -> tuple[str, ...]:
    cycle = tuple(cycle)
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def find_beat_cycles(g: TournamentGraph, max_len: int) -> list[tuple[str, ...]]:
    """All directed simple cycles of length <= ``max_len``.

    Each cycle starts at its smallest label; the list is sorted by
    ``(len, labels)``. Enumeration roots every cycle at its minimum node and
    only extends through larger labels, so each cycle is produced once.
    """
    if max_len < 3:
        raise ValueError("max_len must be >= 3")
    out = []
    order = sorted(g.nodes)
    for start in order:
        path = [start]
        on_path = {start}

        def extend(node):
            for nxt in g.successors(node):
                if nxt == start and len(path) >= 3:
                    out.append(tuple(path))
                elif nxt > start and nxt not in on_path and len(path) < max_len:
                    path.append(nxt)
                    on_path.add(nxt)
                    extend(nxt)
                    path.pop()
                    on_path.discard(nxt)

        extend(start)
    out.sort(key=lambda c: (len(c), c))
    return out


def _has_cycle(g: TournamentGraph) -> bool:
    # iterative three-colour DFS
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(g.nodes, WHITE)
    for root in sorted(g.nodes):
        if colour[root] != WHITE:
            continue
        stack = [(root, iter(g.successors(root)))]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = BLACK
                stack.pop()
            elif colour[nxt] == GREY:
                return True
            elif colour[nxt] == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(g.successors(nxt))))
    return False


def _shortest_cycle(g: TournamentGraph) -> tuple[str, ...] | None:
    best = None
    for s in sorted(g.nodes):
        # BFS from s; the first edge back into s closes the shortest cycle through s
        parent = {s: None}
        queue = deque([s])
        found = None
        while queue and found is None:
            u = queue.popleft()
            for v in g.successors(u):
                if v == s:
                    found = u
                    break
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        if found is None:
            continue
        path = []
        u = found
        while u is not None:
            path.append(u)
            u = parent[u]
        cyc = canonical_rotation(reversed(path))
        if best is None or (len(cyc), cyc) < (len(best), best):
            best = cyc
    return best


def is_transitively_closed(g: TournamentGraph) -> bool:
    for a in g.nodes:
        for b in g.successors(a):
            for c in g.successors(b):
                # c == a cannot occur: one edge per unordered pair
                if not g.has_edge(a, c):
                    return False
    return True


def classify(g: TournamentGraph) -> TransitivityReport:
    cyc = _shortest_cycle(g) if _has_cycle(g) else None
    return TransitivityReport(
        is_transitively_closed=is_transitively_closed(g),
        has_directed_cycle=cyc is not None,
        shortest_cycle=cyc,
    )
