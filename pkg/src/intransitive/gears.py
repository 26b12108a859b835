"""Quasi-static kinematics of shafts carrying gears on axial slots.

Two shafts are spaced ``R_X + R_Y`` apart, so at any slot a large gear meshes
with a small one, two large gears interfere, and two small gears clear. The
model is ideal: no slip, no friction, no inertia. Friction wheels behave
exactly like gears here.

Slot numbers in reports are 1-based, matching the way device sequences are
written (``X, Y, Z`` has ``Y`` at slot 2).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import (
    ChainTooShort,
    DuplicateLabel,
    MissingPulley,
    MultipleMeshes,
    OverConstrained,
    PulleyMismatch,
    SchemaViolation,
    SlotCountMismatch,
    UnknownShaftInAdjacency,
)
from .rational import to_fraction
from .relations import TournamentGraph, build_graph
from .voting import rotate

LARGE, SMALL, EMPTY = "X", "Y", "Z"
DEFAULT_R_LARGE = Fraction(2)
DEFAULT_R_SMALL = Fraction(1)


@dataclass(frozen=True)
class SlotElement:
    kind: str  # "X" large gear, "Y" small gear, "Z" empty
    radius: Fraction | None = None

    def __post_init__(self):
        if self.kind not in (LARGE, SMALL, EMPTY):
            raise SchemaViolation(f"unknown slot kind {self.kind!r}")
        if self.kind == EMPTY:
            if self.radius is not None:
                raise SchemaViolation("an empty slot has no radius")
        else:
            r = to_fraction(self.radius)
            if r <= 0:
                raise SchemaViolation("gear radius must be positive")
            object.__setattr__(self, "radius", r)

    @property
    def is_gear(self) -> bool:
        return self.kind != EMPTY


EMPTY_SLOT = SlotElement(EMPTY)


@dataclass(frozen=True)
class Pulley:
    radius: Fraction
    load_weight: Fraction

    def __post_init__(self):
        r, w = to_fraction(self.radius), to_fraction(self.load_weight)
        if r <= 0 or w <= 0:
            raise SchemaViolation("pulley radius and load weight must be positive")
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "load_weight", w)


@dataclass(frozen=True)
class GearShaft:
    label: str
    slots: tuple[SlotElement, ...]
    pulley: Pulley | None = None

    def __post_init__(self):
        slots = tuple(self.slots)
        if not slots:
            raise SchemaViolation(f"shaft {self.label!r} has no slots")
        object.__setattr__(self, "slots", slots)

    @property
    def notation(self) -> str:
        return "".join(s.kind for s in self.slots)


def shaft(label: str, notation: Sequence[str], r_large=DEFAULT_R_LARGE, r_small=DEFAULT_R_SMALL,
          pulley: Pulley | None = None) -> GearShaft:
    """Build a shaft from ``"XYZ"``-style notation."""
    radii = {LARGE: to_fraction(r_large), SMALL: to_fraction(r_small), EMPTY: None}
    try:
        slots = tuple(SlotElement(k, radii[k]) for k in notation)
    except KeyError as exc:
        raise SchemaViolation(f"unknown slot symbol {exc.args[0]!r}") from exc
    return GearShaft(label, slots, pulley)


@dataclass(frozen=True)
class Assembly:
    shafts: tuple[GearShaft, ...]
    adjacent_pairs: tuple[tuple[str, str], ...]
    center_spacing: Fraction

    def __post_init__(self):
        shafts = tuple(self.shafts)
        labels = [s.label for s in shafts]
        if len(set(labels)) != len(labels):
            raise DuplicateLabel("shaft labels must be distinct")
        if len({len(s.slots) for s in shafts}) > 1:
            raise SlotCountMismatch("all shafts in an assembly need the same slot count")
        pairs = []
        for a, b in self.adjacent_pairs:
            for x in (a, b):
                if x not in labels:
                    raise UnknownShaftInAdjacency(f"adjacency names unknown shaft {x!r}")
            if a == b:
                raise SchemaViolation(f"shaft {a!r} cannot be adjacent to itself")
            pairs.append(tuple(sorted((a, b))))
        object.__setattr__(self, "shafts", shafts)
        object.__setattr__(self, "adjacent_pairs", tuple(sorted(set(pairs))))
        object.__setattr__(self, "center_spacing", to_fraction(self.center_spacing))

    def get(self, label: str) -> GearShaft:
        for s in self.shafts:
            if s.label == label:
                return s
        raise KeyError(label)

    @classmethod
    def from_notation(cls, rows: dict[str, str], adjacent=(), r_large=DEFAULT_R_LARGE,
                      r_small=DEFAULT_R_SMALL, pulleys: dict | None = None) -> "Assembly":
        r_large, r_small = to_fraction(r_large), to_fraction(r_small)
        if not r_large > r_small > 0:
            raise SchemaViolation("need R_X > R_Y > 0")
        pulleys = pulleys or {}
        shafts = tuple(shaft(k, v, r_large, r_small, pulleys.get(k)) for k, v in rows.items())
        return cls(shafts, tuple(adjacent), r_large + r_small)

    @classmethod
    def from_json(cls, obj: dict) -> "Assembly":
        try:
            r_large = to_fraction(obj.get("R_X", DEFAULT_R_LARGE))
            r_small = to_fraction(obj.get("R_Y", DEFAULT_R_SMALL))
            rows, pulleys = {}, {}
            for s in obj["shafts"]:
                rows[s["label"]] = tuple(s["slots"])
                if s.get("pulley") is not None:
                    p = s["pulley"]
                    pulleys[s["label"]] = Pulley(p["radius"], p["weight"])
            adjacent = [tuple(p) for p in obj.get("adjacent", [])]
        except (KeyError, TypeError) as exc:
            raise SchemaViolation(f"malformed gear assembly: {exc}") from exc
        if any(len(p) != 2 for p in adjacent):
            raise SchemaViolation("adjacency entries must be label pairs")
        return cls.from_notation(rows, adjacent, r_large, r_small, pulleys)


# ---------------------------------------------------------------------------
# pairwise kinematics


@dataclass(frozen=True)
class Mesh:
    slot: int
    radius_a: Fraction
    radius_b: Fraction


@dataclass(frozen=True)
class Interference:
    slot: int
    radius_a: Fraction
    radius_b: Fraction


@dataclass(frozen=True)
class MeshReport:
    meshes: tuple[Mesh, ...]
    interferences: tuple[Interference, ...]


def _check_slots(a: GearShaft, b: GearShaft):
    if len(a.slots) != len(b.slots):
        raise SlotCountMismatch(f"{a.label} has {len(a.slots)} slots, {b.label} has {len(b.slots)}")


def find_meshes(a: GearShaft, b: GearShaft, spacing) -> MeshReport:
    _check_slots(a, b)
    spacing = to_fraction(spacing)
    meshes, clashes = [], []
    for i, (sa, sb) in enumerate(zip(a.slots, b.slots), 1):
        if not (sa.is_gear and sb.is_gear):
            continue
        reach = sa.radius + sb.radius
        if reach == spacing:
            meshes.append(Mesh(i, sa.radius, sb.radius))
        elif reach > spacing:
            clashes.append(Interference(i, sa.radius, sb.radius))
    return MeshReport(tuple(meshes), tuple(clashes))


RATIO, UNRELATED, JAMMED = "ratio", "unrelated", "jammed"


@dataclass(frozen=True)
class SpeedRatio:
    """``ratio`` is omega_a / omega_b; negative because external meshes reverse sense."""

    status: str
    ratio: Fraction | None = None
    meshes: MeshReport | None = None

    @property
    def faster(self) -> str | None:
        """``"a"``, ``"b"``, or None when equal speed or no ratio."""
        if self.status != RATIO or abs(self.ratio) == 1:
            return None
        return "a" if abs(self.ratio) > 1 else "b"


def speed_ratio(a: GearShaft, b: GearShaft, spacing) -> SpeedRatio:
    rep = find_meshes(a, b, spacing)
    if rep.interferences:
        return SpeedRatio(JAMMED, None, rep)
    if not rep.meshes:
        return SpeedRatio(UNRELATED, None, rep)
    # equal pitch-line speed: omega_a * r_a = omega_b * r_b, opposite sense
    implied = {-(m.radius_b / m.radius_a) for m in rep.meshes}
    if len(implied) > 1:
        return SpeedRatio(JAMMED, None, rep)
    return SpeedRatio(RATIO, implied.pop(), rep)


def faster_graph(shafts: Sequence[GearShaft], spacing) -> TournamentGraph:
    """Pairwise "rotates faster than" over every pair joined on its own.

    Edge margin is the faster/slower speed magnitude ratio.
    """
    results = []
    for a, b in combinations(shafts, 2):
        sr = speed_ratio(a, b, spacing)
        if sr.faster is None:
            results.append((a.label, b.label, a.label, 0))
        elif sr.faster == "a":
            results.append((a.label, b.label, a.label, abs(sr.ratio)))
        else:
            results.append((a.label, b.label, b.label, 1 / abs(sr.ratio)))
    return build_graph(results, nodes=[s.label for s in shafts])


# ---------------------------------------------------------------------------
# whole-assembly consistency


@dataclass(frozen=True)
class JamReport:
    consistent: bool
    velocities: dict[str, Fraction] | None = None
    reason: str | None = None  # "interference" | "pair" | "cycle"
    witness: tuple[str, ...] | None = None
    interference_slot: int | None = None
    cycle_product: Fraction | None = None


def _cycle_from_tree(parent, u, v):
    """Tree path u..lca..v closed by the non-tree edge (v, u)."""
    anc_u = []
    x = u
    while x is not None:
        anc_u.append(x)
        x = parent[x]
    pos = {n: i for i, n in enumerate(anc_u)}
    down = []
    x = v
    while x not in pos:
        down.append(x)
        x = parent[x]
    # lca = x; walk u -> lca, then lca -> v
    return tuple(anc_u[: pos[x] + 1] + list(reversed(down)))


def detect_jam(assembly: Assembly) -> JamReport:
    """Propagate angular-velocity constraints over the declared adjacencies.

    Consistent assemblies get one velocity assignment per connected component,
    scaled so the component's lexicographically first shaft turns at 1.
    """
    spacing = assembly.center_spacing
    nbrs: dict[str, list[tuple[str, Fraction]]] = {s.label: [] for s in assembly.shafts}
    for la, lb in assembly.adjacent_pairs:
        sr = speed_ratio(assembly.get(la), assembly.get(lb), spacing)
        if sr.status == JAMMED:
            if sr.meshes.interferences:
                return JamReport(False, reason="interference", witness=(la, lb),
                                 interference_slot=sr.meshes.interferences[0].slot)
            return JamReport(False, reason="pair", witness=(la, lb))
        if sr.status == RATIO:
            nbrs[la].append((lb, sr.ratio))  # omega_la = ratio * omega_lb
            nbrs[lb].append((la, 1 / sr.ratio))
    for v in nbrs.values():
        v.sort(key=lambda t: t[0])

    omega: dict[str, Fraction] = {}
    parent: dict[str, str | None] = {}
    for root in sorted(nbrs):
        if root in omega:
            continue
        omega[root] = Fraction(1)
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, r in nbrs[u]:
                want = omega[u] / r
                if v not in omega:
                    omega[v] = want
                    parent[v] = u
                    queue.append(v)
                elif omega[v] != want:
                    cyc = _cycle_from_tree(parent, u, v)
                    return JamReport(False, reason="cycle", witness=cyc,
                                     cycle_product=_cycle_product(cyc, nbrs))
    return JamReport(True, velocities=dict(sorted(omega.items())))


def _cycle_product(cyc, nbrs) -> Fraction:
    # product of omega_i / omega_{i+1} read off the mesh ratios; 1 iff consistent
    prod = Fraction(1)
    for x, y in zip(cyc, cyc[1:] + cyc[:1]):
        prod *= dict(nbrs[x])[y]
    return prod


# ---------------------------------------------------------------------------
# Condorcet chains


def chain_labels(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("A") + i) for i in range(n)]
    return [f"S{i + 1:02d}" for i in range(n)]


def build_condorcet_chain(n: int, direction: str = "right", r_large=DEFAULT_R_LARGE,
                          r_small=DEFAULT_R_SMALL) -> Assembly:
    """``n`` shafts, each a rotation of a large gear, a small gear and ``n - 2`` empties.

    Consecutive shafts (cyclically) are declared adjacent. With ``right``
    rotation the base is ``X, Y, Z...`` (the three-shaft case is
    ``XYZ / ZXY / YZX``); with ``left`` the base is mirrored to ``Y, X, Z...``
    so that in both directions each shaft outruns the next one.
    """
    if n < 3:
        raise ChainTooShort(f"a beating cycle needs at least 3 shafts, got {n}")
    if direction == "right":
        base = (LARGE, SMALL) + (EMPTY,) * (n - 2)
    elif direction == "left":
        base = (SMALL, LARGE) + (EMPTY,) * (n - 2)
    else:
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    labels = chain_labels(n)
    rows = {lab: rotate(base, direction, i) for i, lab in enumerate(labels)}
    adjacent = [(labels[i], labels[(i + 1) % n]) for i in range(n)]
    asm = Assembly.from_notation(rows, adjacent, r_large, r_small)
    _check_chain(asm)
    return asm


def _check_chain(asm: Assembly):
    n = len(asm.shafts)
    sp = asm.center_spacing
    for i, j in combinations(range(n), 2):
        a, b = asm.shafts[i], asm.shafts[j]
        sr = speed_ratio(a, b, sp)
        if j == i + 1 or (i == 0 and j == n - 1):
            first = "a" if j == i + 1 else "b"  # (last, first) wraps round
            if sr.status != RATIO or len(sr.meshes.meshes) != 1 or sr.faster != first:
                raise AssertionError(f"chain pair {a.label}/{b.label} broke the cycle")
        elif sr.status != UNRELATED:
            raise AssertionError(f"non-consecutive pair {a.label}/{b.label} is coupled")


# ---------------------------------------------------------------------------
# levers

LEVER_NOTE = "scalar contact-arm model: lever angles and fulcrum placement are abstracted away"


@dataclass(frozen=True)
class LeverPair:
    label: str
    arms: tuple[Fraction | None, ...]

    def __post_init__(self):
        arms = tuple(None if a is None else to_fraction(a) for a in self.arms)
        if not any(a is not None for a in arms):
            raise SchemaViolation(f"lever {self.label!r} has no arms")
        if any(a is not None and a <= 0 for a in arms):
            raise SchemaViolation("arm lengths must be positive")
        object.__setattr__(self, "arms", arms)


def condorcet_levers(long=2, short=1, direction: str = "right", labels="ABC") -> list[LeverPair]:
    base = (to_fraction(long), to_fraction(short)) + (None,) * (len(labels) - 2)
    return [LeverPair(lab, rotate(base, direction, i)) for i, lab in enumerate(labels)]


@dataclass(frozen=True)
class LeverOutcome:
    verdict: str  # winner label, "stalemate" or "unrelated"
    contact_slot: int | None = None
    force_a: Fraction | None = None
    force_b: Fraction | None = None
    note: str = LEVER_NOTE


def lever_duel(a: LeverPair, b: LeverPair, applied_torque) -> LeverOutcome:
    """Each side delivers ``torque / arm`` at the shared slot; the larger force wins."""
    if len(a.arms) != len(b.arms):
        raise SlotCountMismatch("levers need equal slot counts")
    torque = to_fraction(applied_torque)
    if torque <= 0:
        raise SchemaViolation("applied torque must be positive")
    common = [i for i, (x, y) in enumerate(zip(a.arms, b.arms)) if x is not None and y is not None]
    if not common:
        return LeverOutcome("unrelated")
    if len(common) > 1:
        # balanced at every contact (e.g. identical devices) is a stalemate
        if all(a.arms[i] == b.arms[i] for i in common):
            i = common[0]
            return LeverOutcome("stalemate", i + 1, torque / a.arms[i], torque / b.arms[i])
        raise OverConstrained(f"{a.label} and {b.label} touch at {len(common)} slots")
    i = common[0]
    fa, fb = torque / a.arms[i], torque / b.arms[i]
    verdict = a.label if fa > fb else b.label if fb > fa else "stalemate"
    return LeverOutcome(verdict, i + 1, fa, fb)


# ---------------------------------------------------------------------------
# pulleys

PULLEY_NOTE = "ideal massless frictionless pulleys; loads hang from equal pulleys"


@dataclass(frozen=True)
class PulleyOutcome:
    verdict: str  # descender label, "stalemate" or "unrelated"
    descender: str | None = None
    lifted: str | None = None
    displacement_ratio: Fraction | None = None  # rise of lifted load per unit descent
    pe_change_per_unit_descent: Fraction = Fraction(0)
    mesh_force_descender: Fraction | None = None
    mesh_force_lifted: Fraction | None = None
    pitch_arc_per_unit_descent: Fraction | None = None
    note: str = field(default=PULLEY_NOTE)

    @property
    def pe_rate_sign(self) -> str:
        return "negative" if self.pe_change_per_unit_descent < 0 else "zero"


def _gear_radii(*shafts):
    return [s.radius for sh in shafts for s in sh.slots if s.is_gear]


def pulley_duel(a: GearShaft, b: GearShaft, spacing=None) -> PulleyOutcome:
    """Which hanging load drives the other when shafts ``a`` and ``b`` are joined.

    A load W on pulley p applies torque W*p; at a mesh radius r that is a
    tangential force W*p/r, so the side meshing with its smaller gear wins and
    its load descends. Per unit descent the other load rises r_small/r_large.
    """
    for s in (a, b):
        if s.pulley is None:
            raise MissingPulley(f"shaft {s.label!r} has no pulley")
    if a.pulley != b.pulley:
        raise PulleyMismatch("pulley duels assume identical pulleys and loads")
    if spacing is None:
        radii = _gear_radii(a, b)
        if not radii:
            return PulleyOutcome("unrelated")
        spacing = max(radii) + min(radii)
    rep = find_meshes(a, b, spacing)
    if rep.interferences or len(rep.meshes) > 1:
        raise MultipleMeshes(f"{a.label}/{b.label} are over-constrained")
    if not rep.meshes:
        return PulleyOutcome("unrelated")
    m = rep.meshes[0]
    w, p = a.pulley.load_weight, a.pulley.radius
    if m.radius_a == m.radius_b:
        return PulleyOutcome("stalemate", displacement_ratio=Fraction(1))
    if m.radius_a < m.radius_b:
        down, up, r_small, r_large = a, b, m.radius_a, m.radius_b
    else:
        down, up, r_small, r_large = b, a, m.radius_b, m.radius_a
    ratio = r_small / r_large
    return PulleyOutcome(
        verdict=down.label,
        descender=down.label,
        lifted=up.label,
        displacement_ratio=ratio,
        pe_change_per_unit_descent=w * (ratio - 1),
        mesh_force_descender=w * p / r_small,
        mesh_force_lifted=w * p / r_large,
        pitch_arc_per_unit_descent=r_small / p,
    )
