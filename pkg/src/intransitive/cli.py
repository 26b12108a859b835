"""Command-line front end: ``demo``, ``verify`` and ``search``.

Exit status: 0 when the expected intransitive structure is confirmed, 1 when
verification or search comes back negative, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import dice, duels, gears, voting
from .errors import (
    BadOption,
    IntransitiveError,
    ParseError,
    SchemaViolation,
    TooFewItems,
    UnknownDemo,
)
from .rational import fmt, to_fraction
from .relations import build_graph, find_beat_cycles

DEMOS = (
    "efron", "losho-sticks", "condorcet-vote", "gears3", "gears-chain-n",
    "levers", "pulleys", "towers", "combs", "birds",
)

LO_SHU_NOTE = (
    "Lo Shu magic-square rows stand in for the pencil lengths of the original "
    "figure, which are not recoverable; treat them as a reconstruction"
)
LANE_NOTE = (
    "lane-contact model: devices approach head-on, lanes aligned {}; profiles are "
    "model-internal reconstructions whose cycle direction is A->B->C->A"
)
K_PLAYER_NOTE = (
    "k-player dominance is reported under both pairwise and simultaneous-roll "
    "semantics; which one a multiplayer game intends is left open"
)


@dataclass
class RunReport:
    command: str
    input_digest: str
    verdicts: list[dict] = field(default_factory=list)
    cycles: list[list[str]] = field(default_factory=list)
    exit_status: int = 0
    notes: list[str] = field(default_factory=list)

    def as_dict(self, decimal: bool = False) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "verdicts": [_render(v, decimal) for v in self.verdicts],
            "cycles": self.cycles,
            "exit_status": self.exit_status,
            "notes": self.notes,
        }

    def to_json(self, decimal: bool = False) -> str:
        return json.dumps(self.as_dict(decimal), sort_keys=True, indent=2)

    def to_text(self, decimal: bool = False) -> str:
        lines = [f"command: {self.command}", f"input: {self.input_digest}"]
        for v in self.verdicts:
            v = _render(v, decimal)
            head = v.pop("pair", None) or v.pop("item", None)
            head = " vs ".join(head) if isinstance(head, list) else str(head)
            body = ", ".join(f"{k}={_flat(val)}" for k, val in v.items())
            lines.append(f"  {head}: {body}")
        for c in self.cycles:
            lines.append("cycle: " + " -> ".join(c + c[:1]))
        if not self.cycles and not self.command.startswith("search"):
            lines.append("cycle: none")
        lines += [f"note: {n}" for n in self.notes]
        lines.append(f"status: {self.exit_status}")
        return "\n".join(lines)


def _render(v, decimal):
    if isinstance(v, Fraction):
        return fmt(v, decimal)
    if isinstance(v, dict):
        return {k: _render(x, decimal) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_render(x, decimal) for x in v]
    return v


def _flat(v):
    if isinstance(v, list):
        return "(" + ", ".join(_flat(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}={_flat(x)}" for k, x in v.items()) + "}"
    return str(v)


def digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# per-kind verifiers (shared by demo and verify)


def cyclic_pairs(items):
    """Consecutive pairs in cyclic order, then every remaining pair."""
    n = len(items)
    ring = [(items[i], items[(i + 1) % n]) for i in range(n)] if n >= 3 else []
    seen = {frozenset((id(a), id(b))) for a, b in ring}
    rest = [(a, b) for a, b in combinations(items, 2) if frozenset((id(a), id(b))) not in seen]
    return ring + rest


def _tally_verdict(a, b, t: dice.BeatTally) -> dict:
    return {"pair": [a, b], "wins": t.wins, "ties": t.ties, "losses": t.losses,
            "p_win": t.p_win, "p_loss": t.p_loss}


def check_dice(items, copies=1, max_cycle_len=None):
    if len(items) < 3:
        raise TooFewItems("an intransitive cycle needs at least three items")
    g = dice.duel_graph(items, copies)
    verdicts = [_tally_verdict(a.label, b.label, dice.beat_tally(a, b, copies))
                for a, b in combinations(items, 2)]
    cycles = find_beat_cycles(g, max_cycle_len or max(3, len(items)))
    notes = [f"copies={copies}: duels compare sums of {copies} independent draws"] if copies > 1 else []
    return verdicts, cycles, notes


def check_profile(profile: voting.PreferenceProfile, max_cycle_len=None):
    counts = voting.pairwise_counts(profile)
    g = voting.pairwise_margins(profile)
    verdicts = []
    for a, b in combinations(profile.candidates, 2):
        verdicts.append({"pair": [a, b], "for_a": counts[a, b], "for_b": counts[b, a],
                         "margin": g.margin(a, b) or g.margin(b, a) or Fraction(0)})
    cycles = voting.detect_condorcet_cycle(profile, max_cycle_len)
    return verdicts, cycles


def check_gear_pairs(shafts, spacing, max_cycle_len=None):
    verdicts = []
    for a, b in cyclic_pairs(shafts):
        sr = gears.speed_ratio(a, b, spacing)
        v = {"pair": [a.label, b.label], "status": sr.status}
        if sr.status == gears.RATIO:
            v["ratio"] = sr.ratio
            v["faster"] = {"a": a.label, "b": b.label, None: "equal"}[sr.faster]
        verdicts.append(v)
    g = gears.faster_graph(shafts, spacing)
    return verdicts, find_beat_cycles(g, max_cycle_len or max(3, len(shafts)))


def check_pulleys(shafts, spacing):
    verdicts, results = [], []
    for a, b in cyclic_pairs(shafts):
        out = gears.pulley_duel(a, b, spacing)
        v = {"pair": [a.label, b.label], "verdict": out.verdict}
        if out.descender:
            v.update(lifts=out.lifted, displacement_ratio=out.displacement_ratio,
                     pe_change_per_unit_descent=out.pe_change_per_unit_descent,
                     pe_rate_sign=out.pe_rate_sign)
            results.append((a.label, b.label, out.descender, 1))
        else:
            results.append((a.label, b.label, a.label, 0))
        verdicts.append(v)
    g = build_graph(results, nodes=[s.label for s in shafts])
    return verdicts, find_beat_cycles(g, max(3, len(shafts)))


def jam_verdict(asm: gears.Assembly) -> dict:
    rep = gears.detect_jam(asm)
    v = {"item": "assembly", "jammed": not rep.consistent}
    if rep.consistent:
        v["velocities"] = rep.velocities
    else:
        v["reason"] = rep.reason
        v["witness"] = list(rep.witness)
        if rep.cycle_product is not None:
            v["cycle_product"] = rep.cycle_product
        if rep.interference_slot is not None:
            v["interference_slot"] = rep.interference_slot
    return v


def check_lanes(profiles, mirrored=False, max_cycle_len=None):
    verdicts = []
    for a, b in cyclic_pairs(profiles):
        out = duels.duel_outcome(a, b, mirrored)
        verdicts.append({"pair": [a.label, b.label], "verdict": out.verdict, "action": out.action,
                         "contact_distance": out.contact_distance,
                         "contact_lanes": list(out.contact_lanes)})
    g = duels.action_graph(profiles, mirrored)
    return verdicts, find_beat_cycles(g, max_cycle_len or max(3, len(profiles)))


# ---------------------------------------------------------------------------
# documents


def load_document(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaViolation("document must be an object with a 'kind' field")
    return obj


def dice_items_from_json(obj: dict) -> list[dice.ValueMultiset]:
    if "square" in obj:
        return dice.sets_from_square(obj["square"])
    try:
        items = [dice.ValueMultiset(it["label"], tuple(it["values"])) for it in obj["items"]]
    except (KeyError, TypeError) as exc:
        raise SchemaViolation(f"malformed dice_set: {exc}") from exc
    return items


def lanes_from_json(obj: dict) -> list[duels.LaneProfile]:
    try:
        profiles = [
            duels.LaneProfile(p["label"], tuple(
                duels.LaneElement(e["kind"], to_fraction(e.get("length", 0))) for e in p["elements"]
            ))
            for p in obj["profiles"]
        ]
    except (KeyError, TypeError) as exc:
        raise SchemaViolation(f"malformed lane_profile_set: {exc}") from exc
    n = obj.get("lanes")
    if n is not None and any(len(p.lanes) != n for p in profiles):
        raise SchemaViolation(f"every profile must have {n} lanes")
    return profiles


def cmd_verify(path: str, copies: int = 1, max_cycle_len: int | None = None) -> RunReport:
    obj = load_document(path)
    with open(path, "rb") as fh:
        rep = RunReport(f"verify {path}", "sha256:" + hashlib.sha256(fh.read()).hexdigest())
    kind = obj["kind"]
    if kind == "dice_set":
        items = dice_items_from_json(obj)
        rep.verdicts, cycles, rep.notes = check_dice(items, copies, max_cycle_len)
        found = bool(cycles)
    elif kind == "preference_profile":
        rep.verdicts, cycles = check_profile(voting.PreferenceProfile.from_json(obj), max_cycle_len)
        found = bool(cycles)
    elif kind == "gear_assembly":
        expect = obj.get("expect")
        if expect not in ("cycle", "jam"):
            raise SchemaViolation("gear_assembly needs \"expect\": \"cycle\" or \"jam\"")
        asm = gears.Assembly.from_json(obj)
        rep.verdicts, cycles = check_gear_pairs(asm.shafts, asm.center_spacing, max_cycle_len)
        if all(s.pulley is not None for s in asm.shafts):
            pv, _ = check_pulleys(asm.shafts, asm.center_spacing)
            rep.verdicts += pv
        jam = jam_verdict(asm)
        rep.verdicts.append(jam)
        rep.notes.append(f"expectation declared in file: {expect}")
        found = bool(cycles) if expect == "cycle" else jam["jammed"]
    elif kind == "lane_profile_set":
        mirrored = obj.get("alignment", "index") == "mirrored"
        rep.verdicts, cycles = check_lanes(lanes_from_json(obj), mirrored, max_cycle_len)
        rep.notes.append(LANE_NOTE.format("mirrored" if mirrored else "index to index"))
        found = bool(cycles)
    else:
        raise SchemaViolation(f"unknown document kind {kind!r}")
    rep.cycles = [list(c) for c in cycles]
    rep.exit_status = 0 if found else 1
    return rep


# ---------------------------------------------------------------------------
# demos


def cmd_demo(name: str, n: int | None = None, rotation: str | None = None, copies: int = 1,
             max_cycle_len: int | None = None, r_large="2", r_small="1", torque="10") -> RunReport:
    if name not in DEMOS:
        raise UnknownDemo(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    if rotation not in (None, "left", "right"):
        raise BadOption(f"rotation must be left or right, got {rotation!r}")
    if n is not None and name != "gears-chain-n":
        raise BadOption("--n only applies to gears-chain-n")
    fixture = {"demo": name, "n": n, "rotation": rotation, "copies": copies,
               "R_X": str(r_large), "R_Y": str(r_small), "torque": str(torque)}
    rep = RunReport(f"demo {name}", digest(fixture))
    cycles: list = []

    if name in ("efron", "losho-sticks"):
        if name == "efron":
            items = list(dice.EFRON)
        else:
            items = dice.sets_from_square(dice.LO_SHU)
            rep.notes.append(LO_SHU_NOTE)
        rep.verdicts, cycles, extra = check_dice(items, copies, max_cycle_len)
        rep.notes += extra
        if name == "efron":
            check = dice.verify_cycle(items, copies)
            for a, b, t in check.tallies:
                rep.verdicts.append({"item": f"cycle step {a} > {b}", "p_win": t.p_win})
            rep.verdicts.append({"item": "cycle " + " > ".join(i.label for i in items), "holds": check.holds})
            for semantics in ("pairwise", "simultaneous"):
                dom = dice.verify_k_player_dominance(items, 1, copies, semantics)
                rep.verdicts.append({"item": f"1-player dominance ({semantics})", "holds": dom.holds})
            rep.notes.append(K_PLAYER_NOTE)
    elif name == "condorcet-vote":
        direction = rotation or "left"
        rows = voting.condorcet_rotation(voting.RotationScheme(("A", "B", "C"), direction), 3)
        profile = voting.PreferenceProfile(("A", "B", "C"), tuple(rows))
        rep.verdicts, cycles = check_profile(profile, max_cycle_len)
        rep.notes.append("ballots: " + ", ".join("".join(r) for r in rows))
        rep.notes.append(voting.ROTATION_NOTE)
    elif name in ("gears3", "gears-chain-n", "pulleys"):
        direction = rotation or "right"
        size = 3 if name != "gears-chain-n" else (n if n is not None else 4)
        asm = gears.build_condorcet_chain(size, direction, to_fraction(r_large), to_fraction(r_small))
        shafts = asm.shafts
        if name == "pulleys":
            p = gears.Pulley(1, 10)
            shafts = tuple(gears.GearShaft(s.label, s.slots, p) for s in shafts)
            rep.verdicts, cycles = check_pulleys(shafts, asm.center_spacing)
            rep.notes.append(gears.PULLEY_NOTE)
        else:
            rep.verdicts, cycles = check_gear_pairs(shafts, asm.center_spacing, max_cycle_len)
            rep.verdicts.append(jam_verdict(asm))
            rep.notes.append("all shafts joined at once jam; superiority is tested pair by pair")
        rep.notes.insert(0, "shafts: " + ", ".join(f"{s.label}={s.notation}" for s in shafts))
        rep.notes.append(f"R_X={r_large}, R_Y={r_small} (configurable); rotation={direction}")
    elif name == "levers":
        direction = rotation or "right"
        levers = gears.condorcet_levers(2, 1, direction)
        results = []
        for a, b in cyclic_pairs(levers):
            out = gears.lever_duel(a, b, to_fraction(torque))
            rep.verdicts.append({"pair": [a.label, b.label], "winner": out.verdict,
                                 "contact_slot": out.contact_slot,
                                 "force_a": out.force_a, "force_b": out.force_b})
            results.append((a.label, b.label, out.verdict if out.verdict in (a.label, b.label) else a.label,
                            1 if out.verdict in (a.label, b.label) else 0))
        cycles = find_beat_cycles(build_graph(results), 3)
        rep.notes.append(gears.LEVER_NOTE)
    else:  # towers, combs, birds
        base = {"towers": duels.TOWERS_BASE, "combs": duels.COMBS_BASE, "birds": duels.BIRDS_BASE}[name]
        direction = rotation or "right"
        profiles = duels.condorcet_profiles(base, direction)
        rep.verdicts, cycles = check_lanes(profiles, False, max_cycle_len)
        rep.notes.insert(0, "profiles: " + ", ".join(f"{p.label}=({p.code()})" for p in profiles))
        rep.notes.append(LANE_NOTE.format("index to index"))
        if name == "birds":
            rep.notes.append("birds: a wing-tip touch (Marker) makes the touched bird pull its head in")

    rep.cycles = [list(c) for c in cycles]
    rep.exit_status = 0 if cycles else 1
    return rep


# ---------------------------------------------------------------------------
# search


def _dice_lines(args):
    spec = dice.SearchSpec(args.sets, args.faces, args.min, args.max, args.copies,
                           args.cycle_len, args.min_margin)
    for hit in dice.take(dice.search_intransitive_sets(spec, jobs=args.jobs), args.limit):
        line = hit.to_json()
        check = dice.verify_cycle(hit.cycle_items(), spec.copies)
        line["tallies"] = [{"pair": [a, b], "wins": t.wins, "ties": t.ties, "losses": t.losses}
                           for a, b, t in check.tallies]
        yield line


def _lane_lines(args):
    palette = duels.parse_palette(args.palette)
    stream = duels.search_condorcet_triples(palette, args.lanes, args.rotation or "right", jobs=args.jobs)
    for base in dice.take(stream, args.limit):
        yield {"base": [e.to_json() for e in base], "code": " ".join(e.code() for e in base)}


def cmd_search(args, out=None) -> RunReport:
    out = out or sys.stdout
    if args.jobs < 1:
        raise BadOption("--jobs must be >= 1")
    if args.limit is not None and args.limit < 0:
        raise BadOption("--limit must be >= 0")
    lines = _dice_lines(args) if args.kind == "dice" else _lane_lines(args)
    count = 0
    for line in lines:
        out.write(json.dumps(line, sort_keys=True) + "\n")
        count += 1
    out.flush()
    opts = {k: v for k, v in sorted(vars(args).items()) if k not in ("jobs", "func", "format", "decimal")}
    rep = RunReport(f"search {args.kind}", digest(opts))
    rep.verdicts.append({"item": "results", "count": count})
    rep.exit_status = 0 if count else 1
    return rep


# ---------------------------------------------------------------------------
# argparse


def _common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--decimal", action="store_true", help="append marked decimal approximations")
    p.add_argument("--copies", type=int, default=1)
    p.add_argument("--max-cycle-len", type=int, default=None)
    p.add_argument("--rotation", choices=("left", "right"), default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intransitive", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("demo", help="run a canonical construction")
    d.add_argument("name", help=", ".join(DEMOS))
    d.add_argument("--n", type=int, default=None, help="chain length for gears-chain-n")
    d.add_argument("--r-large", default="2")
    d.add_argument("--r-small", default="1")
    d.add_argument("--torque", default="10")
    _common(d)

    v = sub.add_parser("verify", help="verify a device file")
    v.add_argument("file")
    _common(v)

    s = sub.add_parser("search", help="search for new intransitive configurations")
    s.add_argument("kind", choices=("dice", "lane-triples"))
    s.add_argument("--sets", type=int, default=3)
    s.add_argument("--faces", type=int, default=3)
    s.add_argument("--min", type=int, default=1)
    s.add_argument("--max", type=int, default=6)
    s.add_argument("--cycle-len", type=int, default=None)
    s.add_argument("--min-margin", default=None)
    s.add_argument("--lanes", type=int, default=3)
    s.add_argument("--palette", default="Marker:1-3,Block:1-3,Gap")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--limit", type=int, default=None)
    _common(s)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.copies < 1:
            raise BadOption("--copies must be >= 1")
        if args.max_cycle_len is not None and args.max_cycle_len < 3:
            raise BadOption("--max-cycle-len must be >= 3")
        if args.command == "demo":
            rep = cmd_demo(args.name, args.n, args.rotation, args.copies, args.max_cycle_len,
                           args.r_large, args.r_small, args.torque)
            stream = sys.stdout
        elif args.command == "verify":
            rep = cmd_verify(args.file, args.copies, args.max_cycle_len)
            stream = sys.stdout
        else:
            rep = cmd_search(args)
            stream = sys.stderr  # stdout carries the JSON Lines stream
    except IntransitiveError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = rep.to_json(args.decimal) if args.format == "json" else rep.to_text(args.decimal)
    print(text, file=stream)
    return rep.exit_status


if __name__ == "__main__":
    sys.exit(main())
