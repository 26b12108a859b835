from fractions import Fraction
from itertools import combinations

import pytest

from intransitive.errors import (
    ChainTooShort,
    MissingPulley,
    MultipleMeshes,
    OverConstrained,
    PulleyMismatch,
    SlotCountMismatch,
    UnknownShaftInAdjacency,
)
from intransitive.gears import (
    JAMMED,
    RATIO,
    UNRELATED,
    Assembly,
    LeverPair,
    Pulley,
    build_condorcet_chain,
    condorcet_levers,
    detect_jam,
    faster_graph,
    find_meshes,
    lever_duel,
    pulley_duel,
    shaft,
    speed_ratio,
)
from intransitive.relations import find_beat_cycles

SP = Fraction(3)
A, B, C = shaft("A", "XYZ"), shaft("B", "ZXY"), shaft("C", "YZX")


def test_single_mesh_slot_two():
    rep = find_meshes(A, B, SP)
    assert [(m.slot, m.radius_a, m.radius_b) for m in rep.meshes] == [(2, 1, 2)]
    assert not rep.interferences


def test_large_large_interferes():
    rep = find_meshes(shaft("P", "XZ"), shaft("Q", "XZ"), SP)
    assert [i.slot for i in rep.interferences] == [1]


def test_small_small_clears():
    rep = find_meshes(shaft("P", "YZ"), shaft("Q", "YZ"), SP)
    assert not rep.meshes and not rep.interferences


def test_all_empty_no_meshes():
    rep = find_meshes(shaft("E", "ZZZ"), A, SP)
    assert not rep.meshes and not rep.interferences


def test_slot_count_mismatch():
    with pytest.raises(SlotCountMismatch):
        find_meshes(A, shaft("Q", "XY"), SP)


def test_speed_ratios():
    ab = speed_ratio(A, B, SP)
    assert ab.status == RATIO and ab.ratio == -2 and ab.faster == "a"
    ac = speed_ratio(A, C, SP)
    assert ac.ratio == Fraction(-1, 2) and ac.faster == "b"
    assert speed_ratio(A, shaft("E", "ZZZ"), SP).status == UNRELATED


def test_speed_ratio_jammed_by_interference():
    assert speed_ratio(shaft("P", "XY"), shaft("Q", "XZ"), SP).status == JAMMED


def test_speed_ratio_jammed_by_conflicting_meshes():
    # slot 1: P small vs Q large (ratio -2); slot 2: P large vs Q small (ratio -1/2)
    assert speed_ratio(shaft("P", "YX"), shaft("Q", "XY"), SP).status == JAMMED


def test_speed_ratio_consistent_double_mesh():
    sr = speed_ratio(shaft("P", "YY"), shaft("Q", "XX"), SP)
    assert sr.status == RATIO and sr.ratio == -2 and len(sr.meshes.meshes) == 2


def test_speed_ratio_reciprocal():
    for a, b in combinations([A, B, C], 2):
        assert speed_ratio(a, b, SP).ratio * speed_ratio(b, a, SP).ratio == 1


def test_triple_jams():
    asm = Assembly.from_notation({"A": "XYZ", "B": "ZXY", "C": "YZX"},
                                 [("A", "B"), ("B", "C"), ("C", "A")])
    rep = detect_jam(asm)
    assert not rep.consistent and rep.reason == "cycle"
    assert sorted(rep.witness) == ["A", "B", "C"]
    assert rep.cycle_product == Fraction(-1, 8)


def test_pair_consistent():
    rep = detect_jam(Assembly.from_notation({"A": "XYZ", "B": "ZXY"}, [("A", "B")]))
    assert rep.consistent
    assert rep.velocities == {"A": 1, "B": Fraction(-1, 2)}


def test_four_ring_alternating_consistent():
    rows = {"A": "YZZY", "B": "XXZZ", "C": "ZYYZ", "D": "ZZXX"}
    ring = [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")]
    asm = Assembly.from_notation(rows, ring)
    ratios = [speed_ratio(asm.get(x), asm.get(y), asm.center_spacing).ratio for x, y in ring]
    assert ratios == [-2, Fraction(-1, 2), -2, Fraction(-1, 2)]
    rep = detect_jam(asm)
    assert rep.consistent
    assert rep.velocities == {"A": 1, "B": Fraction(-1, 2), "C": 1, "D": Fraction(-1, 2)}


def test_interference_reported():
    asm = Assembly.from_notation({"P": "XZ", "Q": "XY"}, [("P", "Q")])
    rep = detect_jam(asm)
    assert rep.reason == "interference" and rep.interference_slot == 1


def test_separate_components_each_normalised():
    asm = Assembly.from_notation({"A": "XYZ", "B": "ZXY", "D": "ZZZ"}, [("A", "B")])
    assert detect_jam(asm).velocities == {"A": 1, "B": Fraction(-1, 2), "D": 1}


def test_unknown_shaft_in_adjacency():
    with pytest.raises(UnknownShaftInAdjacency):
        Assembly.from_notation({"A": "XY"}, [("A", "Q")])


def test_assembly_from_json():
    obj = {"kind": "gear_assembly", "R_X": "2", "R_Y": "1",
           "shafts": [{"label": "A", "slots": ["X", "Y", "Z"], "pulley": {"radius": "1", "weight": "10"}}],
           "adjacent": []}
    asm = Assembly.from_json(obj)
    assert asm.center_spacing == 3 and asm.shafts[0].pulley == Pulley(1, 10)


def test_chain_three_is_paper_triple():
    asm = build_condorcet_chain(3)
    assert [s.notation for s in asm.shafts] == ["XYZ", "ZXY", "YZX"]


def test_chain_four_pairs():
    asm = build_condorcet_chain(4)
    s = {x.label: x for x in asm.shafts}
    for a, b in [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")]:
        assert speed_ratio(s[a], s[b], asm.center_spacing).faster == "a"
    for a, b in [("A", "C"), ("B", "D")]:
        assert speed_ratio(s[a], s[b], asm.center_spacing).status == UNRELATED


@pytest.mark.parametrize("direction", ["left", "right"])
@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_chain_faster_graph_is_n_cycle(n, direction):
    asm = build_condorcet_chain(n, direction)
    g = faster_graph(asm.shafts, asm.center_spacing)
    labels = tuple(s.label for s in asm.shafts)
    assert find_beat_cycles(g, n) == [labels]
    assert len(g.edges) == n


def test_chain_too_short():
    with pytest.raises(ChainTooShort):
        build_condorcet_chain(2)


def test_chain_scaling_invariant():
    a = build_condorcet_chain(4)
    b = build_condorcet_chain(4, r_large=Fraction(14, 3), r_small=Fraction(7, 3))
    ga = faster_graph(a.shafts, a.center_spacing)
    gb = faster_graph(b.shafts, b.center_spacing)
    assert {(e.winner, e.loser) for e in ga.edges} == {(e.winner, e.loser) for e in gb.edges}


# -- levers ----------------------------------------------------------------


def test_lever_duel_basic():
    out = lever_duel(LeverPair("A", (2, 1, None)), LeverPair("B", (None, 2, 1)), 10)
    assert (out.verdict, out.contact_slot, out.force_a, out.force_b) == ("A", 2, 10, 5)


def test_lever_stalemate_identical_devices():
    a = LeverPair("A", (2, 1, None))
    out = lever_duel(a, LeverPair("A2", (2, 1, None)), 10)
    assert out.verdict == "stalemate" and out.force_a == out.force_b


def test_lever_stalemate_equal_single_contact():
    out = lever_duel(LeverPair("P", (2, None)), LeverPair("Q", (2, None)), 10)
    assert out.verdict == "stalemate"


def test_lever_overconstrained():
    with pytest.raises(OverConstrained):
        lever_duel(LeverPair("A", (2, 1, None)), LeverPair("B", (1, 2, None)), 10)


def test_lever_unrelated():
    out = lever_duel(LeverPair("A", (2, None, 1)), LeverPair("B", (None, 2, None)), 10)
    assert out.verdict == "unrelated"


def test_condorcet_levers_cycle():
    levers = condorcet_levers()
    for i in range(3):
        a, b = levers[i], levers[(i + 1) % 3]
        out = lever_duel(a, b, 10)
        assert out.verdict == a.label and {out.force_a, out.force_b} == {10, 5}


# -- pulleys ---------------------------------------------------------------

P = Pulley(1, 10)


def test_pulley_duel():
    a, b = shaft("A", "XYZ", pulley=P), shaft("B", "ZXY", pulley=P)
    out = pulley_duel(a, b)
    assert out.descender == "A" and out.lifted == "B"
    assert out.displacement_ratio == Fraction(1, 2)
    assert out.pe_change_per_unit_descent == -5 and out.pe_rate_sign == "negative"


def test_pulley_power_balance():
    out = pulley_duel(shaft("A", "XYZ", pulley=P), shaft("B", "ZXY", pulley=P))
    # mesh force x pitch-line travel equals each load's weight x its own travel
    assert out.mesh_force_descender * out.pitch_arc_per_unit_descent == P.load_weight * 1
    assert out.mesh_force_lifted * out.pitch_arc_per_unit_descent == P.load_weight * out.displacement_ratio


def test_pulley_stalemate_and_unrelated():
    from intransitive.gears import GearShaft, SlotElement

    g = SlotElement("Y", Fraction(3, 2))
    a = GearShaft("A", (g,), P)
    b = GearShaft("B", (g,), P)
    out = pulley_duel(a, b, spacing=3)
    assert out.verdict == "stalemate" and out.pe_rate_sign == "zero"
    assert pulley_duel(shaft("A", "XYZ", pulley=P), shaft("E", "ZZZ", pulley=P)).verdict == "unrelated"


def test_pulley_errors():
    with pytest.raises(MissingPulley):
        pulley_duel(shaft("A", "XYZ"), shaft("B", "ZXY", pulley=P))
    with pytest.raises(PulleyMismatch):
        pulley_duel(shaft("A", "XYZ", pulley=P), shaft("B", "ZXY", pulley=Pulley(1, 11)))
    with pytest.raises(MultipleMeshes):
        pulley_duel(shaft("A", "YY", pulley=P), shaft("B", "XX", pulley=P))
