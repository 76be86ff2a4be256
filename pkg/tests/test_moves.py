from collections import Counter

import pytest

from strata import moves
from strata.blocks import building_block, load_asset
from strata.config import crossing_type, normalize_type, verify
from strata.errors import NoOneProng, NotCoadjacent, RegionsNotDistinct
from strata.realize import join_on, realize_maximal, torus
from strata.signature import Signature


def faces(cfg, m):
    return [f for f in range(len(cfg.faces())) if cfg.prong(f) == m]


def types(cfg):
    return {crossing_type(cfg, v) for v in cfg.vertices()}


def test_surgery_of_two_b3_blocks():
    b = building_block("B3")
    done = []
    for p in range(len(b.vertices())):
        for q in range(len(b.vertices())):
            if not (moves.distinct_corners(b, p) and moves.distinct_corners(b, q)):
                continue
            (a1, b1), (a2, b2) = moves.crossing_pair(b, p), moves.crossing_pair(b, q)
            if a1 != b1 or a2 != b2:
                continue
            for j0 in moves.surgery_alignments(b, p, b, q):
                # matched faces merge: an m-prong and an n-prong face give m+n-1
                merged = sorted(b.prong(f1) + b.prong(f2) - 1
                                for f1, f2 in moves.surgery_face_pairs(b, p, b, q, j0))
                if 5 not in merged:
                    continue
                out = moves.crossing_surgery(b, p, b, q, j0)
                if out.signature() == Signature(0, (5,) + (1,) * 7):
                    done.append(out)
    assert done
    for out in done:
        rep = verify(out)
        assert rep["optimal"] and rep["k"] == 3
    assert any(normalize_type((2, 1, 2, 5)) in types(out) for out in done)


def test_surgery_needs_distinct_corners():
    cfg = torus()
    assert not moves.distinct_corners(cfg, 0)
    with pytest.raises(RegionsNotDistinct):
        moves.crossing_surgery(cfg, 0, building_block("B3"), 0)


def test_double_curve_counts():
    b = building_block("B3")
    for comp in b.curves():
        t = len(comp)
        out = moves.double_curve(b, comp[0])
        assert len(out.vertices()) == len(b.vertices()) + t
        assert out.prong_counter()[2] == b.prong_counter()[2] + t
        assert out.genus() == 0


def test_handle_in_three_region_of_b3():
    b = building_block("B3")
    out = moves.add_handle_in_region(b, faces(b, 3)[0])
    rep = verify(out)
    assert rep["signature"] == Signature(1, (7, 1, 1, 1, 1, 1))
    assert rep["k"] == 3 and rep["optimal"]


def test_handle_in_bigon_gives_six():
    b = moves.double_curve(building_block("B3"), 0)
    out = moves.add_handle_in_region(b, faces(b, 2)[0])
    assert out.prong_counter()[6] == 1 and out.genus() == 1


def test_handle_keeps_orientability():
    t = torus()
    out = moves.add_handle_in_region(t, 0)
    rep = verify(out)
    assert rep["signature"] == Signature(2, (6,), "+")
    assert rep["optimal"]
    assert moves.subtract_four_move is moves.add_handle_in_region


def test_join_two_bigons_gives_two_fours():
    out = join_on(torus(), 2, 2)
    rep = verify(out)
    assert rep["signature"] == Signature(2, (4, 4), "+") and rep["optimal"]


def test_join_one_and_two():
    out = join_on(load_asset("fig114"), 1, 2)
    rep = verify(out)
    assert Counter(rep["prongs"]) == Counter({1: 1, 3: 1, 4: 2})
    assert rep["genus"] == 2 and rep["optimal"]


def test_join_one_and_seven():
    c = load_asset("fig71")
    out = moves.join_coadjacent(c, faces(c, 1)[0], faces(c, 7)[0])
    rep = verify(out)
    assert rep["signature"] == Signature(3, (3, 9)) and rep["optimal"]


def test_join_rejects_same_face():
    c = load_asset("fig71")
    with pytest.raises(NotCoadjacent):
        moves.join_coadjacent(c, 0, 0)


def test_three_one_one_on_torus_1133():
    c = load_asset("fig1133")
    out = moves.three_one_one_move(c)
    rep = verify(out)
    assert rep["signature"] == Signature(1, (3, 3, 3, 1, 1, 1)) and rep["k"] == 3
    again = moves.three_one_one_move(out)
    rep = verify(again)
    assert rep["signature"] == Signature(1, (3,) * 4 + (1,) * 4) and rep["optimal"]


def test_three_one_one_needs_a_one():
    with pytest.raises(NoOneProng):
        moves.three_one_one_move(torus())


@pytest.mark.parametrize("g,with_one,R,k", [
    (2, False, (3,) * 4, 3),
    (3, False, (3,) * 8, 6),
    (2, True, (1,) + (3,) * 5, 4),
])
def test_maximal_cases(g, with_one, R, k):
    rep = verify(realize_maximal(g, with_one))
    assert rep["signature"] == Signature(g, R) and rep["k"] == k and rep["optimal"]
