from collections import Counter

import pytest

from strata import traintrack as tt
from strata.blocks import building_block, load_asset
from strata.errors import CollapseObstruction
from strata.realize import realize_signature
from strata.smoothing import (checked_superbranches, collapse_bigons, collapse_config,
                              smooth_to_bigon_track, superbranch_rank, superbranch_vectors)


@pytest.mark.parametrize("name", ["B3", "B4", "GreatCircles", "TorusMerLong"])
def test_bigon_track_counts(name):
    cfg = building_block(name)
    c, E = len(cfg.vertices()), cfg.n_half // 2
    bt = smooth_to_bigon_track(cfg)
    # two switches per crossing, one middle branch per crossing
    assert len(bt.switches) == 2 * c and bt.n_branches == E + c
    assert tt.validate_track(bt)["valid"]


def test_bigon_track_keeps_the_quads_as_bigons():
    cfg = building_block("B3")
    bt = smooth_to_bigon_track(cfg)
    got = Counter(r.cusp_count for r in tt.regions(bt))
    assert got[2] == cfg.prong_counter()[2]
    assert got[1] == 5 and got[3] == 1


def test_b3_collapse_regions():
    ct = collapse_config(building_block("B3"))
    assert sorted(r.cusp_count for r in tt.regions(ct.track)) == [1, 1, 1, 1, 1, 3]
    assert tt.genus(ct.track) == 0


def test_collapse_bigons_goes_through_source():
    bt = smooth_to_bigon_track(building_block("B4"))
    t = collapse_bigons(bt)
    assert sorted(r.cusp_count for r in tt.regions(t)) == [1, 1, 1, 1, 1, 1, 4]


def test_collapse_bigons_rejects_bare_bigon_tracks():
    bt = smooth_to_bigon_track(building_block("B3"))
    bt.source = None
    with pytest.raises(CollapseObstruction):
        collapse_bigons(bt)
    # a track with no bigon is returned as is
    t = collapse_config(building_block("B3")).track
    assert collapse_bigons(t) is t


def test_torus_weight_space():
    t = collapse_config(building_block("TorusMerLong")).track
    assert len(tt.weight_space_basis(t)) == 2
    assert tt.orientability(t) == "+"


@pytest.mark.parametrize("name,rank", [("B3", 4), ("B4", 4), ("TorusMerLong", 2), ("GreatCircles", 2)])
def test_superbranch_rank(name, rank):
    ct = collapse_config(building_block(name))
    assert superbranch_rank(ct) == rank == 2 * ct.cfg.k
    assert len(checked_superbranches(ct)) == rank


def test_superbranches_are_weights():
    ct = collapse_config(building_block("B3"))
    for v in superbranch_vectors(ct):
        assert tt.satisfies_switches(ct.track, v)
        assert all(x >= 0 for x in v) and any(v)


def test_orientable_configuration_gives_orientable_track():
    cfg = realize_signature(2, (4, 4), "+")
    t = collapse_config(cfg).track
    assert tt.orientability(t) == "+"
    assert Counter(r.cusp_count for r in tt.regions(t)) == Counter({4: 2})


@pytest.mark.parametrize("name", ["fig114", "fig71", "fig10"])
def test_asset_tracks_match_faces(name):
    cfg = load_asset(name)
    t = collapse_config(cfg).track
    want = sorted(p for p in (cfg.prong(f) for f in range(len(cfg.faces()))) if p != 2)
    assert sorted(r.cusp_count for r in tt.regions(t)) == want
    assert tt.genus(t) == cfg.genus()
