import pytest

from strata.blocks import building_block
from strata.config import crossing_type, normalize_type, to_json, verify
from strata.errors import (BadParity, EulerViolation, ExceptionalSignature, MixedParity,
                           ParityViolation)
from strata.realize import (realize_basic, realize_basic_even, realize_basic_odd,
                            realize_genus0, realize_same_parity, realize_signature)
from strata.signature import Signature, optimal_count


def has_type(cfg, raw):
    want = normalize_type(raw)
    return any(crossing_type(cfg, v) == want for v in cfg.vertices())


def test_basic_small_cases_are_blocks():
    assert realize_basic(3) is not None
    assert verify(realize_basic(3))["crossing_types"] == verify(building_block("B3"))["crossing_types"]
    assert verify(realize_basic(4))["crossing_types"] == verify(building_block("B4"))["crossing_types"]


@pytest.mark.parametrize("m", range(3, 12))
def test_basic_signatures(m):
    rep = verify(realize_basic(m))
    sig = Signature(0, (m,) + (1,) * (m + 2))
    assert rep["signature"] == sig
    assert rep["optimal"] and rep["k"] == optimal_count(sig)


def test_basic_crossing_bookkeeping():
    assert has_type(realize_basic(5), (2, 1, 2, 5))
    assert has_type(realize_basic(6), (2, 2, 1, 6))
    assert has_type(realize_basic(8), (2, 1, 2, 8))
    assert verify(realize_basic(7))["k"] == 4


def test_parity_checks():
    with pytest.raises(BadParity):
        realize_basic_odd(4)
    with pytest.raises(BadParity):
        realize_basic_even(5)
    with pytest.raises(MixedParity):
        realize_same_parity([3, 4])


def test_same_parity_three_three():
    cfg = realize_same_parity([3, 3])
    rep = verify(cfg)
    assert rep["signature"] == Signature(0, (3, 3) + (1,) * 6) and rep["optimal"]
    assert has_type(cfg, (2, 3, 2, 3))


def test_four_four_on_the_sphere():
    # sum of (m - 2) must be -4, so two 4's come with eight 1's
    rep = verify(realize_same_parity([4, 4]))
    assert rep["signature"] == Signature(0, (4, 4) + (1,) * 8)
    assert rep["k"] == 3 and rep["optimal"]


def test_genus_zero_dispatch():
    assert verify(realize_genus0((1, 1, 1, 1)))["k"] == 1
    # mixed parity: the Euler constraint leaves seven 1's, so k = -1 + 8/2
    rep = verify(realize_genus0((4, 3) + (1,) * 7))
    assert rep["signature"] == Signature(0, (4, 3) + (1,) * 7) and rep["k"] == 3
    with pytest.raises(EulerViolation):
        realize_genus0((3, 1, 1))


def test_gate():
    with pytest.raises(ExceptionalSignature):
        realize_signature(1, (1, 3))
    with pytest.raises(ExceptionalSignature):
        realize_signature(2, (6,), "-")
    with pytest.raises(EulerViolation):
        realize_signature(2, (1, 1))
    with pytest.raises(ParityViolation):
        realize_signature(1, (1, 3), "+")
    assert verify(realize_signature(2, (6,), "+"))["optimal"]


@pytest.mark.parametrize("g,R,s,k", [
    (1, (1, 1, 4), "-", 1),
    (2, (1, 7), "-", 2),
    (2, (3, 3, 4), "-", 2),
    (3, (10,), "-", 2),
    (4, (3,) * 12, "-", 9),
    (3, (4, 4, 4, 4), "+", 3),
    (4, (1, 1, 5, 7, 7, 3), "-", 6),
])
def test_selected_signatures(g, R, s, k):
    rep = verify(realize_signature(g, R, s))
    assert rep["signature"] == Signature(g, R, s)
    assert rep["k"] == k and rep["optimal"]


def test_deterministic_output():
    a = to_json(realize_signature(2, (1, 3, 4, 4), "-"))
    b = to_json(realize_signature(2, (4, 4, 3, 1), "-"))
    assert a == b
