"""Acceptance suite: one line per criterion, also runnable as a script.

    python3 tests/test_acceptance.py
"""

import math
import os
import random
import sys
import time
from collections import Counter
from fractions import Fraction
from functools import lru_cache

sys.path.insert(0, os.path.dirname(__file__))

from conftest import record  # noqa: E402

from strata import linalg, twist  # noqa: E402
from strata import traintrack as tt  # noqa: E402
from strata.blocks import building_block  # noqa: E402
from strata.config import normalize_type, type_str, verify  # noqa: E402
from strata.errors import ExceptionalSignature, ScheduleOverflow  # noqa: E402
from strata.realize import realize_basic, realize_same_parity, realize_signature  # noqa: E402
from strata.signature import (Signature, enumerate_signatures, is_exceptional,  # noqa: E402
                              optimal_count)
from strata.smoothing import collapse_config, superbranch_rank, superbranch_vectors  # noqa: E402

GENERA = range(5)
EXCEPTIONAL = {Signature(1, (1, 3), "-"), Signature(1, (), "-"),
               Signature(2, (3, 5), "-"), Signature(2, (6,), "-")}


def _formula(sig):
    if sig.sign == "+":
        return sig.genus
    return sig.genus - 1 + sig.n_odd // 2


@lru_cache(maxsize=None)
def sweep():
    """Realize, verify and collapse every signature of the sweep once."""
    rows = []
    t0 = time.time()
    for g in GENERA:
        for sig in enumerate_signatures(g, 2 * g + 14):
            row = {"sig": sig, "exceptional": is_exceptional(sig) is not None}
            try:
                cfg = realize_signature(g, sig.prongs, sig.sign)
            except ExceptionalSignature:
                row["refused"] = True
                rows.append(row)
                continue
            except Exception as exc:  # recorded as a failure of criterion 1
                row["refused"] = False
                row["error"] = repr(exc)
                rows.append(row)
                continue
            row["refused"] = False
            row["cfg"] = cfg
            row["report"] = verify(cfg)
            ct = collapse_config(cfg)
            row["ct"] = ct
            rows.append(row)
    return rows, time.time() - t0


def realized():
    return [r for r in sweep()[0] if "cfg" in r]


# --- criterion 1 -------------------------------------------------------------

def test_criterion_1_signature_sweep():
    rows, secs = sweep()
    bad = []
    n = 0
    for r in rows:
        if r["exceptional"]:
            continue
        n += 1
        sig = r["sig"]
        if "cfg" not in r:
            bad.append((str(sig), r.get("error", "refused")))
            continue
        rep = r["report"]
        ok = (rep["genus"] == sig.genus and rep["signature"] == sig and rep["triangular"]
              and rep["k"] == _formula(sig) == optimal_count(sig))
        if not ok:
            bad.append((str(sig), rep["k"]))
    record(1, not bad and n > 0 and secs < 300,
           f"{n - len(bad)}/{n} signatures realized and certified in {secs:.1f}s"
           + (f"; failures {bad[:3]}" if bad else ""))
    assert not bad


# --- criteria 2, 3 ------------------------------------------------------------

def test_criterion_2_bonahon_wong():
    bad = []
    for r in realized():
        t = r["ct"].track
        tt.validate_track(t)
        dim_w = len(tt.weight_space_basis(t))
        chi = t.euler_char
        orient = tt.orientability(t)
        n_even = tt.region_summary(t)["n_even"]
        kdim = tt.kernel_dimension(t)
        want_w = 1 - chi if orient == "+" else -chi
        want_k = n_even - 1 if orient == "+" else n_even
        if dim_w != want_w or kdim != want_k or orient != r["sig"].sign:
            bad.append(str(r["sig"]))
    n = len(realized())
    record(2, not bad, f"{n - len(bad)}/{n} tracks match dim W and kernel dimension")
    assert not bad


def test_criterion_3_bound_agreement():
    bad = []
    for r in realized():
        t = r["ct"].track
        dim_w = len(tt.weight_space_basis(t))
        kdim = tt.kernel_dimension(t)
        if (dim_w - kdim) % 2 or (dim_w - kdim) // 2 != optimal_count(r["sig"]):
            bad.append(str(r["sig"]))
    n = len(realized())
    record(3, not bad, f"{n - len(bad)}/{n} tracks give (dim W - dim ker)/2 = optimal count")
    assert not bad


# --- criterion 4 -------------------------------------------------------------

def _kernel_vectors(t):
    """Kernel of the Thurston form, computed from the Gram matrix and
    expressed in branch coordinates."""
    W = tt.weight_space_basis(t)
    G = tt.gram_matrix(t, W)
    coeffs = linalg.nullspace(G, len(W))
    return [[sum(c * w[i] for c, w in zip(co, W)) for i in range(t.n_branches)] for co in coeffs]


def test_criterion_4_negative_property():
    rng = random.Random(20240611)
    tracks = fails = 0
    for r in realized():
        t = r["ct"].track
        K = _kernel_vectors(t)
        if not K:
            continue
        tracks += 1
        for _ in range(200):
            co = [Fraction(0)]
            while not any(co):
                co = [Fraction(rng.randint(-20, 20), rng.randint(1, 20)) for _ in K]
            v = [sum(c * k[i] for c, k in zip(co, K)) for i in range(t.n_branches)]
            assert any(v), "kernel basis is dependent"
            if not any(x < 0 for x in v):
                fails += 1
    record(4, fails == 0 and tracks > 0,
           f"{tracks} tracks with nonzero kernel, {200 * tracks} combinations, {fails} without a negative branch")
    assert fails == 0


# --- criterion 5 -------------------------------------------------------------

LISTED_B3 = ["1123", "1232", "2113", "1321", "3212", "2311"]
LISTED_B4 = ["2412", "4121", "1214", "4221", "2124", "1241", "2113", "1242"]


def _norm(types):
    return Counter(type_str(normalize_type(tuple(int(c) for c in t))) for t in types)


def _surgery_ok():
    cfg = realize_basic(5)
    rep = verify(cfg)
    types = set(rep["crossing_types"])
    want = type_str(normalize_type((2, 1, 2, 5)))
    return rep["signature"] == Signature(0, (5,) + (1,) * 7, "-") and want in types, rep


def test_criterion_5_building_blocks():
    b3 = Counter(verify(building_block("B3"))["crossing_types"])
    b4 = Counter(verify(building_block("B4"))["crossing_types"])
    ok3 = b3 == _norm(LISTED_B3)
    ok4 = b4 == _norm(LISTED_B4)
    ok_s, _ = _surgery_ok()
    detail = (f"B3 {'matches' if ok3 else 'differs'}; "
              f"B4 {'matches' if ok4 else 'differs: found ' + str(sorted(b4.elements())) + ', listed ' + str(sorted(_norm(LISTED_B4).elements()))}; "
              f"B3+B3 surgery {'gives' if ok_s else 'misses'} (5,1^7) with a 2125 crossing")
    record(5, ok3 and ok4 and ok_s, detail)
    assert ok3 and ok4 and ok_s


# --- criterion 6 -------------------------------------------------------------

def _random_m(rng, k, top=10):
    return [[rng.randint(1, top) if i == j else (rng.randint(0, top) if j < i else 0)
             for j in range(k)] for i in range(k)]


def _naive_product(X, Y):
    n = len(X)
    Z = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s = 0
            for t in range(n):
                s += X[i][t] * Y[t][j]
            Z[i][j] = s
    return Z


def test_criterion_6_twist_fidelity():
    import sympy

    rng = random.Random(6)
    mism = 0
    for _ in range(100):
        k = rng.randint(1, 5)
        m = _random_m(rng, k)
        al = [rng.randint(1, 10) for _ in range(k)]
        be = [rng.randint(1, 10) for _ in range(k)]
        got = twist.product_AB(m, al, be).tolist()
        want = _naive_product(twist.build_A(m, al).tolist(), twist.build_B(m, be).tolist())
        mism += got != want
    sym_bad = 0
    for _ in range(20):
        k = rng.randint(1, 5)
        m = _random_m(rng, k)
        al = sympy.symbols(f"alpha1:{k + 1}", positive=True)
        be = sympy.symbols(f"beta1:{k + 1}", positive=True)
        C = twist.product_AB(m, al, be)
        if sympy.expand(C[0, 0] - (1 + al[0] * be[0] * m[0][0] ** 2)) != 0:
            sym_bad += 1
    record(6, mism == 0 and sym_bad == 0,
           f"100 random products: {mism} mismatches; 20 symbolic (1,1) entries: {sym_bad} mismatches")
    assert mism == 0 and sym_bad == 0


# --- criterion 7 -------------------------------------------------------------

def _instances():
    rng = random.Random(7)
    out = [("B3", building_block("B3").intersection_matrix()),
           ("B4", building_block("B4").intersection_matrix())]
    for t in range(20):
        out.append((f"random{t}", _random_m(rng, rng.randint(1, 5))))
    return out


EPS = (Fraction(1, 10), Fraction(1, 100))


def test_criterion_7_epsilon_scheduling():
    """The definition read literally: decreasing diagonal."""
    passed, certified, failed = 0, 0, []
    for name, m in _instances():
        for eps in EPS:
            try:
                ex = twist.choose_exponents(m, eps, diagonal="decreasing", max_doublings=40)
                ok = twist.is_epsilon_matrix(twist.product_AB(m, ex), eps)
            except ScheduleOverflow:
                ok = False
            if ok:
                passed += 1
            else:
                failed.append(f"{name}@{eps}")
                if twist.literal_obstruction(m, eps) is not None:
                    certified += 1
    total = 2 * len(_instances())
    record(7, not failed,
           f"{passed}/{total} pass the literal definition; {len(failed)} fail, "
           f"{certified} of them provably for every choice of exponents "
           f"(increasing-diagonal reading: see test_criterion_7_variant)")
    assert not failed


def test_criterion_7_variant_increasing_diagonal():
    """Same instances with condition (1) read as c_ii/c_{i+1,i+1} < eps, the
    shape the exponent recipe actually produces."""
    bad = []
    for name, m in _instances():
        for eps in EPS:
            ex = twist.choose_exponents(m, eps)
            C = twist.product_AB(m, ex)
            al, be = ex.alpha, ex.beta
            mono = (all(al[i] > al[i + 1] for i in range(len(al) - 1))
                    and all(be[i] < be[i + 1] for i in range(len(be) - 1))
                    and all(al[i] * be[i] < al[i + 1] * be[i + 1] for i in range(len(al) - 1)))
            if not (twist.is_epsilon_matrix(C, eps, diagonal="increasing") and mono):
                bad.append(f"{name}@{eps}")
    print(f"CRITERION  7 (variant): {'PASS' if not bad else 'FAIL'}  "
          f"{2 * len(_instances()) - len(bad)}/{2 * len(_instances())} instances")
    assert not bad


# --- criterion 8 -------------------------------------------------------------

def _cone_ok(m):
    res = twist.cone_iteration(m, twist.geometric_schedule(30))
    spread = twist.angle_stability(res, 10)
    ok = (res["separation"] > 1e-3 and spread <= 1e-6 and res["nondegeneracy"] >= 1e-3
          and res["tail_columns_inside"])
    return ok, res, spread


def test_criterion_8_cone_contraction():
    t0 = time.time()
    m3 = realize_same_parity((3, 3)).intersection_matrix()
    okB, rB, sB = _cone_ok(building_block("B3").intersection_matrix())
    ok3, r3, s3 = _cone_ok(m3)
    secs = time.time() - t0
    record(8, okB and ok3 and secs < 60,
           f"B3: angle {float(rB['separation']):.4f} (spread {float(sB):.1e}), "
           f"sigma_min {float(rB['nondegeneracy']):.3f}, hull {float(rB['hull_distance']):.1e}; "
           f"k=3 {m3}: sigma_min {float(r3['nondegeneracy']):.3f}, spread {float(s3):.1e}; {secs:.1f}s")
    assert okB and ok3 and secs < 60


# --- criterion 9 -------------------------------------------------------------

def test_criterion_9_superbranch_rank():
    bad = []
    for r in realized():
        ct = r["ct"]
        vecs = superbranch_vectors(ct)
        if not all(tt.satisfies_switches(ct.track, v) for v in vecs):
            bad.append((str(r["sig"]), "switch"))
        elif superbranch_rank(ct, vecs) != 2 * ct.cfg.k:
            bad.append((str(r["sig"]), "rank"))
    n = len(realized())
    record(9, not bad, f"{n - len(bad)}/{n} collapsed tracks carry 2k independent superbranches")
    assert not bad


# --- criterion 10 ------------------------------------------------------------

def test_criterion_10_exceptional_gate():
    rows, _ = sweep()
    refused = {r["sig"] for r in rows if r["refused"]}
    record(10, refused == EXCEPTIONAL,
           f"refused {sorted(map(str, refused))} out of {len(rows)} swept signatures")
    assert refused == EXCEPTIONAL


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for f in tests:
        try:
            f()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
