"""Optimal triangular configurations for admissible signatures.

Genus zero is handled by crossing surgery on building blocks.  Higher
genus follows the case analysis on the largest entries: handles to add
four prongs, handle joins to remove pairs of fours or a four and a three,
the 3,1,1 move, and a few hand-built assets for the small exceptions.
"""

from collections import Counter
from functools import lru_cache

from . import moves
from .blocks import building_block, load_asset
from .config import canonical, crossing_type, normalize_type, verify
from .errors import (
    BadParity,
    EulerViolation,
    ExceptionalSignature,
    MalformedConfiguration,
    MixedParity,
    ParityViolation,
)
from .signature import Signature, euler_residual, is_exceptional, optimal_count


def _prongs(cfg):
    return Counter(cfg.prong(f) for f in range(len(cfg.faces())))


def _glue_search(c1, c2, accept, depth_check=None):
    """All surgeries of c1 and c2 whose matched face pairs satisfy ``accept``.

    ``accept`` receives the four (prong in c1, prong in c2) pairs.
    Yields configurations in a deterministic order.
    """
    for p in range(len(c1.vertices())):
        a, b = moves.crossing_pair(c1, p)
        if a != b or not moves.distinct_corners(c1, p):
            continue
        for q in range(len(c2.vertices())):
            a2, b2 = moves.crossing_pair(c2, q)
            if a2 != b2 or not moves.distinct_corners(c2, q):
                continue
            for j0 in moves.surgery_alignments(c1, p, c2, q):
                pairs = moves.surgery_face_pairs(c1, p, c2, q, j0)
                prs = [(c1.prong(f1), c2.prong(f2)) for f1, f2 in pairs]
                if accept(prs):
                    yield moves.crossing_surgery(c1, p, c2, q, j0)


def _grow_accept(big):
    def accept(prs):
        return sum(1 for x, y in prs if x == big and y == 3) == 1 and all(
            (x == big and y == 3) or 1 in (x, y) for x, y in prs) and all(
            not (x == big and y != 3) for x, y in prs)
    return accept


def _keep_accept(prs):
    return all(1 in pr for pr in prs)


def _has_growth_site(cfg, big):
    """Some pair crossing with four distinct faces, one of them the big face."""
    for v, hv in enumerate(cfg.vertices()):
        a, b = moves.crossing_pair(cfg, v)
        if a == b and moves.distinct_corners(cfg, v):
            ps = sorted(cfg.prong(f) for f in cfg.corner_faces(hv))
            if big in ps and ps.count(1) >= 1:
                return True
    return False


@lru_cache(maxsize=None)
def realize_basic(m):
    """Optimal sphere configuration with signature (m, 1^(m+2)), m >= 3."""
    if m < 3:
        raise BadParity(f"basic configurations need m >= 3, got {m}")
    if m in (3, 4):
        return building_block("B3" if m == 3 else "B4")
    prev = realize_basic(m - 2)
    b3 = building_block("B3")
    fallback = None
    for out in _glue_search(prev, b3, _grow_accept(m - 2)):
        if _has_growth_site(out, m) and _both_sites(out, m):
            return out
        fallback = fallback or out
    if fallback is None:
        raise MalformedConfiguration(f"no surgery grows the {m - 2}-region")
    return fallback


def _both_sites(cfg, m):
    """Crossings of types 112m and 12m1 (211m) are both present."""
    from .config import crossing_type
    ts = set(crossing_type(cfg, hv) for v, hv in enumerate(cfg.vertices())
             if moves.crossing_pair(cfg, v)[0] == moves.crossing_pair(cfg, v)[1])
    return (1, 1, 2, m) in ts and (1, 2, m, 1) in ts


def realize_basic_odd(m):
    if m % 2 == 0 or m < 3:
        raise BadParity(f"expected odd m >= 3, got {m}")
    return realize_basic(m)


def realize_basic_even(m):
    if m % 2 or m < 4:
        raise BadParity(f"expected even m >= 4, got {m}")
    return realize_basic(m)


def _combine(bigs):
    """Glue basic configurations so that every big region survives unchanged."""
    bigs = sorted(bigs, reverse=True)

    def rec(cur, rest, placed):
        if not rest:
            return cur
        nxt = realize_basic(rest[0])
        # prefer gluings that leave a crossing of type 2 x 2 n between the
        # new n-region and an earlier big region, as in the hand construction
        bridges = set(normalize_type((2, x, 2, rest[0])) for x in placed)
        cands = list(_glue_search(cur, nxt, _keep_accept))
        cands.sort(key=lambda o: not any(crossing_type(o, v) in bridges for v in o.vertices()))
        for out in cands:
            res = rec(out, rest[1:], placed + [rest[0]])
            if res is not None:
                return res
        return None

    res = rec(realize_basic(bigs[0]), bigs[1:], [bigs[0]])
    if res is None:
        raise MalformedConfiguration(f"no surgery sequence realizes {bigs}")
    return res


def realize_same_parity(ns):
    ns = list(ns)
    if any(n < 3 for n in ns):
        raise MixedParity("entries must be at least 3")
    if len(set(n % 2 for n in ns)) > 1:
        raise MixedParity(f"entries {ns} mix parities")
    return _combine(ns)


def realize_genus0(R):
    """Optimal configuration on the sphere with prong multiset ``R``."""
    sig = Signature(0, tuple(R), "-")
    if euler_residual(sig) != 0:
        raise EulerViolation(f"{sig} violates the Euler constraint")
    bigs = [m for m in sig.prongs if m >= 3]
    if not bigs:
        return building_block("GreatCircles")
    return _combine(bigs)


# higher genus

HAND_CASES = {
    Signature(1, (1, 1, 4), "-"): "fig114",
    Signature(2, (1, 7), "-"): "fig71",
    Signature(2, (3, 3, 4), "-"): "fig334",
    Signature(2, (4, 4), "-"): "fig44",
    Signature(3, (10,), "-"): "fig10",
    Signature(1, (1, 1, 3, 3), "-"): "fig1133",
}


def torus():
    return building_block("TorusMerLong")


def torus_1133():
    """(1,1,3,3) on the torus: double the longitude as a new pair and pierce it."""
    t = torus()
    x = [h for h in range(t.n_half) if t.family[h] == "b"][0]
    return moves.double_and_pierce(t, x)


def _faces_with(cfg, m):
    return [f for f in range(len(cfg.faces())) if cfg.prong(f) == m]


def _doublings(cfg):
    """Configurations obtained by doubling one curve component (either side)."""
    for comp in cfg.curves():
        for side in ("left", "right"):
            yield moves.double_curve(cfg, comp[0], side)


def ensure_face(cfg, m):
    """Return cfg, or a doubled version of it, containing an m-prong face."""
    if _faces_with(cfg, m):
        return cfg
    if m == 2:
        for out in _doublings(cfg):
            if _faces_with(out, 2):
                return out
    raise MalformedConfiguration(f"no {m}-prong face available")


def handle_on(cfg, m):
    """Add a handle in an m-prong face (doubling first to make a 2-prong face)."""
    cfg = ensure_face(cfg, m)
    last = None
    for f in _faces_with(cfg, m):
        try:
            return moves.add_handle_in_region(cfg, f)
        except MalformedConfiguration as exc:
            last = exc
    raise last


def join_on(cfg, x, y, rounds=2):
    """Join an x-prong face to a y-prong face, doubling curves if needed."""
    tried = [cfg]
    frontier = [cfg]
    for r in range(rounds + 1):
        for c in frontier:
            fx, fy = _faces_with(c, x), _faces_with(c, y)
            for f1 in fx:
                for f2 in fy:
                    if f1 == f2:
                        continue
                    if not moves.coadjacent_runs(c, f1, f2):
                        continue
                    try:
                        return moves.join_coadjacent(c, f1, f2)
                    except (MalformedConfiguration, moves.NotCoadjacent):
                        continue
        if r == rounds or 2 not in (x, y):
            break
        nxt = []
        for c in frontier:
            nxt.extend(_doublings(c))
        frontier = nxt
        tried.extend(nxt)
    raise MalformedConfiguration(f"no coadjacent {x}- and {y}-prong faces")


def remove_fours_i(cfg):
    """From R in genus g-1 to R + (4,4) in genus g: join two quadrilaterals."""
    return join_on(cfg, 2, 2)


def remove_fours_ii(cfg):
    """From R + (1) in genus g-1 to R + (3,4) in genus g: join a bigon to a quadrilateral."""
    return join_on(cfg, 1, 2)


def three_one_one(cfg):
    return moves.three_one_one_move(cfg)


def realize_maximal(g, with_one=False):
    """(3^(4g-4)) or, with ``with_one``, (1, 3^(4g-3)) in genus g >= 2."""
    if g < 2:
        raise ValueError("maximal case needs genus >= 2")
    return _maximal(g, bool(with_one))


@lru_cache(maxsize=None)
def _maximal(g, with_one):
    if not with_one:
        if g == 2:
            base = load_hand(HAND_CASES[Signature(1, (1, 1, 3, 3), "-")])
        else:
            base = three_one_one(_maximal(g - 1, True))
        return join_on(base, 1, 1)
    if g == 2:
        base = three_one_one(load_hand(HAND_CASES[Signature(1, (1, 1, 3, 3), "-")]))
    else:
        base = three_one_one(three_one_one(_maximal(g - 1, True)))
    return join_on(base, 1, 1)


def load_hand(name):
    return load_asset(name)


def _check(sig):
    if euler_residual(sig) != 0:
        raise EulerViolation(f"{sig}: Euler residual {euler_residual(sig)}")
    if not sig.parity_ok():
        raise ParityViolation(f"{sig}: orientable signatures need even entries")
    reason = is_exceptional(sig)
    if reason:
        raise ExceptionalSignature(reason)


def _realizable(sig):
    try:
        _check(sig)
    except (EulerViolation, ParityViolation, ExceptionalSignature):
        return False
    return sig.genus >= 0 and (sig.genus > 0 or not sig.orientable)


def _replace(prongs, remove, add):
    c = Counter(prongs)
    for m in remove:
        if c[m] == 0:
            return None
        c[m] -= 1
    for m in add:
        c[m] += 1
    return tuple(c.elements())


def _strategies(sig):
    """Candidate (sub-signature, move) reductions in preference order."""
    R, g, s = sig.prongs, sig.genus, sig.sign
    out = []
    bigs = sorted(set(m for m in R if m > 4), reverse=True)
    for n in bigs:
        out.append((Signature(g - 1, _replace(R, [n], [n - 4]), s), "handle", n - 4))
    if Counter(R)[4] >= 2:
        out.append((Signature(g - 1, _replace(R, [4, 4], []), s), "join", (2, 2)))
    if 4 in R and 3 in R:
        out.append((Signature(g - 1, _replace(R, [4, 3], [1]), s), "join", (1, 2)))
    if set(R) <= {1, 3} and s == "-" and Counter(R)[1] >= 2 and 3 in R:
        out.append((Signature(g, _replace(R, [3, 1, 1], [1]), s), "311", None))
    # generic join of two faces each losing two prongs
    for i, x in enumerate(sorted(set(R))):
        for y in sorted(set(R)):
            if y < x or x < 3:
                continue
            if x == y and Counter(R)[x] < 2:
                continue
            sub = _replace(R, [x, y], [x - 2, y - 2])
            out.append((Signature(g - 1, sub, s), "join", (x - 2, y - 2)))
    return out


def _apply(cfg, move, arg):
    if move == "handle":
        return handle_on(cfg, arg)
    if move == "join":
        return join_on(cfg, *arg)
    if move == "311":
        return three_one_one(cfg)
    raise ValueError(move)


@lru_cache(maxsize=None)
def _realize(sig):
    if sig in HAND_CASES:
        return load_hand(HAND_CASES[sig])
    R, g = sig.prongs, sig.genus
    if g == 0:
        return realize_genus0(R)
    if g == 1 and not R and sig.orientable:
        return torus()
    if sig.sign == "-" and set(R) <= {1, 3}:
        n1, n3 = Counter(R)[1], Counter(R)[3]
        if g >= 2 and n1 == 0:
            return realize_maximal(g)
        if g >= 2 and n1 == 1:
            return realize_maximal(g, with_one=True)
    last = None
    for sub, move, arg in _strategies(sig):
        if sub.genus < 0 or not _realizable(sub):
            continue
        try:
            cfg = _apply(_realize(sub), move, arg)
        except MalformedConfiguration as exc:
            last = exc
            continue
        if cfg.signature() == sig:
            return cfg
    raise MalformedConfiguration(f"no construction found for {sig}" + (f" ({last})" if last else ""))


def realize_signature(g, R, s="-"):
    """Certified optimal triangular configuration with signature (R, s) in genus g."""
    sig = Signature(g, tuple(R), s)
    _check(sig)
    if g == 0 and sig.orientable:
        raise ParityViolation("no orientable configuration fills the sphere")
    cfg = _realize(sig)
    cfg = canonical(cfg)
    rep = verify(cfg)
    if rep["signature"] != sig or not rep["optimal"]:
        raise MalformedConfiguration(
            f"construction for {sig} certified as {rep['signature']} (optimal={rep['optimal']})")
    cfg.name = str(sig)
    return cfg
