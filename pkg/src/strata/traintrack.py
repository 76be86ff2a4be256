"""Train tracks with sided switches, weight spaces and the Thurston form.

A track has branches ``0..n-1``; branch ``b`` has two ends ``(b, 0)`` and
``(b, 1)``.  Each switch lists its ends counterclockwise as
``(A, B0, B1)``: side A holds one end, side B holds two, with ``B0`` to
the right of ``B1`` when looking from side A into side B.  The cusp of a
switch is the corner between ``B0`` and ``B1``.

Punctures are stored as a set of ends; a region is punctured when its
boundary walk passes through one of them.  They never enter Euler counts.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import DimensionMismatch, EulerMismatch, MalformedTrack, NonIntegerBound


@dataclass(frozen=True)
class Switch:
    sideA: tuple
    sideB: tuple

    @property
    def ends(self):
        return (self.sideA[0], self.sideB[0], self.sideB[1])


@dataclass(frozen=True)
class RegionData:
    index: int
    cusp_count: int
    boundary: tuple  # ends traversed, in order
    cusps: tuple  # positions in ``boundary`` preceded by a cusp
    punctured: bool

    @property
    def even(self):
        return self.cusp_count % 2 == 0


@dataclass
class TrainTrack:
    n_branches: int
    switches: list
    punctures: frozenset = field(default_factory=frozenset)
    recurrent: bool = False  # provenance flag: built from a certified configuration

    def __post_init__(self):
        self.switches = [s if isinstance(s, Switch) else Switch(tuple(s[0]), tuple(s[1]))
                         for s in self.switches]
        self.switches = [Switch(tuple(map(tuple, s.sideA)), tuple(map(tuple, s.sideB)))
                         for s in self.switches]
        self.punctures = frozenset(tuple(e) for e in self.punctures)
        self._cache = {}

    @property
    def branches(self):
        return list(range(self.n_branches))

    @property
    def euler_char(self):
        return len(self.switches) - self.n_branches

    # ribbon-graph structure: alpha pairs the two ends of a branch, sigma is ccw rotation
    def _rotation(self):
        if "sigma" not in self._cache:
            sigma, where = {}, {}
            for i, s in enumerate(self.switches):
                es = s.ends
                for j, e in enumerate(es):
                    sigma[e] = es[(j + 1) % 3]
                    where[e] = (i, j)
            self._cache["sigma"] = sigma
            self._cache["where"] = where
        return self._cache["sigma"], self._cache["where"]


def alpha(e):
    return (e[0], 1 - e[1])


def validate_track(t):
    """Check the structural invariants; return a diagnostics dict or raise."""
    problems = []
    seen = {}
    for i, s in enumerate(t.switches):
        if len(s.sideA) != 1 or len(s.sideB) != 2:
            problems.append(f"switch {i} is not 1/2-sided (sides {len(s.sideA)}/{len(s.sideB)})")
            continue
        for e in s.ends:
            if len(e) != 2 or e[1] not in (0, 1) or not 0 <= e[0] < t.n_branches:
                problems.append(f"switch {i} references unknown end {e}")
                continue
            if e in seen:
                problems.append(f"end {e} at switches {seen[e]} and {i}")
            seen[e] = i
    for b in range(t.n_branches):
        for slot in (0, 1):
            if (b, slot) not in seen:
                problems.append(f"end {(b, slot)} is not attached to a switch")
    if not problems and t.switches:
        adj = {i: set() for i in range(len(t.switches))}
        for b in range(t.n_branches):
            u, v = seen[(b, 0)], seen[(b, 1)]
            adj[u].add(v)
            adj[v].add(u)
        stack, reached = [0], {0}
        while stack:
            for w in adj[stack.pop()]:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        if len(reached) != len(t.switches):
            problems.append("track is disconnected")
    if not t.switches:
        problems.append("track has no switches")
    for e in t.punctures:
        if e not in seen:
            problems.append(f"puncture mark on unknown end {e}")
    if problems:
        raise MalformedTrack("; ".join(problems))
    return {
        "valid": True,
        "switches": len(t.switches),
        "branches": t.n_branches,
        "euler_char": t.euler_char,
    }


def switch_matrix(t):
    rows = []
    for s in t.switches:
        row = [0] * t.n_branches
        row[s.sideA[0][0]] += 1
        row[s.sideB[0][0]] -= 1
        row[s.sideB[1][0]] -= 1
        rows.append(row)
    return rows


def weight_space_basis(t):
    """Rational basis of the solutions of the switch equations."""
    validate_track(t)
    if "W" not in t._cache:
        t._cache["W"] = linalg.nullspace(switch_matrix(t), t.n_branches)
    return [list(v) for v in t._cache["W"]]


def satisfies_switches(t, w):
    return all(x == 0 for x in linalg.matvec(switch_matrix(t), w))


def thurston_form(t, u, v):
    """Half the sum over cusps of u(right)v(left) - v(right)u(left)."""
    if len(u) != t.n_branches or len(v) != t.n_branches:
        raise DimensionMismatch(
            f"weight vectors of length {len(u)}, {len(v)} on a track with {t.n_branches} branches")
    total = Fraction(0)
    for s in t.switches:
        r, l = s.sideB[0][0], s.sideB[1][0]
        total += Fraction(u[r]) * v[l] - Fraction(v[r]) * u[l]
    return total / 2


def gram_matrix(t, basis=None):
    if basis is None:
        basis = weight_space_basis(t)
    return [[thurston_form(t, u, v) for v in basis] for u in basis]


def kernel_dimension(t):
    """dim W minus the rank of the Thurston form on W, computed directly."""
    basis = weight_space_basis(t)
    if not basis:
        return 0
    return len(basis) - linalg.rank(gram_matrix(t, basis), len(basis))


def regions(t):
    """Complementary regions with cusp counts, boundaries and puncture flags."""
    validate_track(t)
    if "regions" in t._cache:
        return t._cache["regions"]
    sigma, where = t._rotation()
    cusp_end = set(s.sideB[1] for s in t.switches)  # the corner (B0, B1) lies in face[B1]
    done = set()
    out = []
    for s in t.switches:
        for start in s.ends:
            if start in done:
                continue
            boundary, cusps = [], []
            e = start
            while e not in done:
                done.add(e)
                if e in cusp_end:
                    cusps.append(len(boundary))
                boundary.append(e)
                e = sigma[alpha(e)]
            punct = any(x in t.punctures for x in boundary)
            out.append(RegionData(len(out), len(cusps), tuple(boundary), tuple(cusps), punct))
    twice_chi = 2 * len(t.switches) - 2 * t.n_branches + 2 * len(out)
    if twice_chi % 4 or twice_chi > 4:
        raise EulerMismatch(f"face count {len(out)} gives non-integral genus")
    if sum(Fraction(2 - r.cusp_count, 2) for r in out) != twice_chi // 2:
        raise EulerMismatch("region prong numbers contradict the Euler characteristic")
    t._cache["regions"] = out
    return out


def genus(t):
    regs = regions(t)
    chi = len(t.switches) - t.n_branches + len(regs)
    return (2 - chi) // 2


def region_vector(t, region):
    """Alternating +1/-1 weights on the sides of ``region``.

    The sign flips at each cusp along the boundary walk; a branch met twice
    accumulates both contributions.
    """
    w = [0] * t.n_branches
    sign = 1
    cusp_set = set(region.cusps)
    for pos, e in enumerate(region.boundary):
        if pos in cusp_set and pos:
            sign = -sign
        w[e[0]] += sign
    return [Fraction(x) for x in w]


def kernel_basis(t):
    """Basis of the kernel of the Thurston form built from even regions."""
    vecs = [region_vector(t, r) for r in regions(t) if r.even and r.cusp_count > 0]
    keep = linalg.independent_subset(vecs)
    return [vecs[i] for i in keep]


def _parity_find(parent, x):
    path = []
    p = 0
    while parent[x][0] != x:
        path.append(x)
        p ^= parent[x][1]
        x = parent[x][0]
    root = x
    # path compression
    acc = p
    for y in path:
        q = parent[y][1]
        parent[y] = (root, acc)
        acc ^= q
    return root, p


def _parity_union(parent, x, y, rel):
    """Impose value(x) xor value(y) == rel; False on contradiction."""
    rx, px = _parity_find(parent, x)
    ry, py = _parity_find(parent, y)
    if rx == ry:
        return (px ^ py) == rel
    parent[rx] = (ry, px ^ py ^ rel)
    return True


def orientability(t):
    """'+' if branches can be oriented so every switch is coherent."""
    parent = {b: (b, 0) for b in range(t.n_branches)}
    # out(b, slot) = x_b xor slot
    ok = True
    for s in t.switches:
        a, b0, b1 = s.ends
        ok &= _parity_union(parent, a[0], b0[0], 1 ^ a[1] ^ b0[1])
        ok &= _parity_union(parent, b0[0], b1[0], b0[1] ^ b1[1])
        if not ok:
            return "-"
    return "+"


def region_summary(t):
    regs = regions(t)
    odd = sum(1 for r in regs if r.cusp_count % 2)
    even = sum(1 for r in regs if r.cusp_count % 2 == 0)
    return {"n_odd": odd, "n_even": even, "prongs": sorted((r.cusp_count for r in regs), reverse=True)}


def ergodic_upper_bound(t):
    """(dim W - dim ker)/2, with the kernel dimension computed from the Gram rank."""
    dim_w = len(weight_space_basis(t))
    dim_k = kernel_dimension(t)
    if (dim_w - dim_k) % 2:
        raise NonIntegerBound(f"dim W = {dim_w}, dim ker = {dim_k} have different parity")
    return (dim_w - dim_k) // 2


def expected_bound(t):
    """The Euler-count prediction g - 1 + n_odd/2, or g when orientable."""
    info = region_summary(t)
    g = genus(t)
    if orientability(t) == "+":
        return g
    if info["n_odd"] % 2:
        raise NonIntegerBound("odd number of odd regions")
    return g - 1 + info["n_odd"] // 2


def to_json(t):
    return {
        "version": 1,
        "branches": list(range(t.n_branches)),
        "switches": [
            {"sideA": [list(s.sideA[0])], "sideB": [list(s.sideB[0]), list(s.sideB[1])]}
            for s in t.switches
        ],
        "punctures": sorted(list(e) for e in t.punctures),
    }


def from_json(data):
    try:
        branches = data["branches"]
        if sorted(branches) != list(range(len(branches))):
            raise MalformedTrack("branch ids must be 0..n-1")
        sw = [(tuple(tuple(e) for e in s["sideA"]), tuple(tuple(e) for e in s["sideB"]))
              for s in data["switches"]]
        t = TrainTrack(len(branches), sw, frozenset(tuple(e) for e in data.get("punctures", [])))
    except (KeyError, TypeError) as exc:
        raise MalformedTrack(f"bad track JSON: {exc}") from exc
    return t


def theta_track():
    """Two switches joined by three branches; the smallest valid track."""
    # switch 0: A=(0,0), B=(1,0),(2,0); switch 1: A=(0,1), B=(2,1),(1,1)
    return TrainTrack(3, [(((0, 0),), ((1, 0), (2, 0))), (((0, 1),), ((2, 1), (1, 1)))])
