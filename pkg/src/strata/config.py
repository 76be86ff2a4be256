"""Curve configurations stored as 4-valent combinatorial maps.

Half-edges are integers; ``h ^ 1`` is the other half of the same edge.
``sigma[h]`` is the next half-edge counterclockwise around the vertex of
``h``.  Faces are the orbits of ``h -> sigma[h ^ 1]``; a face with ``2m``
sides is an m-prong region.  Every half-edge carries the family ('a' or
'b') and pair index (1..k) of the curve running along it.
"""

from collections import Counter
from dataclasses import dataclass, field

from .errors import MalformedConfiguration
from .signature import Signature, optimal_count
from .traintrack import _parity_find, _parity_union


@dataclass
class CurveConfiguration:
    sigma: list
    family: list
    pair: list
    k: int
    punctures: frozenset = field(default_factory=frozenset)
    name: str = ""

    def __post_init__(self):
        self.sigma = list(self.sigma)
        self.family = list(self.family)
        self.pair = list(self.pair)
        self._faces = None
        self._verts = None

    # basic structure
    @property
    def n_half(self):
        return len(self.sigma)

    def vertices(self):
        if self._verts is None:
            seen = [False] * self.n_half
            out = []
            for h in range(self.n_half):
                if not seen[h]:
                    orb = []
                    x = h
                    while not seen[x]:
                        seen[x] = True
                        orb.append(x)
                        x = self.sigma[x]
                    out.append(tuple(orb))
            self._verts = out
        return self._verts

    def faces(self):
        """List of faces, each a tuple of half-edges in boundary order."""
        if self._faces is None:
            face_of = [-1] * self.n_half
            out = []
            for h in range(self.n_half):
                if face_of[h] < 0:
                    orb = []
                    x = h
                    while face_of[x] < 0:
                        face_of[x] = len(out)
                        orb.append(x)
                        x = self.sigma[x ^ 1]
                    out.append(tuple(orb))
            self._faces = out
            self._face_of = face_of
        return self._faces

    def face_of(self, h):
        self.faces()
        return self._face_of[h]

    def prong(self, f):
        return len(self.faces()[f]) // 2

    def vertex_of(self):
        vid = [0] * self.n_half
        for i, orb in enumerate(self.vertices()):
            for h in orb:
                vid[h] = i
        return vid

    def genus(self):
        chi = len(self.vertices()) - self.n_half // 2 + len(self.faces())
        return (2 - chi) // 2

    def euler_char(self):
        return len(self.vertices()) - self.n_half // 2 + len(self.faces())

    def opposite(self, h):
        return self.sigma[self.sigma[h]]

    def next_along(self, h):
        """Outgoing half-edge continuing the curve after traversing ``h``."""
        return self.opposite(h ^ 1)

    def curves(self):
        """Curve components as lists of outgoing half-edges."""
        seen = set()
        out = []
        for h in range(self.n_half):
            if h in seen or h ^ 1 in seen:
                continue
            comp = []
            x = h
            while x not in seen:
                seen.add(x)
                seen.add(x ^ 1)
                comp.append(x)
                x = self.next_along(x)
            out.append(comp)
        return out

    def prong_counter(self):
        return Counter(self.prong(f) for f in range(len(self.faces())))

    def signature(self):
        return Signature(self.genus(), tuple(self.prong(f) for f in range(len(self.faces()))),
                         self.orientation_sign())

    def corner_faces(self, v):
        """Faces at the four corners of vertex orbit ``v``, corner j between h_j and h_j+1."""
        return [self.face_of(self.sigma[h]) for h in v]

    def orientation_sign(self):
        """'+' when curves can be oriented so that every crossing has the same sign."""
        comps = self.curves()
        comp_of, ref_out = {}, set()
        for i, c in enumerate(comps):
            for h in c:
                comp_of[h] = comp_of[h ^ 1] = i
                ref_out.add(h)
        parent = {i: (i, 0) for i in range(len(comps))}
        for v in self.vertices():
            if len(v) != 4:
                return "-"
            a = [h for h in v if self.family[h] == "a"]
            a_out = a[0] if a[0] in ref_out else a[1]
            b_next = self.sigma[a_out]
            eps = 0 if b_next in ref_out else 1
            if not _parity_union(parent, comp_of[a_out], comp_of[b_next], eps):
                return "-"
        return "+"

    def crossing_signs(self, orient=None):
        """Per-vertex crossing sign (+1/-1) under reference curve orientations."""
        ref_out = set(h for c in self.curves() for h in c)
        out = []
        for v in self.vertices():
            a = [h for h in v if self.family[h] == "a"]
            a_out = a[0] if a[0] in ref_out else a[1]
            out.append(1 if self.sigma[a_out] in ref_out else -1)
        return out

    def intersection_matrix(self):
        """m[i][j] = number of crossings of a_{i+1} with b_{j+1}."""
        m = [[0] * self.k for _ in range(self.k)]
        for v in self.vertices():
            a = [h for h in v if self.family[h] == "a"][0]
            b = [h for h in v if self.family[h] == "b"][0]
            m[self.pair[a] - 1][self.pair[b] - 1] += 1
        return m

    def is_triangular(self):
        m = self.intersection_matrix()
        return all(m[i][i] > 0 for i in range(self.k)) and all(
            m[i][j] == 0 for i in range(self.k) for j in range(i + 1, self.k))

    def crossing_types(self):
        return [crossing_type(self, v) for v in self.vertices()]

    def copy(self, **kw):
        d = dict(sigma=list(self.sigma), family=list(self.family), pair=list(self.pair),
                 k=self.k, punctures=self.punctures, name=self.name)
        d.update(kw)
        return CurveConfiguration(**d)


# family of the arc the clockwise reading starts from
RED = "b"
KLEIN = ((0, 1, 2, 3), (2, 3, 0, 1), (1, 0, 3, 2), (3, 2, 1, 0))


def normalize_type(t):
    return min(tuple(t[i] for i in perm) for perm in KLEIN)


def crossing_type(cfg, v, raw=False):
    """Prong numbers around vertex ``v`` read clockwise from a b-arc, normalized."""
    v = list(v)
    while cfg.family[v[0]] != RED:
        v = v[1:] + v[:1]
    c = cfg.corner_faces(v)  # ccw corners
    t = tuple(cfg.prong(f) for f in (c[3], c[2], c[1], c[0]))
    return t if raw else normalize_type(t)


def type_str(t):
    return "".join(str(x) for x in t) if all(x < 10 for x in t) else ",".join(map(str, t))


def check_structure(cfg):
    """List of violated structural invariants (empty when the map is well formed)."""
    problems = []
    n = cfg.n_half
    if n == 0 or n % 2:
        return ["half-edge count must be positive and even"]
    if sorted(cfg.sigma) != list(range(n)):
        return ["rotation is not a permutation"]
    if len(cfg.family) != n or len(cfg.pair) != n:
        return ["labels do not cover every half-edge"]
    for h in range(n):
        if cfg.family[h] != cfg.family[h ^ 1] or cfg.pair[h] != cfg.pair[h ^ 1]:
            problems.append(f"edge {h // 2} has inconsistent labels")
        if cfg.family[h] not in ("a", "b"):
            problems.append(f"half-edge {h} has unknown family {cfg.family[h]!r}")
        if not 1 <= cfg.pair[h] <= cfg.k:
            problems.append(f"half-edge {h} has pair index {cfg.pair[h]} outside 1..{cfg.k}")
    if problems:
        return problems
    for i, v in enumerate(cfg.vertices()):
        if len(v) != 4:
            problems.append(f"vertex {i} has valence {len(v)}")
            continue
        fams = [cfg.family[h] for h in v]
        if any(fams[j] == fams[(j + 1) % 4] for j in range(4)):
            problems.append(f"vertex {i} does not alternate a,b,a,b")
            continue
        for j in (0, 1):
            if cfg.pair[v[j]] != cfg.pair[v[j + 2]]:
                problems.append(f"vertex {i}: curve changes pair index through the crossing")
    if problems:
        return problems
    # connectivity
    vid = cfg.vertex_of()
    adj = {}
    for h in range(n):
        adj.setdefault(vid[h], set()).add(vid[h ^ 1])
    stack, seen = [0], {0}
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(cfg.vertices()):
        problems.append("map is disconnected")
    chi = cfg.euler_char()
    if chi % 2 or chi > 2:
        problems.append(f"Euler characteristic {chi} is not 2 - 2g")
    for h in cfg.punctures:
        if not 0 <= h < n:
            problems.append(f"puncture mark on unknown half-edge {h}")
    return problems


def verify(cfg, strict=True):
    """Recompute genus, signature, pairs and optimality from the raw map.

    Raises MalformedConfiguration on structural violations (or, with
    ``strict``, when the configuration is not triangular).
    """
    problems = check_structure(cfg)
    if problems:
        raise MalformedConfiguration("; ".join(problems))
    m = cfg.intersection_matrix()
    pairs_present = set(cfg.pair[h] for h in range(cfg.n_half) if cfg.family[h] == "a") & set(
        cfg.pair[h] for h in range(cfg.n_half) if cfg.family[h] == "b")
    tri = cfg.is_triangular() and len(pairs_present) == cfg.k
    sig = cfg.signature()
    try:
        k_opt = optimal_count(sig)
    except Exception:
        k_opt = None
    report = {
        "genus": sig.genus,
        "signature": sig,
        "prongs": sorted(sig.prongs),
        "sign": sig.sign,
        "orientable": sig.sign == "+",
        "k": cfg.k,
        "optimal_k": k_opt,
        "triangular": tri,
        "optimal": tri and k_opt == cfg.k,
        "intersections": m,
        "crossing_types": sorted(type_str(t) for t in cfg.crossing_types()),
        "vertices": len(cfg.vertices()),
        "edges": cfg.n_half // 2,
        "faces": len(cfg.faces()),
    }
    if strict and not tri:
        raise MalformedConfiguration(f"configuration is not triangular: intersections {m}")
    return report


def from_curves(curves, signs, name=""):
    """Build a configuration from curves given as cyclic vertex sequences.

    ``curves`` is a list of ``(family, pair, [v0, v1, ...])``; consecutive
    vertices (cyclically) are joined by an edge.  ``signs[v]`` fixes the
    rotation at ``v``: '+' gives ccw order (a_out, b_out, a_in, b_in), '-'
    gives (a_out, b_in, a_in, b_out).
    """
    slots = {}
    family, pair = [], []
    h = 0
    for fam, idx, verts in curves:
        n = len(verts)
        for t in range(n):
            u, w = verts[t], verts[(t + 1) % n]
            slots.setdefault(u, {})[fam + "_out"] = h
            slots.setdefault(w, {})[fam + "_in"] = h + 1
            family += [fam, fam]
            pair += [idx, idx]
            h += 2
    sigma = [None] * h
    for v, s in slots.items():
        if len(s) != 4:
            raise MalformedConfiguration(f"vertex {v} is not crossed by exactly one a and one b curve")
        if signs[v] == "+":
            order = [s["a_out"], s["b_out"], s["a_in"], s["b_in"]]
        else:
            order = [s["a_out"], s["b_in"], s["a_in"], s["b_out"]]
        for j in range(4):
            sigma[order[j]] = order[(j + 1) % 4]
    k = max(p for p in pair)
    return CurveConfiguration(sigma, family, pair, k, frozenset(), name)


def canonical(cfg):
    """Relabel half-edges by a deterministic traversal.

    Starts from the a-half-edge of lowest pair index that the original
    labelling lists first, then explores vertices breadth first.
    """
    start = min(range(cfg.n_half), key=lambda h: (cfg.family[h] != "a", cfg.pair[h], h))
    order = []
    new = {}
    queue = [start]
    while queue:
        h0 = queue.pop(0)
        if h0 in new:
            continue
        x = h0
        while True:
            if x not in new:
                new[x] = len(order)
                order.append(x)
                if (x ^ 1) not in new:
                    queue.append(x ^ 1)
            x = cfg.sigma[x]
            if x == h0:
                break
    # edges must map to (2e, 2e+1); rebuild numbering edge by edge
    edge_new, label = {}, {}
    nxt = 0
    for x in order:
        if x in label:
            continue
        label[x] = nxt
        label[x ^ 1] = nxt + 1
        nxt += 2
    n = cfg.n_half
    sigma = [0] * n
    family = [None] * n
    pair = [0] * n
    for x in range(n):
        sigma[label[x]] = label[cfg.sigma[x]]
        family[label[x]] = cfg.family[x]
        pair[label[x]] = cfg.pair[x]
    punct = frozenset(label[x] for x in cfg.punctures)
    out = CurveConfiguration(sigma, family, pair, cfg.k, punct, cfg.name)
    # a puncture marks a face; store the smallest half-edge of each marked face
    out.punctures = frozenset(min(out.faces()[out.face_of(x)]) for x in punct)
    return out


def derive_punctures(cfg):
    """Puncture marks needed before smoothing.

    Every 1-prong face is punctured.  Quadrilaterals make their two
    b-sides parallel; a quadrilateral that would close a cycle of parallel
    b-edges (an unintersected annulus) is punctured too.
    """
    faces = cfg.faces()
    marks = set()
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f, bd in enumerate(faces):
        if len(bd) == 2:
            marks.add(min(bd))
    for f, bd in enumerate(faces):
        if len(bd) != 4:
            continue
        bs = [h // 2 for h in bd if cfg.family[h] == "b"]
        r1, r2 = find(bs[0]), find(bs[1])
        if r1 == r2:
            marks.add(min(bd))
        else:
            parent[r1] = r2
    return frozenset(marks)


def with_punctures(cfg):
    return cfg.copy(punctures=derive_punctures(cfg))


def punctured_faces(cfg):
    return sorted(set(cfg.face_of(h) for h in cfg.punctures))


def to_json(cfg):
    n = cfg.n_half
    labels = {str(e): [cfg.family[2 * e], cfg.pair[2 * e]] for e in range(n // 2)}
    return {
        "version": 1,
        "name": cfg.name,
        "half_edges": n,
        "pairing": [h ^ 1 for h in range(n)],
        "rotation": list(cfg.sigma),
        "labels": labels,
        "punctures": sorted(cfg.punctures),
        "pair_order": list(range(1, cfg.k + 1)),
    }


def from_json(data):
    try:
        n = int(data["half_edges"])
        pairing = data.get("pairing")
        if pairing is not None and list(pairing) != [h ^ 1 for h in range(n)]:
            raise MalformedConfiguration("pairing must match half-edges 2e and 2e+1")
        sigma = list(data["rotation"])
        family, pair = [None] * n, [0] * n
        for e, (fam, idx) in data["labels"].items():
            e = int(e)
            for h in (2 * e, 2 * e + 1):
                if h >= n:
                    raise MalformedConfiguration(f"label for unknown edge {e}")
                family[h], pair[h] = fam, int(idx)
        if None in family:
            raise MalformedConfiguration("some edges carry no label")
        k = len(data.get("pair_order") or []) or max(pair)
        return CurveConfiguration(sigma, family, pair, k, frozenset(data.get("punctures", [])),
                                  data.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedConfiguration):
            raise
        raise MalformedConfiguration(f"bad configuration JSON: {exc}") from exc


def mixed_sign_pair(cfg):
    """An (a-component, b-component) pair crossing with both signs, or None.

    Signs are taken with respect to the traversal directions of
    :meth:`CurveConfiguration.curves`; a pair meeting with both signs
    certifies nonorientability directly.
    """
    comps = cfg.curves()
    comp_of = {}
    for i, c in enumerate(comps):
        for h in c:
            comp_of[h] = comp_of[h ^ 1] = i
    signs = {}
    for v, s in zip(cfg.vertices(), cfg.crossing_signs()):
        a = [h for h in v if cfg.family[h] == "a"][0]
        b = [h for h in v if cfg.family[h] == "b"][0]
        signs.setdefault((comp_of[a], comp_of[b]), set()).add(s)
    for key, ss in sorted(signs.items()):
        if len(ss) == 2:
            return key
    return None
