"""Local moves on curve configurations.

Every move takes a configuration and returns a new one; inputs are never
mutated.  Moves are built on a small editable map (:class:`Editor`) whose
half-edges are arbitrary hashable ids, compacted back to integers at the
end.
"""

from collections import Counter

from .config import CurveConfiguration
from .errors import (
    IncompatibleGluing,
    MalformedConfiguration,
    NotCoadjacent,
    RegionsNotDistinct,
    UnintersectedCurve,
)


class Editor:
    """Mutable half-edge map used while a move is in progress."""

    def __init__(self, cfg=None, tag=0):
        self.alpha, self.sigma, self.fam, self.pair = {}, {}, {}, {}
        self.marks = set()
        self.k = 0
        self._n = 0
        if cfg is not None:
            self.add(cfg, tag)

    def add(self, cfg, tag=0):
        for h in range(cfg.n_half):
            x = (tag, h)
            self.alpha[x] = (tag, h ^ 1)
            self.sigma[x] = (tag, cfg.sigma[h])
            self.fam[x] = cfg.family[h]
            self.pair[x] = cfg.pair[h]
        self.marks |= {(tag, h) for h in cfg.punctures}
        self.k = max(self.k, cfg.k)

    def new_edge(self, fam, pair):
        self._n += 1
        x, y = ("n", self._n, 0), ("n", self._n, 1)
        self.alpha[x], self.alpha[y] = y, x
        self.fam[x] = self.fam[y] = fam
        self.pair[x] = self.pair[y] = pair
        return x, y

    def set_rotation(self, hs):
        for i, h in enumerate(hs):
            self.sigma[h] = hs[(i + 1) % len(hs)]

    def rotation(self, h):
        out = [h]
        x = self.sigma[h]
        while x != h:
            out.append(x)
            x = self.sigma[x]
        return out

    def remove(self, hs):
        for h in hs:
            for d in (self.alpha, self.sigma, self.fam, self.pair):
                d.pop(h, None)
            self.marks.discard(h)

    def join(self, x, y):
        self.alpha[x], self.alpha[y] = y, x

    def subdivide(self, h, fam=None, pair=None):
        """Split the edge of ``h`` in two; returns (h_side, far_side) at the new point.

        Afterwards ``h`` is paired with the first returned half-edge and the
        old partner with the second.  Rotation at the new point is left unset.
        """
        far = self.alpha[h]
        x, y = self.new_edge(self.fam[h], self.pair[h])
        self.join(h, x)
        self.join(y, far)
        if far in self.marks:
            self.marks.discard(far)
            self.marks.add(y)
        return x, y

    def face_from(self, h):
        out = [h]
        x = self.sigma[self.alpha[h]]
        while x != h:
            out.append(x)
            x = self.sigma[self.alpha[x]]
        return out

    def build(self, name="", k=None):
        order = sorted(self.alpha, key=_sort_key)
        label = {}
        for x in order:
            if x not in label:
                label[x] = len(label)
                label[self.alpha[x]] = len(label)
        n = len(label)
        sigma, fam, pair = [0] * n, [None] * n, [0] * n
        for x, i in label.items():
            sigma[i] = label[self.sigma[x]]
            fam[i] = self.fam[x]
            pair[i] = self.pair[x]
        marks = frozenset(label[x] for x in self.marks if x in label)
        return CurveConfiguration(sigma, fam, pair, k if k is not None else self.k, marks, name)


def _sort_key(x):
    return tuple((0, v) if isinstance(v, int) else (1, str(v)) for v in x)


def _faces_multiset(cfg):
    return Counter(len(f) for f in cfg.faces())


# crossing surgery

def surgery_alignments(c1, p, c2, q):
    """Family-compatible offsets j0 (h_i glued to k_(j0-i))."""
    hv, kv = c1.vertices()[p], c2.vertices()[q]
    out = []
    for j0 in range(4):
        if all(c1.family[hv[i]] == c2.family[kv[(j0 - i) % 4]] for i in range(4)):
            out.append(j0)
    return out


def surgery_face_pairs(c1, p, c2, q, j0):
    """Matched (face in c1, face in c2) pairs for a surgery alignment."""
    hv, kv = c1.vertices()[p], c2.vertices()[q]
    cp, cq = c1.corner_faces(hv), c2.corner_faces(kv)
    return [(cp[i], cq[(j0 - i - 1) % 4]) for i in range(4)]


def crossing_pair(cfg, v):
    """(a pair index, b pair index) of the crossing at vertex ``v``."""
    hv = cfg.vertices()[v]
    a = [cfg.pair[h] for h in hv if cfg.family[h] == "a"][0]
    b = [cfg.pair[h] for h in hv if cfg.family[h] == "b"][0]
    return a, b


def distinct_corners(cfg, v):
    return len(set(cfg.corner_faces(cfg.vertices()[v]))) == 4


def crossing_surgery(c1, p, c2, q, j0=None):
    """Connect-sum two configurations at crossings ``p`` and ``q``.

    ``p`` must cross a_i and b_i of ``c1`` and ``q`` must cross c_j and d_j
    of ``c2``.  The a-arcs fuse into one curve, as do the b-arcs; pairs are
    reordered as (c1 below i, c2 below j, fused, c1 above i, c2 above j).
    """
    if not distinct_corners(c1, p) or not distinct_corners(c2, q):
        raise RegionsNotDistinct("the four regions around a surgery crossing must be distinct")
    ai, bi = crossing_pair(c1, p)
    cj, dj = crossing_pair(c2, q)
    if ai != bi or cj != dj:
        raise IncompatibleGluing("surgery crossings must cross the two curves of one pair")
    opts = surgery_alignments(c1, p, c2, q)
    if j0 is None:
        j0 = opts[0]
    if j0 not in opts:
        raise IncompatibleGluing(f"alignment {j0} does not match arc families")
    hv, kv = c1.vertices()[p], c2.vertices()[q]
    if any((h ^ 1) in hv for h in hv) or any((h ^ 1) in kv for h in kv):
        raise IncompatibleGluing("surgery crossing carries a loop edge")
    i, j = ai, cj
    k1, k2 = c1.k, c2.k
    new1, new2 = {}, {}
    pos = 1
    for x in range(1, i):
        new1[x] = pos
        pos += 1
    for y in range(1, j):
        new2[y] = pos
        pos += 1
    new1[i] = new2[j] = pos
    pos += 1
    for x in range(i + 1, k1 + 1):
        new1[x] = pos
        pos += 1
    for y in range(j + 1, k2 + 1):
        new2[y] = pos
        pos += 1
    ed = Editor(c1, 1)
    ed.add(c2, 2)
    for x in list(ed.pair):
        ed.pair[x] = (new1 if x[0] == 1 else new2)[ed.pair[x]]
    ed.k = k1 + k2 - 1
    for t in range(4):
        far1 = (1, hv[t] ^ 1)
        far2 = (2, kv[(j0 - t) % 4] ^ 1)
        ed.join(far1, far2)
    ed.remove([(1, h) for h in hv] + [(2, h) for h in kv])
    return ed.build(name=f"({c1.name})#({c2.name})")


# doubling, piercing and handles

def curve_through(cfg, h):
    """Outgoing half-edges of the curve component through ``h``, starting at ``h``."""
    comp = [h]
    x = cfg.next_along(h)
    while x != h:
        comp.append(x)
        x = cfg.next_along(x)
    return comp


def left_transverse(cfg, x):
    return cfg.sigma[x]


def left_face(cfg, x):
    """Face to the left of the outgoing half-edge ``x``."""
    return cfg.face_of(cfg.sigma[x])


def _add_parallel(ed, ts, fam, pair, closed):
    """Run a new curve beside a curve, crossing the edges of ``ts`` in order.

    ``ts`` are editor ids of transverse half-edges pointing away from the
    original curve on its left.  Returns per crossing the tuple
    (fwd, near, back, far); for open runs the missing ends are None.
    """
    pts = [ed.subdivide(t) for t in ts]
    n = len(ts)
    segs = [ed.new_edge(fam, pair) for _ in range(n if closed else n - 1)]
    out = []
    for i, (near, far) in enumerate(pts):
        fwd = segs[i][0] if (closed or i < n - 1) else None
        back = segs[i - 1][1] if (closed or i > 0) else None
        out.append([fwd, near, back, far])
    return out, segs


def _shift_pairs(ed, by=1):
    for x in ed.pair:
        ed.pair[x] += by
    ed.k += by


def _orient(cfg, h, side):
    """Curve through ``h`` traversed so that ``side`` becomes its left."""
    comp = curve_through(cfg, h)
    if side == "right":
        comp = [x ^ 1 for x in reversed(comp)]
    return comp


def double_curve(cfg, h, side="left", new_pair=None, front=False):
    """Add a parallel copy of the curve through half-edge ``h``.

    By default the copy joins the same multicurve.  With ``new_pair`` set
    to a family name for the partner the copy starts a new pair instead
    (see :func:`three_one_one_move`); this is used internally only.
    """
    comp = _orient(cfg, h, side)
    if len(comp) == 0:
        raise UnintersectedCurve("curve meets no transverse curve")
    fam, pair = cfg.family[h], cfg.pair[h]
    ed = Editor(cfg)
    ts = [(0, left_transverse(cfg, x)) for x in comp]
    pts, segs = _add_parallel(ed, ts, fam, pair, closed=True)
    for fwd, near, back, far in pts:
        ed.set_rotation([fwd, far, back, near])
    return ed.build(name=cfg.name)


def pierce_edge(ed, h, fam, pair):
    """Cross the edge of editor half-edge ``h`` twice with a small new circle."""
    x1, y1 = ed.subdivide(h)        # h - x1 [p1] y1 - far
    x2, y2 = ed.subdivide(y1)       # y1 - x2 [p2] y2 - far ... y1 now paired with x2
    # p1 has back=x1 and fwd=y1; p2 has back=x2 and fwd=y2
    g_left = ed.new_edge(fam, pair)
    g_right = ed.new_edge(fam, pair)
    ed.set_rotation([y1, g_left[0], x1, g_right[0]])
    ed.set_rotation([y2, g_left[1], x2, g_right[1]])
    return (x1, y1), (x2, y2)


def _handle(cfg, comp, s, e):
    """Run a new curve beside ``comp`` from left face s to left face e over a handle.

    ``comp`` lists outgoing half-edges x_0..x_{L-1} of a curve; the new
    curve crosses the left transverse edges at the vertices s+1..e and
    closes through a new vertex carrying a loop of the other family.
    """
    L = len(comp)
    fam = cfg.family[comp[0]]
    other = "b" if fam == "a" else "a"
    ed = Editor(cfg)
    if fam == "a":
        new_pair = cfg.k + 1
        ed.k = cfg.k + 1
    else:
        _shift_pairs(ed)
        new_pair = 1
    idx = [(s + d) % L for d in range(1, e - s + 1)]
    ts = [(0, left_transverse(cfg, comp[i])) for i in idx]
    pts, segs = _add_parallel(ed, ts, fam, new_pair, closed=False)
    mf, c_back = ed.new_edge(fam, new_pair)
    c_fwd, mb = ed.new_edge(fam, new_pair)
    pts[0][2] = c_back
    pts[-1][0] = c_fwd
    for fwd, near, back, far in pts:
        ed.set_rotation([fwd, far, back, near])
    mu1, mu2 = ed.new_edge(other, new_pair)
    ed.set_rotation([mf, mu1, mb, mu2])
    return ed.build(name=cfg.name)


def _oriented_curves(cfg):
    """Every curve component in both directions, as outgoing half-edge lists."""
    for comp in cfg.curves():
        yield comp
        yield [x ^ 1 for x in reversed(comp)]


def _expect(cfg, out, changes, genus_step, extra_quads):
    want = _faces_multiset(cfg)
    for old, new in changes:
        want[2 * old] -= 1
        want[2 * new] += 1
    want[4] += extra_quads
    return +_faces_multiset(out) == +want and out.genus() == cfg.genus() + genus_step


def add_handle_in_region(cfg, face):
    """Attach a handle inside ``face``; the face gains eight sides.

    A new curve runs once around a boundary curve of the face, starting
    and ending in the face, and closes over the handle; the handle's
    meridian is its partner.  New pairs go last for a-curves and first
    for b-curves so triangularity survives.
    """
    m = cfg.prong(face)
    for comp in _oriented_curves(cfg):
        for s, x in enumerate(comp):
            if left_face(cfg, x) != face:
                continue
            out = _handle(cfg, comp, s, s + len(comp))
            if _expect(cfg, out, [(m, m + 4)], 1, len(comp) - 1):
                return out
    raise MalformedConfiguration(f"no handle placement grows face {face} by eight sides")


subtract_four_move = add_handle_in_region


def coadjacent_runs(cfg, f1, f2):
    """(curve, s, e) with faces f1 and f2 on the left of the same curve."""
    out = []
    for comp in _oriented_curves(cfg):
        L = len(comp)
        for s in range(L):
            if left_face(cfg, comp[s]) != f1:
                continue
            for d in range(1, L):
                if left_face(cfg, comp[(s + d) % L]) == f2:
                    out.append((comp, s, s + d))
                    break
    out.sort(key=lambda r: r[2] - r[1])
    return out


def join_coadjacent(cfg, f1, f2):
    """Join two distinct faces on the same side of a curve with a handle.

    Each face gains four sides; genus and pair count go up by one.
    """
    if f1 == f2:
        raise NotCoadjacent("the two regions must be distinct")
    runs = coadjacent_runs(cfg, f1, f2)
    if not runs:
        raise NotCoadjacent(f"faces {f1} and {f2} do not lie on the same side of a common curve")
    m1, m2 = cfg.prong(f1), cfg.prong(f2)
    for comp, s, e in runs:
        out = _handle(cfg, comp, s, e)
        if _expect(cfg, out, [(m1, m1 + 2), (m2, m2 + 2)], 1, e - s - 1):
            return out
    raise MalformedConfiguration("no handle placement joined the two faces as expected")


def double_and_pierce(cfg, x):
    """Double the curve of outgoing half-edge ``x`` on its left as a new pair
    and pierce the copy's segment inside the left face of ``x``.

    The left face F of ``x`` keeps its size; the copy's segment beside
    ``x`` cuts off a quadrilateral and a face F' like F; piercing turns
    those into a 3-prong face and F' into an (m+1)-prong face, and adds
    two 1-prong faces.
    """
    comp = curve_through(cfg, x)
    fam = cfg.family[x]
    other = "b" if fam == "a" else "a"
    ed = Editor(cfg)
    if fam == "a":
        new_pair = cfg.k + 1
        ed.k = cfg.k + 1
    else:
        _shift_pairs(ed)
        new_pair = 1
    ts = [(0, left_transverse(cfg, y)) for y in comp]
    pts, segs = _add_parallel(ed, ts, fam, new_pair, closed=True)
    for fwd, near, back, far in pts:
        ed.set_rotation([fwd, far, back, near])
    # segs[0] runs from the point on comp[0]'s vertex to the next: beside x
    pierce_edge(ed, segs[0][0], other, new_pair)
    return ed.build(name=cfg.name)


def three_one_one_move(cfg, face=None):
    """Replace a 1-prong face by the faces (3, 1, 1) in the same genus.

    The curve on the b-side of the bigon is doubled toward the bigon, and
    the copy's chord inside the bigon is pierced by a small circle; copy
    and circle form a new pair.
    """
    from .errors import NoOneProng
    ones = [f for f in range(len(cfg.faces())) if cfg.prong(f) == 1]
    if face is None:
        if not ones:
            raise NoOneProng("configuration has no 1-prong face")
        face = ones[0]
    elif cfg.prong(face) != 1:
        raise NoOneProng(f"face {face} is not a 1-prong face")
    for comp in _oriented_curves(cfg):
        for s, x in enumerate(comp):
            if left_face(cfg, x) != face:
                continue
            out = double_and_pierce(cfg, x)
            want = cfg.prong_counter()
            want[3] += 1
            want[1] += 1
            want[2] += len(comp)
            if +out.prong_counter() == +want and out.genus() == cfg.genus():
                return out
    raise MalformedConfiguration("3,1,1 move failed on the chosen face")
