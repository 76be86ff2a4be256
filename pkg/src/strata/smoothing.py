"""From curve configurations to train tracks.

Smoothing every crossing so that a-curves turn right and b-curves turn
left gives a bigon track.  Collapsing the unpunctured bigons (the
quadrilaterals of the configuration) leaves a genuine track that keeps
every a-curve embedded and has one branch per parallel class of b-arcs.
"""

from fractions import Fraction

from . import linalg
from .config import derive_punctures
from .errors import CollapseObstruction, RankDeficient
from .traintrack import TrainTrack, regions


def _rot(cfg, v):
    """Half-edges of vertex ``v`` in ccw order starting at an a-half-edge."""
    hv = list(cfg.vertices()[v])
    while cfg.family[hv[0]] != "a":
        hv = hv[1:] + hv[:1]
    return hv


def _marked(cfg):
    return cfg.punctures or derive_punctures(cfg)


def smooth_to_bigon_track(cfg):
    """Replace each crossing (a0, b0, a1, b1) by switches (m, b0, a1) and (m, b1, a0).

    Branch ``e`` is the configuration edge ``e``; branch ``E + i`` is the
    short middle branch at vertex ``i``.  Puncture marks are carried over.
    """
    E = cfg.n_half // 2
    switches = []
    cusp_end = {}
    for i in range(len(cfg.vertices())):
        a0, b0, a1, b1 = _rot(cfg, i)
        mid = E + i
        end = lambda h: (h // 2, h & 1)
        switches.append((((mid, 0),), (end(b0), end(a1))))
        switches.append((((mid, 1),), (end(b1), end(a0))))
        # cusp corners (b0, a1) and (b1, a0) lie in the faces of a1 and a0
        cusp_end[cfg.face_of(a1)] = end(a1)
        cusp_end[cfg.face_of(a0)] = end(a0)
    marks = set()
    for h in _marked(cfg):
        f = cfg.face_of(h)
        marks.add(cusp_end[f])
    t = TrainTrack(E + len(cfg.vertices()), switches, frozenset(marks), recurrent=True)
    t.source = cfg.copy(punctures=_marked(cfg))
    return t


class CollapsedTrack:
    """The collapsed track together with the bookkeeping needed for superbranches."""

    def __init__(self, track, segments, b_branch, slots, cfg):
        self.track = track
        self.segments = segments   # per a-component: list of (branch, start_slot, end_slot)
        self.b_branch = b_branch   # b-edge -> branch id
        self.slots = slots         # per a-component: list of active slot keys in order
        self.cfg = cfg


def _end_runs(cfg, quads_to_collapse):
    """Union b half-edges joined by the a-sides of collapsible quadrilaterals.

    Returns the union-find ``find`` and the list of a half-edges that
    served as links.
    """
    parent = {}
    links = []

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in quads_to_collapse:
        bd = cfg.faces()[f]
        # the walk h -> sigma[h ^ 1] meets the b-side before an a-side at the
        # start of that a-side and the b-side after it at its end
        n = len(bd)
        for j in range(n):
            h = bd[j]
            if cfg.family[h] != "a":
                continue
            x, y = bd[j - 1] ^ 1, bd[(j + 1) % n]
            links.append((h, x, y))
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    return find, links


def collapse_config(cfg):
    """Build the collapsed track of ``cfg`` directly from the map."""
    cfg = cfg.copy(punctures=_marked(cfg))
    punct_faces = set(cfg.face_of(h) for h in cfg.punctures)
    quads = [f for f, bd in enumerate(cfg.faces()) if len(bd) == 4 and f not in punct_faces]
    find, links = _end_runs(cfg, quads)
    bh = [h for h in range(cfg.n_half) if cfg.family[h] == "b"]
    run_of = {h: find(h) for h in bh}
    # a-curve components with their crossings
    a_comps = [c for c in cfg.curves() if cfg.family[c[0]] == "a"]
    pos = {}  # b half-edge -> (component, index, side)
    for ci, comp in enumerate(a_comps):
        for i, o in enumerate(comp):
            pos[cfg.sigma[o]] = (ci, i, "L")
            pos[cfg.sigma[cfg.sigma[cfg.sigma[o]]]] = (ci, i, "R")
    members = {}
    for h in bh:
        members.setdefault(run_of[h], []).append(h)
    edge_index = {}
    for ci, comp in enumerate(a_comps):
        for i, o in enumerate(comp):
            edge_index[o] = edge_index[o ^ 1] = (ci, i)
    run_links = {}
    for h, x, y in links:
        run_links.setdefault(run_of[x], set()).add(edge_index[h][1])
    active = {}  # run -> (component, index, side)
    for r, hs in members.items():
        ci = pos[hs[0]][0]
        side = pos[hs[0]][2]
        L = len(a_comps[ci])
        if any(pos[h][0] != ci or pos[h][2] != side for h in hs):
            raise CollapseObstruction("a run of parallel arcs leaves its curve")
        idx = set(pos[h][1] for h in hs)
        lk = run_links.get(r, set())
        if len(idx) != len(hs) or len(lk) >= len(idx):
            raise CollapseObstruction("a cyclic chain of bigons needs a puncture mark")
        if side == "L":
            # first along the curve: no link from the previous crossing
            ends = [i for i in idx if (i - 1) % L not in lk]
        else:
            ends = [i for i in idx if i not in lk]
        if len(ends) != 1:
            raise CollapseObstruction("parallel arcs do not form a single run")
        active[r] = (ci, ends[0], side)
    # pair runs into b-branches
    branch_of_pair = {}
    b_branch = {}
    nb = 0
    run_end = {}
    for h in bh:
        if h & 1:
            continue
        r0, r1 = run_of[h], run_of[h ^ 1]
        key = (r0, r1) if (r1, r0) not in branch_of_pair else (r1, r0)
        if key not in branch_of_pair:
            for r in (r0, r1):
                if r in run_end:
                    raise CollapseObstruction("end run shared between two arc classes")
            branch_of_pair[key] = nb
            run_end[r0] = (nb, 0)
            run_end[r1] = (nb, 1)
            nb += 1
        b_branch[h // 2] = branch_of_pair[key]
    # slots along each a-component: per crossing L then R
    next_branch = nb
    switches = []
    segments, slots_all = [], []
    cusp_face = []
    for ci, comp in enumerate(a_comps):
        slots = []
        for i in range(len(comp)):
            for side in ("L", "R"):
                o = comp[i]
                bh_here = cfg.sigma[o] if side == "L" else cfg.sigma[cfg.sigma[cfg.sigma[o]]]
                r = run_of[bh_here]
                if active[r] == (ci, i, side):
                    slots.append((i, side, r))
        if not slots:
            raise CollapseObstruction("an a-curve carries no switch")
        n = len(slots)
        seg_ids = list(range(next_branch, next_branch + n))
        next_branch += n
        segs = []
        for j in range(n):
            # segment j runs from slot j to slot j+1
            segs.append((seg_ids[j], j, (j + 1) % n))
        for j, (i, side, r) in enumerate(slots):
            ahead = (seg_ids[j], 0)
            behind = (seg_ids[j - 1], 1)
            arc = run_end[r]
            o = comp[i]
            if side == "L":
                switches.append(((ahead,), (arc, behind)))
                # cusp between the arc and the curve behind: corner (L, in)
                cusp_face.append(cfg.face_of(cfg.sigma[cfg.sigma[o]]))
            else:
                switches.append(((behind,), (arc, ahead)))
                cusp_face.append(cfg.face_of(o))
        segments.append(segs)
        slots_all.append(slots)
    marks = set()
    for (sA, sB), f in zip(switches, cusp_face):
        if f in punct_faces:
            marks.add(sB[1])
    track = TrainTrack(next_branch, switches, frozenset(marks), recurrent=True)
    track.cusp_face = cusp_face
    out = CollapsedTrack(track, segments, b_branch, slots_all, cfg)
    out.a_comps = a_comps
    out.active = active
    out.run_of = run_of
    _check_regions(out)
    return out


def _check_regions(ct):
    """Each region of the collapsed track is one face of the configuration."""
    t, cfg = ct.track, ct.cfg
    sw_of_end = {}
    for i, s in enumerate(t.switches):
        sw_of_end[s.sideB[1]] = i
    for r in regions(t):
        fs = set(t.cusp_face[sw_of_end[r.boundary[p]]] for p in r.cusps)
        if len(fs) != 1:
            raise CollapseObstruction(f"region with {r.cusp_count} cusps spans faces {sorted(fs)}")
        f = fs.pop()
        if cfg.prong(f) != r.cusp_count:
            raise CollapseObstruction(
                f"region has {r.cusp_count} cusps but its face has {cfg.prong(f)} prongs")


def collapse_bigons(bt):
    """Collapse the unpunctured bigons of a bigon track.

    Tracks produced by :func:`smooth_to_bigon_track` are collapsed through
    their source configuration; any other track is returned unchanged when
    it has no unpunctured bigon.
    """
    src = getattr(bt, "source", None)
    if src is None:
        for r in regions(bt):
            if r.cusp_count == 2 and not r.punctured:
                raise CollapseObstruction("track without configuration data has a bigon")
        return bt
    return collapse_config(src).track


def superbranch_vectors(ct):
    """Weights of the trainpaths of a_1..a_k then b_1..b_k on the collapsed track."""
    cfg, t = ct.cfg, ct.track
    k = cfg.k
    vecs = [[0] * t.n_branches for _ in range(2 * k)]
    for ci, comp in enumerate(ct.a_comps):
        i = cfg.pair[comp[0]] - 1
        for br, _, _ in ct.segments[ci]:
            vecs[i][br] += 1
    # b-curves: their class branches, plus the stretch of a-curve at each crossing
    slot_index = []
    for ci, slots in enumerate(ct.slots):
        slot_index.append({(i, side): j for j, (i, side, r) in enumerate(slots)})
    for h in range(0, cfg.n_half, 2):
        if cfg.family[h] == "b":
            vecs[k + cfg.pair[h] - 1][ct.b_branch[h // 2]] += 1
    for ci, comp in enumerate(ct.a_comps):
        segs = ct.segments[ci]
        n = len(segs)
        for i, o in enumerate(comp):
            Lh = cfg.sigma[o]
            Rh = cfg.sigma[cfg.sigma[cfg.sigma[o]]]
            j = cfg.pair[Lh] - 1
            _, u, _ = ct.active[ct.run_of[Lh]]
            _, w, _ = ct.active[ct.run_of[Rh]]
            start = slot_index[ci][(u, "L")]
            stop = slot_index[ci][(w, "R")]
            s = start
            while s != stop:
                vecs[k + j][segs[s][0]] += 1
                s = (s + 1) % n
    return [[Fraction(x) for x in v] for v in vecs]


def superbranch_rank(ct, vecs=None):
    vecs = vecs if vecs is not None else superbranch_vectors(ct)
    return linalg.rank(vecs, ct.track.n_branches)


def checked_superbranches(ct):
    vecs = superbranch_vectors(ct)
    r = superbranch_rank(ct, vecs)
    if r != 2 * ct.cfg.k:
        raise RankDeficient(f"superbranch rank {r}, expected {2 * ct.cfg.k}")
    return vecs
