"""Exhaustive search for small configurations.

Used to produce the hand-case assets.  A candidate is given by the
successor permutations of the a-curves and b-curves on V crossings plus a
sign per crossing; faces, genus and triangularity are then read off the
resulting map.  The a-permutation is taken up to relabelling (one
representative per cycle type).
"""

import itertools
from collections import Counter

from .config import from_curves, verify


def _partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield []
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _partitions(n - p, p):
            yield [p] + rest


def _cycles_of(perm):
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        x = perm[s]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        out.append(cyc)
    return out


def _perm_from_partition(parts):
    perm, start = [], 0
    for p in parts:
        perm += [start + (i + 1) % p for i in range(p)]
        start += p
    return perm


def _assignments(n_a, n_b, k):
    """Ways to spread a- and b-components over k pairs, every pair used."""
    for av in itertools.product(range(1, k + 1), repeat=n_a):
        if set(av) != set(range(1, k + 1)):
            continue
        for bv in itertools.product(range(1, k + 1), repeat=n_b):
            if set(bv) != set(range(1, k + 1)):
                continue
            yield av, bv


def search(genus, prongs, k, n_vertices, sign="-", limit=1, both_signs_pair=False):
    """Find configurations with the given genus, prong multiset and pair count.

    ``prongs`` includes every face (2's allowed).  With ``sign='-'`` the
    result must be nonorientable.  Returns up to ``limit`` configurations.
    """
    target = Counter(prongs)
    V = n_vertices
    found = []
    for parts in _partitions(V):
        A = _perm_from_partition(parts)
        a_cycles = _cycles_of(A)
        for B in itertools.permutations(range(V)):
            b_cycles = _cycles_of(list(B))
            for bits in itertools.product("+-", repeat=V - 1):
                signs = {v: s for v, s in zip(range(V), ("+",) + bits)}
                curves = [("a", 1, c) for c in a_cycles] + [("b", 1, c) for c in b_cycles]
                cfg = from_curves(curves, signs)
                if cfg.genus() != genus or cfg.prong_counter() != target:
                    continue
                if cfg.orientation_sign() != sign:
                    continue
                for av, bv in _assignments(len(a_cycles), len(b_cycles), k):
                    curves = [("a", av[i], c) for i, c in enumerate(a_cycles)] + \
                             [("b", bv[i], c) for i, c in enumerate(b_cycles)]
                    cand = from_curves(curves, signs)
                    cand.k = k
                    rep = verify(cand, strict=False)
                    if rep["triangular"]:
                        found.append((cand, curves, signs))
                        if len(found) >= limit:
                            return found
                        break
    return found


def _asset(cfg, name, note):
    from .config import canonical, to_json
    cfg = canonical(cfg)
    rep = verify(cfg)
    data = to_json(cfg)
    data["name"] = name
    data["note"] = note
    data["expect"] = {"genus": rep["genus"], "prongs": rep["prongs"], "sign": rep["sign"],
                      "k": rep["k"]}
    return data


def generate_assets(directory):
    """Rebuild the hand-case JSON files in ``directory``."""
    import json
    from pathlib import Path

    from . import moves
    from .config import mixed_sign_pair
    from .realize import torus_1133

    def first(found, cond=lambda c: True):
        for cand, _, _ in found:
            if cond(cand):
                return cand
        raise RuntimeError("search found no configuration with the required property")

    def faces(c, m):
        return [f for f in range(len(c.faces())) if c.prong(f) == m]

    def coadjacent_1_7(c):
        return bool(moves.coadjacent_runs(c, faces(c, 1)[0], faces(c, 7)[0]))

    out = {}
    c114 = first(search(1, (1, 1, 4), 1, 3, limit=20),
                 lambda c: bool(moves.coadjacent_runs(c, *faces(c, 1))))
    out["fig114"] = _asset(c114, "fig114", "(1,1,4) on the torus, one pair, found by search")
    out["fig334"] = _asset(moves.join_coadjacent(c114, *faces(c114, 1)), "fig334",
                           "(3,3,4) in genus 2: the two bigons of fig114 joined by a handle")
    out["fig71"] = _asset(first(search(2, (1, 7), 2, 4, limit=50), coadjacent_1_7), "fig71",
                          "(1,7) in genus 2 with the 1- and 7-regions on one side of a curve")
    out["fig44"] = _asset(first(search(2, (4, 4), 1, 4, limit=20), lambda c: mixed_sign_pair(c)),
                          "fig44", "nonorientable (4,4) in genus 2, one pair")
    out["fig10"] = _asset(first(search(3, (10,), 2, 5, limit=50), lambda c: mixed_sign_pair(c)),
                          "fig10", "nonorientable (10) in genus 3; an a- and a b-curve cross "
                          "with both signs")
    out["fig1133"] = _asset(torus_1133(), "fig1133",
                            "(1,1,3,3) on the torus: longitude doubled and pierced")
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, data in out.items():
        with open(d / f"{name}.json", "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return sorted(out)


if __name__ == "__main__":
    import sys
    from pathlib import Path
    target = sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).with_name("assets"))
    print("\n".join(generate_assets(target)))
