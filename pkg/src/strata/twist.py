"""Carrying matrices of Dehn twist powers and the cone contraction experiment.

For a configuration with pairs (a_i, b_i) write m[i][j] = I(a_i, b_j).
Twisting positively along every a_i (exponent alpha_i) and negatively
along every b_j (exponent beta_j) acts on the span of the superbranches
by the block matrices

    A = [[I, A'], [0, I]]      B = [[I, 0], [B', I]]

and their product AB = [[I + A'B', A'], [B', I]].

Matrix construction is exact integer arithmetic.  The iteration keeps
the running product exact as well and only projectivizes (with mpmath)
when measuring angles, so rescaling any factor cannot change an output.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath

from .errors import DimensionMismatch, NumericUnderflow, ScheduleOverflow


@dataclass(frozen=True)
class IntersectionData:
    """``m[i][j] = I(a_i, b_j)``; lower triangular with positive diagonal."""

    m: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.m)
        object.__setattr__(self, "m", rows)
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise DimensionMismatch("intersection data must be a nonempty square matrix")
        for i in range(k):
            if rows[i][i] <= 0:
                raise DimensionMismatch(f"diagonal entry m[{i}][{i}] must be positive")
            for j in range(k):
                if rows[i][j] < 0:
                    raise DimensionMismatch("intersection numbers are nonnegative")
                if j > i and rows[i][j] != 0:
                    raise DimensionMismatch(f"m[{i}][{j}] must vanish above the diagonal")

    @property
    def k(self):
        return len(self.m)

    @classmethod
    def from_config(cls, cfg):
        return cls(cfg.intersection_matrix())


@dataclass(frozen=True)
class TwistExponents:
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        if len(self.alpha) != len(self.beta):
            raise DimensionMismatch("alpha and beta must have the same length")
        if min(self.alpha + self.beta) < 1:
            raise DimensionMismatch("twist exponents are positive integers")


class BlockMatrix:
    """A 2k x 2k integer matrix with access to its four k x k blocks."""

    def __init__(self, rows, k=None):
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        if k is None:
            k = n // 2
        if n != 2 * k or any(len(r) != n for r in self.rows):
            raise DimensionMismatch(f"expected a {2 * k}x{2 * k} matrix")
        self.k = k

    def block(self, name):
        k = self.k
        r0, c0 = {"11": (0, 0), "12": (0, k), "21": (k, 0), "22": (k, k)}[str(name)]
        return [list(self.rows[r0 + i][c0:c0 + k]) for i in range(k)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        return BlockMatrix(_mul(self.rows, other.rows), self.k)

    def __eq__(self, other):
        return isinstance(other, BlockMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"BlockMatrix(k={self.k}, rows={[list(r) for r in self.rows]})"

    def tolist(self):
        return [list(r) for r in self.rows]


def _mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _data(m):
    return m if isinstance(m, IntersectionData) else IntersectionData(m)


def _check_len(vec, k, name):
    vec = tuple(vec)
    if len(vec) != k:
        raise DimensionMismatch(f"{name} has length {len(vec)}, expected {k}")
    return vec


def _assemble(k, upper=None, lower=None):
    n = 2 * k
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(k):
        for j in range(k):
            if upper is not None:
                rows[i][k + j] = upper[i][j]
            if lower is not None:
                rows[k + i][j] = lower[i][j]
    return BlockMatrix(rows, k)


def a_prime(m, alpha):
    d = _data(m)
    alpha = _check_len(alpha, d.k, "alpha")
    return [[alpha[i] * d.m[i][j] if j <= i else 0 for j in range(d.k)] for i in range(d.k)]


def b_prime(m, beta):
    d = _data(m)
    beta = _check_len(beta, d.k, "beta")
    # row j carries beta_j * m[i][j] for i >= j
    return [[beta[j] * d.m[i][j] if i >= j else 0 for i in range(d.k)] for j in range(d.k)]


def build_A(m, alpha):
    """Carrying matrix of the positive twists along the a-curves."""
    d = _data(m)
    return _assemble(d.k, upper=a_prime(d, alpha))


def build_B(m, beta):
    """Carrying matrix of the negative twists along the b-curves."""
    d = _data(m)
    return _assemble(d.k, lower=b_prime(d, beta))


def product_AB(m, alpha, beta=None):
    """``AB = [[I + A'B', A'], [B', I]]`` computed from the blocks.

    ``alpha`` may also be a :class:`TwistExponents` (then ``beta`` is omitted).
    """
    if isinstance(alpha, TwistExponents):
        alpha, beta = alpha.alpha, alpha.beta
    d = _data(m)
    k = d.k
    ap, bp = a_prime(d, alpha), b_prime(d, beta)
    apbp = _mul(ap, bp)
    rows = [[0] * (2 * k) for _ in range(2 * k)]
    for i in range(k):
        for j in range(k):
            rows[i][j] = apbp[i][j] + int(i == j)
            rows[i][k + j] = ap[i][j]
            rows[k + i][j] = bp[i][j]
            rows[k + i][k + j] = int(i == j)
    return BlockMatrix(rows, k)


# --- epsilon matrices -------------------------------------------------------

def is_epsilon_matrix(C, eps, diagonal="decreasing", report=False):
    """Check the three epsilon-matrix conditions with exact rationals.

    Condition (1) asks the first k diagonal entries to be positive with
    ``c[i+1][i+1] / c[i][i] < eps``.  With ``diagonal="increasing"`` the
    ratio is taken the other way round, ``c[i][i] / c[i+1][i+1] < eps``,
    which is the shape produced by the exponent recipe (alpha decreasing,
    beta increasing, alpha*beta increasing).  Conditions (2) and (3) are
    the same in both modes.

    Returns a bool, or ``(bool, report)`` with the worst ratio per
    condition when ``report`` is true.
    """
    rows = C.rows if isinstance(C, BlockMatrix) else tuple(tuple(r) for r in C)
    n = len(rows)
    k = C.k if isinstance(C, BlockMatrix) else n // 2
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10**18)
    if diagonal not in ("decreasing", "increasing"):
        raise ValueError("diagonal must be 'decreasing' or 'increasing'")
    if any(x < 0 for r in rows for x in r):
        raise ValueError("epsilon-matrix test needs a nonnegative matrix")
    rep = {}
    diag = [rows[i][i] for i in range(k)]
    positive = all(x > 0 for x in diag)
    worst1 = Fraction(0)
    if positive:
        for i in range(k - 1):
            if diagonal == "decreasing":
                r = Fraction(diag[i + 1], diag[i])
            else:
                r = Fraction(diag[i], diag[i + 1])
            worst1 = max(worst1, r)
    rep[1] = {"ok": positive and worst1 < eps, "positive": positive,
              "max_ratio": worst1 if positive else None}
    worst2 = Fraction(0)
    if positive:
        for j in range(k):
            for i in range(n):
                if i != j:
                    worst2 = max(worst2, Fraction(rows[i][j], diag[j]))
    rep[2] = {"ok": positive and worst2 < eps, "max_ratio": worst2 if positive else None}
    worst3 = Fraction(0)
    if positive:
        for j in range(k, n):
            for i in range(n):
                worst3 = max(worst3, Fraction(rows[i][j], diag[k - 1]))
    rep[3] = {"ok": positive and worst3 < eps, "max_ratio": worst3 if positive else None}
    ok = rep[1]["ok"] and rep[2]["ok"] and rep[3]["ok"]
    return (ok, rep) if report else ok


def literal_obstruction(m, eps):
    """Certificate that no exponents make ``AB`` an epsilon-matrix in the
    decreasing-diagonal sense, or ``None`` if this test is inconclusive.

    For indices i < j <= k, conditions (1) and (2) force
    ``c_ij < eps * c_jj < eps**(j-i+1) * c_ii``.  Writing d = eps**(j-i+1),
    this reads ``sum_t a_i*b_t*m_it*(m_jt - d*m_it) < d`` over t <= i.  As
    every ``a_i*b_t >= 1``, the inequality fails for all positive integer
    exponents once each term ``m_it*(m_jt - d*m_it)`` is nonnegative and
    the t = i term alone is at least d.
    """
    d = _data(m)
    eps = Fraction(eps)
    for i in range(d.k):
        for j in range(i + 1, d.k):
            delta = eps ** (j - i + 1)
            terms = [d.m[i][t] * (d.m[j][t] - delta * d.m[i][t]) for t in range(i + 1)]
            if min(terms) >= 0 and terms[i] >= delta:
                return {"indices": (i, j), "eps": eps, "bound": delta, "terms": terms}
    return None


def recipe(k, N, X=None):
    """Exponents with every adjacent ratio at least ``N``.

    ``alpha_i = X**(k-1-i) * N`` and ``beta_j = N**(j+1) * X**j`` (0-based),
    with ``X = N`` unless a larger spread for alpha is requested.  So alpha
    decreases by ``X``, beta increases by ``N*X`` and alpha*beta increases
    by ``N``; ``alpha_k*beta_k`` beats ``alpha_1`` by ``N**k``, which pushes
    the right half of the matrix below ``c_kk``.
    """
    X = N if X is None else max(N, X)
    alpha = tuple(X ** (k - 1 - i) * N for i in range(k))
    beta = tuple(N ** (j + 1) * X ** j for j in range(k))
    return TwistExponents(alpha, beta)


def choose_exponents(m, eps, diagonal="increasing", min_spread=1, max_doublings=64):
    """Grow ``N`` from 2 by doubling until ``product_AB`` is an eps-matrix.

    ``min_spread`` is a lower bound for the ratio between consecutive
    alphas (used by :func:`cone_iteration`).  Raises
    :class:`ScheduleOverflow` after ``max_doublings`` attempts.
    """
    d = _data(m)
    X = 1
    while X < min_spread:
        X *= 2
    N = 2
    for _ in range(max_doublings):
        ex = recipe(d.k, N, X)
        if is_epsilon_matrix(product_AB(d, ex), eps, diagonal=diagonal):
            return ex
        N *= 2
    raise ScheduleOverflow(f"no exponents found with N up to 2**{max_doublings} for eps={eps}")


# --- cone iteration ---------------------------------------------------------

def _projectivize(P, j):
    col = [row[j] for row in P]
    top = max(abs(x) for x in col)
    if top == 0:
        raise NumericUnderflow(f"column {j} of the product vanished")
    v = [mpmath.mpf(Fraction(x, top).numerator) / Fraction(x, top).denominator for x in col]
    norm = mpmath.sqrt(mpmath.fsum(x * x for x in v))
    if norm == 0:
        raise NumericUnderflow("normalisation lost all precision")
    return [x / norm for x in v]


def _angle(u, v):
    c = mpmath.fsum(x * y for x, y in zip(u, v))
    c = min(mpmath.mpf(1), max(mpmath.mpf(-1), c))
    return mpmath.acos(c)


def _smallest_singular(cols):
    k = len(cols)
    G = mpmath.matrix(k, k)
    for i in range(k):
        for j in range(k):
            G[i, j] = mpmath.fsum(x * y for x, y in zip(cols[i], cols[j]))
    ev = mpmath.eigsy(G, eigvals_only=True)
    return mpmath.sqrt(max(mpmath.mpf(0), min(ev[i] for i in range(k))))


def _cone_distance(v, cols):
    """Distance from unit vector ``v`` to the cone spanned by ``cols``.

    Nonnegative least squares by trying every support (k is small).
    """
    best = mpmath.mpf(1)
    k = len(cols)
    for size in range(1, k + 1):
        for S in combinations(range(k), size):
            G = mpmath.matrix(size, size)
            rhs = mpmath.matrix(size, 1)
            for a, i in enumerate(S):
                rhs[a] = mpmath.fsum(x * y for x, y in zip(cols[i], v))
                for b, j in enumerate(S):
                    G[a, b] = mpmath.fsum(x * y for x, y in zip(cols[i], cols[j]))
            try:
                w = mpmath.lu_solve(G, rhs)
            except ZeroDivisionError:
                continue
            if any(w[a] < 0 for a in range(size)):
                continue
            r = [v[t] - mpmath.fsum(w[a] * cols[i][t] for a, i in enumerate(S))
                 for t in range(len(v))]
            best = min(best, mpmath.sqrt(mpmath.fsum(x * x for x in r)))
    return best


def projective_diameter(P):
    """Largest angle between two columns of ``P`` (the image of the positive cone)."""
    cols = [_projectivize(P, j) for j in range(len(P[0]))]
    return max((_angle(u, v) for u, v in combinations(cols, 2)), default=mpmath.mpf(0))


def geometric_schedule(steps, ratio=Fraction(1, 2)):
    ratio = Fraction(ratio)
    return [ratio ** (n + 1) for n in range(steps)]


def _spread(P, k):
    """Ratio of the largest to the smallest norm among the first k columns."""
    norms = []
    for j in range(k):
        sq = sum(row[j] * row[j] for row in P)
        if sq == 0:
            raise NumericUnderflow(f"column {j} of the product vanished")
        norms.append(sq)
    r = Fraction(max(norms), min(norms))
    return int(mpmath.sqrt(mpmath.mpf(r.numerator) / r.denominator)) + 1


def cone_iteration(m, eps_schedule=None, steps=30, scales=None, dps=60,
                   hull_tol=1e-6, diagonal="increasing", adaptive=True):
    """Multiply ``C_1 C_2 ... C_n`` and track the first k projective columns.

    ``C_n = product_AB(m, choose_exponents(m, eps_n))``.  With ``adaptive``
    (the default) the alpha spread of step n is also required to exceed
    ``spread(P_{n-1}) / eps_n``, where spread is the ratio of the largest to
    the smallest of the first k column norms of the running product.  This
    is the choice that lets the small off-diagonal entries of C_n stay
    small after multiplying by P_{n-1}; without it the first k columns
    all drift onto the same direction.  The running
    product is exact; ``scales`` (optional positive rationals, one per
    step) multiply the factors and exist to check scale invariance.

    The result holds the final normalised limit columns, their minimum
    pairwise angle (``separation``), the smallest singular value of the
    column matrix (``nondegeneracy``), the largest distance from a
    trailing column to their cone (``hull_distance``), whether that is
    within ``hull_tol`` (``tail_columns_inside``), and per-step histories.
    """
    d = _data(m)
    k = d.k
    if eps_schedule is None:
        eps_schedule = geometric_schedule(steps)
    eps_schedule = list(eps_schedule)
    if any(e <= 0 for e in eps_schedule):
        raise ValueError("schedule entries must be positive")
    with mpmath.workdps(dps):
        P = [[Fraction(int(i == j)) for j in range(2 * k)] for i in range(2 * k)]
        history = []
        exps = []
        for n, eps in enumerate(eps_schedule):
            spread = 1
            if adaptive and n:
                spread = int(_spread(P, k) / Fraction(eps)) + 1
            ex = choose_exponents(d, eps, diagonal=diagonal, min_spread=spread)
            exps.append(ex)
            C = product_AB(d, ex).rows
            if scales is not None:
                C = [[x * Fraction(scales[n]) for x in row] for row in C]
            P = _mul(P, C)
            # exact renormalisation keeps the numbers small without touching directions
            top = max(abs(x) for row in P for x in row)
            P = [[x / top for x in row] for row in P]
            cols = [_projectivize(P, j) for j in range(k)]
            sep = min((_angle(u, v) for u, v in combinations(cols, 2)), default=None)
            history.append({"step": n + 1, "separation": sep,
                            "diameter": projective_diameter(P)})
        if not eps_schedule:
            raise ValueError("empty schedule")
        cols = [_projectivize(P, j) for j in range(k)]
        tails = [_projectivize(P, j) for j in range(k, 2 * k)]
        hull = max(_cone_distance(v, cols) for v in tails)
        sep = min((_angle(u, v) for u, v in combinations(cols, 2)), default=None)
        return {
            "k": k,
            "steps": len(eps_schedule),
            "limit_columns": cols,
            "separation": sep,
            "nondegeneracy": _smallest_singular(cols),
            "hull_distance": hull,
            "tail_columns_inside": bool(hull <= hull_tol),
            "history": history,
            "exponents": exps,
        }


def angle_stability(result, window=10):
    """Spread of the separation over the last ``window`` steps."""
    seps = [h["separation"] for h in result["history"][-window:]]
    if seps[0] is None:
        return mpmath.mpf(0)
    return max(seps) - min(seps)


def summary(result, window=10):
    """JSON-friendly digest of a :func:`cone_iteration` result."""
    f = lambda x: None if x is None else float(x)
    return {
        "k": result["k"],
        "steps": result["steps"],
        "separation": f(result["separation"]),
        "separation_spread": float(angle_stability(result, window)),
        "nondegeneracy": f(result["nondegeneracy"]),
        "hull_distance": f(result["hull_distance"]),
        "tail_columns_inside": result["tail_columns_inside"],
        "limit_columns": [[float(x) for x in c] for c in result["limit_columns"]],
        "diameter": [f(h["diameter"]) for h in result["history"]],
    }
