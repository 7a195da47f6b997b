"""Euclidean embeddings: exact determinant criteria, simplex realization,
plane necessary conditions, and a heuristic embedder with exact
verification.

Everything decision-grade is rational arithmetic: Cayley-Menger
determinants by integer Bareiss elimination after clearing denominators,
coordinate certificates as an exact L D L^T factorization of the anchored
Gram matrix, so squared distances recompute as rationals. Square roots are
taken only for display coordinates, never for comparisons.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SizeLimitError, SolverError, ValidationError
from .space import DistanceMatrix, OrdinalSpace, all_pairs, subspace

DEFAULT_LIMIT = 8


# ---------------------------------------------------------------------------
# Cayley-Menger

@dataclass(frozen=True)
class CMResult:
    k: int  # number of points minus one
    value: Fraction
    sign: int  # -1, 0, +1


def _bareiss_det(m):
    """Exact determinant of a square integer matrix, fraction free."""
    a = [row[:] for row in m]
    size = len(a)
    sign = 1
    prev = 1
    for r in range(size - 1):
        if a[r][r] == 0:
            swap = next((i for i in range(r + 1, size) if a[i][r] != 0), None)
            if swap is None:
                return 0
            a[r], a[swap] = a[swap], a[r]
            sign = -sign
        for i in range(r + 1, size):
            for j in range(r + 1, size):
                a[i][j] = (a[i][j] * a[r][r] - a[i][r] * a[r][j]) // prev
            a[i][r] = 0
        prev = a[r][r]
    return sign * a[-1][-1]


def cayley_menger(d: DistanceMatrix, points=None) -> CMResult:
    """Bordered determinant of squared distances among the chosen points
    (default: all), computed exactly.

    Denominators are cleared first: scaling every distance by c scales the
    determinant by c^(2k), which preserves the sign and is divided back out.
    """
    pts = list(range(d.n)) if points is None else list(points)
    if len(set(pts)) != len(pts) or not pts:
        raise ValidationError("points must be distinct and nonempty")
    k = len(pts) - 1
    c = 1
    for i in pts:
        for j in pts:
            c = math.lcm(c, d.values[i][j].denominator)
    size = k + 2
    m = [[0] * size for _ in range(size)]
    for t in range(1, size):
        m[0][t] = m[t][0] = 1
    for a in range(k + 1):
        for b in range(k + 1):
            v = d.values[pts[a]][pts[b]] * c
            m[a + 1][b + 1] = (v * v).numerator  # exact: v is an integer here
    det_scaled = _bareiss_det(m)
    value = Fraction(det_scaled, c ** (2 * k))
    return CMResult(k, value, (value > 0) - (value < 0))


def blumenthal_check(d: DistanceMatrix):
    """Irreducible embeddability of n points in R^(n-1): the determinant on
    the first k+1 points must have sign (-1)^(k+1) for every k = 1..n-1.
    Returns (ok, first failing k or None)."""
    for k in range(1, d.n):
        res = cayley_menger(d, points=range(k + 1))
        if res.sign != (-1) ** (k + 1):
            return False, k
    return True, None


# ---------------------------------------------------------------------------
# exact coordinate certificates

@dataclass(frozen=True)
class ExactCertificate:
    """Coordinates in factored form: point order[0] at the origin, point
    order[i] at row i-1 of L * sqrt(diag). L and diag are rational, so all
    squared distances recompute exactly as squared[a][b]."""

    squared: tuple  # n x n Fractions
    order: tuple  # point indices, anchor first
    unit_lower: tuple  # (n-1) x (n-1) Fractions
    diag: tuple  # n-1 nonnegative Fractions
    rank: int

    def squared_distance(self, a, b):
        """Recompute |x_a - x_b|^2 from the factors (a, b index order)."""
        L, D = self.unit_lower, self.diag
        m = len(self.order) - 1

        def row(i):
            return L[i - 1] if i else (Fraction(0),) * m

        ra, rb = row(a), row(b)
        return sum((ra[t] - rb[t]) ** 2 * D[t] for t in range(m))

    def float_coordinates(self, dim):
        roots = [math.sqrt(float(v)) for v in self.diag]
        n = len(self.order)
        coords = [None] * n
        coords[self.order[0]] = (0.0,) * dim
        for i in range(1, n):
            row = self.unit_lower[i - 1]
            xs = [float(row[t]) * roots[t] for t in range(self.rank)]
            xs += [0.0] * (dim - self.rank)
            coords[self.order[i]] = tuple(xs)
        return tuple(coords)


def _ldl_psd(g):
    """Pivoted exact L D L^T of a symmetric rational matrix.

    Returns (psd, perm, L, D, rank): psd is False as soon as a negative
    pivot appears or a zero-diagonal tail keeps nonzero off-diagonals. On
    success G[perm][:, perm] == L diag(D) L^T exactly.
    """
    m = len(g)
    a = [[Fraction(v) for v in row] for row in g]
    perm = list(range(m))
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    D = [Fraction(0)] * m

    def swap(i, j):
        if i == j:
            return
        perm[i], perm[j] = perm[j], perm[i]
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        L[i][:], L[j][:] = L[j][:], L[i][:]

    rank = 0
    for step in range(m):
        best = max(range(step, m), key=lambda i: a[i][i])
        if a[best][best] < 0:
            return False, tuple(perm), None, None, rank
        if a[best][best] == 0:
            tail_zero = all(
                a[i][j] == 0 for i in range(step, m) for j in range(step, m)
            )
            if not tail_zero:
                return False, tuple(perm), None, None, rank
            break
        swap(step, best)
        pivot = a[step][step]
        D[step] = pivot
        rank += 1
        for i in range(step + 1, m):
            f = a[i][step] / pivot
            L[i][step] = f
            for j in range(step + 1, i + 1):
                a[i][j] -= f * a[j][step]
                if i != j:
                    a[j][i] = a[i][j]
        for i in range(step + 1, m):
            a[i][step] = a[step][i] = Fraction(0)
    # keep only the strictly lower part below the diagonal as factors
    Lt = tuple(
        tuple(L[i][j] if j < i else (Fraction(1) if i == j else Fraction(0)) for j in range(m))
        for i in range(m)
    )
    return True, tuple(perm), Lt, tuple(D), rank


def _certificate_from_squared(squared, dim=None):
    """Exact embedding test for a rational squared-distance matrix: build
    the Gram matrix anchored at point 0 and factor it. Returns the
    certificate or None when the matrix is not PSD (or exceeds dim)."""
    n = len(squared)
    if n == 1:
        return ExactCertificate(squared, (0,), (), (), 0)
    m = n - 1
    g = [
        [
            (squared[0][i + 1] + squared[0][j + 1] - squared[i + 1][j + 1]) / 2
            for j in range(m)
        ]
        for i in range(m)
    ]
    psd, perm, L, D, rank = _ldl_psd(g)
    if not psd:
        return None
    if dim is not None and rank > dim:
        return None
    order = (0,) + tuple(p + 1 for p in perm)
    cert = ExactCertificate(squared, order, L, D, rank)
    # re-verify the factorization against the input, exactly
    for a in range(n):
        for b in range(n):
            if cert.squared_distance(a, b) != squared[order[a]][order[b]]:
                raise SolverError("certificate failed exact recomputation")
    return cert


def _squared_matches_space(squared, s):
    """Do the squared distances order exactly like the rank matrix? Squared
    comparisons decide the original ones since distances are positive."""
    values = sorted({squared[i][j] for i, j in all_pairs(s.n)})
    if len(values) != s.k:
        return False
    level = {v: r + 1 for r, v in enumerate(values)}
    for i, j in all_pairs(s.n):
        if squared[i][j] <= 0 or level[squared[i][j]] != s.ranks[i][j]:
            return False
    return True


@dataclass(frozen=True)
class EuclidWitness:
    """Verified Euclidean realization. coords are exact Fractions when the
    witness came from rational coordinates, floats (display only) when the
    exactness lives in the certificate."""

    dim: int
    coords: tuple
    verified: bool
    exact_coords: bool
    certificate: ExactCertificate | None = None


def realize_simplex(s: OrdinalSpace, retries: int = 32) -> EuclidWitness:
    """Nondegenerate simplex in R^(n-1) realizing the rank matrix.

    Uses the compatible metric 1 + scale * rank/(2k); if the determinant
    signs reject a scale, it is halved, and near the regular simplex the
    signs must comply, so the loop terminates long before the cap.
    """
    n = s.n
    if n == 1:
        cert = ExactCertificate(((Fraction(0),),), (0,), (), (), 0)
        return EuclidWitness(0, ((),), True, False, cert)
    scale = Fraction(1)
    last_fail = None
    for _ in range(retries):
        dist = [
            [
                Fraction(0)
                if i == j
                else 1 + scale * Fraction(s.ranks[i][j], 2 * s.k)
                for j in range(n)
            ]
            for i in range(n)
        ]
        d = DistanceMatrix(n, tuple(tuple(r) for r in dist))
        ok, last_fail = blumenthal_check(d)
        if ok:
            squared = tuple(
                tuple(d.values[i][j] ** 2 for j in range(n)) for i in range(n)
            )
            cert = _certificate_from_squared(squared)
            if cert is None or cert.rank != n - 1:
                raise SolverError("determinant signs and factorization disagree")
            if not _squared_matches_space(squared, s):
                raise SolverError("simplex witness failed ordinal re-verification")
            return EuclidWitness(
                dim=n - 1,
                coords=cert.float_coordinates(n - 1),
                verified=True,
                exact_coords=False,
                certificate=cert,
            )
        scale /= 2
    raise SolverError(
        f"no valid scale after {retries} halvings (last failing order {last_fail})"
    )


# ---------------------------------------------------------------------------
# plane necessary conditions

def dp_pairs(s: OrdinalSpace):
    """Diametrical pairs: the pairs at the maximal rank."""
    if s.n < 2:
        return ()
    return tuple(p for p in s.pairs() if s.ranks[p[0]][p[1]] == s.k)


def _isqrt_ceil(m):
    r = math.isqrt(m)
    return r if r * r == m else r + 1


def plane_necessary_check(s: OrdinalSpace):
    """Counting conditions every plane-embeddable space satisfies.

    Checks the diametrical bound |DP| <= n and the class-size bounds: the
    top class at most n, the second class at most floor(3n/2), the second
    nearest class strictly below 24n/7, the nearest class at most
    floor(3n - sqrt(12n - 3)). Returns (ok, violations) with violations a
    list of (clause, size, bound) triples; bounds on absent classes are
    vacuous.
    """
    if s.n < 2:
        return True, []
    n = s.n
    sizes = [len(c) for c in s.level_classes()]  # index r-1 = rank r
    k = s.k
    violations = []
    dp = len(dp_pairs(s))
    if dp > n:
        violations.append(("diametrical_pairs", dp, n))
    top = sizes[k - 1]
    if top > n:
        violations.append(("top_class", top, n))
    if k >= 2:
        second = sizes[k - 2]
        bound = (3 * n) // 2
        if second > bound:
            violations.append(("second_class", second, bound))
        second_nearest = sizes[1]
        if 7 * second_nearest >= 24 * n:  # strict bound, kept exact
            violations.append(("second_nearest_class", second_nearest, Fraction(24 * n, 7)))
    nearest = sizes[0]
    nearest_bound = 3 * n - _isqrt_ceil(12 * n - 3)
    if nearest > nearest_bound:
        violations.append(("nearest_class", nearest, nearest_bound))
    return not violations, violations


def nearest_class_bound(n: int) -> int:
    """floor(3n - sqrt(12n - 3)) computed without floats."""
    return 3 * n - _isqrt_ceil(12 * n - 3)


# ---------------------------------------------------------------------------
# heuristic embedder

def _descend(s, dim, rng, iterations):
    """Adam descent on squared hinge + tie losses over pair distances."""
    n = s.n
    pairs = s.pairs()
    M = len(pairs)
    ranks = np.array([s.ranks[i][j] for i, j in pairs])
    ii = np.array([p[0] for p in pairs])
    jj = np.array([p[1] for p in pairs])
    lt = ranks[:, None] < ranks[None, :]
    eq = (ranks[:, None] == ranks[None, :]) & (np.arange(M)[:, None] < np.arange(M))
    margin = 1.0 / (2 * s.k * n)

    x = rng.normal(size=(n, dim))
    mom = np.zeros_like(x)
    vel = np.zeros_like(x)
    b1, b2, lr, eps = 0.9, 0.999, 0.05, 1e-12
    for t in range(1, iterations + 1):
        delta = x[ii] - x[jj]
        dist = np.sqrt((delta**2).sum(axis=1)) + 1e-12
        scale = dist.mean()
        x /= scale
        delta /= scale
        dist /= scale
        h = margin + dist[:, None] - dist[None, :]
        h = np.where(lt, np.maximum(h, 0.0), 0.0)
        diff = np.where(eq, dist[:, None] - dist[None, :], 0.0)
        grad_d = 2 * (h.sum(axis=1) - h.sum(axis=0)) + 2 * (
            diff.sum(axis=1) - diff.sum(axis=0)
        )
        unit = delta / dist[:, None]
        gx = np.zeros_like(x)
        np.add.at(gx, ii, grad_d[:, None] * unit)
        np.add.at(gx, jj, -grad_d[:, None] * unit)
        mom = b1 * mom + (1 - b1) * gx
        vel = b2 * vel + (1 - b2) * gx**2
        mhat = mom / (1 - b1**t)
        vhat = vel / (1 - b2**t)
        x -= lr * mhat / (np.sqrt(vhat) + eps)
    x -= x.mean(axis=0)
    return x


def _float_cell_ok(s, x):
    """Cheap screen: the float configuration must already order the rank
    classes correctly and keep ties tight. Never decides success."""
    pairs = s.pairs()
    d2 = {p: float(((x[p[0]] - x[p[1]]) ** 2).sum()) for p in pairs}
    means = {}
    spread = 0.0
    for p in pairs:
        means.setdefault(s.ranks[p[0]][p[1]], []).append(d2[p])
    vals = []
    for r in sorted(means):
        grp = means[r]
        vals.append(sum(grp) / len(grp))
        spread = max(spread, max(grp) - min(grp))
    gaps = [b - a for a, b in zip(vals, vals[1:])]
    min_gap = min(gaps, default=vals[0])
    return all(g > 0 for g in gaps) and spread < 0.2 * min_gap


def _witness_from_rational_coords(s, x, dim):
    for den in (10**3, 10**6, 10**9):
        coords = tuple(
            tuple(Fraction(float(v)).limit_denominator(den) for v in row)
            for row in x
        )
        squared = tuple(
            tuple(
                sum((a - b) ** 2 for a, b in zip(coords[i], coords[j]))
                for j in range(s.n)
            )
            for i in range(s.n)
        )
        if _squared_matches_space(squared, s):
            return EuclidWitness(dim, coords, True, True, None)
    return None


def _witness_from_class_targets(s, x, dim):
    """Tie-aware exact verification: snap squared distances to one rational
    target per rank class and decide embeddability of the snapped matrix
    exactly through the Gram factorization."""
    pairs = s.pairs()
    sums = {}
    counts = {}
    for i, j in pairs:
        r = s.ranks[i][j]
        sums[r] = sums.get(r, 0.0) + float(((x[i] - x[j]) ** 2).sum())
        counts[r] = counts.get(r, 0) + 1
    target = {}
    prev = Fraction(0)
    for r in sorted(sums):
        t = Fraction(sums[r] / counts[r]).limit_denominator(10**8)
        if t <= prev:
            return None
        target[r] = t
        prev = t
    squared = tuple(
        tuple(
            Fraction(0) if i == j else target[s.ranks[i][j]] for j in range(s.n)
        )
        for i in range(s.n)
    )
    cert = _certificate_from_squared(squared, dim=dim)
    if cert is None:
        return None
    if not _squared_matches_space(squared, s):
        return None
    return EuclidWitness(
        dim, cert.float_coordinates(dim), True, False, cert
    )


def embed_heuristic(
    s: OrdinalSpace,
    dim: int,
    restarts: int = 32,
    iterations: int = 600,
    seed: int = 0,
) -> EuclidWitness | None:
    """Random-restart descent for an R^dim realization.

    Success is claimed only after exact verification: either the rounded
    rational coordinates reproduce the rank matrix, or the class-snapped
    squared distances admit an exact PSD factorization of rank <= dim.
    Returning None is inconclusive, never a refutation.
    """
    if dim < 1:
        raise ValidationError("dimension must be positive")
    if s.n == 1:
        return EuclidWitness(dim, ((Fraction(0),) * dim,), True, True, None)
    for restart in range(restarts):
        rng = np.random.default_rng([seed, restart])
        x = _descend(s, dim, rng, iterations)
        if not _float_cell_ok(s, x):
            continue
        witness = _witness_from_rational_coords(s, x, dim)
        if witness is None:
            witness = _witness_from_class_targets(s, x, dim)
        if witness is not None:
            return witness
    return None


# ---------------------------------------------------------------------------
# subset probe

@dataclass(frozen=True)
class MengerReport:
    dim: int
    max_subset_size: int
    subset_counts: tuple  # ((size, embeddable, refuted, inconclusive), ...)
    refuted_subsets: tuple
    whole_status: str
    conjecture_consistent: bool | None
    seed: int


EMBEDDABLE = "EMBEDDABLE"
NOT_EMBEDDABLE_STATUS = "NOT_EMBEDDABLE"
INCONCLUSIVE = "INCONCLUSIVE"


def _embedding_status(t, dim, seed, restarts, limit):
    from .line import embed_line  # local import to avoid a cycle

    if dim == 1:
        if t.n > limit:
            return INCONCLUSIVE
        return EMBEDDABLE if embed_line(t, limit=limit) else NOT_EMBEDDABLE_STATUS
    if dim == 2:
        ok, _ = plane_necessary_check(t)
        if not ok:
            return NOT_EMBEDDABLE_STATUS
    if embed_heuristic(t, dim, restarts=restarts, seed=seed) is not None:
        return EMBEDDABLE
    return INCONCLUSIVE


def menger_probe(
    s: OrdinalSpace,
    dim: int,
    seed: int = 0,
    restarts: int = 16,
    limit: int = DEFAULT_LIMIT,
) -> MengerReport:
    """Check the subset heuristic: every subspace on at most dim+3 points
    examined next to the whole space. A report of all-embeddable subsets
    with a refuted whole would witness a failure of the subset criterion;
    the function only reports, it proves nothing beyond the exact parts."""
    max_size = min(s.n, dim + 3)
    counts = []
    refuted = []
    for size in range(2, max_size + 1):
        emb = ref = inc = 0
        for sub in itertools.combinations(range(s.n), size):
            st = _embedding_status(subspace(s, sub), dim, seed, restarts, limit)
            if st == EMBEDDABLE:
                emb += 1
            elif st == NOT_EMBEDDABLE_STATUS:
                ref += 1
                refuted.append(sub)
            else:
                inc += 1
        counts.append((size, emb, ref, inc))
    whole = _embedding_status(s, dim, seed, restarts, limit)
    if whole == EMBEDDABLE:
        consistent = True
    elif whole == NOT_EMBEDDABLE_STATUS and not refuted:
        all_decided = all(inc == 0 for (_, _, _, inc) in counts)
        consistent = False if all_decided else None
    else:
        consistent = None if whole == INCONCLUSIVE else True
    return MengerReport(
        dim=dim,
        max_subset_size=max_size,
        subset_counts=tuple(counts),
        refuted_subsets=tuple(refuted),
        whole_status=whole,
        conjecture_consistent=consistent,
        seed=seed,
    )
