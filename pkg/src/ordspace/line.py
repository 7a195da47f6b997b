"""Order structure of the real line: majorization, exact 1-D embedding,
the four-point classification, and class-profile conditions.

Index sequences are 1-based positions into an enumeration (an ordering of
the points). A sequence (i_0, ..., i_k) is nondecreasing; consecutive
entries cut the enumeration into intervals whose ranks are compared between
two sequences of equal length by multiset matching.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import simplex
from .errors import SizeLimitError, SolverError, ValidationError
from .space import DistanceMatrix, OrdinalSpace, ordinal_type

DEFAULT_LIMIT = 8


class SeqRelation(enum.Enum):
    PREC = "PREC"
    EQUIV = "EQUIV"
    NEITHER = "NEITHER"


class MajorizationMode(enum.Enum):
    FULL = "FULL"
    CONSECUTIVE = "CONSECUTIVE"


@dataclass(frozen=True)
class IndexSequence:
    """Nondecreasing tuple of 1-based positions, at least two entries."""

    indices: tuple

    def __post_init__(self):
        idx = self.indices
        if len(idx) < 2:
            raise ValidationError("an index sequence needs at least two entries")
        if any(b < a for a, b in zip(idx, idx[1:])):
            raise ValidationError("index sequence must be nondecreasing")
        if idx[0] < 1:
            raise ValidationError("positions are 1-based")


def _as_indices(seq, n):
    idx = seq.indices if isinstance(seq, IndexSequence) else tuple(seq)
    IndexSequence(idx)
    if idx[-1] > n:
        raise ValidationError(f"position {idx[-1]} outside 1..{n}")
    return idx


def _check_enumeration(enumeration, n):
    e = tuple(enumeration)
    if sorted(e) != list(range(n)):
        raise ValidationError("enumeration must be a permutation of the points")
    return e


def interval_ranks(s: OrdinalSpace, enumeration, seq):
    """Ranks of the consecutive intervals of seq under the enumeration;
    a repeated position yields a zero interval."""
    e = _check_enumeration(enumeration, s.n)
    idx = _as_indices(seq, s.n)
    return tuple(
        s.ranks[e[a - 1]][e[b - 1]] for a, b in zip(idx, idx[1:])
    )


def compare_sequences(s: OrdinalSpace, a, b, enumeration) -> SeqRelation:
    """Multiset comparison of interval ranks of two equal-length sequences.

    EQUIV: some pairing matches all interval ranks exactly; PREC: some
    pairing is componentwise <= with at least one strict. Both reduce to
    comparing the sorted rank tuples: if a pairing with a_i <= b_pi(i)
    exists then for every threshold the count of a-ranks above it is at
    most the b-count, which is exactly sorted dominance, and the sorted
    pairing realizes it back. Equal multisets admit no strictly slack
    pairing because the totals agree.
    """
    ia = _as_indices(a, s.n)
    ib = _as_indices(b, s.n)
    if len(ia) != len(ib):
        raise ValidationError("sequences must have equal length")
    ra = sorted(interval_ranks(s, enumeration, ia))
    rb = sorted(interval_ranks(s, enumeration, ib))
    if ra == rb:
        return SeqRelation.EQUIV
    if all(x <= y for x, y in zip(ra, rb)):
        return SeqRelation.PREC
    return SeqRelation.NEITHER


@dataclass(frozen=True)
class MajorizationResult:
    ok: bool
    counterexample: tuple | None  # (seq_a, seq_b) or None

    def __bool__(self):
        return self.ok


def _strict_sequences(n, mode):
    """Strictly increasing position sequences of each length 2..n, grouped
    by length. CONSECUTIVE keeps only contiguous runs (i, i+1, ..., j)."""
    by_len = {}
    for m in range(2, n + 1):
        if mode is MajorizationMode.CONSECUTIVE:
            seqs = [tuple(range(i, i + m)) for i in range(1, n - m + 2)]
        else:
            seqs = [tuple(c) for c in itertools.combinations(range(1, n + 1), m)]
        by_len[m] = seqs
    return by_len


def check_majorization(
    s: OrdinalSpace, enumeration, mode: MajorizationMode = MajorizationMode.FULL
) -> MajorizationResult:
    """Does the enumeration majorize: every PREC pair of equal-length
    sequences has strictly ordered endpoint ranks, every EQUIV pair equal
    endpoint ranks?

    Dedup lemma: it is enough to compare strictly increasing sequences,
    padding the shorter one with copies of its first position. In a
    nondecreasing pair, zero intervals of the dominating side must pair
    with zeros of the other (nothing is below 0), and surplus zeros on the
    dominated side pair with anything; cancelling matched zeros leaves
    exactly the padded-core comparison, and the endpoints are those of the
    cores. A sequence with no proper interval never violates: its endpoint
    rank is 0, below every proper pair's rank.
    """
    e = _check_enumeration(enumeration, s.n)
    seqs = _strict_sequences(s.n, mode)
    rank_cache = {}
    for m, group in seqs.items():
        for t in group:
            ivals = sorted(
                s.ranks[e[a - 1]][e[b - 1]] for a, b in zip(t, t[1:])
            )
            rank_cache[t] = (ivals, s.ranks[e[t[0] - 1]][e[t[-1] - 1]])
    for qlen in range(2, s.n + 1):
        for plen in range(2, qlen + 1):
            pad = qlen - plen
            for a in seqs[plen]:
                ivals_a, end_a = rank_cache[a]
                for b in seqs[qlen]:
                    ivals_b, end_b = rank_cache[b]
                    # zero padding sorts in front; compare top-aligned
                    if any(
                        ivals_a[i] > ivals_b[i + pad] for i in range(plen - 1)
                    ):
                        continue
                    if pad == 0 and ivals_a == ivals_b:
                        if end_a != end_b:
                            return MajorizationResult(False, (a, b))
                    elif end_a >= end_b:
                        padded_a = (a[0],) * pad + a
                        return MajorizationResult(False, (padded_a, b))
    return MajorizationResult(True, None)


def _nesting_ok_prefix(s, e, j):
    """Necessary line condition on the prefix e[0..j]: every proper pair
    strictly inside (i, j) has a strictly smaller rank."""
    for i in range(j):
        rij = s.ranks[e[i]][e[j]]
        for k in range(i, j + 1):
            for l in range(k + 1, j + 1):
                if (k, l) == (i, j):
                    continue
                if s.ranks[e[k]][e[l]] >= rij:
                    return False
    return True


def _nesting_ok(s, e):
    return all(_nesting_ok_prefix(s, e, j) for j in range(1, len(e)))


def find_majorizing_enumeration(s: OrdinalSpace, limit: int = DEFAULT_LIMIT):
    """First enumeration (DFS order) that majorizes, or None.

    Prunes with the nesting condition, which any majorizing enumeration
    satisfies, and skips reversals (an enumeration majorizes iff its
    reversal does), keeping only first point < last point.
    """
    n = s.n
    if n > limit:
        raise SizeLimitError("find_majorizing_enumeration", n, limit)
    if n == 1:
        return (0,)
    e = []

    def extend():
        if len(e) == n:
            if e[0] < e[-1] and check_majorization(s, e).ok:
                return tuple(e)
            return None
        for p in range(n):
            if p in e:
                continue
            e.append(p)
            if _nesting_ok_prefix(s, e, len(e) - 1):
                found = extend()
                if found:
                    return found
            e.pop()
        return None

    return extend()


# ---------------------------------------------------------------------------
# exact 1-D embedding

@dataclass(frozen=True)
class LineWitness:
    """Exact line realization: point at position p sits at the sum of the
    first p gaps; margin is the optimized slack of the strict inequalities
    and the smallest gap."""

    ordering: tuple  # position -> point index
    gaps: tuple  # n-1 positive Fractions summing to 1
    margin: Fraction

    def coordinates(self):
        coords = [Fraction(0)]
        for g in self.gaps:
            coords.append(coords[-1] + g)
        return tuple(coords)

    def distance_matrix(self, n=None):
        n = len(self.ordering)
        coords = self.coordinates()
        rows = [[Fraction(0)] * n for _ in range(n)]
        for p in range(n):
            for q in range(p + 1, n):
                i, j = self.ordering[p], self.ordering[q]
                rows[i][j] = rows[j][i] = coords[q] - coords[p]
        return DistanceMatrix(n, tuple(tuple(r) for r in rows))


def _margin_lp(s, ordering):
    """Margin-maximizing LP for a fixed point order; a witness exists for
    this order iff the optimum margin is strictly positive."""
    n = s.n
    m = n - 1
    nvars = m + 1  # gaps, then t

    def coeffs_of(p, q):
        v = [Fraction(0)] * nvars
        for g in range(p, q):
            v[g] = Fraction(1)
        return v

    by_rank = {}
    for p in range(n):
        for q in range(p + 1, n):
            by_rank.setdefault(s.ranks[ordering[p]][ordering[q]], []).append((p, q))

    constraints = []
    for g in range(m):
        row = [Fraction(0)] * nvars
        row[g] = Fraction(1)
        row[m] = Fraction(-1)
        constraints.append((row, ">=", 0))
    for r, group in sorted(by_rank.items()):
        rep = coeffs_of(*group[0])
        for other in group[1:]:
            diff = [a - b for a, b in zip(coeffs_of(*other), rep)]
            constraints.append((diff, "==", 0))
    ranks_sorted = sorted(by_rank)
    for lo, hi in zip(ranks_sorted, ranks_sorted[1:]):
        rep_lo = coeffs_of(*by_rank[lo][0])
        rep_hi = coeffs_of(*by_rank[hi][0])
        row = [a - b for a, b in zip(rep_hi, rep_lo)]
        row[m] = Fraction(-1)
        constraints.append((row, ">=", 0))
    total = [Fraction(1)] * m + [Fraction(0)]
    constraints.append((total, "==", 1))

    objective = [Fraction(0)] * m + [Fraction(1)]
    status, x, value = simplex.solve_lp(objective, constraints)
    if status == simplex.UNBOUNDED:
        raise SolverError("margin LP unbounded; constraint assembly is broken")
    if status != simplex.OPTIMAL or value <= 0:
        return None
    gaps = tuple(x[:m])
    witness = LineWitness(tuple(ordering), gaps, x[m])
    if ordinal_type(witness.distance_matrix()) != s:
        raise SolverError("line witness failed exact re-verification")
    return witness


def embed_line(s: OrdinalSpace, limit: int = DEFAULT_LIMIT):
    """Exact 1-D embedding decision: scan point orders (up to reversal),
    screen with the nesting condition, then decide by the margin LP.

    Floating point never enters: the screen is integer comparisons and the
    LP is exact. Returns a verified LineWitness or None.
    """
    n = s.n
    if n > limit:
        raise SizeLimitError("embed_line", n, limit)
    if n == 1:
        return LineWitness((0,), (), Fraction(1))
    for ordering in itertools.permutations(range(n)):
        if ordering[0] > ordering[-1]:
            continue
        if not _nesting_ok(s, ordering):
            continue
        witness = _margin_lp(s, ordering)
        if witness is not None:
            return witness
    return None


# ---------------------------------------------------------------------------
# four-point classification

NOT_EMBEDDABLE = None

_EQUAL_DIAG_TAGS = {"LT": "d3", "EQ": "d2", "GT": "d1"}  # by cmp(d23, d12)


def _cmp_name(a, b):
    return "LT" if a < b else "GT" if a > b else "EQ"


def _pattern_tag(d12, d13, d23, d24, d34):
    """Tag of a configuration already known to satisfy the enumeration
    conditions, with d13 >= d24."""
    if d13 == d24:
        return _EQUAL_DIAG_TAGS[_cmp_name(d23, d12)]
    c_12_24 = _cmp_name(d12, d24)
    c_23_34 = _cmp_name(d23, d34)
    if c_12_24 == "GT":
        return {"GT": "d4", "EQ": "d5", "LT": "d6"}[c_23_34]
    if c_12_24 == "EQ":
        return {"GT": "d7", "EQ": "d8", "LT": "d9"}[c_23_34]
    c_12_23 = _cmp_name(d12, d23)
    if c_12_23 == "GT":
        return {"GT": "d10", "EQ": "d11", "LT": "d12"}[c_23_34]
    if c_12_23 == "EQ":
        return "d13"
    return "d15"


CASE_TAGS = (
    "d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8",
    "d9", "d10", "d11", "d12", "d13", "d15",
)


def classify_four_point(s: OrdinalSpace):
    """Line-embeddability case tag of a 4-point space, or None.

    Scans the 24 enumerations for the characteristic pattern: the chain
    d12 < d13 < d14 > d24 > d34 with d23 below both d13 and d24, plus the
    cross conditions (d13 < d24 iff d12 < d34) and (d13 = d24 iff
    d12 = d34). The first matching enumeration determines the tag; a
    mirror-* tag marks the reversed orientation (d13 < d24).
    """
    if s.n != 4:
        raise ValidationError("four-point classification needs exactly 4 points")
    for e in itertools.permutations(range(4)):
        d = lambda i, j: s.ranks[e[i - 1]][e[j - 1]]
        d12, d13, d14 = d(1, 2), d(1, 3), d(1, 4)
        d23, d24, d34 = d(2, 3), d(2, 4), d(3, 4)
        if not (d12 < d13 < d14 and d14 > d24 > d34 and d23 < d13 and d23 < d24):
            continue
        if (d13 < d24) != (d12 < d34) or (d13 == d24) != (d12 == d34):
            continue
        if d13 >= d24:
            return _pattern_tag(d12, d13, d23, d24, d34)
        # reversing the enumeration swaps d12 with d34 and d13 with d24
        return "mirror-" + _pattern_tag(d34, d24, d23, d13, d12)
    return NOT_EMBEDDABLE


# ---------------------------------------------------------------------------
# class profiles

def class_profile(s: OrdinalSpace):
    """Sizes of the rank classes from the largest rank down: entry i is the
    number of pairs in the (i+1)-th most distant class."""
    if s.n < 2:
        raise ValidationError("class profile needs at least 2 points")
    return tuple(len(c) for c in reversed(s.level_classes()))


def profile_necessary_check(s: OrdinalSpace):
    """Necessary profile conditions for a line embedding: at least n-1
    classes, a singleton top class, and the i-th class no larger than i.
    Returns (ok, reason)."""
    profile = class_profile(s)
    if len(profile) < s.n - 1:
        k = len(profile)
        return False, f"only {k} class{'' if k == 1 else 'es'} for {s.n} points"
    if profile[0] != 1:
        return False, f"top class has {profile[0]} pairs"
    for i, size in enumerate(profile, start=1):
        if size > i:
            return False, f"class {i} has {size} > {i} pairs"
    return True, None


@dataclass(frozen=True)
class ProfileEquivalenceReport:
    """Three profile statements that agree on every line-embeddable space:
    exactly n-1 classes; the nearest class holds n-1 pairs; the profile is
    the staircase (1, 2, ..., n-1)."""

    class_count_is_nm1: bool
    nearest_class_is_nm1: bool
    profile_is_staircase: bool

    def all_equal(self):
        return (
            self.class_count_is_nm1
            == self.nearest_class_is_nm1
            == self.profile_is_staircase
        )


def profile_equivalence_report(s: OrdinalSpace) -> ProfileEquivalenceReport:
    profile = class_profile(s)
    n = s.n
    return ProfileEquivalenceReport(
        class_count_is_nm1=(len(profile) == n - 1),
        nearest_class_is_nm1=(profile[-1] == n - 1),
        profile_is_staircase=(profile == tuple(range(1, len(profile) + 1))),
    )


def majorization_consequences(s: OrdinalSpace, enumeration):
    """Consequences every majorizing enumeration must satisfy; returns the
    names of violated clauses (empty for a majorizing enumeration).

    The clauses: nested pairs rank strictly below enclosing pairs; ranks
    rise along (first, t) and fall along (t, last); {first, last} is the
    unique diametrical pair; and for positions i < k < j < l the relation
    between (i,j) and (k,l) equals the relation between (i,k) and (j,l).
    """
    from .euclid import dp_pairs

    e = _check_enumeration(enumeration, s.n)
    n = s.n

    def rk(a, b):
        return s.ranks[e[a]][e[b]]

    violated = []
    nested = all(
        rk(k, l) < rk(i, j)
        for i, j in itertools.combinations(range(n), 2)
        for k in range(i, j + 1)
        for l in range(k, j + 1)
        if (k, l) != (i, j)
    )
    if not nested:
        violated.append("nesting")
    rising = all(rk(0, t) < rk(0, t + 1) for t in range(1, n - 1))
    falling = all(rk(t, n - 1) > rk(t + 1, n - 1) for t in range(n - 2))
    if not (rising and falling):
        violated.append("endpoint_chain")
    if set(dp_pairs(s)) != {tuple(sorted((e[0], e[n - 1])))}:
        violated.append("single_diametrical_pair")
    def sign(x):
        return (x > 0) - (x < 0)

    crossing = all(
        sign(rk(i, j) - rk(k, l)) == sign(rk(i, k) - rk(j, l))
        for i, k, j, l in itertools.combinations(range(n), 4)
    )
    if not crossing:
        violated.append("crossing_equivalences")
    return violated


# ---------------------------------------------------------------------------
# conjecture probe

def probe_majorization_conjecture(spaces, limit: int = DEFAULT_LIMIT):
    """Status report for: a majorizing enumeration exists iff an exact line
    embedding exists. The forward direction (embedding implies majorizing)
    is proved and lands in must_hold_failures if ever broken; the
    converse is open and only reported."""
    report = {
        "tested": 0,
        "majorizing": 0,
        "embeddable": 0,
        "must_hold_failures": [],
        "conjecture_counterexamples": [],
    }
    for s in spaces:
        report["tested"] += 1
        enum_found = find_majorizing_enumeration(s, limit=limit)
        witness = embed_line(s, limit=limit)
        if enum_found is not None:
            report["majorizing"] += 1
        if witness is not None:
            report["embeddable"] += 1
            if enum_found is None:
                report["must_hold_failures"].append(s)
        if enum_found is not None and witness is None:
            report["conjecture_counterexamples"].append(s)
    return report
