"""Edit distance between equal-cardinality spaces: the minimal number of
pairwise-comparison disagreements over all point bijections.

The count is over unordered comparisons between distinct point pairs. Each
such comparison corresponds to exactly 8 ordered quadruples (2 orderings
per pair, 2 orderings of the pair of pairs), and degenerate quadruples
(repeated point in a pair, or the same pair twice) can never disagree, so
this equals the full ordered-quadruple count divided by 8. The numpy
oracle below counts the ordered version and asserts the divisibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError, ValidationError
from .space import OrdinalSpace, all_pairs

DEFAULT_LIMIT = 8


@dataclass(frozen=True)
class OrdDistResult:
    value: int
    witness: tuple  # witness[i] = image of point i
    disagreements: tuple  # ((pair, pair), ...) in the first space's labels


def _sign(x):
    return (x > 0) - (x < 0)


def _comparison_schedule(n):
    """Unordered comparisons of distinct pairs, grouped by the largest
    point involved, so a depth-first bijection search can score each
    comparison at the exact depth where it becomes decided."""
    pairs = all_pairs(n)
    by_depth = [[] for _ in range(n)]
    for pa, pb in itertools.combinations(pairs, 2):
        by_depth[max(*pa, *pb)].append((pa, pb))
    return by_depth


def _disagreements_for(a, b, perm):
    out = []
    for pa, pb in itertools.combinations(all_pairs(a.n), 2):
        ra = _sign(a.ranks[pa[0]][pa[1]] - a.ranks[pb[0]][pb[1]])
        rb = _sign(
            b.ranks[perm[pa[0]]][perm[pa[1]]] - b.ranks[perm[pb[0]]][perm[pb[1]]]
        )
        if ra != rb:
            out.append((pa, pb))
    return tuple(out)


def d_ord(a: OrdinalSpace, b: OrdinalSpace, limit: int = DEFAULT_LIMIT) -> OrdDistResult:
    """Minimize disagreeing comparisons over all bijections.

    Branch and bound over images point by point; a partial assignment is
    abandoned once its decided disagreements reach the incumbent. Images
    are tried in increasing order and only strict improvements replace the
    incumbent, so the witness is the lexicographically smallest optimum.
    """
    if a.n != b.n:
        raise ValidationError("spaces must have the same cardinality")
    n = a.n
    if n > limit:
        raise SizeLimitError("d_ord points", n, limit)
    if n < 2:
        return OrdDistResult(0, tuple(range(n)), ())
    schedule = _comparison_schedule(n)
    total = sum(len(lv) for lv in schedule)
    best_value = total + 1
    best_perm = None
    perm = [None] * n
    used = [False] * n

    def descend(depth, count):
        nonlocal best_value, best_perm
        if depth == n:
            if count < best_value:
                best_value = count
                best_perm = tuple(perm)
            return
        for img in range(n):
            if used[img]:
                continue
            perm[depth] = img
            used[img] = True
            c = count
            for pa, pb in schedule[depth]:
                ra = _sign(a.ranks[pa[0]][pa[1]] - a.ranks[pb[0]][pb[1]])
                rb = _sign(
                    b.ranks[perm[pa[0]]][perm[pa[1]]]
                    - b.ranks[perm[pb[0]]][perm[pb[1]]]
                )
                if ra != rb:
                    c += 1
            if c < best_value:
                descend(depth + 1, c)
            used[img] = False
        perm[depth] = None

    descend(0, 0)
    return OrdDistResult(best_value, best_perm, _disagreements_for(a, b, best_perm))


def d_ord_oracle(a: OrdinalSpace, b: OrdinalSpace, limit: int = 6):
    """Brute force straight off the definition: for every bijection, count
    ordered quadruples (x,y,z,w) whose two relations differ, assert the
    count is divisible by 8, divide. Slow; exists to check d_ord."""
    if a.n != b.n:
        raise ValidationError("spaces must have the same cardinality")
    n = a.n
    if n > limit:
        raise SizeLimitError("d_ord_oracle points", n, limit)
    ra = np.array(a.ranks)
    rb = np.array(b.ranks)
    rel_a = np.sign(ra[:, :, None, None] - ra[None, None, :, :])
    best = None
    for p in itertools.permutations(range(n)):
        rp = rb[np.ix_(p, p)]
        rel_b = np.sign(rp[:, :, None, None] - rp[None, None, :, :])
        raw = int((rel_a != rel_b).sum())
        assert raw % 8 == 0, "degenerate quadruples must never disagree"
        value = raw // 8
        if best is None or value < best[0]:
            best = (value, p)
    return best


@dataclass(frozen=True)
class MetricProbeReport:
    spaces: int
    pairs_checked: int
    triples_checked: int
    symmetry_violations: tuple
    identity_violations: tuple
    triangle_violations: tuple

    @property
    def ok(self):
        return not (
            self.symmetry_violations
            or self.identity_violations
            or self.triangle_violations
        )


def d_ord_is_metric_probe(
    spaces, max_triples: int | None = None, seed: int = 0
) -> MetricProbeReport:
    """Empirical metric-axiom check over a sample of same-size spaces:
    symmetry, zero exactly on isomorphic pairs, triangle inequality. Any
    violation would mean a bug, so the report names the offenders."""
    from .space import is_isomorphic

    spaces = list(spaces)
    if len({s.n for s in spaces}) > 1:
        raise ValidationError("metric probe needs equal cardinalities")
    values = {}
    sym = []
    ident = []
    for i, j in itertools.combinations_with_replacement(range(len(spaces)), 2):
        dij = d_ord(spaces[i], spaces[j]).value
        dji = d_ord(spaces[j], spaces[i]).value
        values[(i, j)] = values[(j, i)] = dij
        if dij != dji:
            sym.append((i, j, dij, dji))
        if (dij == 0) != is_isomorphic(spaces[i], spaces[j]):
            ident.append((i, j, dij))
    triples = list(itertools.permutations(range(len(spaces)), 3))
    if max_triples is not None and len(triples) > max_triples:
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(triples), size=max_triples, replace=False)
        triples = [triples[t] for t in sorted(idx)]
    tri = []
    for i, j, t in triples:
        if values[(i, t)] > values[(i, j)] + values[(j, t)]:
            tri.append((i, j, t, values[(i, t)], values[(i, j)], values[(j, t)]))
    return MetricProbeReport(
        spaces=len(spaces),
        pairs_checked=len(spaces) * (len(spaces) + 1) // 2,
        triples_checked=len(triples),
        symmetry_violations=tuple(sym),
        identity_violations=tuple(ident),
        triangle_violations=tuple(tri),
    )
