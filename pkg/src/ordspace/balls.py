"""Balls, ball systems, and containment (Hasse) diagrams.

A ball is determined by a center and a cut of that center's rank spectrum:
member set {x : rank(c, x) <= t} for t running over the spectrum values.
Ball identity in a BallSet is the member set; provenance keeps every
(center, threshold) that produced it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import SizeLimitError, ValidationError
from .space import OrdinalSpace

DEFAULT_VERTEX_LIMIT = 64
DEFAULT_PERM_LIMIT = 8


@dataclass(frozen=True)
class Ball:
    center: int
    threshold: int
    members: tuple  # sorted point indices

    def __post_init__(self):
        if self.center not in self.members:
            raise ValidationError("a ball contains its center")


@dataclass(frozen=True)
class BallSet:
    """All distinct balls of a space, sorted by (size, members)."""

    n: int
    members: tuple  # tuple of frozensets
    provenance: tuple  # tuple of tuples of (center, threshold), aligned

    def __len__(self):
        return len(self.members)

    def as_sets(self):
        return set(self.members)

    def provenance_of(self, member_set):
        for m, prov in zip(self.members, self.provenance):
            if m == frozenset(member_set):
                return prov
        raise KeyError(f"{member_set} is not a ball")


@dataclass(frozen=True)
class HasseDiagram:
    """Covering digraph of a finite family of sets ordered by inclusion,
    stored as an abstract digraph: arcs point child -> parent."""

    vertices: tuple  # hashable labels, deterministic order
    arcs: tuple  # (child_index, parent_index)

    def __post_init__(self):
        m = len(self.vertices)
        if len(set(self.vertices)) != m:
            raise ValidationError("duplicate vertices")
        for u, v in self.arcs:
            if not (0 <= u < m and 0 <= v < m) or u == v:
                raise ValidationError(f"bad arc ({u}, {v})")
        if len(set(self.arcs)) != len(self.arcs):
            raise ValidationError("duplicate arcs")
        if self._topo_levels() is None:
            raise ValidationError("arcs must form an acyclic digraph")

    def out_neighbors(self, u):
        return [v for (a, v) in self.arcs if a == u]

    def in_degree_sequence(self):
        deg = [0] * len(self.vertices)
        for _, v in self.arcs:
            deg[v] += 1
        return deg

    def out_degree_sequence(self):
        deg = [0] * len(self.vertices)
        for u, _ in self.arcs:
            deg[u] += 1
        return deg

    def _topo_levels(self):
        """Longest-path-from-a-source level per vertex; None on a cycle."""
        m = len(self.vertices)
        indeg = [0] * m
        succ = [[] for _ in range(m)]
        for u, v in self.arcs:
            succ[u].append(v)
            indeg[v] += 1
        level = [0] * m
        queue = [i for i in range(m) if indeg[i] == 0]
        seen = 0
        while queue:
            u = queue.pop()
            seen += 1
            for v in succ[u]:
                level[v] = max(level[v], level[u] + 1)
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        return level if seen == m else None

    def invariants(self):
        """Per-vertex (in-degree, out-degree, source level): the refinement
        used to cut the isomorphism search."""
        lv = self._topo_levels()
        ind = self.in_degree_sequence()
        outd = self.out_degree_sequence()
        return [(ind[i], outd[i], lv[i]) for i in range(len(self.vertices))]


def spectrum(s: OrdinalSpace, center: int):
    """Sorted distinct ranks from the center, 0 (the center itself) first."""
    if not 0 <= center < s.n:
        raise ValidationError(f"center {center} out of range")
    return tuple(sorted({s.ranks[center][x] for x in range(s.n)}))


def balls_at(s: OrdinalSpace, center: int):
    """The ball chain at a center, one ball per spectrum cut, ascending."""
    chain = []
    for t in spectrum(s, center):
        members = tuple(x for x in range(s.n) if s.ranks[center][x] <= t)
        chain.append(Ball(center, t, members))
    return chain


def ball_set(s: OrdinalSpace) -> BallSet:
    by_members = {}
    for c in range(s.n):
        for b in balls_at(s, c):
            by_members.setdefault(frozenset(b.members), []).append(
                (b.center, b.threshold)
            )
    order = sorted(by_members, key=lambda m: (len(m), sorted(m)))
    return BallSet(
        n=s.n,
        members=tuple(order),
        provenance=tuple(tuple(sorted(by_members[m])) for m in order),
    )


def hasse(bs: BallSet) -> HasseDiagram:
    """Covering digraph of the ball family under set inclusion."""
    sets = list(bs.members)
    m = len(sets)
    idx = range(m)
    below = [[sets[a] < sets[b] for b in idx] for a in idx]
    arcs = []
    for a in idx:
        for b in idx:
            if not below[a][b]:
                continue
            if any(below[a][c] and below[c][b] for c in idx):
                continue
            arcs.append((a, b))
    return HasseDiagram(tuple(sets), tuple(sorted(arcs)))


# ---------------------------------------------------------------------------
# digraph isomorphism

def find_hasse_isomorphism(
    a: HasseDiagram, b: HasseDiagram, limit: int = DEFAULT_VERTEX_LIMIT
):
    """Arc-preserving vertex bijection between two diagrams, or None.

    Isomorphism of the abstract digraphs; vertex labels carry no weight.
    Backtracking restricted to vertices with equal (in-degree, out-degree,
    source level) invariants.
    """
    ma, mb = len(a.vertices), len(b.vertices)
    if max(ma, mb) > limit:
        raise SizeLimitError("hasse isomorphism", max(ma, mb), limit)
    if ma != mb:
        return None
    inv_a, inv_b = a.invariants(), b.invariants()
    if sorted(inv_a) != sorted(inv_b):
        return None

    adj_a = [[False] * ma for _ in range(ma)]
    for u, v in a.arcs:
        adj_a[u][v] = True
    adj_b = [[False] * mb for _ in range(mb)]
    for u, v in b.arcs:
        adj_b[u][v] = True

    # map rarest invariant classes first
    freq = {}
    for t in inv_a:
        freq[t] = freq.get(t, 0) + 1
    order = sorted(range(ma), key=lambda i: (freq[inv_a[i]], inv_a[i], i))
    image = [-1] * ma
    used = [False] * mb

    def extend(pos):
        if pos == ma:
            return True
        u = order[pos]
        for cand in range(mb):
            if used[cand] or inv_b[cand] != inv_a[u]:
                continue
            ok = True
            for prev_pos in range(pos):
                w = order[prev_pos]
                if adj_a[u][w] != adj_b[cand][image[w]] or adj_a[w][u] != adj_b[image[w]][cand]:
                    ok = False
                    break
            if ok:
                image[u] = cand
                used[cand] = True
                if extend(pos + 1):
                    return True
                used[cand] = False
                image[u] = -1
        return False

    return tuple(image) if extend(0) else None


def hasse_isomorphic(
    a: HasseDiagram, b: HasseDiagram, limit: int = DEFAULT_VERTEX_LIMIT
) -> bool:
    return find_hasse_isomorphism(a, b, limit=limit) is not None


def ball_preserving_bijection(
    a: OrdinalSpace, b: OrdinalSpace, limit: int = DEFAULT_PERM_LIMIT
):
    """Point bijection mapping balls onto balls in both directions, or None.

    Since a point bijection acts injectively on member sets, checking that
    every ball of a lands in b's ball family plus equal family sizes already
    forces the map to be onto, so preimages of b-balls are a-balls too.
    """
    if a.n > limit:
        raise SizeLimitError("ball preserving bijection", a.n, limit)
    if a.n != b.n:
        return None
    balls_a = ball_set(a).as_sets()
    balls_b = ball_set(b).as_sets()
    if len(balls_a) != len(balls_b):
        return None
    for f in itertools.permutations(range(b.n)):
        if all(frozenset(f[x] for x in ball) in balls_b for ball in balls_a):
            return f
    return None


def hasse_dot(h: HasseDiagram, names=None) -> str:
    """Deterministic DOT rendering; set-valued vertices get {x1,x2} labels."""
    lines = ["digraph hasse {"]
    for i, v in enumerate(h.vertices):
        lines.append(f'  v{i} [label="{_vertex_label(v, names)}"];')
    for u, v in sorted(h.arcs):
        lines.append(f"  v{u} -> v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _vertex_label(v, names):
    if isinstance(v, frozenset):
        if names is None:
            names = {}
        parts = [names.get(p, f"x{p + 1}") for p in sorted(v)]
        return "{" + ",".join(parts) + "}"
    return str(v)
