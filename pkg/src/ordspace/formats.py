"""Text formats for spaces, distance matrices, comparison lists, and ball
inclusion diagrams.

All formats allow blank lines and '#' comment lines. Point indices in files
are 1-based; the Python API is 0-based throughout.

rank matrix      line "n k", then n rows of n integers
distance matrix  n rows of n comma-separated values, decimal or p/q literals
comparisons      line "n", then lines "x y z w REL" with REL in {LT, EQ, GT}
diagram          line "hasse m", then m lines "v ID : members" and
                 arc lines "a CHILD PARENT" (vertex ids, child -> parent)
"""

from __future__ import annotations

from fractions import Fraction

from .balls import HasseDiagram
from .errors import ValidationError
from .space import ComparisonList, DistanceMatrix, OrdinalSpace, Relation


def _payload_lines(text):
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_rank_matrix(text: str) -> OrdinalSpace:
    lines = _payload_lines(text)
    if not lines:
        raise ValidationError("empty rank matrix file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValidationError(f"expected header 'n k', got {lines[0]!r}")
    try:
        n, k = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValidationError(f"bad header {lines[0]!r}") from exc
    if len(lines) != n + 1:
        raise ValidationError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for line in lines[1:]:
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise ValidationError(f"bad matrix row {line!r}") from exc
        rows.append(row)
    s = OrdinalSpace(n, k, tuple(tuple(r) for r in rows))
    return s


def format_rank_matrix(s: OrdinalSpace, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{s.n} {s.k}")
    width = len(str(s.k))
    for row in s.ranks:
        lines.append(" ".join(str(v).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def _parse_scalar(tok: str) -> Fraction:
    tok = tok.strip()
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad numeric literal {tok!r}") from exc


def parse_distance_csv(text: str) -> DistanceMatrix:
    lines = _payload_lines(text)
    if not lines:
        raise ValidationError("empty distance file")
    rows = [[_parse_scalar(tok) for tok in line.split(",")] for line in lines]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValidationError("distance matrix must be square")
    return DistanceMatrix(n, tuple(tuple(r) for r in rows))


def format_distance_csv(d: DistanceMatrix, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    for row in d.values:
        lines.append(",".join(_scalar_str(v) for v in row))
    return "\n".join(lines) + "\n"


def _scalar_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


_REL_NAMES = {"LT": Relation.LT, "EQ": Relation.EQ, "GT": Relation.GT}


def parse_comparisons(text: str) -> ComparisonList:
    lines = _payload_lines(text)
    if not lines:
        raise ValidationError("empty comparison file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValidationError(f"bad point count {lines[0]!r}") from exc
    entries = []
    for line in lines[1:]:
        toks = line.split()
        if len(toks) != 5:
            raise ValidationError(f"expected 'x y z w REL', got {line!r}")
        try:
            x, y, z, w = (int(t) for t in toks[:4])
        except ValueError as exc:
            raise ValidationError(f"bad point index in {line!r}") from exc
        rel = _REL_NAMES.get(toks[4].upper())
        if rel is None:
            raise ValidationError(f"bad relation {toks[4]!r} in {line!r}")
        for p in (x, y, z, w):
            if not 1 <= p <= n:
                raise ValidationError(f"point index {p} outside 1..{n} in {line!r}")
        entries.append((x - 1, y - 1, z - 1, w - 1, rel))
    return ComparisonList(n, tuple(entries))


def format_comparisons(c: ComparisonList, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {t}" for t in comment.splitlines())
    lines.append(str(c.n))
    rev = {v: k for k, v in _REL_NAMES.items()}
    for x, y, z, w, rel in c.entries:
        lines.append(f"{x + 1} {y + 1} {z + 1} {w + 1} {rev[rel]}")
    return "\n".join(lines) + "\n"


def parse_hasse(text: str) -> HasseDiagram:
    """Read a ball inclusion diagram. Vertices are sets of 1-based point
    ids in the file and frozensets of 0-based indices in the API."""
    lines = _payload_lines(text)
    if not lines:
        raise ValidationError("empty diagram file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "hasse":
        raise ValidationError(f"expected header 'hasse m', got {lines[0]!r}")
    try:
        m = int(head[1])
    except ValueError as exc:
        raise ValidationError(f"bad vertex count {head[1]!r}") from exc
    by_id = {}
    order = []
    arcs = []
    for line in lines[1:]:
        toks = line.split()
        if toks[0] == "v":
            if len(toks) < 4 or toks[2] != ":":
                raise ValidationError(f"expected 'v ID : members', got {line!r}")
            try:
                vid = int(toks[1])
                members = frozenset(int(t) - 1 for t in toks[3:])
            except ValueError as exc:
                raise ValidationError(f"bad vertex line {line!r}") from exc
            if vid in by_id:
                raise ValidationError(f"duplicate vertex id {vid}")
            if any(p < 0 for p in members):
                raise ValidationError(f"point ids are 1-based in {line!r}")
            by_id[vid] = members
            order.append(vid)
        elif toks[0] == "a":
            if len(toks) != 3:
                raise ValidationError(f"expected 'a CHILD PARENT', got {line!r}")
            try:
                arcs.append((int(toks[1]), int(toks[2])))
            except ValueError as exc:
                raise ValidationError(f"bad arc line {line!r}") from exc
        else:
            raise ValidationError(f"unrecognized diagram line {line!r}")
    if len(order) != m:
        raise ValidationError(f"expected {m} vertices, found {len(order)}")
    index = {vid: i for i, vid in enumerate(order)}
    for u, v in arcs:
        if u not in index or v not in index:
            raise ValidationError(f"arc ({u}, {v}) names an unknown vertex id")
    return HasseDiagram(
        vertices=tuple(by_id[vid] for vid in order),
        arcs=tuple((index[u], index[v]) for u, v in arcs),
    )


def format_hasse(h: HasseDiagram, comment: str | None = None) -> str:
    """Write a diagram whose vertices are frozensets of point indices.
    Vertices are emitted sorted by (size, members) for stable bytes."""
    for v in h.vertices:
        if not isinstance(v, frozenset):
            raise ValidationError("only set-labeled diagrams have a text form")
    order = sorted(range(len(h.vertices)), key=lambda i: (len(h.vertices[i]), sorted(h.vertices[i])))
    new_id = {old: pos + 1 for pos, old in enumerate(order)}
    lines = []
    if comment:
        lines.extend(f"# {t}" for t in comment.splitlines())
    lines.append(f"hasse {len(h.vertices)}")
    for pos, old in enumerate(order):
        members = " ".join(str(p + 1) for p in sorted(h.vertices[old]))
        lines.append(f"v {pos + 1} : {members}")
    for u, v in sorted((new_id[u], new_id[v]) for u, v in h.arcs):
        lines.append(f"a {u} {v}")
    return "\n".join(lines) + "\n"
