"""Integer programming formulations F1..F8 over step variables.

Variables ``x[u][i]`` (``u`` not yet footprinted at step ``i``) and
``y[v][i]`` (``v`` chosen at step ``i``) for ``u, v`` in ``1..n`` and ``i`` in
``1..m``.  Columns are ordered x block then y block, vertex ascending, step
ascending.

Constraint families::

    (1)  sum_v y[v][i] <= 1
    (2)  sum_i y[v][i] <= 1
    (3)  y[v][i+1] <= sum_{u in N<v>} (x[u][i] - x[u][i+1])
    (4)  x[u][i] + sum_{v in N<u>} y[v][i] <= 1
    (5)  x[u][i+1] <= x[u][i]
    (6)  sum_{v in N<u>} y[v][1] >= 1 - x[u][1]
    (7)  sum_{v in N<u>} y[v][i+1] >= x[u][i] - x[u][i+1]
    (8)  sum_v y[v][i] = 1                       for i <= LB
    (9)  sum_v y[v][i+1] <= sum_v y[v][i]        for i >= LB
    (10) sum_i sum_{v in N<u>} y[v][i] >= 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .graph import Instance, members, upper_bound_m
from .sequence import LegalSequence, make_sequence

FAMILIES = {
    "F1": {1},
    "F2": {1, 6},
    "F3": {8},
    "F4": {6, 8},
    "F5": {1, 10},
    "F6": {1, 6, 10},
    "F7": {8, 10},
    "F8": {6, 8, 10},
}
FORMULATIONS = tuple(FAMILIES)

MAX_ENUM_VARS = 64


def _norm_form(which) -> str:
    name = f"F{which}" if isinstance(which, int) else str(which).upper()
    if name not in FAMILIES:
        raise ValueError(f"unknown formulation {which!r}; expected one of {FORMULATIONS}")
    return name


def families(which) -> frozenset:
    """Constraint families present in a formulation (numbered as above)."""
    fam = set(FAMILIES[_norm_form(which)]) | {2, 3, 4, 5}
    if 6 in fam:
        fam.add(7)
    if 8 in fam:
        fam.add(9)
    return frozenset(fam)


class Row(NamedTuple):
    name: str
    terms: tuple  # ((column, coefficient), ...) sorted by column
    sense: str    # "<=" or "="
    rhs: int


def _row(name: str, coeffs: dict, sense: str, rhs: int) -> Row:
    if sense == ">=":
        coeffs = {c: -a for c, a in coeffs.items()}
        sense, rhs = "<=", -rhs
    terms = tuple(sorted((c, a) for c, a in coeffs.items() if a))
    return Row(name, terms, sense, rhs)


@dataclass
class Model:
    inst: Instance
    form: str
    m: int
    lb: int
    rows: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.inst.n

    @property
    def n_vars(self) -> int:
        return 2 * self.n * self.m

    @property
    def families(self) -> frozenset:
        return families(self.form)

    def xcol(self, u: int, i: int) -> int:
        return (u - 1) * self.m + (i - 1)

    def ycol(self, v: int, i: int) -> int:
        return self.n * self.m + (v - 1) * self.m + (i - 1)

    def var_name(self, col: int) -> str:
        return var_name(self.n, self.m, col)

    def var_names(self) -> list[str]:
        return [self.var_name(c) for c in range(self.n_vars)]

    def objective(self) -> list[tuple[int, int]]:
        return [(self.ycol(v, i), 1) for v in self.inst.vertices for i in range(1, self.m + 1)]

    def violated_rows(self, vec: Sequence) -> list[Row]:
        out = []
        for row in self.rows:
            lhs = sum(a * vec[c] for c, a in row.terms)
            if (row.sense == "<=" and lhs > row.rhs) or (row.sense == "=" and lhs != row.rhs):
                out.append(row)
        return out

    def is_feasible(self, point) -> bool:
        vec = point.vector() if hasattr(point, "vector") else point
        if any(v not in (0, 1) for v in vec):
            return False
        return not self.violated_rows(vec)

    def matrix(self) -> tuple[np.ndarray, list[str], np.ndarray]:
        """Dense ``(A, senses, b)`` of all rows."""
        A = np.zeros((len(self.rows), self.n_vars))
        for r, row in enumerate(self.rows):
            for c, a in row.terms:
                A[r, c] = a
        return A, [row.sense for row in self.rows], np.array([row.rhs for row in self.rows], float)


def var_name(n: int, m: int, col: int) -> str:
    kind, rest = ("x", col) if col < n * m else ("y", col - n * m)
    v, i = divmod(rest, m)
    return f"{kind}_{v + 1}_{i + 1}"


def build_formulation(inst: Instance, which="F1", lb: int = 1, m: int | None = None) -> Model:
    """Build formulation ``which`` for ``inst``.

    ``m`` defaults to :func:`~ggdp.graph.upper_bound_m`; ``lb`` is only used
    by families (8)-(9).
    """
    form = _norm_form(which)
    m = upper_bound_m(inst) if m is None else m
    if m < 1:
        raise ValueError(f"horizon m must be positive, got {m}")
    if not 1 <= lb <= m:
        raise ValueError(f"lb must lie in 1..{m}, got {lb}")
    model = Model(inst, form, m, lb)
    fam = model.families
    V = list(inst.vertices)
    N = {v: list(members(inst.nbhd[v])) for v in V}
    X, Y = model.xcol, model.ycol
    rows = model.rows

    def steps_sum(i: int) -> dict:
        return {Y(v, i): 1 for v in V}

    if 1 in fam:
        for i in range(1, m + 1):
            rows.append(_row(f"c1_{i}", steps_sum(i), "<=", 1))
    for v in V:
        rows.append(_row(f"c2_{v}", {Y(v, i): 1 for i in range(1, m + 1)}, "<=", 1))
    for v in V:
        for i in range(1, m):
            co = {Y(v, i + 1): 1}
            for u in N[v]:
                co[X(u, i)] = co.get(X(u, i), 0) - 1
                co[X(u, i + 1)] = co.get(X(u, i + 1), 0) + 1
            rows.append(_row(f"c3_{v}_{i}", co, "<=", 0))
    for u in V:
        for i in range(1, m + 1):
            co = {X(u, i): 1}
            co.update({Y(v, i): 1 for v in N[u]})
            rows.append(_row(f"c4_{u}_{i}", co, "<=", 1))
    for u in V:
        for i in range(1, m):
            rows.append(_row(f"c5_{u}_{i}", {X(u, i + 1): 1, X(u, i): -1}, "<=", 0))
    if 6 in fam:
        for u in V:
            co = {Y(v, 1): 1 for v in N[u]}
            co[X(u, 1)] = 1
            rows.append(_row(f"c6_{u}", co, ">=", 1))
        for u in V:
            for i in range(1, m):
                co = {Y(v, i + 1): 1 for v in N[u]}
                co[X(u, i)] = -1
                co[X(u, i + 1)] = 1
                rows.append(_row(f"c7_{u}_{i}", co, ">=", 0))
    if 8 in fam:
        for i in range(1, lb + 1):
            rows.append(_row(f"c8_{i}", steps_sum(i), "=", 1))
        for i in range(lb, m):
            co = {Y(v, i + 1): 1 for v in V}
            co.update({Y(v, i): -1 for v in V})
            rows.append(_row(f"c9_{i}", co, "<=", 0))
    if 10 in fam:
        for u in V:
            rows.append(_row(f"c10_{u}", {Y(v, i): 1 for v in N[u] for i in range(1, m + 1)},
                             ">=", 1))
    return model


def _format_terms(terms: Iterable[tuple[int, int]], name) -> str:
    parts = []
    for c, a in terms:
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        tok = name(c) if mag == 1 else f"{mag} {name(c)}"
        if not parts:
            parts.append(tok if a > 0 else f"- {tok}")
        else:
            parts.append(f"{sign} {tok}")
    return " ".join(parts) if parts else "0"


def export_lp(model: Model) -> str:
    """CPLEX-LP text of the model; byte-identical for identical models."""
    name = model.var_name
    out = [f"\\ {model.form} n={model.n} m={model.m} lb={model.lb}",
           "Maximize",
           f" obj: {_format_terms(model.objective(), name)}",
           "Subject To"]
    for row in model.rows:
        out.append(f" {row.name}: {_format_terms(row.terms, name)} {row.sense} {row.rhs}")
    out.append("Binary")
    names = model.var_names()
    for k in range(0, len(names), 8):
        out.append(" " + " ".join(names[k:k + 8]))
    out.append("End")
    return "\n".join(out) + "\n"


# -- integral points ---------------------------------------------------------

@dataclass(frozen=True)
class Point:
    """Binary point stored step-wise as bitsets.

    ``x[i-1]`` is the set of vertices ``u`` with ``x[u][i] = 1`` and ``y[i-1]``
    the set of vertices chosen at step ``i``.
    """

    n: int
    m: int
    x: tuple
    y: tuple

    @classmethod
    def ones_zero(cls, n: int, m: int) -> "Point":
        full = (1 << (n + 1)) - 2
        return cls(n, m, (full,) * m, (0,) * m)

    def xval(self, u: int, i: int) -> int:
        return self.x[i - 1] >> u & 1

    def yval(self, v: int, i: int) -> int:
        return self.y[i - 1] >> v & 1

    def footprint(self, vertices: Iterable[int], i: int) -> "Point":
        """Footprint ``vertices`` at step ``i``: zero their x from ``i`` on."""
        s = 0
        for v in vertices:
            s |= 1 << v
        x = tuple(row & ~s if j >= i - 1 else row for j, row in enumerate(self.x))
        return Point(self.n, self.m, x, self.y)

    def choose(self, inst: Instance, v: int, i: int) -> "Point":
        """Choose ``v`` at step ``i`` (footprinting ``N<v>`` from step ``i`` on)."""
        p = self.footprint(members(inst.nbhd[v]), i)
        y = list(p.y)
        y[i - 1] |= 1 << v
        return Point(self.n, self.m, p.x, tuple(y))

    def vector(self) -> list[int]:
        n, m = self.n, self.m
        vec = [0] * (2 * n * m)
        for i in range(m):
            for u in members(self.x[i]):
                vec[(u - 1) * m + i] = 1
            for v in members(self.y[i]):
                vec[n * m + (v - 1) * m + i] = 1
        return vec

    @classmethod
    def from_vector(cls, n: int, m: int, vec: Sequence) -> "Point":
        x = [0] * m
        y = [0] * m
        for col, val in enumerate(vec):
            if val not in (0, 1):
                raise ValueError(f"non-binary value {val} at column {col}")
            if not val:
                continue
            kind, rest = (x, col) if col < n * m else (y, col - n * m)
            v, i = divmod(rest, m)
            kind[i] |= 1 << (v + 1)
        return cls(n, m, tuple(x), tuple(y))

    def objective(self) -> int:
        return sum(row.bit_count() for row in self.y)


def points_matrix(points: Sequence[Point]) -> np.ndarray:
    if not points:
        return np.zeros((0, 0), dtype=np.int8)
    n, m = points[0].n, points[0].m
    M = np.zeros((len(points), 2 * n * m), dtype=np.int8)
    for r, p in enumerate(points):
        for i in range(m):
            for u in members(p.x[i]):
                M[r, (u - 1) * m + i] = 1
            for v in members(p.y[i]):
                M[r, n * m + (v - 1) * m + i] = 1
    return M


def point_from_sequence(inst: Instance, seq, m: int | None = None) -> Point:
    """Canonical point of a legal sequence: apply ``choose(v_i, i)`` to ``(1, 0)``."""
    m = upper_bound_m(inst) if m is None else m
    verts = seq.vertices if isinstance(seq, LegalSequence) else tuple(seq)
    make_sequence(inst, verts)
    if len(verts) > m:
        raise ValueError(f"sequence of length {len(verts)} exceeds horizon m={m}")
    p = Point.ones_zero(inst.n, m)
    for i, v in enumerate(verts, 1):
        p = p.choose(inst, v, i)
    return p


def sequence_from_point(inst: Instance, point: Point) -> LegalSequence:
    """Read the chosen vertices step by step, skipping empty steps."""
    seq = []
    for i, row in enumerate(point.y, 1):
        chosen = list(members(row))
        if len(chosen) > 1:
            raise ValueError(f"step {i} chooses several vertices: {chosen}")
        seq.extend(chosen)
    return make_sequence(inst, seq)


# -- enumeration -------------------------------------------------------------

def _subsets(mask: int) -> Iterator[int]:
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def enumerate_solutions(model: Model, mode: str = "count", max_vars: int = MAX_ENUM_VARS):
    """Count or collect every binary point satisfying the model.

    Steps are filled in order; at each step a y-row (nothing or a single
    vertex) is chosen, then every x-row compatible with (4), (5) and, when
    present, (6)-(7).  Counting memoizes on the state carried between steps.
    """
    if mode not in ("count", "collect"):
        raise ValueError(f"mode must be 'count' or 'collect', got {mode!r}")
    if model.n_vars > max_vars:
        raise ValueError(f"model has {model.n_vars} variables; enumeration limit is {max_vars}")
    inst, m, lb = model.inst, model.m, model.lb
    fam = model.families
    exact_x = 6 in fam
    ordered = 8 in fam
    dominate = 10 in fam
    nb = inst.nbhd
    full = inst.full
    verts = list(inst.vertices)

    def moves(i: int, xprev: int, chosen: int, last: int):
        """Yield ``(vertex_or_0, forced_mask)`` admissible at step ``i``."""
        if not ordered or i > lb:
            yield 0, 0
            if ordered and last == 0:
                return
        for v in verts:
            if chosen >> v & 1:
                continue
            if i >= 2 and not nb[v] & xprev:
                continue
            yield v, nb[v]

    def xrows(base: int):
        return (base,) if exact_x else _subsets(base)

    if mode == "count":
        @lru_cache(maxsize=None)
        def count(i: int, xprev: int, chosen: int, cov: int, last: int) -> int:
            if i > m:
                return 1 if (not dominate or cov == full) else 0
            total = 0
            for v, forced in moves(i, xprev, chosen, last):
                nchosen = chosen | (1 << v) if v else chosen
                ncov = cov | forced if dominate else 0
                for x in xrows(xprev & ~forced):
                    total += count(i + 1, x, nchosen, ncov, 1 if v else 0)
            return total

        return count(1, full, 0, 0, 1)

    out: list[Point] = []
    xs = [0] * m
    ys = [0] * m

    def walk(i: int, xprev: int, chosen: int, cov: int, last: int) -> None:
        if i > m:
            if not dominate or cov == full:
                out.append(Point(inst.n, m, tuple(xs), tuple(ys)))
            return
        for v, forced in moves(i, xprev, chosen, last):
            ys[i - 1] = (1 << v) if v else 0
            nchosen = chosen | (1 << v) if v else chosen
            for x in xrows(xprev & ~forced):
                xs[i - 1] = x
                walk(i + 1, x, nchosen, cov | forced, 1 if v else 0)
        ys[i - 1] = 0

    walk(1, full, 0, 0, 1)
    return out


def count_solutions(inst: Instance, which, lb: int = 1, m: int | None = None) -> int:
    return enumerate_solutions(build_formulation(inst, which, lb, m), "count")
