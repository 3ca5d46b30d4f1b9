"""Valid inequalities for the polytope of legal sequences and their checks.

Validity, dimension and facetness are decided on the enumerated vertex
cloud in exact integer arithmetic.  The affine rank of a point set is the
rank of its difference vectors, taken as the rank of their Gram matrix by
fraction-free elimination.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph import Instance, find_twins, members, precedes, upper_bound_m
from .model import build_formulation, enumerate_solutions, points_matrix
from .sequence import max_step_indices


class HypothesisError(ValueError):
    """Parameters violate a named hypothesis of an inequality family."""

    def __init__(self, hypothesis: str, detail: str):
        super().__init__(f"{hypothesis}: {detail}")
        self.hypothesis = hypothesis


@dataclass(frozen=True)
class Inequality:
    """``pix . x + piy . y <= pi0`` over an instance with ``n`` vertices and ``m`` steps.

    ``pix`` and ``piy`` map ``(vertex, step)`` to a nonzero rational.
    """

    n: int
    m: int
    pix: dict
    piy: dict
    pi0: Fraction
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("pix", "piy"):
            clean = {}
            for (v, i), a in getattr(self, name).items():
                if not (1 <= v <= self.n and 1 <= i <= self.m):
                    raise ValueError(f"{name} index ({v},{i}) out of range")
                a = Fraction(a)
                if a:
                    clean[(v, i)] = a
            object.__setattr__(self, name, clean)
        object.__setattr__(self, "pi0", Fraction(self.pi0))

    def evaluate(self, point) -> Fraction:
        lhs = sum((a * point.xval(u, i) for (u, i), a in self.pix.items()), Fraction(0))
        return lhs + sum((a * point.yval(v, i) for (v, i), a in self.piy.items()), Fraction(0))

    def integer_form(self) -> tuple[np.ndarray, int]:
        """Coefficient vector (model column order) and rhs scaled to integers."""
        scale = lcm(*(a.denominator for a in (*self.pix.values(), *self.piy.values(), self.pi0)))
        n, m = self.n, self.m
        vec = np.zeros(2 * n * m, dtype=np.int64)
        for (u, i), a in self.pix.items():
            vec[(u - 1) * m + i - 1] = int(a * scale)
        for (v, i), a in self.piy.items():
            vec[n * m + (v - 1) * m + i - 1] = int(a * scale)
        return vec, int(self.pi0 * scale)

    def x_slice(self, u: int) -> list[Fraction]:
        return [self.pix.get((u, i), Fraction(0)) for i in range(1, self.m + 1)]

    def y_slice(self, v: int) -> list[Fraction]:
        return [self.piy.get((v, i), Fraction(0)) for i in range(1, self.m + 1)]

    def is_y_nonneg(self) -> bool:
        """True for ``-y[v][j] <= 0`` up to positive scaling."""
        return (not self.pix and self.pi0 == 0 and len(self.piy) == 1
                and next(iter(self.piy.values())) < 0)

    def spec(self) -> str:
        return format_spec(self.kind, self.params)

    def __str__(self) -> str:
        terms = [(a, f"x_{u}_{i}") for (u, i), a in sorted(self.pix.items())]
        terms += [(a, f"y_{v}_{i}") for (v, i), a in sorted(self.piy.items())]
        parts = []
        for a, name in terms:
            mag = abs(a)
            tok = name if mag == 1 else f"{mag} {name}"
            if parts:
                parts.append(("- " if a < 0 else "+ ") + tok)
            else:
                parts.append(("-" if a < 0 else "") + tok)
        return f"{' '.join(parts) or '0'} <= {self.pi0}"


def _add(d: dict, key, a) -> None:
    d[key] = d.get(key, 0) + a


# -- exact rank -------------------------------------------------------------

def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by Bareiss fraction-free elimination."""
    a = [[int(v) for v in row] for row in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            f = a[r][col]
            row_r, row_p = a[r], a[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (p * row_r[c] - f * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def affine_rank(points: np.ndarray) -> int:
    """Maximum number of affinely independent rows (0 for an empty set)."""
    if len(points) == 0:
        return 0
    if len(points) == 1:
        return 1
    if np.abs(points).max() > 1 or len(points) > 2 ** 40:
        gram = (points[1:].astype(object) - points[0]).T.dot(points[1:].astype(object) - points[0])
        return integer_rank(gram.tolist()) + 1
    # 0/1 points: every partial sum is an integer well below 2**53, so the
    # BLAS product in float64 is exact
    diffs = points[1:].astype(np.float64) - points[0]
    gram = np.rint(diffs.T @ diffs).astype(np.int64)
    return integer_rank(gram.tolist()) + 1


@dataclass
class VertexCloud:
    """All binary feasible points of a model, one row per point."""

    points: np.ndarray
    n: int
    m: int
    form: str = "F1"

    @property
    def dim_ambient(self) -> int:
        return 2 * self.n * self.m

    def __len__(self) -> int:
        return len(self.points)


def build_cloud(inst: Instance, which="F1", lb: int = 1, m: int | None = None) -> VertexCloud:
    model = build_formulation(inst, which, lb, m)
    pts = enumerate_solutions(model, "collect")
    return VertexCloud(points_matrix(pts), inst.n, model.m, model.form)


def affine_dimension(cloud: VertexCloud) -> int:
    if len(cloud) == 0:
        raise ValueError("empty cloud")
    return affine_rank(cloud.points) - 1


def _slacks(ineq: Inequality, cloud: VertexCloud) -> np.ndarray:
    if len(cloud) == 0:
        raise ValueError("empty cloud")
    if (ineq.n, ineq.m) != (cloud.n, cloud.m):
        raise ValueError(f"inequality is over n={ineq.n}, m={ineq.m}; "
                         f"cloud over n={cloud.n}, m={cloud.m}")
    vec, rhs = ineq.integer_form()
    return rhs - cloud.points.astype(np.int64) @ vec


def check_valid(ineq: Inequality, cloud: VertexCloud) -> bool:
    return bool((_slacks(ineq, cloud) >= 0).all())


class FacetCheck(NamedTuple):
    is_facet: bool
    tight_rank: int   # affinely independent tight points
    cloud_dim: int
    valid: bool
    sanity: bool      # pi0 >= 0, and piy >= 0 unless the inequality is -y <= 0


def check_facet(ineq: Inequality, cloud: VertexCloud, cloud_dim: int | None = None) -> FacetCheck:
    """Facet iff valid and the tight points span a face of dimension ``dim - 1``.

    Pass ``cloud_dim`` to skip recomputing the cloud dimension.
    """
    slack = _slacks(ineq, cloud)
    valid = bool((slack >= 0).all())
    dim = affine_dimension(cloud) if cloud_dim is None else cloud_dim
    tight = cloud.points[slack == 0]
    trank = affine_rank(tight)
    facet = valid and trank == dim
    sanity = ineq.pi0 >= 0 and (ineq.is_y_nonneg() or all(a > 0 for a in ineq.piy.values()))
    return FacetCheck(facet, trank, dim, valid, bool(sanity))


def p3_dimension_formula(inst: Instance, budget: int | None = None) -> int:
    m = upper_bound_m(inst)
    universal = sum(1 for v in inst.vertices if inst.nbhd[v] == inst.full)
    steps = max_step_indices(inst, budget)
    return m * (inst.n - universal) + sum(steps.values()) - 1


# -- neighborhood helpers -----------------------------------------------------

def _nb(inst: Instance, v: int) -> set:
    return set(members(inst.nbhd[v]))


def n_r_set(inst: Instance, U: Iterable[int], r: int) -> frozenset:
    """Vertices with exactly ``r`` members of ``U`` in their neighborhood."""
    umask = 0
    for u in U:
        umask |= 1 << u
    if not umask:
        raise ValueError("U must be nonempty")
    p = umask.bit_count()
    if not 1 <= r <= p:
        raise ValueError(f"r must lie in 1..{p}")
    return frozenset(v for v in inst.vertices if (inst.nbhd[v] & umask).bit_count() == r)


def _check_step(i: int, lo: int, hi: int, name: str = "i") -> None:
    if not lo <= i <= hi:
        raise ValueError(f"{name}={i} must lie in {lo}..{hi}")


def _check_vertex(inst: Instance, *vs: int) -> None:
    for v in vs:
        if not 1 <= v <= inst.n:
            raise ValueError(f"vertex {v} out of range 1..{inst.n}")


def _horizon(inst: Instance, m: int | None) -> int:
    return upper_bound_m(inst) if m is None else m


# -- constructors ---------------------------------------------------------------

def make_x_nonneg(inst: Instance, u: int, i: int, m: int | None = None) -> Inequality:
    m = _horizon(inst, m)
    _check_vertex(inst, u)
    _check_step(i, 1, m)
    return Inequality(inst.n, m, {(u, i): -1}, {}, 0, "xnonneg", {"u": u, "i": i})


def make_y_nonneg(inst: Instance, v: int, i: int, m: int | None = None) -> Inequality:
    m = _horizon(inst, m)
    _check_vertex(inst, v)
    _check_step(i, 1, m)
    return Inequality(inst.n, m, {}, {(v, i): -1}, 0, "ynonneg", {"v": v, "i": i})


def make_restr1(inst: Instance, i: int, m: int | None = None) -> Inequality:
    """One vertex per step: ``sum_v y[v][i] <= 1``."""
    m = _horizon(inst, m)
    _check_step(i, 1, m)
    return Inequality(inst.n, m, {}, {(v, i): 1 for v in inst.vertices}, 1, "restr1", {"i": i})


def make_restr4(inst: Instance, u: int, i: int, m: int | None = None) -> Inequality:
    m = _horizon(inst, m)
    _check_vertex(inst, u)
    _check_step(i, 1, m)
    piy = {(v, i): 1 for v in members(inst.nbhd[u])}
    return Inequality(inst.n, m, {(u, i): 1}, piy, 1, "restr4", {"u": u, "i": i})


def make_restr5(inst: Instance, u: int, i: int, m: int | None = None) -> Inequality:
    m = _horizon(inst, m)
    _check_vertex(inst, u)
    _check_step(i, 1, m - 1)
    return Inequality(inst.n, m, {(u, i + 1): 1, (u, i): -1}, {}, 0, "restr5", {"u": u, "i": i})


def strong_sets(inst: Instance) -> tuple[frozenset, frozenset]:
    """Vertices whose neighborhood is inside every other one, and those whose neighborhood is V.

    Each set has at most one member on a twin-free instance.
    """
    if find_twins(inst):
        raise ValueError("instance has twin vertices; reduce it first")
    nbs = [inst.nbhd[v] for v in inst.vertices]
    inner = frozenset(u for u in inst.vertices if all(inst.nbhd[u] & ~b == 0 for b in nbs))
    outer = frozenset(w for w in inst.vertices if inst.nbhd[w] == inst.full)
    return inner, outer


def restr1_variant(inst: Instance, i: int, m: int | None = None) -> str:
    m = _horizon(inst, m)
    inner, outer = strong_sets(inst)
    tail = bool(inner) and i < m
    return {(False, False): "plain", (True, False): "tail",
            (False, True): "head", (True, True): "both"}[(tail, bool(outer))]


def make_restr1_strong(inst: Instance, i: int, m: int | None = None) -> Inequality:
    """Strongest one-vertex-per-step inequality for step ``i``.

    A vertex ``u`` whose neighborhood is inside all others can still be
    chosen after step ``i`` only if nothing was chosen at ``i``; a vertex
    ``w`` adjacent to everything is footprinted by any choice.
    """
    m = _horizon(inst, m)
    _check_step(i, 1, m)
    inner, outer = strong_sets(inst)
    variant = restr1_variant(inst, i, m)
    pix: dict = {}
    piy = {(v, i): 1 for v in inst.vertices}
    if variant in ("tail", "both"):
        (u,) = inner
        for j in range(i + 1, m + 1):
            _add(piy, (u, j), 1)
    if variant in ("head", "both"):
        (w,) = outer
        pix[(w, i if variant == "head" else m)] = 1
        for j in range(1, i):
            _add(piy, (w, j), 1)
    return Inequality(inst.n, m, pix, piy, 1, "restr1s", {"i": i})


def make_restr1_head(inst: Instance, i: int, m: int | None = None) -> Inequality:
    """``x[w][i] + sum_{j<i} y[w][j] + sum_v y[v][i] <= 1`` for ``w`` with ``N<w> = V``.

    When a vertex with a minimal neighborhood also exists, its neighborhood
    is ``{w}`` and the strong inequality splits into this one plus
    footprint-link rows for that vertex, so this is the facet there.
    """
    m = _horizon(inst, m)
    _check_step(i, 1, m)
    _, outer = strong_sets(inst)
    if not outer:
        raise ValueError("no vertex has the whole vertex set as neighborhood")
    (w,) = outer
    piy = {(v, i): 1 for v in inst.vertices}
    for j in range(1, i):
        _add(piy, (w, j), 1)
    return Inequality(inst.n, m, {(w, i): 1}, piy, 1, "restr1h", {"i": i})


def nova0_maximal(inst: Instance, W: Sequence[int]) -> bool:
    ws = set(W)
    return all(precedes(inst, W[0], v) for v in inst.vertices if v not in ws)


def make_nova0(inst: Instance, W: Sequence[int], i: int, m: int | None = None):
    """``sum_{w in W} y[w][i+1] <= sum_{u in N<w1>} (x[u][i] - x[u][i+1])``.

    Returns ``(inequality, maximal)``; maximality of ``W`` is the facet
    condition.
    """
    m = _horizon(inst, m)
    W = list(W)
    if not W:
        raise ValueError("W must be nonempty")
    _check_vertex(inst, *W)
    if len(set(W)) != len(W):
        raise ValueError("W has repeated vertices")
    _check_step(i, 1, m - 1)
    for w in W[1:]:
        if precedes(inst, W[0], w):
            raise HypothesisError("nesting", f"N<{w}> is not inside N<{W[0]}>")
    pix: dict = {}
    for u in members(inst.nbhd[W[0]]):
        pix[(u, i)] = -1
        pix[(u, i + 1)] = 1
    piy = {(w, i + 1): 1 for w in W}
    ineq = Inequality(inst.n, m, pix, piy, 0, "nova0", {"W": tuple(W), "i": i})
    return ineq, nova0_maximal(inst, W)


def make_supernova(inst: Instance, i: int, k: int, U, N, W, j, m: int | None = None,
                   kind: str = "supernova") -> Inequality:
    m = _horizon(inst, m)
    U, N, W, j = sorted(set(U)), sorted(set(N)), list(W), list(j)
    _check_step(i, 2, m)
    _check_step(k, 1, i, "k")
    if not U:
        raise HypothesisError("U", "U must be nonempty")
    _check_vertex(inst, *U, *N, *W)
    p = len(U)
    full_p = n_r_set(inst, U, p)
    if not set(N) <= full_p:
        raise HypothesisError("N", f"N must be inside the vertices adjacent to all of U {sorted(full_p)}")
    if not W:
        raise HypothesisError("W", "W must be nonempty")
    if len(set(W)) != len(W) or not set(W) <= full_p - set(N):
        raise HypothesisError("W", "W must be distinct vertices adjacent to all of U and outside N")
    for a, b in zip(W, W[1:]):
        if precedes(inst, a, b):
            raise HypothesisError("H1", f"N<{b}> is not inside N<{a}>")
    for v in N:
        if precedes(inst, W[-1], v):
            raise HypothesisError("H2", f"N<{v}> is not inside N<{W[-1]}>")
    t = len(W)
    if len(j) != t + 1:
        raise HypothesisError("j", f"need {t + 1} step bounds, got {len(j)}")
    if j[0] != 1 or j[-1] != i or any(a > b for a, b in zip(j, j[1:])):
        raise HypothesisError("j", f"steps must be non-decreasing from 1 to {i}, got {j}")

    pix = {(u, i): 1 for u in U}
    piy: dict = {}
    for v in N:
        _add(piy, (v, i), 1)
    for r, w in enumerate(W):
        for s in range(j[r], j[r + 1] + 1):
            _add(piy, (w, s), 1)
    umask = sum(1 << u for u in U)
    for v in inst.vertices:
        q = (inst.nbhd[v] & umask).bit_count()
        coef = p - 1 if q == p else q
        if coef:
            _add(piy, (v, k), coef)
    params = {"i": i, "k": k, "U": tuple(U), "N": tuple(N), "W": tuple(W), "j": tuple(j)}
    return Inequality(inst.n, m, pix, piy, p, kind, params)


def make_nova1(inst: Instance, u: int, i: int, N, W, j, m: int | None = None) -> Inequality:
    ineq = make_supernova(inst, i, i, [u], N, W, j, m, kind="nova1")
    params = {"u": u, "i": i, "N": ineq.params["N"], "W": ineq.params["W"], "j": ineq.params["j"]}
    return Inequality(ineq.n, ineq.m, ineq.pix, ineq.piy, ineq.pi0, "nova1", params)


def make_type1(inst: Instance, u: int, w: int, i: int, m: int | None = None) -> Inequality:
    """``x[u][i] + sum_{j<=i} y[w][j] <= 1`` for ``w`` in ``N<u>``."""
    _check_vertex(inst, u, w)
    if not inst.nbhd[u] >> w & 1:
        raise ValueError(f"{w} is not in N<{u}>")
    ineq = make_supernova(inst, i, i, [u], [], [w], [1, i], m)
    return Inequality(ineq.n, ineq.m, ineq.pix, ineq.piy, ineq.pi0, "type1",
                      {"u": u, "w": w, "i": i})


def make_type2(inst: Instance, u1: int, u2: int, w: int, i: int, k: int,
               m: int | None = None) -> Inequality:
    """``x[u1][i] + x[u2][i] + sum_{j<=i} y[w][j] + sum_{v in N<u1> | N<u2>} y[v][k] <= 2``."""
    _check_vertex(inst, u1, u2, w)
    if u1 == u2:
        raise ValueError("u1 and u2 must differ")
    if not (inst.nbhd[u1] & inst.nbhd[u2]) >> w & 1:
        raise ValueError(f"{w} is not in N<{u1}> & N<{u2}>")
    ineq = make_supernova(inst, i, k, [u1, u2], [], [w], [1, i], m)
    return Inequality(ineq.n, ineq.m, ineq.pix, ineq.piy, ineq.pi0, "type2",
                      {"u1": u1, "u2": u2, "w": w, "i": i, "k": k})


# -- facet prediction -------------------------------------------------------------

def normalize_nova1(N, W, j):
    """Make the last step interval of ``W`` non-degenerate.

    Trailing members of ``W`` whose interval collapses to step ``i`` are
    moved into ``N``; the inequality is unchanged.
    """
    N, W, j = list(N), list(W), list(j)
    t = len(W)
    if j[t - 1] < j[t]:
        return N, W, j
    r = max(s for s in range(1, t + 1) if j[s - 1] < j[s])
    return sorted(N + W[r:]), W[:r], j[:r + 1]


def nova1_conditions(inst: Instance, u: int, N, W, j) -> dict:
    N, W, j = normalize_nova1(N, W, j)
    t = len(W)
    leaf_ok = bool(N) or inst.nbhd[W[-1]] != 1 << u
    chain_ok = True
    for v in sorted(_nb(inst, u) - set(N) - set(W)):
        sup = {r for r in range(1, t + 1) if precedes(inst, W[r - 1], v)}
        sub = {r for r in range(1, t + 1) if precedes(inst, v, W[r - 1])}
        if not any(j[r - 1] < j[r] for r in sup & sub):
            chain_ok = False
            break
    return {"H3": leaf_ok, "H4": chain_ok}


def type2_conditions(inst: Instance, u1: int, u2: int, w: int) -> dict:
    pre = lambda a, b: precedes(inst, a, b)  # noqa: E731
    n1, n2, nw = _nb(inst, u1), _nb(inst, u2), _nb(inst, w)
    cap, cup = n1 & n2, n1 | n2
    only = {1: sorted(n1 - n2), 2: sorted(n2 - n1)}
    own = {1: n1, 2: n2}
    other = {1: u2, 2: u1}

    def escapes(z: int, r: int) -> bool:
        return bool(nw - ({other[r]} | _nb(inst, z)))

    h1 = all(pre(v, w) and pre(w, v) for v in cap - {w})
    h2 = all(any(pre(w, v) for v in only[r]) for r in (1, 2))
    sym = sorted(cup - cap)
    h3 = all(
        any(len(_nb(inst, v) & _nb(inst, x) & {u1, u2}) == 1 and pre(x, v)
            for x in sym if x != v)
        for v in sym if not pre(w, v))
    h4 = all(any(escapes(z, r) for z in only[r]) for r in (1, 2))
    h5 = any(pre(w, v) and nw - ({u1, u2} | _nb(inst, v)) for v in sorted(cup - {w}))
    h6 = all(
        (any(pre(w, v) for v in only[r]) and any(pre(w, v) for v in own[3 - r] - {w}))
        or any(escapes(z, r) for z in only[r])
        for r in (1, 2))
    return {"H1": h1, "H2": h2, "H3": h3, "H4": h4, "H5": bool(h5), "H6": h6}


def predict_facet(kind: str, params: dict, inst: Instance, m: int | None = None) -> bool:
    """Predicted facetness of an inequality of ``kind`` for ``P``.

    Assumes a connected, twin-free instance with at least three vertices.
    """
    m = _horizon(inst, m)
    p = params
    if kind == "ynonneg":
        return True
    if kind == "xnonneg":
        return p["i"] == m
    if kind == "restr5":
        return all(inst.nbhd[v] != 1 << p["u"] for v in inst.vertices)
    if kind == "restr4":
        nu = sorted(_nb(inst, p["u"]))
        return p["i"] == 1 or all(any(precedes(inst, v, w) for w in nu if w != v) for v in nu)
    if kind == "restr1":
        return restr1_variant(inst, p["i"], m) == "plain"
    if kind == "restr1s":
        return restr1_variant(inst, p["i"], m) != "both"
    if kind == "restr1h":
        return True
    if kind in ("nova0", "restr3"):
        W = p["W"] if kind == "nova0" else (p["v"],)
        return nova0_maximal(inst, list(W))
    if kind == "type1":
        return all(nova1_conditions(inst, p["u"], [], [p["w"]], [1, p["i"]]).values())
    if kind == "nova1":
        return all(nova1_conditions(inst, p["u"], p["N"], p["W"], p["j"]).values())
    if kind == "type2":
        h = type2_conditions(inst, p["u1"], p["u2"], p["w"])
        if p["k"] == p["i"]:
            return h["H1"] and h["H2"]
        if p["k"] == 1:
            return h["H1"] and h["H3"] and h["H4"]
        return h["H1"] and h["H3"] and h["H5"] and h["H6"]
    raise ValueError(f"no facet prediction for kind {kind!r}")


# -- specs -----------------------------------------------------------------------

_INT_KEYS = {"u", "v", "w", "i", "k", "u1", "u2"}
_LIST_KEYS = {"U", "N", "W", "j"}


def format_spec(kind: str, params: dict) -> str:
    parts = [kind]
    for key, val in params.items():
        if isinstance(val, (tuple, list)):
            val = ",".join(map(str, val))
        parts.append(f"{key}={val}")
    return " ".join(parts)


def parse_spec(text: str) -> tuple[str, dict]:
    """Parse ``kind key=value ...``; list values are comma separated."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty inequality spec")
    kind, params = tokens[0], {}
    for tok in tokens[1:]:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ValueError(f"malformed parameter {tok!r}; expected key=value")
        if key in _LIST_KEYS:
            params[key] = tuple(int(x) for x in val.split(",") if x)
        elif key in _INT_KEYS:
            params[key] = int(val)
        else:
            raise ValueError(f"unknown parameter {key!r}")
    return kind, params


def build_inequality(kind: str, params: dict, inst: Instance, m: int | None = None) -> Inequality:
    p = params
    try:
        if kind == "xnonneg":
            return make_x_nonneg(inst, p["u"], p["i"], m)
        if kind == "ynonneg":
            return make_y_nonneg(inst, p["v"], p["i"], m)
        if kind == "restr1":
            return make_restr1(inst, p["i"], m)
        if kind == "restr1s":
            return make_restr1_strong(inst, p["i"], m)
        if kind == "restr1h":
            return make_restr1_head(inst, p["i"], m)
        if kind == "restr3":
            return make_nova0(inst, [p["v"]], p["i"], m)[0]
        if kind == "restr4":
            return make_restr4(inst, p["u"], p["i"], m)
        if kind == "restr5":
            return make_restr5(inst, p["u"], p["i"], m)
        if kind == "nova0":
            return make_nova0(inst, p["W"], p["i"], m)[0]
        if kind == "nova1":
            return make_nova1(inst, p["u"], p["i"], p.get("N", ()), p["W"], p["j"], m)
        if kind == "supernova":
            return make_supernova(inst, p["i"], p["k"], p["U"], p.get("N", ()), p["W"], p["j"], m)
        if kind == "type1":
            return make_type1(inst, p["u"], p["w"], p["i"], m)
        if kind == "type2":
            return make_type2(inst, p["u1"], p["u2"], p["w"], p["i"], p["k"], m)
    except KeyError as exc:
        raise ValueError(f"{kind} needs parameter {exc.args[0]}") from None
    raise ValueError(f"unknown inequality kind {kind!r}")


# -- sweeps ----------------------------------------------------------------------

def family_members(inst: Instance, m: int | None = None, max_w: int = 2):
    """Every inequality of the predicted families, as ``(kind, params)``."""
    m = _horizon(inst, m)
    V = list(inst.vertices)
    for v in V:
        for i in range(1, m + 1):
            yield "ynonneg", {"v": v, "i": i}
            yield "xnonneg", {"u": v, "i": i}
            yield "restr4", {"u": v, "i": i}
            if i < m:
                yield "restr5", {"u": v, "i": i}
    has_outer = bool(strong_sets(inst)[1])
    for i in range(1, m + 1):
        yield "restr1", {"i": i}
        yield "restr1s", {"i": i}
        if has_outer:
            yield "restr1h", {"i": i}
    for i in range(1, m):
        for size in range(1, max_w + 1):
            for w1 in V:
                inside = [w for w in V if w != w1 and not precedes(inst, w1, w)]
                for rest in combinations(inside, size - 1):
                    yield "nova0", {"W": (w1, *rest), "i": i}
    for i in range(2, m + 1):
        for u in V:
            for w in sorted(_nb(inst, u)):
                yield "type1", {"u": u, "w": w, "i": i}
        for u1, u2 in combinations(V, 2):
            for w in sorted(_nb(inst, u1) & _nb(inst, u2)):
                for k in range(1, i + 1):
                    yield "type2", {"u1": u1, "u2": u2, "w": w, "i": i, "k": k}


class AuditRow(NamedTuple):
    kind: str
    params: dict
    predicted: bool
    actual: bool
    valid: bool


def audit(inst: Instance, cloud: VertexCloud | None = None, m: int | None = None,
          members_=None) -> list[AuditRow]:
    """Compare :func:`predict_facet` with the rank test for every family member."""
    cloud = build_cloud(inst, "F1", 1, m) if cloud is None else cloud
    dim = affine_dimension(cloud)
    rows = []
    for kind, params in (members_ if members_ is not None else family_members(inst, cloud.m)):
        ineq = build_inequality(kind, params, inst, cloud.m)
        chk = check_facet(ineq, cloud, dim)
        rows.append(AuditRow(kind, params, predict_facet(kind, params, inst, cloud.m),
                             chk.is_facet, chk.valid))
    return rows


def random_supernova_params(inst: Instance, rng: random.Random, m: int | None = None,
                            tries: int = 1000) -> dict:
    """Draw parameters satisfying every hypothesis of the general family."""
    m = _horizon(inst, m)
    if m < 2:
        raise ValueError("the general family needs m >= 2")
    V = list(inst.vertices)
    for _ in range(tries):
        i = rng.randint(2, m)
        k = rng.randint(1, i)
        U = sorted(rng.sample(V, rng.randint(1, min(3, len(V)))))
        full_p = sorted(n_r_set(inst, U, len(U)))
        if not full_p:
            continue
        # build a nested chain greedily from a random start
        pool = full_p[:]
        rng.shuffle(pool)
        W = [pool.pop()]
        for v in pool:
            if len(W) < 3 and not precedes(inst, W[-1], v) and rng.random() < 0.6:
                W.append(v)
        rest = [v for v in full_p if v not in W and not precedes(inst, W[-1], v)]
        N = sorted(v for v in rest if rng.random() < 0.5)
        t = len(W)
        inner = sorted(rng.randint(1, i) for _ in range(t - 1))
        j = [1, *inner, i]
        return {"i": i, "k": k, "U": tuple(U), "N": tuple(N), "W": tuple(W), "j": tuple(j)}
    raise ValueError("could not draw parameters satisfying the hypotheses")


# -- twins ------------------------------------------------------------------------

def lift_twin(ineq: Inequality, inst: Instance, u: int, u_new: int) -> tuple[Inequality, Inequality]:
    """Lift a valid inequality to the instance where ``u`` gets a twin ``u_new``.

    The first lift keeps the x-coefficients on ``u``, the second moves them to
    ``u_new``; both copy the y-coefficients of ``u`` onto ``u_new``.
    """
    _check_vertex(inst, u)
    if u_new != inst.n + 1:
        raise ValueError(f"the twin must receive id {inst.n + 1}, got {u_new}")
    if any(a < 0 for a in ineq.x_slice(u)):
        raise ValueError(f"x-coefficients of {u} must be nonnegative")
    piy = dict(ineq.piy)
    for (v, i), a in ineq.piy.items():
        if v == u:
            piy[(u_new, i)] = a
    moved = {((u_new if v == u else v), i): a for (v, i), a in ineq.pix.items()}
    params = dict(ineq.params, lift_of=u)
    first = Inequality(inst.n + 1, ineq.m, dict(ineq.pix), piy, ineq.pi0, ineq.kind + "+lift1", params)
    second = Inequality(inst.n + 1, ineq.m, moved, piy, ineq.pi0, ineq.kind + "+lift2", params)
    return first, second
