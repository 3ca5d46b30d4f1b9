"""LP relaxations, a bounded-variable primal simplex and the root cut loop."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .graph import Instance
from .model import Model, build_formulation
from .polytope import Inequality
from .separation import FractionalPoint, precompute, separate_type1, separate_type2
from .sequence import greedy_sequence

TOL = 1e-7


@dataclass
class LinearProgram:
    """``max c.x`` subject to ``A x (<= | =) b`` and ``0 <= x <= upper``."""

    A: np.ndarray
    senses: list
    b: np.ndarray
    c: np.ndarray
    upper: np.ndarray
    n: int = 0
    m: int = 0
    names: list = field(default_factory=list)

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float).reshape(len(self.b), len(self.c))
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if len(self.senses) != len(self.b) or len(self.upper) != len(self.c):
            raise ValueError("inconsistent LP dimensions")
        if any(s not in ("<=", "=") for s in self.senses):
            raise ValueError("row senses must be '<=' or '='")
        if not (np.isfinite(self.A).all() and np.isfinite(self.b).all() and np.isfinite(self.c).all()):
            raise ValueError("LP data must be finite")

    @property
    def n_rows(self) -> int:
        return len(self.b)

    @property
    def n_cols(self) -> int:
        return len(self.c)

    def with_cuts(self, cuts: Sequence[Inequality]) -> "LinearProgram":
        if not cuts:
            return self
        rows, rhs = [], []
        for cut in cuts:
            vec, pi0 = cut.integer_form()
            if len(vec) != self.n_cols:
                raise ValueError("cut dimension does not match the LP")
            rows.append(vec.astype(float))
            rhs.append(float(pi0))
        return LinearProgram(np.vstack([self.A, rows]), self.senses + ["<="] * len(cuts),
                             np.concatenate([self.b, rhs]), self.c, self.upper,
                             self.n, self.m, self.names)


def relax(model: Model) -> LinearProgram:
    A, senses, b = model.matrix()
    c = np.zeros(model.n_vars)
    c[model.n * model.m:] = 1.0
    return LinearProgram(A, senses, b, c, np.ones(model.n_vars), model.n, model.m, model.var_names())


class LPResult(NamedTuple):
    status: str          # "optimal", "infeasible", "unbounded" or "iteration-limit"
    objective: float | None
    x: np.ndarray | None
    iterations: int

    def point(self, lp: LinearProgram) -> FractionalPoint:
        if self.x is None:
            raise ValueError(f"no primal solution (status {self.status})")
        return FractionalPoint.from_vector(lp.n, lp.m, self.x)


class _Tableau:
    """Dense tableau ``B^-1 [A | slacks | artificials]`` with nonbasics at a bound."""

    def __init__(self, T, beta, basis, upper, at_upper):
        self.T = T
        self.beta = beta
        self.basis = basis
        self.upper = upper
        self.at_upper = at_upper

    def run(self, cost: np.ndarray, max_iter: int, blocked: np.ndarray) -> tuple[str, int]:
        T, upper = self.T, self.upper
        rows = T.shape[0]
        degenerate = 0
        bland = False
        for it in range(max_iter):
            d = cost - cost[self.basis] @ T
            d[self.basis] = 0.0
            gain = np.where(self.at_upper, -d, d)
            gain[blocked] = 0.0
            cand = np.flatnonzero(gain > TOL)
            if cand.size == 0:
                return "optimal", it
            j = int(cand[0]) if bland else int(cand[np.argmax(gain[cand])])
            direction = -1.0 if self.at_upper[j] else 1.0
            alpha = direction * T[:, j]
            step, leave, to_upper = upper[j], -1, False
            for r in range(rows):
                a = alpha[r]
                if a > TOL:
                    t, hit_upper = self.beta[r] / a, False
                elif a < -TOL and np.isfinite(upper[self.basis[r]]):
                    t, hit_upper = (upper[self.basis[r]] - self.beta[r]) / -a, True
                else:
                    continue
                t = max(t, 0.0)
                if t < step - TOL:
                    better = True
                elif t > step + TOL or leave < 0:
                    # ties with a bound flip keep the flip
                    better = False
                elif bland:
                    better = self.basis[r] < self.basis[leave]
                else:
                    better = abs(a) > abs(alpha[leave])
                if better:
                    step, leave, to_upper = t, r, hit_upper
            if not np.isfinite(step):
                return "unbounded", it
            self.beta -= step * alpha
            if step <= TOL:
                degenerate += 1
                if degenerate > 5 * rows:
                    bland = True
            else:
                degenerate = 0
            if leave < 0:
                self.at_upper[j] = not self.at_upper[j]
                continue
            out = self.basis[leave]
            self.at_upper[out] = to_upper
            entering_value = (upper[j] if self.at_upper[j] else 0.0) + direction * step
            piv = T[leave, j]
            T[leave] /= piv
            others = np.flatnonzero(T[:, j])
            for r in others:
                if r != leave:
                    T[r] -= T[r, j] * T[leave]
            self.basis[leave] = j
            self.at_upper[j] = False
            self.beta[leave] = entering_value
        return "iteration-limit", max_iter


def solve_lp(lp: LinearProgram, max_iter: int | None = None) -> LPResult:
    """Two-phase bounded-variable primal simplex.

    Dantzig pricing, switching to Bland's rule after ``5 * rows``
    consecutive degenerate pivots.
    """
    A, b = lp.A.copy(), lp.b.copy()
    rows, cols = A.shape
    le = np.array([s == "<=" for s in lp.senses], dtype=bool)
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    n_slack = int(le.sum())
    slack_cols = np.zeros((rows, n_slack))
    slack_of = {}
    for k, r in enumerate(np.flatnonzero(le)):
        slack_cols[r, k] = -1.0 if neg[r] else 1.0
        slack_of[r] = cols + k
    need_art = [r for r in range(rows) if not (le[r] and not neg[r])]
    art = np.zeros((rows, len(need_art)))
    for k, r in enumerate(need_art):
        art[r, k] = 1.0
    T = np.hstack([A, slack_cols, art])
    total = T.shape[1]
    art_start = cols + n_slack
    upper = np.concatenate([lp.upper, np.full(n_slack, np.inf), np.full(len(need_art), np.inf)])
    basis = np.empty(rows, dtype=int)
    art_of = {r: art_start + k for k, r in enumerate(need_art)}
    for r in range(rows):
        basis[r] = art_of.get(r, slack_of.get(r))
    tab = _Tableau(T, b.copy(), basis, upper, np.zeros(total, dtype=bool))
    max_iter = max_iter or 50 * (rows + total) + 100
    blocked = np.zeros(total, dtype=bool)
    used = 0

    if need_art:
        cost1 = np.zeros(total)
        cost1[art_start:] = -1.0
        status, it = tab.run(cost1, max_iter, blocked)
        used += it
        if status != "optimal":
            return LPResult(status, None, None, used)
        if tab.beta[np.isin(tab.basis, np.arange(art_start, total))].sum() > 1e-6:
            return LPResult("infeasible", None, None, used)
        upper[art_start:] = 0.0
        blocked[art_start:] = True

    cost2 = np.zeros(total)
    cost2[:cols] = lp.c
    status, it = tab.run(cost2, max_iter - used, blocked)
    used += it
    if status != "optimal":
        return LPResult(status, None, None, used)
    x = np.where(tab.at_upper, upper, 0.0)
    x[tab.basis] = tab.beta
    xs = np.clip(x[:cols], 0.0, lp.upper)
    return LPResult("optimal", float(lp.c @ xs), xs, used)


class RootResult(NamedTuple):
    history: list
    cuts_added: int
    cuts: list
    status: str


def root_cut_loop(inst: Instance, which="F3", rounds: int = 10, cuts=("type1", "type2"),
                  lb: int | None = None, m: int | None = None) -> RootResult:
    """Alternate LP solves with Type I / Type II separation at the root.

    ``lb`` defaults to the greedy sequence length.  Cuts are kept for the
    rest of the loop.
    """
    if rounds < 0:
        raise ValueError("rounds must be nonnegative")
    unknown = set(cuts) - {"type1", "type2"}
    if unknown:
        raise ValueError(f"unknown cut families {sorted(unknown)}")
    lb = len(greedy_sequence(inst)) if lb is None else lb
    model = build_formulation(inst, which, lb, m)
    lp = relax(model)
    res = solve_lp(lp)
    if res.status != "optimal":
        return RootResult([], 0, [], res.status)
    history = [res.objective]
    state = precompute(inst)
    added: list = []
    for _ in range(rounds):
        point = res.point(lp)
        new = []
        if "type1" in cuts:
            new += separate_type1(inst, state, point)
        else:
            state.active = set(inst.vertices)
        if "type2" in cuts:
            new += separate_type2(inst, state, point)
        if not new:
            break
        lp = lp.with_cuts(new)
        added += new
        res = solve_lp(lp)
        if res.status != "optimal":
            return RootResult(history, len(added), added, res.status)
        history.append(res.objective)
    return RootResult(history, len(added), added, "optimal")
