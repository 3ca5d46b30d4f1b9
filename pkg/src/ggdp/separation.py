"""Separation of Type I and Type II cuts from a fractional point.

Both routines use fixed thresholds (1.1 and 2.2) rather than bare
violation, so only clearly violated cuts are returned.  Candidate vertices
``w`` are precomputed once per instance; the active set keeps two cuts of
one round from sharing the same ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .graph import Instance, members, precedes
from .polytope import Inequality, make_type1, make_type2

EPS = 1e-6
TYPE1_THRESHOLD = 1.1
TYPE2_THRESHOLD = 2.2
# a value within this distance of a threshold counts as equal to it
THRESHOLD_TOL = 1e-9


@dataclass
class FractionalPoint:
    """Values of ``x`` and ``y`` keyed by ``(vertex, step)``; absent means 0."""

    n: int
    m: int
    x: dict = field(default_factory=dict)
    y: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("x", "y"):
            for (v, i), val in getattr(self, name).items():
                if not (1 <= v <= self.n and 1 <= i <= self.m):
                    raise ValueError(f"{name}_{v}_{i} out of range for n={self.n}, m={self.m}")
                if not -1e-9 <= val <= 1 + 1e-9:
                    raise ValueError(f"{name}_{v}_{i} = {val} is outside [0, 1]")

    def xv(self, u: int, i: int) -> float:
        return self.x.get((u, i), 0.0)

    def yv(self, v: int, i: int) -> float:
        return self.y.get((v, i), 0.0)

    @classmethod
    def from_vector(cls, n: int, m: int, vec) -> "FractionalPoint":
        """Read a vector in model column order, clipping round-off into [0, 1]."""
        if len(vec) != 2 * n * m:
            raise ValueError(f"vector has {len(vec)} entries, expected {2 * n * m}")
        x, y = {}, {}
        for col, val in enumerate(vec):
            val = float(val)
            if -1e-9 <= val <= 0:
                continue
            if 1 <= val <= 1 + 1e-9:
                val = 1.0
            target, rest = (x, col) if col < n * m else (y, col - n * m)
            v, i = divmod(rest, m)
            target[(v + 1, i + 1)] = val
        return cls(n, m, x, y)

    @classmethod
    def from_point(cls, point) -> "FractionalPoint":
        return cls.from_vector(point.n, point.m, point.vector())


def parse_point(text: str, n: int, m: int) -> FractionalPoint:
    """Parse lines ``x u i value`` / ``y v i value``; ``#`` starts a comment."""
    x, y = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] not in ("x", "y"):
            raise ValueError(f"line {lineno}: expected 'x|y vertex step value', got {raw!r}")
        try:
            v, i, val = int(parts[1]), int(parts[2]), float(parts[3])
        except ValueError:
            raise ValueError(f"line {lineno}: bad number in {raw!r}") from None
        target = x if parts[0] == "x" else y
        if (v, i) in target:
            raise ValueError(f"line {lineno}: duplicate entry {parts[0]}_{v}_{i}")
        target[(v, i)] = val
    return FractionalPoint(n, m, x, y)


def format_point(point: FractionalPoint) -> str:
    lines = [f"x {u} {i} {val:g}" for (u, i), val in sorted(point.x.items()) if val]
    lines += [f"y {v} {i} {val:g}" for (v, i), val in sorted(point.y.items()) if val]
    return "\n".join(lines) + "\n"


def is_fractional(val: float, eps: float = EPS) -> bool:
    frac = val - int(val // 1)
    return min(frac, 1 - frac) > eps


@dataclass
class SeparationState:
    w_sets: dict
    w_pair_sets: dict
    active: set


def candidate_set(inst: Instance, u: int) -> tuple:
    """Vertices ``w`` of ``N<u>`` incomparable with every other member of ``N<u>``."""
    nu = list(members(inst.nbhd[u]))
    out = []
    for w in nu:
        if inst.nbhd[w].bit_count() < 2:
            continue
        if all(precedes(inst, w, v) and precedes(inst, v, w) for v in nu if v != w):
            out.append(w)
    return tuple(out)


def _escapes(inst: Instance, w: int, other: int, z: int) -> bool:
    return bool(inst.nbhd[w] & ~((1 << other) | inst.nbhd[z]))


def precompute(inst: Instance) -> SeparationState:
    w_sets = {u: candidate_set(inst, u) for u in inst.vertices}
    pairs = {}
    for u1, u2 in combinations(inst.vertices, 2):
        only1 = list(members(inst.nbhd[u1] & ~inst.nbhd[u2]))
        only2 = list(members(inst.nbhd[u2] & ~inst.nbhd[u1]))
        common = sorted(set(w_sets[u1]) & set(w_sets[u2]))
        ws = tuple(w for w in common
                   if any(_escapes(inst, w, u2, z) for z in only1)
                   and any(_escapes(inst, w, u1, z) for z in only2))
        if ws:
            pairs[(u1, u2)] = ws
    return SeparationState(w_sets, pairs, set(inst.vertices))


def _check_dims(inst: Instance, point: FractionalPoint) -> None:
    if point.n != inst.n:
        raise ValueError(f"point has n={point.n}, instance has n={inst.n}")


def separate_type1(inst: Instance, state: SeparationState, point: FractionalPoint) -> list[Inequality]:
    """Resets the active set, then scans ``(u, w)`` pairs in ascending order."""
    _check_dims(inst, point)
    m = point.m
    state.active = set(inst.vertices)
    cuts = []
    for u in inst.vertices:
        for w in state.w_sets[u]:
            if w not in state.active:
                continue
            total = point.yv(w, 1)
            for i in range(2, m + 1):
                total += point.yv(w, i)
                if point.xv(u, i) + total > TYPE1_THRESHOLD + THRESHOLD_TOL:
                    cuts.append(make_type1(inst, u, w, i, m))
                    state.active.discard(w)
                    break
    return cuts


def separate_type2(inst: Instance, state: SeparationState, point: FractionalPoint) -> list[Inequality]:
    """Scans pairs ``u1 < u2`` over the vertices left active by Type I."""
    _check_dims(inst, point)
    m = point.m
    cuts = []
    for (u1, u2), ws in state.w_pair_sets.items():
        union = list(members(inst.nbhd[u1] | inst.nbhd[u2]))
        for w in ws:
            if w not in state.active:
                continue
            total = point.yv(w, 1)
            found = False
            for i in range(2, m + 1):
                total += point.yv(w, i)
                x1, x2 = point.xv(u1, i), point.xv(u2, i)
                if not (is_fractional(x1) and is_fractional(x2)):
                    continue
                for k in range(1, i + 1):
                    if not is_fractional(point.yv(w, k)):
                        continue
                    val = x1 + x2 + total + sum(point.yv(v, k) for v in union)
                    if val > TYPE2_THRESHOLD + THRESHOLD_TOL:
                        cuts.append(make_type2(inst, u1, u2, w, i, k, m))
                        state.active.discard(w)
                        found = True
                        break
                if found:
                    break
    return cuts


def separate(inst: Instance, state: SeparationState, point: FractionalPoint,
             type1: bool = True, type2: bool = True) -> list[Inequality]:
    cuts = []
    if type1:
        cuts += separate_type1(inst, state, point)
    elif type2:
        state.active = set(inst.vertices)
    if type2:
        cuts += separate_type2(inst, state, point)
    return cuts
