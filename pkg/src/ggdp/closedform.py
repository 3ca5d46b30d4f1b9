"""Closed-form Grundy numbers for paths and webs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable


@dataclass(frozen=True)
class PathSpec:
    """A contiguous interval ``lo..hi`` of a path and the members of C inside it.

    Vertices of the interval may be isolated outside C; the good
    configuration recursion allows that.
    """

    lo: int
    hi: int
    members: frozenset = frozenset()

    @classmethod
    def of(cls, n: int, closed: Iterable[int]) -> "PathSpec":
        return cls(1, n, frozenset(closed))


def is_good_configuration(spec: PathSpec) -> bool:
    if spec.hi < spec.lo:
        raise ValueError(f"empty interval {spec.lo}..{spec.hi}")
    c = spec.members

    @lru_cache(maxsize=None)
    def good(lo: int, hi: int) -> bool:
        size = hi - lo + 1
        if size == 1:
            return lo in c
        if size == 2:
            return not (lo in c and hi in c)
        return ((lo not in c and good(lo + 2, hi))
                or (hi not in c and good(lo, hi - 2)))

    return good(spec.lo, spec.hi)


def path_grundy(n: int, closed: Iterable[int]) -> int:
    """Grundy number of ``P_n``: ``n`` for a good configuration, else ``n - 1``."""
    closed = frozenset(closed)
    if n < 1:
        raise ValueError("path needs n >= 1")
    if not closed <= set(range(1, n + 1)):
        raise ValueError(f"C must be a subset of 1..{n}")
    if n == 1 and not closed:
        raise ValueError("P_1 with C empty is not a valid instance")
    return n if is_good_configuration(PathSpec.of(n, closed)) else n - 1


def web_m(n: int, k: int, closed: Iterable[int]) -> int:
    return n - 2 * k if frozenset(closed) == frozenset(range(n)) else n - 2 * k + 1


def _path_order(n: int, k: int, verts: list[int]) -> list[int] | None:
    """Order ``verts`` along the path they induce in ``W_n^k``, or None."""
    vs = set(verts)

    def adjacent(a: int, b: int) -> bool:
        d = abs(a - b)
        return 0 < min(d, n - d) <= k

    nbrs = {a: [b for b in verts if adjacent(a, b)] for a in verts}
    if len(verts) == 1:
        return list(verts)
    ends = [a for a in verts if len(nbrs[a]) == 1]
    if len(ends) != 2 or any(len(nbrs[a]) > 2 for a in verts):
        return None
    if sum(len(x) for x in nbrs.values()) != 2 * (len(verts) - 1):
        return None
    order = [min(ends)]
    prev = None
    while len(order) < len(vs):
        cur = order[-1]
        step = [b for b in nbrs[cur] if b != prev]
        if not step:
            return None
        prev = cur
        order.append(step[0])
    return order


def web_grundy(n: int, k: int, closed: Iterable[int]) -> int:
    """Grundy number of the web ``W_n^k``; ``closed`` uses labels ``0..n-1``."""
    closed = frozenset(closed)
    if k < 1 or n < 2 * (k + 1):
        raise ValueError(f"web needs k >= 1 and n >= 2(k+1), got n={n}, k={k}")
    if not closed <= set(range(n)):
        raise ValueError(f"C must be a subset of 0..{n - 1}")
    m = web_m(n, k, closed)
    if len(closed) == n:
        return m
    t = n - 2 * k - 1
    for i in sorted(set(range(n)) - closed):
        rest = [(i + s) % n for s in range(k + 1, n - k)]
        assert len(rest) == t
        order = _path_order(n, k, rest)
        if order is None:
            continue
        local = {pos + 1 for pos, v in enumerate(order) if v in closed}
        if is_good_configuration(PathSpec.of(t, local)):
            return m
    return m - 1
