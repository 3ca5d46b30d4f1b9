"""Graph instances with mixed open/closed neighborhoods.

An instance is a simple graph on vertices ``1..n`` together with a set ``C``
of vertices whose neighborhood is closed.  The neighborhood ``N<v>`` used
everywhere in this package is ``N[v]`` for ``v`` in ``C`` and ``N(v)``
otherwise.

Vertex sets are handled internally as Python integers used as bitsets, with
vertex ``v`` stored in bit ``v`` (bit 0 is never set).  Public functions
return ``frozenset`` objects.
"""

from __future__ import annotations

import random
import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class InstanceError(ValueError):
    """Raised for malformed instance files or invalid instances."""


class GenerationError(RuntimeError):
    """Raised when a random generator cannot meet its constraints."""


# -- bitset helpers ----------------------------------------------------------

def vmask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> Iterator[int]:
    """Yield the vertices of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full_mask(n: int) -> int:
    return (1 << (n + 1)) - 2


# -- the instance type -------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """A GGDP instance ``G;C``.

    ``edges`` may be given as any iterable of vertex pairs; it is normalized
    to a frozenset of ``(u, v)`` tuples with ``u < v``.  Instances are
    immutable.
    """

    n: int
    edges: frozenset = frozenset()
    closed: frozenset = frozenset()
    adj: tuple = field(init=False, repr=False, compare=False)
    nbhd: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise InstanceError(f"vertex count must be a positive integer, got {n!r}")
        norm = set()
        adj = [0] * (n + 1)
        for e in self.edges:
            u, v = e
            for w in (u, v):
                if not 1 <= w <= n:
                    raise InstanceError(f"edge ({u},{v}): vertex {w} out of range 1..{n}")
            if u == v:
                raise InstanceError(f"self-loop at vertex {u}")
            a, b = min(u, v), max(u, v)
            norm.add((a, b))
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        closed = frozenset(self.closed)
        for v in closed:
            if not 1 <= v <= n:
                raise InstanceError(f"closed vertex {v} out of range 1..{n}")
        for v in range(1, n + 1):
            if not adj[v] and v not in closed:
                raise InstanceError(f"vertex {v} is isolated and not in C")
        nbhd = [0] + [adj[v] | ((1 << v) if v in closed else 0) for v in range(1, n + 1)]
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "closed", closed)
        object.__setattr__(self, "adj", tuple(adj))
        object.__setattr__(self, "nbhd", tuple(nbhd))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def is_leaf(self, v: int) -> bool:
        return self.degree(v) == 1


def _check_vertex(inst: Instance, v: int) -> None:
    if not 1 <= v <= inst.n:
        raise InstanceError(f"vertex {v} out of range 1..{inst.n}")


def neighborhood(inst: Instance, v: int) -> frozenset:
    """Return ``N<v>``: the closed neighborhood if ``v`` is in C, else the open one."""
    _check_vertex(inst, v)
    return frozenset(members(inst.nbhd[v]))


def delta(inst: Instance) -> int:
    return min(inst.nbhd[v].bit_count() for v in inst.vertices)


def upper_bound_m(inst: Instance) -> int:
    """Return ``m = n - delta(G;C) + 1``, an upper bound on the Grundy number."""
    return inst.n - delta(inst) + 1


def precedes(inst: Instance, v1: int, v2: int) -> bool:
    """True iff ``N<v2>`` is not contained in ``N<v1>``, i.e. ``(v1, v2)`` is legal."""
    _check_vertex(inst, v1)
    _check_vertex(inst, v2)
    if v1 == v2:
        raise ValueError("precedes() needs two distinct vertices")
    return bool(inst.nbhd[v2] & ~inst.nbhd[v1])


def is_clutter(inst: Instance) -> bool:
    nb = inst.nbhd
    return all(nb[v] & ~nb[u] for u in inst.vertices for v in inst.vertices if u != v)


def is_strong_clutter(inst: Instance) -> bool:
    nb = inst.nbhd
    return all((nb[u] & ~nb[v]).bit_count() >= 2
               for u in inst.vertices for v in inst.vertices if u != v)


def find_twins(inst: Instance) -> list[tuple[int, int]]:
    """Unordered pairs ``(u, v)``, ``u < v``, with equal neighborhoods."""
    groups: dict[int, list[int]] = {}
    for v in inst.vertices:
        groups.setdefault(inst.nbhd[v], []).append(v)
    pairs = []
    for vs in groups.values():
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                pairs.append((vs[a], vs[b]))
    return sorted(pairs)


def induced(inst: Instance, keep: Sequence[int]) -> Instance:
    """Induced sub-instance on ``keep``, relabeled ``1..len(keep)`` in the given order."""
    pos = {v: i + 1 for i, v in enumerate(keep)}
    edges = [(pos[u], pos[v]) for u, v in inst.edges if u in pos and v in pos]
    closed = [pos[v] for v in keep if v in inst.closed]
    return Instance(len(keep), edges, closed)


def reduce_twins(inst: Instance) -> tuple[Instance, list[int]]:
    """Delete one vertex of each twin pair until the instance is twin free.

    Returns the reduced instance (relabeled in increasing order of the kept
    original ids) and the list of removed original ids.
    """
    labels = list(inst.vertices)
    removed = []
    cur = inst
    while True:
        twins = find_twins(cur)
        if not twins:
            return cur, removed
        _, v = twins[0]
        removed.append(labels[v - 1])
        keep = [w for w in cur.vertices if w != v]
        labels = [labels[w - 1] for w in keep]
        cur = induced(cur, keep)


def components(inst: Instance) -> list[list[int]]:
    seen = 0
    comps = []
    for s in inst.vertices:
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            for v in members(frontier):
                nxt |= inst.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(list(members(comp)))
    return comps


def is_connected(inst: Instance) -> bool:
    return len(components(inst)) == 1


def split_components(inst: Instance) -> list[tuple[Instance, tuple[int, ...]]]:
    """Split into connected components.

    Each entry is ``(component_instance, labels)`` where ``labels[i-1]`` is
    the original id of component vertex ``i``.
    """
    return [(induced(inst, comp), tuple(comp)) for comp in components(inst)]


def add_twin(inst: Instance, u: int) -> Instance:
    """Append vertex ``n+1`` as a twin of ``u``."""
    _check_vertex(inst, u)
    new = inst.n + 1
    edges = set(inst.edges)
    edges.update((w, new) for w in members(inst.adj[u]))
    closed = set(inst.closed)
    if u in inst.closed:
        edges.add((u, new))
        closed.add(new)
    return Instance(new, edges, closed)


def relabel(inst: Instance, perm: Sequence[int]) -> Instance:
    """Rename vertex ``v`` to ``perm[v-1]``."""
    if sorted(perm) != list(inst.vertices):
        raise ValueError("perm must be a permutation of 1..n")
    edges = [(perm[u - 1], perm[v - 1]) for u, v in inst.edges]
    return Instance(inst.n, edges, [perm[v - 1] for v in inst.closed])


def disjoint_union(a: Instance, b: Instance) -> Instance:
    shift = a.n
    edges = list(a.edges) + [(u + shift, v + shift) for u, v in b.edges]
    closed = list(a.closed) + [v + shift for v in b.closed]
    return Instance(a.n + b.n, edges, closed)


# -- generators --------------------------------------------------------------

def gen_path(n: int, closed: Iterable[int] = ()) -> Instance:
    return Instance(n, [(i, i + 1) for i in range(1, n)], closed)


def gen_cycle(n: int, closed: Iterable[int] = ()) -> Instance:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Instance(n, [(i, i % n + 1) for i in range(1, n + 1)], closed)


def gen_complete(n: int, closed: Iterable[int] = ()) -> Instance:
    return Instance(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)], closed)


def gen_bull(closed: Iterable[int] | None = None) -> Instance:
    """The bull graph; C defaults to all five vertices."""
    closed = range(1, 6) if closed is None else closed
    return Instance(5, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 5)], closed)


def web_edges(n: int, k: int) -> list[tuple[int, int]]:
    """Edges of the web ``W_n^k`` on labels ``0..n-1``."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)
            if j - i <= k or j - i >= n - k]


def gen_web(n: int, k: int, closed: Iterable[int] = ()) -> Instance:
    """Web graph ``W_n^k``.

    ``closed`` uses the web's own labels ``0..n-1``; web vertex ``i`` becomes
    instance vertex ``i + 1``.
    """
    if k < 1 or n < 2 * (k + 1):
        raise ValueError(f"web needs k >= 1 and n >= 2(k+1), got n={n}, k={k}")
    closed = list(closed)
    for c in closed:
        if not 0 <= c < n:
            raise ValueError(f"web label {c} out of range 0..{n - 1}")
    return Instance(n, [(i + 1, j + 1) for i, j in web_edges(n, k)], [c + 1 for c in closed])


C_MODES = ("empty", "all", "half")


def gen_random(n: int, p: float, c_mode: str = "all", seed: int | None = None,
               max_tries: int = 1000) -> Instance:
    """G(n, p) instance resampled until connected and twin free.

    ``c_mode`` is ``empty`` (C = {}), ``all`` (C = V) or ``half`` (floor(n/2)
    vertices drawn uniformly).  Raises :class:`GenerationError` after
    ``max_tries`` rejected samples.
    """
    if n < 3:
        raise ValueError("random instances need n >= 3")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if c_mode not in C_MODES:
        raise ValueError(f"c_mode must be one of {C_MODES}, got {c_mode!r}")
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for _ in range(max_tries):
        edges = [e for e in pairs if rng.random() < p]
        if c_mode == "empty":
            closed = []
        elif c_mode == "all":
            closed = list(range(1, n + 1))
        else:
            closed = rng.sample(range(1, n + 1), n // 2)
        try:
            inst = Instance(n, edges, closed)
        except InstanceError:
            continue
        if is_connected(inst) and not find_twins(inst):
            return inst
    raise GenerationError(
        f"no connected twin-free instance for n={n}, p={p}, C={c_mode} after {max_tries} tries")


# -- file format -------------------------------------------------------------

def parse_instance(text: str) -> Instance:
    """Parse the ``p ggdp`` text format.

    ::

        # comment
        p ggdp <n> <edge count>
        c <v1> <v2> ...        (a bare ``c`` means C is empty)
        e <u> <v>
    """
    n = None
    n_edges = None
    closed: list[int] | None = None
    edges: list[tuple[int, int]] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        try:
            nums = [int(t) for t in parts[1:]] if tag != "p" else None
        except ValueError:
            raise InstanceError(f"line {lineno}: non-integer token in {raw!r}") from None
        if tag == "p":
            if n is not None:
                raise InstanceError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "ggdp":
                raise InstanceError(f"line {lineno}: expected 'p ggdp <n> <edges>', got {raw!r}")
            try:
                n, n_edges = int(parts[2]), int(parts[3])
            except ValueError:
                raise InstanceError(f"line {lineno}: malformed problem line {raw!r}") from None
            continue
        if n is None:
            raise InstanceError(f"line {lineno}: data before the problem line")
        if tag == "c":
            if closed is not None:
                raise InstanceError(f"line {lineno}: duplicate C line")
            closed = nums
            for v in closed:
                if not 1 <= v <= n:
                    raise InstanceError(f"line {lineno}: vertex {v} out of range 1..{n}")
        elif tag == "e":
            if len(nums) != 2:
                raise InstanceError(f"line {lineno}: edge line needs two vertices, got {raw!r}")
            u, v = nums
            for w in (u, v):
                if not 1 <= w <= n:
                    raise InstanceError(f"line {lineno}: vertex {w} out of range 1..{n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InstanceError(f"line {lineno}: duplicate edge {key}")
            seen.add(key)
            edges.append((u, v))
        else:
            raise InstanceError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise InstanceError("missing 'p ggdp' problem line")
    if n_edges != len(edges):
        raise InstanceError(f"problem line announces {n_edges} edges, found {len(edges)}")
    return Instance(n, edges, closed or [])


def format_instance(inst: Instance, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"p ggdp {inst.n} {len(inst.edges)}")
    lines.append(" ".join(["c"] + [str(v) for v in sorted(inst.closed)]))
    lines.extend(f"e {u} {v}" for u, v in inst.sorted_edges())
    return "\n".join(lines) + "\n"


def read_instance(path: str) -> Instance:
    if path == "-":
        return parse_instance(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
