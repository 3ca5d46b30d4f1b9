"""Legal sequences, the greedy heuristic and exact Grundy numbers.

The exact solvers work on the set ``W`` of already footprinted vertices.
Appending ``v`` is legal iff ``N<v>`` is not contained in ``W``; once ``v``
is chosen ``N<v>`` is inside ``W`` for good, so no vertex can be chosen
twice and ``W`` alone determines every continuation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .graph import Instance, InstanceError, members, upper_bound_m

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """The exact search hit its state budget; no value is reported."""


def default_budget() -> int:
    env = os.environ.get("GGDP_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class LegalSequence:
    vertices: tuple[int, ...]
    footprints: tuple[frozenset, ...]
    dominating: bool

    def __len__(self) -> int:
        return len(self.vertices)


class SequenceCheck(NamedTuple):
    legal: bool
    dominating: bool
    footprints: list


def check_sequence(inst: Instance, vertices: Sequence[int]) -> SequenceCheck:
    """Check legality of ``vertices``.

    ``footprints`` holds ``W_i`` for every step up to and including the first
    violation, so failures can be diagnosed.
    """
    for v in vertices:
        if not 1 <= v <= inst.n:
            raise InstanceError(f"vertex {v} out of range 1..{inst.n}")
    covered = 0
    footprints = []
    for v in vertices:
        w = inst.nbhd[v] & ~covered
        footprints.append(frozenset(members(w)))
        if not w:
            return SequenceCheck(False, False, footprints)
        covered |= w
    return SequenceCheck(True, covered == inst.full, footprints)


def make_sequence(inst: Instance, vertices: Sequence[int]) -> LegalSequence:
    """Build a :class:`LegalSequence`, raising ``ValueError`` if illegal."""
    chk = check_sequence(inst, vertices)
    if not chk.legal:
        raise ValueError(f"sequence {tuple(vertices)} is not legal "
                         f"(empty footprint at step {len(chk.footprints)})")
    return LegalSequence(tuple(vertices), tuple(chk.footprints), chk.dominating)


def greedy_sequence(inst: Instance) -> LegalSequence:
    """Repeatedly pick the vertex footprinting the fewest (but > 0) new vertices.

    Ties go to the smallest id.  The result is a maximal, hence dominating,
    legal sequence.
    """
    covered = 0
    seq = []
    full = inst.full
    while covered != full:
        best, best_gain = 0, inst.n + 1
        for v in inst.vertices:
            gain = (inst.nbhd[v] & ~covered).bit_count()
            if 0 < gain < best_gain:
                best, best_gain = v, gain
        seq.append(best)
        covered |= inst.nbhd[best]
    return make_sequence(inst, seq)


class ExactResult(NamedTuple):
    value: int
    witness: LegalSequence
    states: int


def grundy_exact(inst: Instance, budget: int | None = None) -> ExactResult:
    """Exact Grundy domination number by memoized search over footprinted sets.

    Raises :class:`BudgetExceeded` when more than ``budget`` states would be
    expanded.
    """
    budget = default_budget() if budget is None else budget
    nb = inst.nbhd
    full = inst.full
    verts = list(inst.vertices)
    best: dict[int, int] = {full: 0}
    choice: dict[int, int] = {}

    def solve(covered: int) -> int:
        if covered in best:
            return best[covered]
        if len(best) >= budget:
            raise BudgetExceeded(f"exact search exceeded {budget} states")
        # each further step footprints at least one new vertex
        cap = (full & ~covered).bit_count()
        val, arg = 0, 0
        tried = set()
        for v in verts:
            nxt = covered | nb[v]
            if nxt == covered or nxt in tried:
                continue
            tried.add(nxt)
            cand = 1 + solve(nxt)
            if cand > val:
                val, arg = cand, v
                if val == cap:
                    break
        best[covered] = val
        choice[covered] = arg
        return val

    value = solve(0)
    seq = []
    covered = 0
    while covered != full:
        v = choice[covered]
        seq.append(v)
        covered |= nb[v]
    witness = make_sequence(inst, seq)
    assert len(witness) == value and witness.dominating
    return ExactResult(value, witness, len(best))


def reachable_lengths(inst: Instance, budget: int | None = None) -> dict[int, int]:
    """Longest legal prefix reaching each footprinted set, over all reachable sets."""
    budget = default_budget() if budget is None else budget
    nb = inst.nbhd
    longest = {0: 0}
    # transitions strictly grow the set, so process by cardinality
    by_size: dict[int, set] = {0: {0}}
    size = 0
    while size <= inst.n:
        layer = by_size.pop(size, set())
        for covered in layer:
            here = longest[covered]
            for v in inst.vertices:
                nxt = covered | nb[v]
                if nxt == covered:
                    continue
                if nxt not in longest:
                    if len(longest) >= budget:
                        raise BudgetExceeded(f"state enumeration exceeded {budget} states")
                    longest[nxt] = here + 1
                    by_size.setdefault(nxt.bit_count(), set()).add(nxt)
                elif longest[nxt] < here + 1:
                    longest[nxt] = here + 1
        size += 1
    return longest


def max_step_indices(inst: Instance, budget: int | None = None) -> dict[int, int]:
    """``i(G;C,v)`` for every vertex: the latest step at which ``v`` can be chosen."""
    longest = reachable_lengths(inst, budget)
    out = {}
    for v in inst.vertices:
        nv = inst.nbhd[v]
        out[v] = 1 + max(length for covered, length in longest.items() if nv & ~covered)
    return out


def max_step_index(inst: Instance, v: int, budget: int | None = None) -> int:
    if not 1 <= v <= inst.n:
        raise InstanceError(f"vertex {v} out of range 1..{inst.n}")
    return max_step_indices(inst, budget)[v]


def lower_upper(inst: Instance) -> tuple[int, int]:
    """Greedy lower bound and the ``m`` upper bound."""
    return len(greedy_sequence(inst)), upper_bound_m(inst)
