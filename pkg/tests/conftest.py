"""Independent oracles shared by the test modules.

Nothing here calls into the package's solvers; the oracles work from the
plain adjacency description of an instance.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np
import pytest

from ggdp.graph import gen_bull, gen_cycle, gen_path

ACCEPTANCE_RESULTS: dict = {}


def closed_nbhd_sets(inst):
    """``N<v>`` recomputed from the edge list, as Python sets."""
    adj = {v: set() for v in range(1, inst.n + 1)}
    for u, v in inst.edges:
        adj[u].add(v)
        adj[v].add(u)
    return {v: adj[v] | ({v} if v in inst.closed else set()) for v in adj}


def legal_sequences(inst):
    """Every legal sequence of length >= 1, by trying all vertex orders."""
    nb = closed_nbhd_sets(inst)
    found = set()
    verts = list(nb)
    for size in range(1, inst.n + 1):
        for seq in permutations(verts, size):
            covered = set()
            ok = True
            for v in seq:
                if not nb[v] - covered:
                    ok = False
                    break
                covered |= nb[v]
            if ok:
                found.add(seq)
    return found


def is_dominating(inst, seq):
    nb = closed_nbhd_sets(inst)
    covered = set()
    for v in seq:
        covered |= nb[v]
    return covered == set(nb)


def brute_grundy(inst):
    return max(len(s) for s in legal_sequences(inst))


def all_binary(nv):
    r = np.arange(2 ** nv, dtype=np.int64)
    return ((r[:, None] >> np.arange(nv)) & 1).astype(np.int8)


def brute_feasible(model):
    """Binary points satisfying every row of ``model``, by exhaustive listing."""
    A, senses, b = model.matrix()
    X = all_binary(model.n_vars)
    lhs = X @ A.T
    eq = np.array([s == "=" for s in senses])
    ok = np.all(np.where(eq, lhs == b, lhs <= b + 1e-9), axis=1)
    return X[ok]


@pytest.fixture(scope="session")
def bull():
    return gen_bull()


@pytest.fixture(scope="session")
def c5():
    return gen_cycle(5, range(1, 6))


@pytest.fixture(scope="session")
def p4_modes():
    return {"empty": gen_path(4, []), "all": gen_path(4, range(1, 5)), "mid": gen_path(4, [2, 3])}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {text}")
