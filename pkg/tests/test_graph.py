from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggdp.graph import (
    GenerationError,
    Instance,
    InstanceError,
    add_twin,
    delta,
    disjoint_union,
    find_twins,
    format_instance,
    gen_bull,
    gen_complete,
    gen_cycle,
    gen_path,
    gen_random,
    gen_web,
    is_clutter,
    is_connected,
    is_strong_clutter,
    members,
    neighborhood,
    parse_instance,
    precedes,
    read_instance,
    reduce_twins,
    relabel,
    split_components,
    upper_bound_m,
    vmask,
)
from ggdp.sequence import grundy_exact

from conftest import brute_grundy, closed_nbhd_sets

BULL_TEXT = """\
# bull graph
p ggdp 5 5
c 1 2 3 4 5
e 1 2
e 1 3
e 2 3
e 2 4
e 3 5
"""


@st.composite
def instances(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    edges = [e for e in pairs if draw(st.booleans())]
    closed = {v for v in range(1, n + 1) if draw(st.booleans())}
    touched = {v for e in edges for v in e}
    closed |= set(range(1, n + 1)) - touched
    return Instance(n, edges, closed)


def test_parse_bull():
    inst = parse_instance(BULL_TEXT)
    assert inst.n == 5 and len(inst.edges) == 5
    assert inst.closed == frozenset(range(1, 6))
    assert inst == gen_bull()


def test_parse_single_closed_vertex():
    inst = parse_instance("p ggdp 1 0\nc 1\n")
    assert neighborhood(inst, 1) == {1}


def test_parse_rejects_isolated_open_vertex():
    with pytest.raises(InstanceError, match="vertex 2"):
        parse_instance("p ggdp 2 0\nc 1\n")


@pytest.mark.parametrize("text", [
    "p ggdp 3 1\nc\ne 1 4\n",          # out of range
    "p ggdp 2 1\nc\ne 1 2\ne 1\n",      # short edge line
    "p ggdp 2 1\nc\nx 1 2\n",           # unknown record
    "c 1\ne 1 2\n",                     # missing header
    "p ggdp 2 2\nc\ne 1 2\n",           # edge count mismatch
])
def test_parse_malformed(text):
    with pytest.raises(InstanceError):
        parse_instance(text)


def test_format_round_trip():
    inst = gen_web(8, 3, [1, 2, 3, 4, 5, 7])
    assert parse_instance(format_instance(inst, "web")) == inst


def test_read_instance_from_file(tmp_path):
    path = tmp_path / "bull.ggdp"
    path.write_text(BULL_TEXT)
    assert read_instance(str(path)) == gen_bull()


def test_neighborhood_examples():
    assert neighborhood(gen_bull(), 4) == {2, 4}
    p2 = gen_path(2, [1])
    assert neighborhood(p2, 2) == {1}
    assert neighborhood(p2, 1) == {1, 2}
    with pytest.raises(InstanceError):
        neighborhood(p2, 3)


def test_upper_bound_examples():
    assert upper_bound_m(gen_bull()) == 4
    assert upper_bound_m(gen_web(8, 3, [1, 2, 3, 4, 5, 7])) == 3
    assert upper_bound_m(gen_path(2)) == 2


def test_precedes_examples():
    web = gen_web(8, 3, [1, 2, 3, 4, 5, 7])
    # web labels 4 and 0 are vertices 5 and 1
    assert not precedes(web, 5, 1)
    p2 = gen_path(2, [1])
    assert precedes(p2, 2, 1)
    c5 = gen_cycle(5, range(1, 6))
    assert all(precedes(c5, u, v) for u in range(1, 6) for v in range(1, 6) if u != v)
    with pytest.raises(ValueError):
        precedes(c5, 2, 2)


def test_clutter_examples():
    assert not is_clutter(gen_web(8, 3, [1, 2, 3, 4, 5, 7]))
    for closed in ([], [0, 3], range(9)):
        assert is_clutter(gen_web(9, 1, closed))
    full = gen_web(8, 3, range(8))
    assert find_twins(full) == [] and is_clutter(full)


def test_reduce_twins_examples():
    p4 = gen_path(4, [2, 3])
    assert reduce_twins(p4) == (p4, [])
    k3, removed = reduce_twins(gen_complete(3, range(1, 4)))
    assert k3.n == 1 and k3.closed == {1} and len(removed) == 2
    dup = Instance(5, list(p4.edges) + [(3, 5)], [2, 3])
    assert find_twins(dup) == [(4, 5)]
    back, removed = reduce_twins(dup)
    assert back == p4 and removed == [5]
    assert brute_grundy(dup) == brute_grundy(p4)


def test_split_components_examples():
    p2 = gen_path(2, [1, 2])
    parts = split_components(p2)
    assert parts == [(p2, (1, 2))]
    two = disjoint_union(p2, p2)
    assert [c for c, _ in split_components(two)] == [p2, p2]
    mixed = disjoint_union(gen_path(3, [1, 2, 3]), gen_cycle(5, range(1, 6)))
    parts = split_components(mixed)
    assert [labels for _, labels in parts] == [(1, 2, 3), (4, 5, 6, 7, 8)]
    assert sum(brute_grundy(c) for c, _ in parts) == brute_grundy(mixed)


def test_generators():
    assert gen_path(2, [1, 2]) == gen_complete(2, [1, 2])
    web = gen_web(8, 3, [1, 2, 3, 4, 5, 7])
    assert set(members(web.adj[1])) == {6, 7, 8, 2, 3, 4}
    with pytest.raises(ValueError):
        gen_web(7, 3)
    with pytest.raises(GenerationError):
        gen_random(10, 1.0, "all", seed=1, max_tries=20)


@pytest.mark.parametrize("mode", ["empty", "all", "half"])
def test_gen_random_properties(mode):
    for seed in range(10):
        inst = gen_random(7, 0.5, mode, seed=seed)
        assert is_connected(inst) and not find_twins(inst)
        assert inst == gen_random(7, 0.5, mode, seed=seed)
        if mode == "half":
            assert len(inst.closed) == 3
        else:
            assert len(inst.closed) == (7 if mode == "all" else 0)


def test_add_twin():
    c5 = gen_cycle(5, range(1, 6))
    ext = add_twin(c5, 2)
    assert ext.n == 6 and (2, 6) in find_twins(ext)
    p4 = gen_path(4)
    assert find_twins(add_twin(p4, 1)) == [(1, 5)]


@given(instances())
def test_membership_matches_closed_set(inst):
    oracle = closed_nbhd_sets(inst)
    for v in inst.vertices:
        nb = neighborhood(inst, v)
        assert nb == oracle[v] and nb
        assert (v in nb) == (v in inst.closed)
    assert delta(inst) == min(len(s) for s in oracle.values())


@given(instances())
def test_clutter_hierarchy(inst):
    if is_strong_clutter(inst):
        assert is_clutter(inst)
    if is_clutter(inst) and inst.n > 1:
        assert find_twins(inst) == []


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6))
def test_reductions_preserve_grundy(inst):
    reduced, removed = reduce_twins(inst)
    assert find_twins(reduced) == []
    assert reduced.n + len(removed) == inst.n
    assert grundy_exact(reduced).value == grundy_exact(inst).value
    parts = split_components(inst)
    assert sum(grundy_exact(c).value for c, _ in parts) == brute_grundy(inst)


@settings(max_examples=40, deadline=None)
@given(instances(max_n=6), st.randoms(use_true_random=False))
def test_relabel_is_consistent(inst, rnd):
    perm = list(inst.vertices)
    rnd.shuffle(perm)
    other = relabel(inst, perm)
    for v in inst.vertices:
        assert neighborhood(other, perm[v - 1]) == {perm[u - 1] for u in neighborhood(inst, v)}


def test_web_clutter_characterization():
    for n in range(4, 13):
        for k in range(1, (n - 2) // 2 + 1):
            full = set(range(n))
            for size in range(n + 1):
                for closed in combinations(range(n), size):
                    expected = n > 2 * (k + 1) or set(closed) == full
                    assert is_clutter(gen_web(n, k, closed)) == expected, (n, k, closed)


def test_path_upper_bound_observation():
    # P_1 has m = 1 whatever C is, so the rule starts at n = 2
    for n in range(2, 13):
        for size in range(n + 1):
            for closed in combinations(range(1, n + 1), size):
                expected = n - 1 if {1, n} <= set(closed) else n
                assert upper_bound_m(gen_path(n, closed)) == expected


def test_vmask_members_round_trip():
    assert list(members(vmask([3, 1, 7]))) == [1, 3, 7]
