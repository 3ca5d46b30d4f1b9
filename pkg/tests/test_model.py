import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggdp.graph import gen_bull, gen_complete, gen_path, gen_random
from ggdp.model import (
    FORMULATIONS,
    Point,
    build_formulation,
    count_solutions,
    enumerate_solutions,
    export_lp,
    families,
    point_from_sequence,
    points_matrix,
    sequence_from_point,
)
from ggdp.sequence import grundy_exact

from conftest import brute_feasible, is_dominating, legal_sequences

SMALL = [
    gen_path(2, [1, 2]),
    gen_path(2, [1]),
    gen_path(3, [1]),
    gen_path(3, []),
    gen_path(3, [1, 2, 3]),
]


def test_family_table():
    assert families("F1") == {1, 2, 3, 4, 5}
    assert families("F3") == {2, 3, 4, 5, 8, 9}
    assert families(8) == {2, 3, 4, 5, 6, 7, 8, 9, 10}
    with pytest.raises(ValueError):
        families("F9")


def test_bull_f1_shape():
    model = build_formulation(gen_bull(), "F1", 1)
    assert model.m == 4 and model.n_vars == 40
    assert len(model.rows) == 59


def test_bull_f8_ordering_rows():
    names = [r.name for r in build_formulation(gen_bull(), "F8", 1).rows]
    assert [n for n in names if n.startswith("c8")] == ["c8_1"]
    assert [n for n in names if n.startswith("c9")] == ["c9_1", "c9_2", "c9_3"]


def test_f3_has_no_excluded_families():
    names = [r.name for r in build_formulation(gen_bull(), "F3", 2).rows]
    for prefix in ("c1_", "c6_", "c7_", "c10_"):
        assert not any(n.startswith(prefix) for n in names)


def test_lb_range_checked():
    with pytest.raises(ValueError):
        build_formulation(gen_bull(), "F3", 0)
    with pytest.raises(ValueError):
        build_formulation(gen_bull(), "F3", 5)


def test_export_lp():
    text = export_lp(build_formulation(gen_path(2, [1, 2]), "F1", 1))
    assert " c1_1: y_1_1 + y_2_1 <= 1" in text
    bull_text = export_lp(build_formulation(gen_bull(), "F1", 1))
    binary = bull_text.split("Binary\n", 1)[1].split("End", 1)[0].split()
    assert len(binary) == 40 and binary[0] == "x_1_1" and binary[-1] == "y_5_4"
    assert bull_text == export_lp(build_formulation(gen_bull(), "F1", 1))


def test_point_from_sequence_examples():
    bull = gen_bull()
    empty = point_from_sequence(bull, [])
    assert empty == Point.ones_zero(5, 4)
    assert build_formulation(bull, "F1").is_feasible(empty)
    p = point_from_sequence(bull, [4])
    assert p.yval(4, 1) == 1
    for i in range(1, 5):
        assert p.xval(2, i) == p.xval(4, i) == 0
        assert p.xval(1, i) == p.xval(3, i) == p.xval(5, i) == 1
    with pytest.raises(ValueError):
        point_from_sequence(bull, [1, 1])
    assert sequence_from_point(bull, empty).vertices == ()


def test_sequence_round_trip_on_bull():
    bull = gen_bull()
    f8 = build_formulation(bull, "F8", 1)
    seqs = legal_sequences(bull)
    assert len(seqs) == 43
    for seq in seqs:
        p = point_from_sequence(bull, seq)
        assert sequence_from_point(bull, p).vertices == seq
        assert f8.is_feasible(p) == is_dominating(bull, seq)


def test_f8_points_are_dominating_sequences():
    bull = gen_bull()
    pts = enumerate_solutions(build_formulation(bull, "F8", 1), "collect")
    got = {sequence_from_point(bull, p).vertices for p in pts}
    want = {s for s in legal_sequences(bull) if is_dominating(bull, s)}
    assert got == want and len(pts) == 28


def test_sequence_from_point_rejects_double_choice():
    p = Point(2, 2, (0, 0), (0b110, 0))
    with pytest.raises(ValueError):
        sequence_from_point(gen_path(2, [1, 2]), p)


def test_enumeration_guard():
    with pytest.raises(ValueError):
        enumerate_solutions(build_formulation(gen_random(9, 0.3, "empty", seed=1), "F1"))
    with pytest.raises(ValueError):
        enumerate_solutions(build_formulation(gen_bull(), "F1"), "list")


@pytest.mark.parametrize("inst", SMALL, ids=lambda i: f"P{i.n}C{sorted(i.closed)}")
@pytest.mark.parametrize("form", FORMULATIONS)
def test_enumeration_matches_brute_force(inst, form):
    for lb in range(1, min(2, build_formulation(inst, form).m) + 1):
        model = build_formulation(inst, form, lb)
        oracle = brute_feasible(model)
        pts = enumerate_solutions(model, "collect")
        assert len(pts) == len(oracle) == enumerate_solutions(model)
        got = {tuple(r) for r in points_matrix(pts)} if pts else set()
        assert got == {tuple(r) for r in oracle}


def test_count_monotone_under_added_families():
    inst = gen_bull()
    counts = {f: count_solutions(inst, f, 1) for f in FORMULATIONS}
    for a in FORMULATIONS:
        for b in FORMULATIONS:
            if families(a) <= families(b):
                assert counts[b] <= counts[a]


@pytest.mark.parametrize("seed", range(20))
def test_correspondence_random(seed):
    inst = gen_random(3 + seed % 4, 0.5, ("empty", "all", "half")[seed % 3], seed=seed)
    seqs = legal_sequences(inst)

    def count(form):
        return enumerate_solutions(build_formulation(inst, form, 1), max_vars=100)

    assert count("F4") == len(seqs)
    assert count("F8") == sum(is_dominating(inst, s) for s in seqs)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 5), st.sampled_from(["empty", "all", "half"]), st.integers(0, 10 ** 6))
def test_optimum_equals_grundy(n, mode, seed):
    inst = gen_random(n, 0.5, mode, seed=seed)
    best = grundy_exact(inst).value
    for form in FORMULATIONS:
        pts = enumerate_solutions(build_formulation(inst, form, 1), "collect")
        assert max(p.objective() for p in pts) == best
        if form == "F1":
            M = points_matrix(pts)
            m = pts[0].m
            X = M[:, : n * m].reshape(len(pts), n, m)
            Y = M[:, n * m:].reshape(len(pts), n, m)
            assert np.all(np.diff(X, axis=2) <= 0)
            assert np.all(Y.sum(axis=1) <= 1)


def test_vector_round_trip():
    p = point_from_sequence(gen_complete(3, [1]), [2])
    assert Point.from_vector(p.n, p.m, p.vector()) == p
