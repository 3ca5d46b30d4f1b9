import random
from itertools import combinations

import pytest

from ggdp.closedform import PathSpec, is_good_configuration, path_grundy, web_grundy, web_m
from ggdp.graph import gen_path, gen_web, upper_bound_m
from ggdp.sequence import grundy_exact

from conftest import brute_grundy

WEB_C = [1, 2, 3, 4, 5, 7]


def test_good_configuration_examples():
    assert is_good_configuration(PathSpec.of(1, {1}))
    assert not is_good_configuration(PathSpec.of(1, set()))
    assert not is_good_configuration(PathSpec.of(2, {1, 2}))
    assert is_good_configuration(PathSpec.of(4, set()))
    with pytest.raises(ValueError):
        is_good_configuration(PathSpec(3, 2))


def test_path_examples():
    assert path_grundy(5, range(1, 6)) == 4
    assert path_grundy(4, []) == 4 == brute_grundy(gen_path(4))
    assert path_grundy(2, [1]) == 2
    with pytest.raises(ValueError):
        path_grundy(1, [])
    with pytest.raises(ValueError):
        path_grundy(3, [4])


def test_web_examples():
    assert web_grundy(8, 3, WEB_C) == 3
    assert web_grundy(8, 1, WEB_C) == 6
    assert web_grundy(8, 3, range(8)) == 2
    with pytest.raises(ValueError):
        web_grundy(7, 3, [])
    with pytest.raises(ValueError):
        web_grundy(8, 1, [8])


def test_web_m_matches_graph_bound():
    for n, k, closed in [(8, 3, WEB_C), (8, 1, WEB_C), (8, 3, range(8)), (9, 2, [])]:
        assert web_m(n, k, closed) == upper_bound_m(gen_web(n, k, closed))


def test_path_formula_small():
    for n in range(1, 8):
        for size in range(n + 1):
            for closed in combinations(range(1, n + 1), size):
                if n == 1 and not closed:
                    continue
                value = path_grundy(n, closed)
                assert value in (n - 1, n)
                assert value == grundy_exact(gen_path(n, closed)).value


def test_web_formula_random_sample():
    rng = random.Random(11)
    for n in range(4, 9):
        for k in range(1, (n - 2) // 2 + 1):
            for _ in range(20):
                closed = [v for v in range(n) if rng.random() < 0.5]
                m = web_m(n, k, closed)
                value = web_grundy(n, k, closed)
                assert value in (m - 1, m)
                assert value == grundy_exact(gen_web(n, k, closed)).value
