import random

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from dhga import linalg
from oracles import cofactor_det
from strategies import seeds


def random_matrix(seed, rows, cols, lo=-4, hi=4):
    rng = random.Random(seed)
    return [[mpq(rng.randint(lo, hi), rng.choice((1, 2, 3))) for _ in range(cols)] for _ in range(rows)]


@given(seeds, st.integers(1, 5))
def test_det_matches_cofactor_expansion(seed, k):
    m = random_matrix(seed, k, k)
    assert linalg.det(m) == cofactor_det(m)


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_rank_matches_numpy(seed, r, c):
    rng = random.Random(seed)
    # low-rank product so that deficient cases actually occur
    k = rng.randint(1, min(r, c))
    a = random_matrix(seed, r, k, -2, 2)
    b = random_matrix(seed + 1, k, c, -2, 2)
    m = linalg.matmul(a, b)
    assert linalg.rank(m) == np.linalg.matrix_rank(np.array(m, dtype=float))


@given(seeds, st.integers(1, 5))
def test_solve_round_trip(seed, k):
    a = random_matrix(seed, k, k)
    if linalg.det(a) == 0:
        with pytest.raises(linalg.SingularMatrix):
            linalg.inverse(a)
        return
    x = random_matrix(seed + 7, k, 1)
    b = [row[0] for row in linalg.matmul(a, x)]
    assert linalg.solve(a, b) == [row[0] for row in x]
    assert linalg.matmul(a, linalg.inverse(a)) == linalg.identity(k)


def test_tall_inconsistent_system():
    a = [[1, 0], [0, 1], [1, 1]]
    assert linalg.solve(a, [1, 2, 3]) == [1, 2]
    with pytest.raises(linalg.SingularMatrix):
        linalg.solve(a, [1, 2, 4])
