import ast
import random
from pathlib import Path

import pytest

import sturmhankel.oracle as oracle_mod
from sturmhankel.oracle import (
    MAX_PREFIX,
    PRIME_POOL,
    ConfigurationError,
    det_bareiss,
    det_crt,
    det_crt_batch,
    det_mod_p,
    eval_oracle,
    eval_oracle_row,
    matrix,
    primes_for,
)


def test_matrix_examples():
    assert matrix(0, 2).rows() == [[1, 0], [0, 1]]
    assert matrix(2, 3).rows() == [[1, 1, 1], [1, 1, 0], [1, 0, 1]]
    assert matrix(0, 1).rows() == [[1]]
    with pytest.raises(ValueError):
        matrix(0, 0)
    with pytest.raises(ValueError):
        matrix(-1, 2)
    with pytest.raises(MemoryError):
        matrix(MAX_PREFIX, 1)


def test_anti_diagonals():
    mat = matrix(17, 12)
    a = mat.array()
    for i in range(12):
        for j in range(12):
            assert mat.entry(i, j) == a[i, j] == mat.segment[i + j]
    with pytest.raises(IndexError):
        mat.entry(12, 0)


def test_bareiss_small():
    assert det_bareiss([[1, 0], [0, 1]]) == 1
    assert det_bareiss([[1, 1], [1, 1]]) == 0
    assert det_bareiss(matrix(2, 3)) == -1
    assert det_bareiss([[0, 1], [1, 0]]) == -1
    assert det_bareiss([]) == 1
    with pytest.raises(ValueError):
        det_bareiss([[1, 2]])


def test_crt_examples():
    assert det_crt(matrix(2, 3)) == -1
    assert det_crt(matrix(9, 4)) == 3
    assert det_crt(matrix(13, 4)) == 0


@pytest.mark.parametrize("m,n,value", [(0, 1, 1), (3, 9, 2), (13, 3, -2), (6, 23, -5)])
def test_eval_examples(m, n, value):
    assert eval_oracle(m, n) == value
    assert eval_oracle(m, n, "bareiss") == value


def test_unknown_method():
    with pytest.raises(ValueError):
        eval_oracle(0, 1, "lu")


def test_methods_agree_on_random_cells():
    rng = random.Random(20261017)
    for _ in range(1000):
        m, n = rng.randrange(0, 2000), rng.randrange(1, 41)
        mat = matrix(m, n)
        assert det_crt(mat) == det_bareiss(mat), (m, n)


def test_crt_on_general_01_matrices():
    # not Hankel, with large determinants, so the lift is exercised
    rng = random.Random(7)
    for n in (5, 12, 25):
        for _ in range(20):
            rows = [[rng.randrange(2) for _ in range(n)] for _ in range(n)]
            assert det_crt(rows) == det_bareiss(rows)


def test_batch_and_row():
    row = eval_oracle_row(7, range(40), chunk=9)
    assert row == [eval_oracle(m, 7, "bareiss") for m in range(40)]
    assert det_crt_batch([]) == []
    with pytest.raises(ValueError):
        det_crt_batch([matrix(0, 2), matrix(0, 3)])
    with pytest.raises(ValueError):
        det_crt_batch([[[2, 0], [0, 1]]])


def test_det_mod_p():
    p = PRIME_POOL[0]
    assert det_mod_p(matrix(2, 3), p) == p - 1
    assert det_mod_p([[0, 1], [1, 0]], 7) == 6


def test_prime_pool_soundness():
    assert len(set(PRIME_POOL)) == len(PRIME_POOL) == 64
    assert all(p < 2**31 for p in PRIME_POOL)
    for p in PRIME_POOL[:8]:
        assert all(p % q for q in range(2, 46341))
    n = 1
    while True:
        try:
            ps = primes_for(n)
        except ConfigurationError:
            break
        prod = 1
        for p in ps:
            prod *= p
        assert prod * prod > 4 * n**n
        n += 1
    assert n > 350
    with pytest.raises(ConfigurationError):
        eval_oracle(0, n)


def test_independent_of_numeration():
    # the oracle reads the word only through the substitution prefix
    tree = ast.parse(Path(oracle_mod.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported |= {(node.module or "", a.name) for a in node.names}
        elif isinstance(node, ast.Import):
            imported |= {(a.name, "") for a in node.names}
    local = {name for mod, name in imported if mod in ("sequence", "partition", "closed_form")}
    assert local == {"s_prefix"}
    names = {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)}
    assert not names & {"encode", "phi", "classify", "eval_closed", "s_at"}
