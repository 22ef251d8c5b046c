from __future__ import annotations

import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import int_matrices
from geokit.errors import NotPrime
from geokit.lattice import AbelianGroup, IntMatrix, cokernel, parse_matrix, rank_mod_p, snf


def laplace_det(rows: list[list[int]]) -> int:
    if not rows:
        return 1
    if len(rows) == 1:
        return rows[0][0]
    total = 0
    for j, x in enumerate(rows[0]):
        if x:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * x * laplace_det(minor)
    return total


def determinantal_factors(a: IntMatrix) -> tuple[int, ...]:
    """Invariant factors from gcds of k x k minors: d_k / d_{k-1}."""
    data = a.tolist()
    divisors = [1]
    for k in range(1, min(a.rows, a.cols) + 1):
        g = 0
        for rs in combinations(range(a.rows), k):
            for cs in combinations(range(a.cols), k):
                g = gcd(g, laplace_det([[data[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[i] // divisors[i - 1] for i in range(1, len(divisors)))


def is_diagonal(m: IntMatrix) -> bool:
    return all(m[i, j] == 0 for i in range(m.rows) for j in range(m.cols) if i != j)


# --- worked examples -------------------------------------------------------


def test_snf_examples():
    assert snf(IntMatrix.diag(2, 3)).invariant_factors == (1, 6)
    assert snf(IntMatrix.identity(4)).invariant_factors == (1, 1, 1, 1)
    assert snf(IntMatrix.from_rows([[2, 4], [6, 8]])).invariant_factors == (2, 4)


def test_snf_is_deterministic():
    a = IntMatrix.from_rows([[3, -6, 9], [12, 0, 7], [-1, 1, 1]])
    assert snf(a) == snf(a)


def test_cokernel_examples():
    assert cokernel(IntMatrix(0, 3, ())) == AbelianGroup(3)
    for p in (2, 3, 7):
        assert cokernel(IntMatrix.from_rows([[p]])) == AbelianGroup(0, (p,))
    assert cokernel(IntMatrix(0, 0, ())) == AbelianGroup(0)


def test_rank_mod_p_examples():
    assert rank_mod_p(IntMatrix.identity(4), 5) == 4
    assert rank_mod_p(IntMatrix.from_rows([[2, 4], [6, 8]]), 2) == 0
    with pytest.raises(NotPrime):
        rank_mod_p(IntMatrix.identity(2), 4)


def test_abelian_group_normalisation_and_printing():
    g = AbelianGroup.from_cyclic(1, [2, 3, 4])
    assert g == AbelianGroup(1, (2, 12))
    assert str(g) == "Z + Z/2 + Z/12"
    assert str(AbelianGroup()) == "0"
    assert g.torsion_order == 24
    assert g.contains_cyclic(3) and g.contains_cyclic(4) and not g.contains_cyclic(8)
    with pytest.raises(ValueError):
        AbelianGroup(0, (2, 3))


def test_parse_matrix():
    m = parse_matrix("1 2 3\n# comment\n4 5 6\n")
    assert m.tolist() == [[1, 2, 3], [4, 5, 6]]
    with pytest.raises(ValueError):
        parse_matrix("1 2\n3\n")
    assert parse_matrix("") == IntMatrix(0, 0, ())


def test_large_entries_do_not_overflow():
    a = IntMatrix.from_rows([[10**30, 3], [7, 10**25 + 1]])
    res = snf(a)
    assert res.U @ a @ res.V == res.S
    assert abs(res.invariant_factors[0] * res.invariant_factors[1]) == abs(a.det())


# --- property suite --------------------------------------------------------


@settings(max_examples=500, deadline=None)
@given(int_matrices())
def test_snf_contract(a):
    res = snf(a)
    assert res.U @ a @ res.V == res.S
    assert abs(res.U.det()) == 1 and abs(res.V.det()) == 1
    assert is_diagonal(res.S)
    f = res.invariant_factors
    assert all(x > 0 for x in f)
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))
    assert all(res.S[i, i] == 0 for i in range(len(f), min(a.rows, a.cols)))


@settings(max_examples=150, deadline=None)
@given(int_matrices(max_dim=4, bound=9))
def test_snf_matches_determinantal_divisors(a):
    assert snf(a).invariant_factors == determinantal_factors(a)


@settings(max_examples=500, deadline=None)
@given(int_matrices())
def test_rank_mod_p_agrees_away_from_torsion_primes(a):
    res = snf(a)
    for p in (2, 3, 5, 7):
        rp = rank_mod_p(a, p)
        assert rp <= res.rank
        if all(x % p for x in res.invariant_factors):
            assert rp == res.rank
        assert rp == sum(1 for x in res.invariant_factors if x % p)


def _random_unimodular(n: int, rng: random.Random) -> IntMatrix:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        q = rng.randint(-3, 3)
        m[i] = [x + q * y for x, y in zip(m[i], m[j])]
    return IntMatrix.from_rows(m, n)


@settings(max_examples=200, deadline=None)
@given(int_matrices(max_dim=6), st.integers(0, 2**32))
def test_cokernel_invariant_under_equivalence(a, seed):
    rng = random.Random(seed)
    base = cokernel(a)
    rows = list(a.tolist())
    rng.shuffle(rows)
    perm = list(range(a.cols))
    rng.shuffle(perm)
    shuffled = IntMatrix.from_rows([[r[k] for k in perm] for r in rows], a.cols)
    assert cokernel(shuffled) == base
    if a.rows and a.cols:
        p, q = _random_unimodular(a.rows, rng), _random_unimodular(a.cols, rng)
        assert cokernel(p @ a @ q) == base


@settings(max_examples=200, deadline=None)
@given(int_matrices(max_dim=5), int_matrices(max_dim=5))
def test_cokernel_of_block_diagonal_is_direct_sum(a, b):
    rows = [list(r) + [0] * b.cols for r in a.tolist()] + [[0] * a.cols + list(r) for r in b.tolist()]
    block = IntMatrix.from_rows(rows, a.cols + b.cols)
    assert cokernel(block) == cokernel(a) + cokernel(b)
