from fractions import Fraction as F

import numpy as np
import pytest

from ectrl.dynamics import assemble, assign_types, make_unit_type
from ectrl.netgen import GraphSpec, Topology, generate_er
from ectrl.rank import (
    P,
    FieldMatrix,
    OracleTooLargeError,
    UnrepresentableConstantError,
    generic_rank,
    instantiate,
    rank_exact,
    rank_ff,
    rank_fp,
)

zero = make_unit_type(1, [0])


def uniform(n, eig=0):
    return assign_types([make_unit_type(1, [eig])], [1], n)


class TestInstantiate:
    def test_zero_pattern(self):
        m = assemble(Topology(3, False, ()), uniform(3))
        fm = instantiate(m, 0, seed=1)
        assert not fm.data.any()

    def test_diagonal_shift(self):
        t = Topology(3, False, ())
        a = assign_types(
            [make_unit_type(1, [5], 0), make_unit_type(1, [3], 1)], [F(2, 3), F(1, 3)], 3
        )
        a = type(a)(a.types, a.densities, (0, 0, 1), a.seed)
        fm = instantiate(assemble(t, a), 5, seed=1)
        assert list(np.diag(fm.data)) == [0, 0, P - 2]

    def test_shared_param_equal_residues(self):
        m = assemble(Topology(2, False, ((0, 1),)), uniform(2))
        fm = instantiate(m, 0, seed=3)
        assert fm.data[0, 1] == fm.data[1, 0] != 0

    def test_rational_constant(self):
        a = assign_types([make_unit_type(1, [F(1, 2)])], [1], 1)
        fm = instantiate(assemble(Topology(1, False, ()), a), 0, seed=0)
        assert fm.data[0, 0] == pow(2, P - 2, P)

    def test_unrepresentable_denominator(self):
        a = assign_types([make_unit_type(1, [F(1, P)])], [1], 1)
        with pytest.raises(UnrepresentableConstantError):
            instantiate(assemble(Topology(1, False, ()), a), 0, seed=0)


class TestRankFf:
    def test_identity(self):
        assert rank_ff(FieldMatrix(3, np.eye(3, dtype=np.int64))) == 3

    def test_rank_one(self):
        assert rank_ff(FieldMatrix(2, np.array([[1, 2], [2, 4]], dtype=np.int64))) == 1

    def test_zero(self):
        assert rank_ff(FieldMatrix(5, np.zeros((5, 5), dtype=np.int64))) == 0

    def test_permutation_invariance(self):
        rng = np.random.default_rng(8)
        A = rng.integers(0, P, size=(12, 12), dtype=np.int64)
        A[5] = A[2]  # force deficiency
        r0 = rank_ff(FieldMatrix(12, A))
        for s in range(5):
            pr = np.random.default_rng(s).permutation(12)
            pc = np.random.default_rng(s + 100).permutation(12)
            assert rank_ff(FieldMatrix(12, A[pr][:, pc])) == r0

    def test_matches_numpy_fallback(self):
        from ectrl.rank import _elim_mod_p_numpy

        rng = np.random.default_rng(9)
        for _ in range(10):
            A = rng.integers(0, P, size=(10, 10), dtype=np.int64)
            A[rng.integers(10)] = 0
            assert rank_ff(FieldMatrix(10, A.copy())) == _elim_mod_p_numpy(A.copy())


class TestGenericRank:
    def test_directed_chain(self):
        m = assemble(Topology(5, True, ((0, 1), (1, 2), (2, 3), (3, 4))), uniform(5))
        assert generic_rank(m, 0, seed=1).rank == 4

    def test_directed_star(self):
        m = assemble(Topology(4, True, ((0, 1), (0, 2), (0, 3))), uniform(4))
        assert generic_rank(m, 0, seed=1).rank == 1

    def test_shifted_diagonal(self):
        m = assemble(Topology(4, False, ()), uniform(4, eig=5))
        assert generic_rank(m, 5, seed=1).rank == 0

    def test_failure_bound(self):
        m = assemble(Topology(4, False, ()), uniform(4))
        res = generic_rank(m, 0, trials=3, seed=0)
        assert res.failure_bound <= (4 / P) ** 3

    def test_agrees_with_exact_on_random_instances(self):
        # ff generic rank vs exact rational elimination on a random integer
        # substitution sharing the same dependency pattern
        rng = np.random.default_rng(17)
        for trial in range(25):
            n = int(rng.integers(2, 13))
            spec = GraphSpec("er", n, float(rng.uniform(0, min(3, n - 1))),
                             directed=bool(rng.integers(2)), seed=int(rng.integers(2**32)))
            m = assemble(generate_er(spec), uniform(n, eig=int(rng.integers(0, 4))))
            shift = int(rng.integers(0, 4))
            from ectrl.control import instantiate_rational

            A = instantiate_rational(m, seed=trial, lo=1, hi=10**6)
            for i in range(n):
                A[i][i] -= shift
            assert generic_rank(m, shift, seed=trial).rank == rank_exact(A)


class TestRankFp:
    def test_identity(self):
        assert rank_fp(np.eye(4)) == 4

    def test_outer_product(self):
        v = np.arange(1.0, 11.0)
        assert rank_fp(np.outer(v, v)) == 1

    def test_two_equal_rows(self):
        rng = np.random.default_rng(0)
        A = rng.normal(size=(50, 50))
        A[30] = A[10]
        assert rank_fp(A) == 49

    def test_zero(self):
        assert rank_fp(np.zeros((3, 3))) == 0

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            rank_fp(np.array([[np.inf, 0], [0, 1]]))


class TestRankExact:
    def test_rank_one(self):
        assert rank_exact([[1, 2], [2, 4]]) == 1

    def test_hilbert(self):
        H = [[F(1, i + j + 1) for j in range(4)] for i in range(4)]
        assert rank_exact(H) == 4

    def test_zero(self):
        assert rank_exact([[0] * 3 for _ in range(3)]) == 0

    def test_rectangular(self):
        assert rank_exact([[1, 0, 2, 0], [0, 1, 0, 3]]) == 2

    def test_cap(self):
        with pytest.raises(OracleTooLargeError):
            rank_exact([[0] * 65 for _ in range(65)])

    def test_fp_matches_exact_on_integer_matrices(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(2, 31))
            A = rng.integers(-1000, 1001, size=(n, n))
            if rng.random() < 0.5 and n > 2:
                A[1] = 2 * A[0] - 3 * A[2]  # plant a dependency
            assert rank_fp(A.astype(float)) == rank_exact(A.tolist())
