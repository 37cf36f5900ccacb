import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_path_max, dyadic, loop_matvec, to_lists, triple_loop_matmul
from tropatt import (
    BOTTOM,
    TropicalMatrix,
    TropicalScalar,
    ValueVector,
    add_self_loops,
    argmax_row_witness,
    fig2,
    path_weight,
    reconstruct_path,
    trop_leq,
    trop_matmul,
    trop_matvec,
    trop_power,
)
from tropatt.errors import AllBottomRowError, DimensionMismatchError, DomainError, InvalidValueError

B = None  # bottom in nested-list literals


@pytest.fixture
def fig2_matrix():
    return fig2().weights


def as_list(V):
    return V.to_nested()


class TestContainers:
    def test_matrix_from_nested_with_bottom(self):
        A = TropicalMatrix([[0, B], ["-inf", 2.5]])
        assert A.shape == (2, 2)
        assert A[0, 1] == BOTTOM
        assert A[1, 1] == TropicalScalar(2.5)
        assert A.to_nested() == [[0.0, None], [None, 2.5]]

    def test_storage_is_read_only(self):
        A = TropicalMatrix([[1.0]])
        with pytest.raises(ValueError):
            A.array[0, 0] = 3.0

    def test_rejects_nan_and_plus_inf(self):
        with pytest.raises(InvalidValueError):
            TropicalMatrix([[math.nan]])
        with pytest.raises(InvalidValueError):
            ValueVector([1.0, math.inf])

    def test_rejects_empty_and_ragged(self):
        with pytest.raises(DimensionMismatchError):
            TropicalMatrix(np.zeros((0, 3)))
        with pytest.raises((InvalidValueError, DimensionMismatchError)):
            TropicalMatrix([[1, 2], [3]])
        with pytest.raises(DimensionMismatchError):
            ValueVector([])

    def test_vector_shapes(self):
        assert ValueVector([1, 2]).d == 1
        V = ValueVector([[1, 2, 3], [4, 5, 6]])
        assert (V.len, V.d) == (2, 3)
        assert V[1] == (TropicalScalar(4), TropicalScalar(5), TropicalScalar(6))


class TestMatvec:
    def test_identity(self):
        V = ValueVector([3.5, B, -1.0])
        assert trop_matvec(TropicalMatrix.identity(3), V) == V

    def test_fig2_one_step(self, fig2_matrix):
        out = trop_matvec(fig2_matrix, ValueVector([0, B, B, B]))
        assert as_list(out) == [None, 4.0, 6.0, 5.0]

    def test_hand_example(self):
        # row 0: max(0+1, 2+0) = 2; row 1: max(1+1, bottom) = 2
        out = trop_matvec(TropicalMatrix([[0, 2], [1, B]]), ValueVector([1, 0]))
        assert as_list(out) == [2.0, 2.0]

    def test_componentwise_values(self):
        A = TropicalMatrix([[0, 2], [1, B]])
        V = ValueVector([[1, 10], [0, -5]])
        out = trop_matvec(A, V)
        assert as_list(out) == [[2.0, 10.0], [2.0, 11.0]]
        for k in range(2):
            col = trop_matvec(A, ValueVector(V.array[:, k]))
            assert np.array_equal(out.array[:, k], col.array)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            trop_matvec(TropicalMatrix.identity(3), ValueVector([1, 2]))

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a = rng.normal(size=(4, 5)) * 10
            a[rng.random(a.shape) < 0.3] = -math.inf
            v = rng.normal(size=5)
            got = trop_matvec(TropicalMatrix(a), ValueVector(v)).to_nested()
            assert got == loop_matvec(to_lists(a), to_lists([v])[0])


class TestMatmul:
    def test_identity(self, fig2_matrix):
        assert trop_matmul(TropicalMatrix.identity(4), fig2_matrix) == fig2_matrix
        assert trop_matmul(fig2_matrix, TropicalMatrix.identity(4)) == fig2_matrix

    def test_fig2_square(self, fig2_matrix):
        assert trop_matmul(fig2_matrix, fig2_matrix)[3, 0] == TropicalScalar(8)

    def test_triple_loop_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            a = rng.normal(size=(3, 3)) * 5
            b = rng.normal(size=(3, 3)) * 5
            a[rng.random(a.shape) < 0.25] = -math.inf
            got = trop_matmul(TropicalMatrix(a), TropicalMatrix(b)).to_nested()
            assert got == triple_loop_matmul(to_lists(a), to_lists(b))

    def test_rectangular(self):
        A = TropicalMatrix([[0, 1, 2]])
        Bm = TropicalMatrix([[1], [B], [0]])
        assert trop_matmul(A, Bm).to_nested() == [[2.0]]
        with pytest.raises(DimensionMismatchError):
            trop_matmul(Bm, Bm)


class TestPower:
    def test_first_power(self, fig2_matrix):
        assert trop_power(fig2_matrix, 1) == fig2_matrix

    def test_fig2_square(self, fig2_matrix):
        A2 = trop_power(fig2_matrix, 2)
        assert A2[3, 0] == TropicalScalar(8)
        # via node 2 would give 6 + 1 = 7, which loses
        assert A2[3, 0] != TropicalScalar(7)

    def test_repeated_squaring_matches_sequential(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            A = TropicalMatrix(dyadic(rng, (5, 5), p_bottom=0.2))
            seq = A
            for L in range(2, 9):
                seq = trop_matmul(seq, A)
                assert trop_power(A, L) == seq

    def test_rejects_zero_and_non_square(self, fig2_matrix):
        with pytest.raises(DomainError):
            trop_power(fig2_matrix, 0)
        with pytest.raises(DimensionMismatchError):
            trop_power(TropicalMatrix([[1, 2]]), 2)


class TestWitness:
    def test_fig2_row3_witness(self, fig2_matrix):
        # plain fig2 squared keeps a single finite entry, so the other rows
        # would be all-bottom; stays make every row finite
        A2 = trop_power(add_self_loops(fig2()).weights, 2)
        w = argmax_row_witness(A2, ValueVector([0, 0, 0, 0]))
        assert int(w[3]) == 0
        assert A2[3, int(w[3])] == TropicalScalar(8)

    def test_lowest_index_tie(self):
        assert list(argmax_row_witness(TropicalMatrix([[4, 4]]), ValueVector([0, 0]))) == [0]

    def test_hand_example(self):
        w = argmax_row_witness(TropicalMatrix([[0, 2], [1, B]]), ValueVector([1, 0]))
        assert list(w) == [1, 0]

    def test_all_bottom_row(self):
        with pytest.raises(AllBottomRowError):
            argmax_row_witness(TropicalMatrix([[0, 1], [B, B]]), ValueVector([0, 0]))
        with pytest.raises(AllBottomRowError):
            argmax_row_witness(TropicalMatrix([[0, 1]]), ValueVector([B, B]))


class TestReconstructPath:
    def test_fig2_two_hops(self, fig2_matrix):
        p = reconstruct_path(fig2_matrix, ValueVector([0, B, B, B]), 2, 3)
        assert p.nodes == (0, 1, 3)
        assert p.total_weight == 8.0

    def test_fig2_one_hop(self, fig2_matrix):
        p = reconstruct_path(fig2_matrix, ValueVector([0, B, B, B]), 1, 2)
        assert p.nodes == (0, 2)
        assert p.total_weight == 6.0

    def test_unreachable_target(self, fig2_matrix):
        with pytest.raises(AllBottomRowError):
            reconstruct_path(fig2_matrix, ValueVector([0, B, B, B]), 1, 0)

    def test_bad_arguments(self, fig2_matrix):
        V0 = ValueVector([0, B, B, B])
        with pytest.raises(DomainError):
            reconstruct_path(fig2_matrix, V0, 0, 3)
        with pytest.raises(DomainError):
            reconstruct_path(fig2_matrix, V0, 1, 4)

    def test_matches_brute_force_and_resums(self):
        rng = np.random.default_rng(3)
        for _ in range(60):
            n, L = int(rng.integers(1, 6)), int(rng.integers(1, 5))
            a = rng.normal(size=(n, n)) * 3
            a[rng.random(a.shape) < 0.3] = -math.inf
            v0 = rng.normal(size=n)
            A, V0 = TropicalMatrix(a), ValueVector(v0)
            for t in range(n):
                best = brute_path_max(to_lists(a), to_lists([v0])[0], L, t)
                if best is None:
                    with pytest.raises(AllBottomRowError):
                        reconstruct_path(A, V0, L, t)
                    continue
                p = reconstruct_path(A, V0, L, t)
                assert p.total_weight == best
                assert len(p.nodes) == L + 1 and p.nodes[-1] == t
                assert path_weight(A, V0, p.nodes) == TropicalScalar(p.total_weight)

    def test_per_layer_matrices(self):
        A1 = TropicalMatrix([[0, B], [1, B]])
        A2 = TropicalMatrix([[B, 5], [2, B]])
        p = reconstruct_path([A1, A2], ValueVector([0, B]), 2, 0)
        assert p.nodes == (0, 1, 0) and p.total_weight == 6.0
        with pytest.raises(DomainError):
            reconstruct_path([A1], ValueVector([0, B]), 2, 0)


class TestProperties:
    def test_vector_associativity(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            n = int(rng.integers(1, 6))
            A = TropicalMatrix(dyadic(rng, (n, n), p_bottom=0.2))
            Bm = TropicalMatrix(dyadic(rng, (n, n), p_bottom=0.2))
            V = ValueVector(dyadic(rng, n, p_bottom=0.2))
            assert trop_matvec(A, trop_matvec(Bm, V)) == trop_matvec(trop_matmul(A, Bm), V)

    def test_power_expands_to_all_paths(self):
        rng = np.random.default_rng(5)
        for n in range(1, 7):
            for L in range(1, 5):
                for _ in range(3):
                    a = dyadic(rng, (n, n), p_bottom=0.25)
                    v0 = dyadic(rng, n, p_bottom=0.25)
                    Y = trop_matvec(trop_power(TropicalMatrix(a), L), ValueVector(v0)).to_nested()
                    for t in range(n):
                        assert Y[t] == brute_path_max(to_lists(a), to_lists([v0])[0], L, t)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 2**32 - 1))
    def test_monotone(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(n, n))
        a[rng.random(a.shape) < 0.3] = -math.inf
        v = rng.normal(size=n)
        v[rng.random(n) < 0.3] = -math.inf
        a2 = np.where(np.isfinite(a), a + rng.random(a.shape), np.where(rng.random(a.shape) < 0.5, 0.0, -math.inf))
        v2 = np.where(np.isfinite(v), v + rng.random(n), -math.inf)
        lo = trop_matvec(TropicalMatrix(a), ValueVector(v))
        hi = trop_matvec(TropicalMatrix(a2), ValueVector(v2))
        assert all(trop_leq(lo[i], hi[i]) for i in range(n))

    def test_constant_shift(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(1, 6))
            c = float(rng.integers(-40, 40)) / 4
            a = dyadic(rng, (n, n), p_bottom=0.3)
            v = dyadic(rng, n)
            shifted = TropicalMatrix(a + c)
            base = trop_matvec(TropicalMatrix(a), ValueVector(v)).array
            got = trop_matvec(shifted, ValueVector(v)).array
            fin = np.isfinite(base)
            assert np.array_equal(got[fin], base[fin] + c)
            assert np.array_equal(np.isfinite(got), fin)
            for L in (1, 2, 3):
                P = trop_power(TropicalMatrix(a), L).array
                Pc = trop_power(shifted, L).array
                fin = np.isfinite(P)
                assert np.array_equal(Pc[fin], P[fin] + c * L)
