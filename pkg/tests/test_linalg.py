import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxtimes.gates import KAUFFMAN_C
from boxtimes.linalg import (
    DimensionError,
    approx_eq,
    as_cmatrix,
    commutation_matrix,
    kron,
    matmul,
    middle_swap,
    partial_trace_second,
    swap_matrix,
)

from .conftest import rand_c, rand_gaussian_int


def naive_matmul(a, b):
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


def basis(n, i):
    e = np.zeros(n)
    e[i] = 1
    return e


def brute_commutation(m, n):
    """Column i*n+j holds e_j (x) e_i."""
    out = np.zeros((m * n, m * n))
    for i in range(m):
        for j in range(n):
            out[:, i * n + j] = np.kron(basis(n, j), basis(m, i))
    return out


class TestMatmul:
    def test_identity(self):
        assert np.array_equal(matmul(np.eye(3), np.eye(3)), np.eye(3))

    def test_kauffman_unitary(self):
        assert approx_eq(matmul(KAUFFMAN_C, KAUFFMAN_C.conj().T), np.eye(4), 1e-12)

    def test_against_triple_loop(self, rng):
        a, b = rand_c(rng, 3, 4), rand_c(rng, 4, 2)
        assert matmul(a, b).shape == (3, 2)
        assert approx_eq(matmul(a, b), naive_matmul(a, b), 1e-14)

    def test_shape_mismatch_names_shapes(self):
        with pytest.raises(DimensionError, match=r"\(2, 3\).*\(2, 3\)"):
            matmul(np.ones((2, 3)), np.ones((2, 3)))

    def test_result_is_read_only(self):
        out = matmul(np.eye(2), np.eye(2))
        with pytest.raises(ValueError):
            out[0, 0] = 5


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_diagonal(self):
        assert np.array_equal(kron(np.diag([2, 3]), np.eye(2)), np.diag([2, 2, 3, 3]))

    def test_block_structure(self, rng):
        a, b = rand_c(rng, 2, 3), rand_c(rng, 3, 2)
        k = kron(a, b)
        assert k.shape == (6, 6)
        for i in range(2):
            for j in range(3):
                assert np.array_equal(k[3 * i:3 * i + 3, 2 * j:2 * j + 2], a[i, j] * b)

    def test_mixed_product(self, rng):
        a, b, c, d = (rand_c(rng, 2) for _ in range(4))
        assert approx_eq(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), 1e-12)

    def test_associativity_places_entries_identically(self, rng):
        # Gaussian integers multiply exactly, so any placement error would show.
        for _ in range(50):
            a, b, c = (rand_gaussian_int(rng, *rng.integers(1, 5, size=2)) for _ in range(3))
            assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))

    def test_associativity_floats(self, rng):
        for _ in range(50):
            a, b, c = (rand_c(rng, *rng.integers(1, 5, size=2)) for _ in range(3))
            assert approx_eq(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-15)


class TestCommutationMatrix:
    def test_degenerate(self):
        for n in range(1, 5):
            assert np.array_equal(commutation_matrix(1, n), np.eye(n))

    def test_two_two_is_swap(self):
        expected = np.eye(4)[[0, 2, 1, 3]]
        assert np.array_equal(commutation_matrix(2, 2), expected)
        assert np.array_equal(commutation_matrix(2, 2), brute_commutation(2, 2))

    @pytest.mark.parametrize("m", range(1, 5))
    @pytest.mark.parametrize("n", range(1, 5))
    def test_matches_basis_oracle(self, m, n):
        k = commutation_matrix(m, n)
        assert np.array_equal(k, brute_commutation(m, n))
        assert np.array_equal(k @ commutation_matrix(n, m), np.eye(m * n))
        assert np.array_equal(k.T, commutation_matrix(n, m))
        assert np.all(k.sum(axis=0) == 1) and np.all(k.sum(axis=1) == 1)
        assert set(np.unique(k.real)) <= {0.0, 1.0}

    def test_vec_transpose(self, rng):
        m, n = 3, 2
        x = rand_c(rng, n, m)
        vec = lambda y: y.reshape(-1, order="F")
        assert approx_eq(commutation_matrix(m, n) @ vec(x), vec(x.T), 0)

    def test_zero_dimension(self):
        with pytest.raises(DimensionError):
            commutation_matrix(0, 2)


class TestPartialTrace:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_swap_traces_to_identity(self, d):
        assert np.array_equal(partial_trace_second(swap_matrix(d), d, d), np.eye(d))

    def test_product_operator(self, rng):
        a, b = rand_c(rng, 2), rand_c(rng, 3)
        assert approx_eq(partial_trace_second(np.kron(a, b), 2, 3), np.trace(b) * a, 1e-14)

    def test_identity(self):
        assert np.array_equal(partial_trace_second(np.eye(9), 3, 3), 3 * np.eye(3))

    def test_entrywise_definition(self, rng):
        d1, d2 = 2, 3
        a = rand_c(rng, 6)
        t = partial_trace_second(a, d1, d2)
        for i in range(d1):
            for k in range(d1):
                assert t[i, k] == pytest.approx(sum(a[i * d2 + j, k * d2 + j] for j in range(d2)))

    def test_rejects_bad_size(self):
        with pytest.raises(DimensionError):
            partial_trace_second(np.eye(5), 2, 2)
        with pytest.raises(DimensionError):
            partial_trace_second(np.ones((4, 2)), 2, 2)


class TestMiddleSwap:
    def test_degenerate(self):
        assert np.array_equal(middle_swap(1), np.eye(1))

    @pytest.mark.parametrize("d", [2, 3])
    def test_involution(self, d):
        f = middle_swap(d)
        assert np.array_equal(f @ f, np.eye(d ** 4))

    def test_basis_enumeration(self):
        f = middle_swap(2)
        e = [basis(2, 0), basis(2, 1)]
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    for d in range(2):
                        src = kron(e[a], e[b], e[c], e[d]).ravel()
                        dst = kron(e[a], e[c], e[b], e[d]).ravel()
                        assert np.array_equal(f @ src, dst)


class TestApproxEq:
    def test_exact(self, rng):
        x = rand_c(rng, 3)
        assert approx_eq(x, x, 0)

    def test_within_bound(self):
        y = np.eye(2, dtype=complex)
        y[0, 0] += 1e-15
        assert approx_eq(np.eye(2), y, 1e-12)

    def test_outside_bound(self):
        assert not approx_eq(np.eye(2), 2 * np.eye(2), 1e-12)

    def test_shape_mismatch_is_false(self):
        assert not approx_eq(np.eye(2), np.eye(3), 1.0)


def test_as_cmatrix_rejects_non_finite():
    with pytest.raises(ValueError, match=r"\(0, 1\)"):
        as_cmatrix([[1, np.nan]])


small = st.integers(1, 4)


@settings(max_examples=60, deadline=None)
@given(d1=small, d2=small, seed=st.integers(0, 2**32 - 1))
def test_partial_trace_linear_and_trace_preserving(d1, d2, seed):
    rng = np.random.default_rng(seed)
    a, b = rand_c(rng, d1 * d2), rand_c(rng, d1 * d2)
    alpha, beta = rand_c(rng, 1)[0, 0], rand_c(rng, 1)[0, 0]
    lhs = partial_trace_second(alpha * a + beta * b, d1, d2)
    rhs = alpha * partial_trace_second(a, d1, d2) + beta * partial_trace_second(b, d1, d2)
    assert approx_eq(lhs, rhs, 1e-12)
    assert abs(np.trace(partial_trace_second(a, d1, d2)) - np.trace(a)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(dims=st.lists(small, min_size=6, max_size=6), seed=st.integers(0, 2**32 - 1))
def test_kron_mixed_product_property(dims, seed):
    rng = np.random.default_rng(seed)
    m, n, p, q, r, s = dims
    a, b = rand_c(rng, m, n), rand_c(rng, p, q)
    c, d = rand_c(rng, n, r), rand_c(rng, q, s)
    assert approx_eq(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), 1e-12)
