import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurlab import (
    LatticeMismatchError,
    MatrixOperator,
    ValidationError,
    make_lattice,
    random_matrix,
    random_symbol,
    schatten_norm,
    schur_adjoint_check,
    schur_apply,
)
from schurlab.schatten import conjugate_exponent, validate_exponent
from schurlab.symbols import SymbolGrid

LAT8 = make_lattice(1, 8, 1, "cyclic")
LAT16 = make_lattice(1, 16, 1, "cyclic")


def haar_unitary(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestSchattenNorm:
    def test_identity(self):
        A = MatrixOperator(LAT8, np.eye(8))
        for p in (1, 2, 3, 7.5):
            assert schatten_norm(A, p) == pytest.approx(8 ** (1 / p), rel=1e-14)
        assert schatten_norm(A, math.inf) == pytest.approx(1.0, rel=1e-14)

    def test_rank_one(self):
        rng = np.random.default_rng(0)
        u = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        A = MatrixOperator(LAT8, np.outer(u, v.conj()))
        expected = np.linalg.norm(u) * np.linalg.norm(v)
        for p in (1, 2, 4, math.inf):
            assert schatten_norm(A, p) == pytest.approx(expected, rel=1e-12)

    def test_p3_eigendecomposition_oracle(self):
        rng = np.random.default_rng(3)
        A = random_matrix(LAT8, rng)
        # independent oracle: eigenvalues of A* A raised to 3/2
        lam = np.linalg.eigvalsh(A.entries.conj().T @ A.entries)
        expected = float(np.sum(np.clip(lam, 0, None) ** 1.5) ** (1 / 3))
        assert abs(schatten_norm(A, 3) - expected) <= 1e-10

    def test_exponent_validation(self):
        A = MatrixOperator(LAT8, np.eye(8))
        with pytest.raises(ValidationError):
            schatten_norm(A, 0.5)
        assert validate_exponent(np.float64(2.0)) == 2.0
        assert conjugate_exponent(1.0) == math.inf
        assert conjugate_exponent(math.inf) == 1.0
        assert conjugate_exponent(4.0) == pytest.approx(4 / 3)

    @given(pq=st.tuples(st.floats(1.0, 10.0), st.floats(0.0, 10.0)))
    @settings(max_examples=25, deadline=None)
    def test_monotone_in_p(self, pq):
        p = pq[0]
        q = p + pq[1]
        rng = np.random.default_rng(17)
        A = random_matrix(LAT8, rng)
        assert schatten_norm(A, p) >= schatten_norm(A, q) - 1e-10

    def test_unitary_invariance(self):
        rng = np.random.default_rng(5)
        A = random_matrix(LAT16, rng)
        U = haar_unitary(16, rng)
        V = haar_unitary(16, rng)
        B = MatrixOperator(LAT16, U @ A.entries @ V)
        for p in (1, 2, 3.5, math.inf):
            assert schatten_norm(B, p) == pytest.approx(schatten_norm(A, p), abs=1e-10)

    def test_hoelder(self):
        rng = np.random.default_rng(9)
        for p in (1.5, 2.0, 3.0, 4.0):
            q = conjugate_exponent(p)
            for _ in range(5):
                A = random_matrix(LAT8, rng)
                B = random_matrix(LAT8, rng)
                lhs = abs(np.trace(A.entries @ B.entries))
                assert lhs <= schatten_norm(A, p) * schatten_norm(B, q) * (1 + 1e-12)


class TestSchurApply:
    def test_identity_multiplier(self):
        rng = np.random.default_rng(1)
        A = random_matrix(LAT8, rng)
        M = SymbolGrid(LAT8, np.ones((8, 8)))
        assert np.array_equal(schur_apply(M, A).entries, A.entries)

    def test_zero_multiplier(self):
        rng = np.random.default_rng(2)
        A = random_matrix(LAT8, rng)
        M = SymbolGrid(LAT8, np.zeros((8, 8)))
        assert np.all(schur_apply(M, A).entries == 0)

    def test_composition_is_entrywise_product(self):
        rng = np.random.default_rng(4)
        A = random_matrix(LAT8, rng)
        M = random_symbol(LAT8, rng)
        N = random_symbol(LAT8, rng)
        left = schur_apply(M, schur_apply(N, A)).entries
        right = schur_apply(SymbolGrid(LAT8, M.values * N.values), A).entries
        # associativity of the entrywise product, up to reassociation rounding
        assert np.allclose(left, right, rtol=2e-15, atol=0)

    def test_lattice_mismatch(self):
        A = random_matrix(LAT8, np.random.default_rng(0))
        M = SymbolGrid(LAT16, np.ones((16, 16)))
        with pytest.raises(LatticeMismatchError):
            schur_apply(M, A)

    def test_s2_contraction_with_equality_at_matrix_unit(self):
        rng = np.random.default_rng(6)
        M = random_symbol(LAT16, rng)
        for _ in range(10):
            A = random_matrix(LAT16, rng)
            assert schatten_norm(schur_apply(M, A), 2) <= M.sup_abs * schatten_norm(A, 2) * (1 + 1e-13)
        i, j = M.argmax_abs()
        E = np.zeros((16, 16), dtype=complex)
        E[i, j] = 1.0
        unit = MatrixOperator(LAT16, E)
        assert schatten_norm(schur_apply(M, unit), 2) == pytest.approx(M.sup_abs, rel=1e-14)


class TestAdjointIdentity:
    def test_real_symmetric_same_matrix(self):
        rng = np.random.default_rng(8)
        vals = rng.standard_normal((8, 8))
        M = SymbolGrid(LAT8, vals + vals.T)
        A = random_matrix(LAT8, rng)
        assert schur_adjoint_check(M, A, A) <= 1e-13 * schatten_norm(A, 2) ** 2

    def test_random_complex(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            M = random_symbol(LAT16, rng)
            A = random_matrix(LAT16, rng)
            B = random_matrix(LAT16, rng)
            scale = schatten_norm(A, 2) * schatten_norm(B, 2)
            assert schur_adjoint_check(M, A, B) <= 1e-12 * scale

    def test_imaginary_constant(self):
        M = SymbolGrid(LAT8, np.full((8, 8), 1j))
        rng = np.random.default_rng(12)
        A = random_matrix(LAT8, rng)
        B = random_matrix(LAT8, rng)
        assert schur_adjoint_check(M, A, B) <= 1e-13 * schatten_norm(A, 2) * schatten_norm(B, 2)
