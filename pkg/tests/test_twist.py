import numpy as np
import pytest

from schurlab import (
    MatrixField,
    SymbolGrid,
    ValidationError,
    column_square_bound_check,
    field_l2_norm,
    l2_bound_check,
    make_lattice,
    make_twisted,
    pi_embed,
    random_field,
    random_matrix,
    random_symbol,
    schatten_norm,
    schur_apply,
    twisted_apply,
    verify_intertwining,
)

LAT16 = make_lattice(1, 16, 1, "cyclic")


def triple_loop_twisted(Mc_vals, field_vals, view="column"):
    """Literal summation oracle for the twisted action."""
    N = field_vals.shape[0]
    fhat = np.zeros_like(field_vals)
    for xi in range(N):
        for z in range(N):
            fhat[xi] += field_vals[z] * np.exp(-2j * np.pi * xi * z / N)
    out = np.zeros_like(field_vals)
    for z in range(N):
        for xi in range(N):
            if view == "column":
                out[z] += Mc_vals[:, xi][:, None] * fhat[xi] * np.exp(2j * np.pi * xi * z / N)
            else:
                out[z] += Mc_vals[xi, :][None, :] * fhat[xi] * np.exp(2j * np.pi * xi * z / N)
        out[z] /= N
    return out


class TestTwistedApply:
    def test_identity_symbol(self):
        rng = np.random.default_rng(0)
        f = random_field(LAT16, rng)
        M = SymbolGrid(LAT16, np.ones((16, 16)))
        T = make_twisted(M, "column")
        out = twisted_apply(T, f)
        assert np.allclose(out.values, f.values, atol=1e-12)

    def test_constant_in_z_uses_frequency_zero(self):
        rng = np.random.default_rng(1)
        base = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        f = MatrixField(LAT16, LAT16, np.broadcast_to(base, (16, 16, 16)).copy())
        M = random_symbol(LAT16, rng)
        T = make_twisted(M, "column")
        out = twisted_apply(T, f)
        expected = T.M_view.values[:, 0][:, None] * base
        for z in range(16):
            assert np.allclose(out.values[z], expected, atol=1e-12)

    def test_matches_triple_loop_oracle(self):
        rng = np.random.default_rng(2)
        f = random_field(LAT16, rng)
        M = random_symbol(LAT16, rng)
        for view in ("column", "row"):
            T = make_twisted(M, view)
            out = twisted_apply(T, f)
            oracle = triple_loop_twisted(T.M_view.values, f.values, view)
            assert np.max(np.abs(out.values - oracle)) <= 1e-11 * np.max(np.abs(oracle))

    def test_needs_cyclic(self):
        lat = make_lattice(1, 4)
        M = SymbolGrid(lat, np.ones((9, 9)))
        with pytest.raises(ValidationError):
            make_twisted(M, "column")


class TestIntertwining:
    def test_identity_symbol_exact(self):
        rng = np.random.default_rng(3)
        A = random_matrix(LAT16, rng)
        M = SymbolGrid(LAT16, np.ones((16, 16)))
        col, row = verify_intertwining(M, A)
        assert col <= 1e-13 and row <= 1e-13

    def test_sign_toeplitz(self):
        from schurlab import toeplitz_symbol

        rng = np.random.default_rng(4)
        A = random_matrix(LAT16, rng)
        M = toeplitz_symbol(LAT16, np.sign)
        col, row = verify_intertwining(M, A)
        scale = schatten_norm(A, 2) * max(M.sup_abs, 1e-300)
        assert col <= 1e-10 * scale and row <= 1e-10 * scale

    def test_random_on_z32(self):
        lat = make_lattice(1, 32, 1, "cyclic")
        rng = np.random.default_rng(5)
        M = random_symbol(lat, rng)
        A = random_matrix(lat, rng)
        col, row = verify_intertwining(M, A)
        scale = schatten_norm(A, 2) * M.sup_abs
        assert col <= 1e-10 * scale and row <= 1e-10 * scale

    def test_intertwined_equals_embedded_image(self):
        rng = np.random.default_rng(6)
        M = random_symbol(LAT16, rng)
        A = random_matrix(LAT16, rng)
        T = make_twisted(M, "column")
        lhs = twisted_apply(T, pi_embed(A, LAT16))
        rhs = pi_embed(schur_apply(M, A), LAT16)
        assert np.allclose(lhs.values, rhs.values, atol=1e-11 * M.sup_abs * np.abs(A.entries).max())


class TestL2Bound:
    def test_identity_equality(self):
        rng = np.random.default_rng(7)
        f = random_field(LAT16, rng)
        M = SymbolGrid(LAT16, np.ones((16, 16)))
        lhs, rhs = l2_bound_check(M, f)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_single_row_symbol(self):
        rng = np.random.default_rng(8)
        f = random_field(LAT16, rng)
        vals = np.zeros((16, 16))
        vals[5, :] = rng.standard_normal(16)
        M = SymbolGrid(LAT16, vals)
        lhs, rhs = l2_bound_check(M, f)
        assert lhs <= rhs * (1 + 1e-9)

    def test_hundred_random_trials(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            M = random_symbol(LAT16, rng)
            f = random_field(LAT16, rng)
            lhs, rhs = l2_bound_check(M, f)
            assert lhs <= rhs * (1 + 1e-9)


class TestColumnSquareBound:
    def test_identity_equality(self):
        rng = np.random.default_rng(10)
        f = random_field(LAT16, rng)
        M = SymbolGrid(LAT16, np.ones((16, 16)))
        lhs, rhs = column_square_bound_check(M, f)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_single_z_support(self):
        rng = np.random.default_rng(11)
        vals = np.zeros((16, 16, 16), dtype=complex)
        vals[3] = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        f = MatrixField(LAT16, LAT16, vals)
        M = random_symbol(LAT16, rng)
        lhs, rhs = column_square_bound_check(M, f)
        assert lhs <= rhs * (1 + 1e-9)

    def test_hundred_random_trials(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            M = random_symbol(LAT16, rng)
            f = random_field(LAT16, rng)
            lhs, rhs = column_square_bound_check(M, f)
            assert lhs <= rhs * (1 + 1e-9)


class TestModuleProperties:
    def test_right_module_property_column(self):
        rng = np.random.default_rng(13)
        M = random_symbol(LAT16, rng)
        f = random_field(LAT16, rng)
        B = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        T = make_twisted(M, "column")
        left = twisted_apply(T, MatrixField(LAT16, LAT16, f.values @ B)).values
        right = twisted_apply(T, f).values @ B
        assert np.max(np.abs(left - right)) <= 1e-12 * np.max(np.abs(right))

    def test_left_module_property_row(self):
        rng = np.random.default_rng(14)
        M = random_symbol(LAT16, rng)
        f = random_field(LAT16, rng)
        B = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        T = make_twisted(M, "row")
        left = twisted_apply(T, MatrixField(LAT16, LAT16, B @ f.values)).values
        right = B @ twisted_apply(T, f).values
        assert np.max(np.abs(left - right)) <= 1e-12 * np.max(np.abs(right))

    def test_plancherel_field_norm(self):
        rng = np.random.default_rng(15)
        f = random_field(LAT16, rng)
        fhat = np.fft.fft(f.values, axis=0)
        direct = field_l2_norm(f)
        # with the unnormalized forward transform, ||fhat||^2 = N ||f||^2
        spectral = np.sqrt(np.mean(np.sum(np.abs(fhat) ** 2, axis=(1, 2))) / 16)
        assert direct == pytest.approx(spectral, rel=1e-12)
