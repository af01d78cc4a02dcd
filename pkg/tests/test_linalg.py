import numpy as np
import pytest

from gamedyn import linalg
from gamedyn.errors import DimensionError, SingularMatrixError


def sorted_by_imag(s):
    return np.asarray(sorted(s, key=lambda z: (round(z.real, 9), z.imag)))


class TestEigenvalues:
    def test_identity(self):
        lam = linalg.eigenvalues(np.eye(3))
        assert np.allclose(np.sort(lam.real), [1, 1, 1])
        assert np.allclose(lam.imag, 0)

    def test_rotation_generator(self):
        lam = sorted_by_imag(linalg.eigenvalues([[0.0, 1.0], [-1.0, 0.0]]))
        assert np.allclose(lam, [-1j, 1j])

    def test_shifted_rotation(self):
        # roots of (X - eps)^2 + 1 are eps +- i
        eps = 0.1
        lam = sorted_by_imag(linalg.eigenvalues([[eps, 1.0], [-1.0, eps]]))
        assert np.allclose(lam, [eps - 1j, eps + 1j], atol=1e-12)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            linalg.eigenvalues(np.ones((2, 3)))

    def test_nonfinite_rejected(self):
        with pytest.raises(DimensionError):
            linalg.eigenvalues([[np.nan, 0.0], [0.0, 1.0]])

    def test_conjugate_closure_random(self, rng):
        for _ in range(30):
            d = int(rng.integers(2, 9))
            lam = linalg.eigenvalues(rng.standard_normal((d, d)))
            # every eigenvalue's conjugate appears in the multiset
            remaining = list(lam)
            for z in lam:
                match = min(remaining, key=lambda w: abs(w - np.conj(z)))
                assert abs(match - np.conj(z)) < 1e-8
                remaining.remove(match)

    def test_trace_and_determinant_random(self, rng):
        for _ in range(30):
            d = int(rng.integers(1, 9))
            a = rng.standard_normal((d, d))
            lam = linalg.eigenvalues(a)
            tr = np.trace(a)
            assert abs(lam.sum().real - tr) <= 1e-8 * (1 + abs(tr))
            det = np.linalg.det(a)
            scale = max(1.0, np.prod(np.abs(lam)))
            assert abs(np.prod(lam) - det) <= 1e-8 * scale


class TestSingularValues:
    def test_identity(self):
        assert np.allclose(linalg.singular_values(np.eye(2)), [1, 1])

    def test_diagonal_absolute_values(self):
        assert np.allclose(linalg.singular_values(np.diag([3.0, -4.0])), [4, 3])

    def test_bilinear_block_doubles(self):
        a = np.diag([1.0, 2.0])
        m = np.block([[np.zeros((2, 2)), a], [-a.T, np.zeros((2, 2))]])
        assert np.allclose(linalg.singular_values(m), [2, 2, 1, 1])

    def test_descending_and_svd_consistency(self, rng):
        for _ in range(20):
            a = rng.standard_normal((int(rng.integers(1, 7)), int(rng.integers(1, 7))))
            sv = linalg.singular_values(a)
            assert np.all(np.diff(sv) <= 1e-15)
            gram_eigs = np.sort(np.linalg.eigvalsh(a.T @ a))[::-1][: sv.size]
            ref = np.maximum(gram_eigs, 0.0)
            assert np.allclose(sv**2, ref, rtol=1e-8, atol=1e-10)


class TestSolveLinear:
    def test_identity(self, rng):
        b = rng.standard_normal(4)
        assert np.allclose(linalg.solve_linear(np.eye(4), b), b)

    def test_diagonal(self):
        x = linalg.solve_linear(np.diag([2.0, 4.0]), [2.0, 4.0])
        assert np.allclose(x, [1.0, 1.0])

    def test_residual_on_well_conditioned(self, rng):
        for _ in range(10):
            q1, _ = np.linalg.qr(rng.standard_normal((5, 5)))
            q2, _ = np.linalg.qr(rng.standard_normal((5, 5)))
            a = q1 @ np.diag(rng.uniform(1.0, 2.0, 5)) @ q2
            b = rng.standard_normal(5)
            x = linalg.solve_linear(a, b)
            resid = np.linalg.norm(a @ x - b)
            bound = 1e-10 * (np.linalg.norm(a) * np.linalg.norm(x) + np.linalg.norm(b))
            assert resid <= max(bound, 1e-10)

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrixError):
            linalg.solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), [1.0, 1.0])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.solve_linear(np.eye(2), [1.0, 2.0, 3.0])


class TestSpectralMap:
    def test_identity_polynomial(self):
        out = linalg.spectral_map([1.0, 2.0], [0.0, 1.0])
        assert np.allclose(sorted(out.real), [1, 2])

    def test_complex_arithmetic(self):
        # P(X) = 1 - X + X^2 at i: 1 - i - 1 = -i
        out = linalg.spectral_map([1j], [1.0, -1.0, 1.0])
        assert np.allclose(out, [-1j])

    def test_square_of_rotation(self):
        out = linalg.spectral_map([1j, -1j], [0.0, 0.0, 1.0])
        assert np.allclose(out, [-1.0, -1.0])

    def test_multiplicity_preserved(self):
        out = linalg.spectral_map([2.0, 2.0, 3.0], [1.0, 1.0])
        assert sorted(out.real) == [3.0, 3.0, 4.0]

    def test_composition_random(self, rng):
        # mapping by Q then by P equals mapping by the exactly composed P o Q
        for _ in range(20):
            s = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            p = rng.standard_normal(int(rng.integers(1, 5)))
            q = rng.standard_normal(int(rng.integers(1, 5)))
            composed = np.polynomial.polynomial.Polynomial(p)(
                np.polynomial.polynomial.Polynomial(q)
            )
            two_step = linalg.spectral_map(linalg.spectral_map(s, q), p)
            one_step = linalg.spectral_map(s, composed.coef)
            assert np.allclose(two_step, one_step, atol=1e-9, rtol=1e-9)


def test_matrix_polynomial_matches_spectral_map(rng):
    a = rng.standard_normal((5, 5))
    coeffs = rng.standard_normal(4)
    lam = np.sort_complex(linalg.eigenvalues(linalg.matrix_polynomial(a, coeffs)))
    mapped = np.sort_complex(linalg.spectral_map(linalg.eigenvalues(a), coeffs))
    assert np.allclose(lam, mapped, atol=1e-8)
