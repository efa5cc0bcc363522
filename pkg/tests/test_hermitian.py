"""Hermitian algebra: frozen oracle values and property checks.

Expected numbers are computed by independent means: explicit 3x3 traces,
closed-form 2x2 exponentials, and direct eigenvalue formulas.
"""

from __future__ import annotations

import numpy as np
import pytest

from maxentprobe.errors import DensityCheckError, ValidationError
from maxentprobe.hermitian import (
    Hermitian,
    direct_sum,
    gibbs_state,
    hs_inner,
    identity,
    is_density,
    log_partition,
    pauli,
    spectrum,
    von_neumann_entropy,
    zero,
)

from conftest import (
    cone_apex,
    cone_centroid,
    cone_circle_state,
    cone_observables,
    random_density,
    random_hermitian,
)


class TestHermitianType:
    def test_rejects_non_selfadjoint_with_index(self):
        bad = [[0.0, 1.0], [0.5, 0.0]]
        with pytest.raises(ValidationError, match=r"\(0,1\)"):
            Hermitian(bad)

    def test_rejects_non_square(self):
        with pytest.raises(ValidationError):
            Hermitian(np.zeros((2, 3)))

    def test_immutable(self):
        h = pauli(1)
        with pytest.raises((ValueError, AttributeError)):
            h.mat[0, 0] = 5.0

    def test_symmetrized_storage(self):
        h = Hermitian([[1.0, 1e-13j], [0.0, 2.0]])
        assert np.allclose(h.mat, h.mat.conj().T, atol=0)


class TestSpectrum:
    def test_reconstruction_and_orthonormality(self, rng):
        for _ in range(20):
            h = random_hermitian(rng, rng.integers(1, 7))
            s = spectrum(h)
            v, w = s.eigenvectors, s.eigenvalues
            rebuilt = (v * w) @ v.conj().T
            assert np.linalg.norm(rebuilt - h.mat) <= 1e-10
            assert np.linalg.norm(v.conj().T @ v - np.eye(h.dim)) <= 1e-10
            assert np.all(np.diff(w) >= -1e-14)


class TestHsInner:
    def test_embedded_paulis_orthogonal(self):
        # oracle: direct 3x3 trace
        a = direct_sum(pauli(1), zero(1))
        b = direct_sum(pauli(2), zero(1))
        assert hs_inner(a, b) == pytest.approx(np.trace(a.mat @ b.mat).real, abs=0)
        assert hs_inner(a, b) == pytest.approx(0.0, abs=1e-14)

    def test_identity_norm(self):
        for n in (1, 2, 5):
            assert hs_inner(identity(n), identity(n)) == pytest.approx(float(n))

    def test_cone_observable_norm(self):
        # oracle: explicit trace of the squared matrix
        u2 = cone_observables()[1]
        direct = np.trace(u2.mat @ u2.mat).real
        assert direct == pytest.approx(8.0 / 3.0, abs=1e-12)
        assert hs_inner(u2, u2) == pytest.approx(8.0 / 3.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            hs_inner(pauli(1), identity(3))

    def test_bilinear_positive_definite(self, rng):
        for _ in range(100):
            a = random_hermitian(rng, 3)
            if np.abs(a.mat).max() >= 1e-14:
                assert hs_inner(a, a) > 0.0
            b = random_hermitian(rng, 3)
            c = random_hermitian(rng, 3)
            t = float(rng.normal())
            lhs = hs_inner(a + t * b, c)
            rhs = hs_inner(a, c) + t * hs_inner(b, c)
            assert lhs == pytest.approx(rhs, abs=1e-10)
            assert hs_inner(a, b) == pytest.approx(hs_inner(b, a), abs=1e-12)


class TestEntropy:
    def test_centroid_log2(self):
        assert von_neumann_entropy(cone_centroid()) == pytest.approx(np.log(2.0), abs=1e-12)

    def test_circle_states_zero(self):
        for alpha in (0.0, 0.7, np.pi, 4.0):
            assert von_neumann_entropy(cone_circle_state(alpha)) == pytest.approx(0.0, abs=1e-9)

    def test_maximally_mixed(self):
        for n in (2, 3, 5):
            rho = (1.0 / n) * identity(n)
            assert von_neumann_entropy(rho) == pytest.approx(np.log(n), abs=1e-12)

    def test_rejects_non_density(self):
        with pytest.raises(DensityCheckError):
            von_neumann_entropy(pauli(3))

    def test_range_and_concavity(self, rng):
        for _ in range(100):
            rho = random_density(rng, 3)
            sig = random_density(rng, 3)
            s_rho = von_neumann_entropy(rho)
            assert 0.0 <= s_rho <= np.log(3.0) + 1e-12
            for t in (0.25, 0.5, 0.75):
                mix = t * rho + (1.0 - t) * sig
                s_mix = von_neumann_entropy(mix)
                assert s_mix >= t * s_rho + (1.0 - t) * von_neumann_entropy(sig) - 1e-9


class TestGibbs:
    def test_zero_parameter_maximally_mixed(self):
        rho = gibbs_state([pauli(1)], [0.0])
        assert np.linalg.norm(rho.mat - np.eye(2) / 2.0) <= 1e-14

    def test_closed_form_2x2(self):
        # oracle: exp(s1) = cosh(1) I + sinh(1) s1
        rho = gibbs_state([pauli(1)], [1.0])
        expected = 0.5 * (np.eye(2) + np.tanh(1.0) * pauli(1).mat)
        assert np.linalg.norm(rho.mat - expected) <= 1e-12

    def test_zero_vector_any_basis(self, rng):
        basis = [random_hermitian(rng, 4) for _ in range(3)]
        rho = gibbs_state(basis, np.zeros(3))
        assert np.linalg.norm(rho.mat - np.eye(4) / 4.0) <= 1e-13

    def test_output_strictly_positive_density(self, rng):
        for _ in range(50):
            k = int(rng.integers(1, 4))
            basis = [random_hermitian(rng, 3) for _ in range(k)]
            theta = rng.normal(size=k, scale=2.0)
            rho = gibbs_state(basis, theta)
            check = is_density(rho, 1e-10)
            assert check.ok
            assert check.min_eigenvalue > 0.0

    def test_duality_identity(self, rng):
        # S(rho_theta) = log Z - <theta, means>
        for _ in range(30):
            k = int(rng.integers(1, 4))
            basis = [random_hermitian(rng, 3) for _ in range(k)]
            theta = rng.normal(size=k)
            rho = gibbs_state(basis, theta)
            means = np.array([hs_inner(u, rho) for u in basis])
            expected = log_partition(basis, theta) - float(theta @ means)
            assert von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-8)

    def test_overflow_guard(self):
        rho = gibbs_state([pauli(3)], [800.0])
        assert is_density(rho, 1e-12).ok
        assert rho.mat[0, 0].real == pytest.approx(1.0, abs=1e-12)


class TestIsDensity:
    def test_mixed_state_true(self):
        assert bool(is_density((1.0 / 3.0) * identity(3), 1e-9))

    def test_traceless_false(self):
        check = is_density(pauli(3), 1e-9)
        assert not check.ok
        assert check.trace_error == pytest.approx(1.0)

    def test_circle_state_true(self):
        # oracle: eigenvalues of rho(0) are {1, 0, 0} by direct computation
        w = np.linalg.eigvalsh(cone_circle_state(0.0).mat)
        assert np.allclose(sorted(w), [0.0, 0.0, 1.0], atol=1e-12)
        check = is_density(cone_circle_state(0.0), 1e-9)
        assert check.ok
        assert abs(check.min_eigenvalue) <= 1e-12

    def test_apex_rank_one(self):
        assert bool(is_density(cone_apex(), 1e-12))
