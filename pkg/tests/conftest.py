"""Shared fixtures: the example state spaces used throughout the suite."""

from __future__ import annotations

import numpy as np
import pytest

from maxentprobe.hermitian import Hermitian, direct_sum, identity, pauli, zero


def sigma(i: int) -> np.ndarray:
    return pauli(i).mat


def cone_algebra_basis() -> list[Hermitian]:
    """Self-adjoint part of the conic subalgebra of Mat(3, C)."""
    return [
        direct_sum(identity(2), zero(1)),
        direct_sum(pauli(1), zero(1)),
        direct_sum(pauli(2), zero(1)),
        direct_sum(zero(2), identity(1)),
    ]


def cone_observables() -> list[Hermitian]:
    u1 = direct_sum(pauli(1), zero(1))
    u2 = direct_sum(pauli(2), identity(1)) - (1.0 / 3.0) * identity(3)
    return [u1, u2]


def cone_circle_state(alpha: float) -> Hermitian:
    """Rank-one state on the base circle of the cone."""
    block = 0.5 * (np.eye(2) + np.sin(alpha) * sigma(1) + np.cos(alpha) * sigma(2))
    out = np.zeros((3, 3), dtype=complex)
    out[:2, :2] = block
    return Hermitian(out)


def cone_apex() -> Hermitian:
    return direct_sum(zero(2), identity(1))


def cone_centroid() -> Hermitian:
    return 0.5 * (cone_circle_state(0.0) + cone_apex())


@pytest.fixture(scope="session")
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> Hermitian:
    a = rng.normal(size=(dim, dim), scale=scale) + 1j * rng.normal(size=(dim, dim), scale=scale)
    return Hermitian(0.5 * (a + a.conj().T))


def random_density(rng: np.random.Generator, dim: int) -> Hermitian:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    m /= np.trace(m).real
    return Hermitian(m)
