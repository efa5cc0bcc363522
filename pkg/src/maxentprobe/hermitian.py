"""Hermitian matrix algebra: inner products, spectra, entropy, Gibbs states.

All matrices are dense complex arrays wrapped in :class:`Hermitian`, which
validates self-adjointness at construction and is immutable afterwards.
Spectral computations use ``numpy.linalg.eigh`` (ascending eigenvalues),
which is exact to machine precision at the matrix sizes this package
targets (N <= 64).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DensityCheckError, ValidationError

# Self-adjointness tolerance for constructor validation.
HERMITIAN_TOL = 1e-12
# Eigenvalues below this are treated as exact zeros when evaluating entropy;
# fibers contain rank-deficient states by construction.
ENTROPY_CLAMP_TOL = 1e-9


class Hermitian:
    """A self-adjoint complex N x N matrix.

    Entries are validated against ``conj-transpose`` symmetry within
    ``HERMITIAN_TOL`` and then symmetrized, so stored matrices are exactly
    self-adjoint in floating point. Instances are immutable and safe to
    share between threads.
    """

    __slots__ = ("mat",)

    def __init__(self, entries, *, tol: float = HERMITIAN_TOL) -> None:
        m = np.asarray(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValidationError("matrix dimension must be at least 1")
        if not np.all(np.isfinite(m.view(float))):
            raise ValidationError("matrix entries must be finite")
        dev = np.abs(m - m.conj().T)
        worst = np.unravel_index(np.argmax(dev), dev.shape)
        if dev[worst] > tol:
            i, j = worst
            raise ValidationError(
                f"not self-adjoint within {tol:g}: entry ({i},{j}) vs conj ({j},{i}) "
                f"differ by {dev[worst]:.3e}")
        sym = 0.5 * (m + m.conj().T)
        sym.flags.writeable = False
        object.__setattr__(self, "mat", sym)

    @classmethod
    def _trusted(cls, mat: np.ndarray) -> "Hermitian":
        """Wrap an exactly self-adjoint array without re-validation."""
        obj = object.__new__(cls)
        mat = np.ascontiguousarray(mat, dtype=complex)
        mat.flags.writeable = False
        object.__setattr__(obj, "mat", mat)
        return obj

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def __add__(self, other: "Hermitian") -> "Hermitian":
        return Hermitian._trusted(self.mat + other.mat)

    def __sub__(self, other: "Hermitian") -> "Hermitian":
        return Hermitian._trusted(self.mat - other.mat)

    def __mul__(self, scalar: float) -> "Hermitian":
        return Hermitian._trusted(self.mat * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Hermitian":
        return Hermitian._trusted(-self.mat)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Hermitian is immutable")

    def __repr__(self) -> str:
        return f"Hermitian(dim={self.dim})"


def identity(dim: int) -> Hermitian:
    return Hermitian._trusted(np.eye(dim, dtype=complex))


def zero(dim: int) -> Hermitian:
    return Hermitian._trusted(np.zeros((dim, dim), dtype=complex))


_PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(index: int) -> Hermitian:
    """The 2x2 sigma matrix for ``index`` in {1, 2, 3}."""
    if index not in _PAULI:
        raise ValidationError(f"pauli index must be 1, 2 or 3, got {index}")
    return Hermitian._trusted(_PAULI[index].copy())


def direct_sum(a: Hermitian, b: Hermitian) -> Hermitian:
    """Block-diagonal sum ``a (+) b``."""
    n, m = a.dim, b.dim
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n] = a.mat
    out[n:, n:] = b.mat
    return Hermitian._trusted(out)


def hs_inner(a: Hermitian, b: Hermitian) -> float:
    """Hilbert-Schmidt scalar product tr(ab); real for self-adjoint inputs."""
    if a.dim != b.dim:
        raise ValidationError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(np.trace(a.mat @ b.mat).real)


def hs_norm(a: Hermitian) -> float:
    return float(np.linalg.norm(a.mat))


def hs_distance(a: Hermitian, b: Hermitian) -> float:
    if a.dim != b.dim:
        raise ValidationError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(np.linalg.norm(a.mat - b.mat))


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds the
    matching orthonormal columns, so ``V diag(w) V^dagger`` reconstructs the
    input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def spectrum(a: Hermitian) -> Spectrum:
    w, v = np.linalg.eigh(a.mat)
    w.flags.writeable = False
    v.flags.writeable = False
    return Spectrum(eigenvalues=w, eigenvectors=v)


@dataclass(frozen=True)
class DensityCheck:
    """Result of a density-matrix test with the two slack values."""

    ok: bool
    min_eigenvalue: float
    trace_error: float
    tol: float

    def __bool__(self) -> bool:
        return self.ok


def is_density(rho: Hermitian, tol: float = 1e-9) -> DensityCheck:
    """True iff lambda_min >= -tol and |tr - 1| <= tol."""
    w = np.linalg.eigvalsh(rho.mat)
    lam_min = float(w[0])
    tr_err = abs(float(np.trace(rho.mat).real) - 1.0)
    return DensityCheck(ok=(lam_min >= -tol and tr_err <= tol),
                        min_eigenvalue=lam_min, trace_error=tr_err, tol=tol)


def von_neumann_entropy(rho: Hermitian, *, tol: float = 1e-9) -> float:
    """Entropy -tr(rho log rho) with 0 log 0 := 0.

    The input must pass :func:`is_density` at ``tol``; eigenvalues below
    ``ENTROPY_CLAMP_TOL`` are treated as exact zeros and the spectrum is
    renormalized, keeping the value inside [0, log N].
    """
    check = is_density(rho, tol)
    if not check:
        raise DensityCheckError(
            f"not a density matrix within {tol:g}: lambda_min={check.min_eigenvalue:.3e}, "
            f"trace error={check.trace_error:.3e}")
    w = np.linalg.eigvalsh(rho.mat)
    w = np.where(w < ENTROPY_CLAMP_TOL, 0.0, w)
    total = w.sum()
    if total <= 0.0:  # pragma: no cover - excluded by the density check
        raise DensityCheckError("spectrum vanished after clamping")
    w = w / total
    pos = w[w > 0.0]
    return float(-(pos * np.log(pos)).sum())


def gibbs_state(basis, theta) -> Hermitian:
    """Normalized matrix exponential exp(sum theta_i u_i) / Z.

    Computed from the eigendecomposition of the exponent with the largest
    eigenvalue subtracted before exponentiation, so the result is a strictly
    positive-definite density matrix for any parameter vector.
    """
    basis = list(basis)
    theta = np.asarray(theta, dtype=float)
    if len(basis) != theta.shape[0]:
        raise ValidationError(
            f"theta length {theta.shape[0]} does not match basis size {len(basis)}")
    if not basis:
        raise ValidationError("basis must not be empty")
    dim = basis[0].dim
    h = np.zeros((dim, dim), dtype=complex)
    for coeff, u in zip(theta, basis):
        if u.dim != dim:
            raise ValidationError(f"dimension mismatch in basis: {u.dim} vs {dim}")
        h += coeff * u.mat
    w, v = np.linalg.eigh(h)
    p = np.exp(w - w[-1])
    p /= p.sum()
    rho = (v * p) @ v.conj().T
    return Hermitian._trusted(0.5 * (rho + rho.conj().T))


def log_partition(basis, theta) -> float:
    """log tr exp(sum theta_i u_i), evaluated with an overflow shift."""
    basis = list(basis)
    theta = np.asarray(theta, dtype=float)
    dim = basis[0].dim
    h = np.zeros((dim, dim), dtype=complex)
    for coeff, u in zip(theta, basis):
        h += coeff * u.mat
    w = np.linalg.eigvalsh(h)
    shift = w[-1]
    return float(shift + np.log(np.exp(w - shift).sum()))
