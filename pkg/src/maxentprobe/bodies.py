"""Convex state-space backends and observable subspaces.

Both backends expose one coordinate convention: a state is a real coordinate
vector. The matrix backend identifies the self-adjoint part of a
*-subalgebra with R^d through an orthonormal basis under the Hilbert-Schmidt
inner product, so Euclidean geometry in coordinates equals Hilbert-Schmidt
geometry on matrices. The polytope backend uses ambient Cartesian
coordinates directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .hermitian import Hermitian, hs_norm, identity

MATRIX = "matrix"
POLYTOPE = "polytope"

# Identity-in-span and orthonormality tolerances for constructed bases.
SPAN_TOL = 1e-10
# Gram-Schmidt drop threshold: residual below this counts as rank deficiency.
RANK_DROP_TOL = 1e-10
# Vertices closer than this are merged.
VERTEX_DEDUP_TOL = 1e-12


def _gram_schmidt_rows(rows: np.ndarray, drop_tol: float):
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Returns (orthonormal rows, kept indices, dropped indices). A row whose
    residual norm after projection falls below ``drop_tol`` (relative to its
    original norm, floored at 1) is dropped.
    """
    kept: list[np.ndarray] = []
    kept_idx: list[int] = []
    dropped: list[int] = []
    for i, row in enumerate(rows):
        v = row.astype(float).copy()
        scale = max(1.0, float(np.linalg.norm(v)))
        for _ in range(2):
            for q in kept:
                v -= (q @ v) * q
        norm = float(np.linalg.norm(v))
        if norm < drop_tol * scale:
            dropped.append(i)
            continue
        kept.append(v / norm)
        kept_idx.append(i)
    basis = np.array(kept) if kept else np.zeros((0, rows.shape[1]))
    return basis, kept_idx, dropped


class StateSpace:
    """A convex body of states: spectrahedral (matrix) or polytopal backend.

    Matrix backend: the body is the set of trace-one positive semidefinite
    matrices inside the real span of a given self-adjoint basis (which must
    be linearly independent and contain the identity in its span).

    Polytope backend: the convex hull of a finite vertex list in E^n.

    Instances are immutable after construction and safe to share across
    threads.
    """

    def __init__(self, *_args, **_kwargs):
        raise TypeError("use StateSpace.from_algebra_basis or StateSpace.from_vertices")

    # -- construction -----------------------------------------------------

    @classmethod
    def _new(cls) -> "StateSpace":
        return object.__new__(cls)

    @classmethod
    def from_algebra_basis(cls, basis) -> "StateSpace":
        basis = tuple(basis)
        if not basis:
            raise ValidationError("algebra basis must not be empty")
        dim = basis[0].dim
        for i, b in enumerate(basis):
            if not isinstance(b, Hermitian):
                raise ValidationError(f"algebra basis element {i} is not Hermitian")
            if b.dim != dim:
                raise ValidationError(
                    f"algebra basis element {i} has dim {b.dim}, expected {dim}")
        d = len(basis)
        gram = np.empty((d, d))
        for i in range(d):
            for j in range(i, d):
                val = float(np.trace(basis[i].mat @ basis[j].mat).real)
                gram[i, j] = gram[j, i] = val
        svals = np.linalg.svd(gram, compute_uv=False)
        if svals[-1] <= 1e-12 * max(1.0, svals[0]):
            raise ValidationError(
                "algebra basis is linearly dependent under the Hilbert-Schmidt "
                f"inner product (singular values {svals[0]:.3e}..{svals[-1]:.3e})")
        gram_condition = float(svals[0] / svals[-1])

        # Orthonormalize the matrices themselves (MGS, two passes).
        onb: list[np.ndarray] = []
        for b in basis:
            v = b.mat.astype(complex).copy()
            for _ in range(2):
                for q in onb:
                    v -= np.trace(q.conj().T @ v) * q
            norm = float(np.linalg.norm(v))
            if norm < RANK_DROP_TOL:  # pragma: no cover - excluded by Gram check
                raise ValidationError("algebra basis lost rank during orthonormalization")
            onb.append(v / norm)
        onb_stack = np.array(onb)

        self = cls._new()
        self.kind = MATRIX
        self.matrix_dim = dim
        self.basis = basis
        self.onb = onb_stack
        self.dim = d
        self.ambient_dim = d
        self.gram_condition = gram_condition

        eye = identity(dim)
        id_coords = self.coords_of_matrix(eye.mat)
        resid = np.linalg.norm(eye.mat - self.matrix_of_coords(id_coords))
        if resid > SPAN_TOL * dim:
            raise ValidationError(
                f"identity is not in the span of the algebra basis (residual {resid:.3e})")
        self.identity_coords = id_coords
        self.identity_coords.flags.writeable = False
        self.anchor = id_coords / dim
        self.anchor.flags.writeable = False
        self.vertices = None
        return self

    @classmethod
    def from_vertices(cls, vertices) -> "StateSpace":
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] < 1:
            raise ValidationError("polytope backend needs at least one vertex")
        if not np.all(np.isfinite(verts)):
            raise ValidationError("vertices must be finite")
        # Deduplicate within tolerance, keeping the first occurrence.
        kept: list[int] = []
        for i, v in enumerate(verts):
            if all(np.linalg.norm(v - verts[j]) > VERTEX_DEDUP_TOL for j in kept):
                kept.append(i)
        verts = verts[kept]
        verts.flags.writeable = False

        self = cls._new()
        self.kind = POLYTOPE
        self.matrix_dim = 0
        self.basis = None
        self.onb = None
        self.vertices = verts
        self.dim = verts.shape[1]
        self.ambient_dim = verts.shape[1]
        self.gram_condition = 1.0
        self.identity_coords = None
        self.anchor = verts.mean(axis=0)
        self.anchor.flags.writeable = False
        return self

    # -- coordinates (matrix backend) -------------------------------------

    def coords_of_matrix(self, mat: np.ndarray) -> np.ndarray:
        """Coordinates of a self-adjoint matrix in the orthonormal basis."""
        return np.einsum("kij,ji->k", self.onb, mat).real.astype(float)

    def matrix_of_coords(self, x: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(x, dtype=float), self.onb, axes=1)

    def matrices_of_coords(self, xs: np.ndarray) -> np.ndarray:
        """Batched version: (B, d) coordinates -> (B, N, N) matrices."""
        return np.tensordot(np.asarray(xs, dtype=float), self.onb, axes=([-1], [0]))

    def coords_of_matrices(self, mats: np.ndarray) -> np.ndarray:
        return np.einsum("kij,bji->bk", self.onb, mats).real.astype(float)

    def coords_of(self, state) -> np.ndarray:
        """Coordinates of a state given as Hermitian (matrix) or point (polytope).

        Matrix-backend inputs must lie in the algebra's self-adjoint span.
        """
        if self.kind == MATRIX:
            if not isinstance(state, Hermitian):
                raise ValidationError("matrix backend expects a Hermitian state")
            if state.dim != self.matrix_dim:
                raise ValidationError(
                    f"state dim {state.dim} does not match backend dim {self.matrix_dim}")
            x = self.coords_of_matrix(state.mat)
            resid = np.linalg.norm(state.mat - self.matrix_of_coords(x))
            if resid > 1e-8 * max(1.0, hs_norm(state)):
                raise ValidationError(
                    f"state lies outside the algebra's self-adjoint span "
                    f"(residual {resid:.3e})")
            return x
        point = np.asarray(state, dtype=float).reshape(-1)
        if point.shape[0] != self.ambient_dim:
            raise ValidationError(
                f"point dim {point.shape[0]} does not match ambient dim {self.ambient_dim}")
        return point

    def state_of(self, x: np.ndarray):
        """Inverse of :meth:`coords_of`."""
        if self.kind == MATRIX:
            return Hermitian(self.matrix_of_coords(x), tol=1e-9)
        return np.asarray(x, dtype=float).copy()

    # -- body projection (matrix backend; polytope delegated to fibers) ---

    def project_coords(self, xs: np.ndarray, floor: float = 0.0) -> np.ndarray:
        """Metric projection onto {trace one, eigenvalues >= floor}.

        Matrix backend only; batched over the leading axis. Exact because
        the spectral simplex projection of an algebra element stays in the
        algebra.
        """
        if self.kind != MATRIX:
            raise ValidationError("project_coords is matrix-backend only")
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        mats = self.matrices_of_coords(xs)
        w, v = np.linalg.eigh(mats)
        w = simplex_spectrum_projection(w, floor)
        mats = np.einsum("bik,bk,bjk->bij", v, w, v.conj())
        return self.coords_of_matrices(mats)

    def feasibility_slack(self, x: np.ndarray) -> float:
        """Min-eigenvalue slack (matrix) or minus hull distance (polytope)."""
        if self.kind == MATRIX:
            w = np.linalg.eigvalsh(self.matrix_of_coords(x))
            return float(w[0])
        from .fibers import hull_distance  # local import to avoid a cycle
        return -hull_distance(self, np.asarray(x, dtype=float))


def simplex_spectrum_projection(w: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """Project spectra (batched rows) onto {mu_i >= floor, sum mu = 1}.

    Standard sort-based water-filling on the shifted simplex.
    """
    w = np.atleast_2d(w)
    n = w.shape[1]
    total = 1.0 - n * floor
    if total < -1e-12:
        raise ValidationError(f"eigenvalue floor {floor:g} infeasible for dimension {n}")
    total = max(total, 0.0)
    u = w - floor
    s = np.sort(u, axis=1)[:, ::-1]
    cum = np.cumsum(s, axis=1) - total
    ks = np.arange(1, n + 1)
    cond = s - cum / ks > 0.0
    # rho: last index where the condition holds (always holds at k=1-ish).
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = cum[np.arange(w.shape[0]), rho] / (rho + 1.0)
    return floor + np.maximum(u - theta[:, None], 0.0)


@dataclass(frozen=True)
class ObservableSubspace:
    """The subspace U providing mean values, with an orthonormalized basis.

    ``rows`` holds the coordinates of the orthonormal spanning set, one row
    per element, so ``rows @ x`` is the mean value of the state with
    coordinates ``x`` and ``rows.T @ m`` embeds a mean value back into the
    ambient space.
    """

    space: StateSpace = field(repr=False)
    rows: np.ndarray
    k: int
    raw_count: int
    dropped: tuple[int, ...]
    mats: tuple[Hermitian, ...] | None
    vectors: np.ndarray | None

    def mean_of_coords(self, x: np.ndarray) -> np.ndarray:
        return self.rows @ np.asarray(x, dtype=float)

    def means_of_coords(self, xs: np.ndarray) -> np.ndarray:
        return np.asarray(xs, dtype=float) @ self.rows.T

    def embed_mean(self, m: np.ndarray) -> np.ndarray:
        return self.rows.T @ np.asarray(m, dtype=float)


def orthonormalize(space: StateSpace, raw) -> ObservableSubspace:
    """Orthonormalize a raw spanning set of observables.

    Modified Gram-Schmidt with re-orthogonalization; elements that are
    numerically dependent on their predecessors are dropped, so ``k`` equals
    the numerical rank. Matrix-backend observables must lie in the algebra's
    self-adjoint span.
    """
    raw = list(raw)
    if not raw:
        raise ValidationError("observable list must not be empty")
    rows = np.array([space.coords_of(u) for u in raw], dtype=float)
    basis, _kept, dropped = _gram_schmidt_rows(rows, RANK_DROP_TOL)
    if basis.shape[0] == 0:
        raise ValidationError("observables are numerically zero")

    mats = None
    vectors = None
    if space.kind == MATRIX:
        mats = tuple(Hermitian._trusted(space.matrix_of_coords(r)) for r in basis)
    else:
        vectors = basis.copy()
        vectors.flags.writeable = False
    basis = basis.copy()
    basis.flags.writeable = False
    return ObservableSubspace(space=space, rows=basis, k=basis.shape[0],
                              raw_count=len(raw), dropped=tuple(dropped),
                              mats=mats, vectors=vectors)


def project_mean(subspace: ObservableSubspace, state) -> np.ndarray:
    """Mean value of a state: coordinates of its projection onto U."""
    return subspace.mean_of_coords(subspace.space.coords_of(state))


class MeanGeometry:
    """Support-function view of the projected state space.

    Gives cheap membership margins and exact boundary points: a boundary
    mean is obtained as the projection of an actual extreme state maximizing
    a linear functional, so it lies in the mean value set to machine
    precision. Exact boundary samples matter because fibers over
    near-boundary interior means can be dramatically larger than the
    boundary fiber they approximate.
    """

    GRID = 2048

    def __init__(self, space: StateSpace, subspace: ObservableSubspace) -> None:
        self.space = space
        self.subspace = subspace
        self.k = subspace.k
        self.anchor_mean = subspace.mean_of_coords(space.anchor)
        self._grid_dirs = None
        self._grid_support = None
        if self.k == 1:
            self._grid_dirs = np.array([[1.0], [-1.0]])
            self._grid_support = np.array([self.support(d) for d in self._grid_dirs])
        elif self.k == 2:
            ang = np.linspace(0.0, 2.0 * np.pi, self.GRID, endpoint=False)
            self._grid_dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
            self._grid_support = np.array([self.support(d) for d in self._grid_dirs])
        else:
            rng = np.random.default_rng(0x5EED)
            dirs = rng.normal(size=(512, self.k))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            self._grid_dirs = dirs
            self._grid_support = np.array([self.support(d) for d in dirs])

    def support(self, w: np.ndarray) -> float:
        """Support value of the mean value set in direction ``w``."""
        direction = self.subspace.embed_mean(w)
        if self.space.kind == MATRIX:
            mat = self.space.matrix_of_coords(direction)
            return float(np.linalg.eigvalsh(mat)[-1])
        return float((self.space.vertices @ direction).max())

    def exposed_state_coords(self, w: np.ndarray) -> np.ndarray:
        """Coordinates of a state maximizing ``<w, mean>`` (face point).

        Matrix backend: the normalized projector onto the top eigenspace.
        Polytope backend: the average of the maximizing vertices.
        """
        direction = self.subspace.embed_mean(w)
        if self.space.kind == MATRIX:
            mat = self.space.matrix_of_coords(direction)
            vals, vecs = np.linalg.eigh(mat)
            top = vals[-1]
            sel = vals >= top - 1e-12 * max(1.0, abs(top))
            cols = vecs[:, sel]
            proj = cols @ cols.conj().T / cols.shape[1]
            return self.space.coords_of_matrix(proj)
        scores = self.space.vertices @ direction
        top = scores.max()
        sel = scores >= top - 1e-12 * max(1.0, abs(top))
        return self.space.vertices[sel].mean(axis=0)

    def exposed_mean(self, w: np.ndarray) -> np.ndarray:
        return self.subspace.mean_of_coords(self.exposed_state_coords(w))

    def margin(self, m: np.ndarray) -> float:
        """Approximate signed distance to the boundary (positive inside)."""
        m = np.asarray(m, dtype=float)
        gaps = self._grid_support - self._grid_dirs @ m
        return float(gaps.min())

    def inside(self, m: np.ndarray, margin: float = 0.0) -> bool:
        return self.margin(m) >= margin

    def boundary_point_along(self, direction: np.ndarray) -> np.ndarray:
        """Exact boundary mean in the face exposed by ``direction``."""
        return self.exposed_mean(direction)
