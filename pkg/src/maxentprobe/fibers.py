"""Fiber geometry: distance minimization, membership, interior points.

The fiber of a mean value m is the affine slice {x : U x = m} of the state
space. The matrix backend solves nearest-point problems with Dykstra's
alternating projections between the spectrahedron {trace one, PSD} and the
affine mean constraint; a rank-refinement ladder finishes the degenerate
cases where the slice touches the body tangentially (exactly the regime
near inference discontinuities, where plain projection methods stall). The
polytope backend minimizes over barycentric weights with penalty
continuation and an active-set polish.

All solvers are batched over a leading axis; convergence failures surface
as structured results or :class:`ConvergenceError`, never as silently
truncated answers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import MATRIX, POLYTOPE, ObservableSubspace, StateSpace
from .errors import ConvergenceError, InfeasibleMeanError, ValidationError
from .hermitian import Hermitian

# Default tolerance on the mean-constraint residual of fiber solutions.
FIBER_TOL = 1e-7
# Default sweep budget for Dykstra / iteration budget for the polytope QP.
MAX_ITER = 20000
# Mean values are declared feasible when a fiber point within this residual
# exists; used by membership verdicts.
FEASIBILITY_TOL = 1e-6
# Step used to classify feasible means as interior or boundary.
BOUNDARY_PROBE_DELTA = 1e-4
# Eigenvalue cutoff separating exact zeros forced by fiber geometry from
# solver noise when detecting support projections.
SUPPORT_CUTOFF = 1e-8


@dataclass
class FiberPoint:
    """A state in (or nearly in) a fiber, with its residuals."""

    state: object
    coords: np.ndarray
    mean_residual: float
    feasibility_slack: float
    iterations: int
    converged: bool
    refined_rank: int = 0


@dataclass(frozen=True)
class MeanMembership:
    """Feasibility verdict for a mean value, with slack and location."""

    feasible: bool
    slack: float
    location: str  # "interior" | "boundary" | "infeasible"


@dataclass
class InteriorFiberPoint:
    """A relative-interior fiber point plus the fiber's support projection."""

    point: FiberPoint
    support: Hermitian | None
    support_rank: int
    slack: float


# ---------------------------------------------------------------------------
# Matrix backend: Dykstra + rank refinement
# ---------------------------------------------------------------------------

def _dykstra_matrix(space: StateSpace, rows: np.ndarray, rhs: np.ndarray,
                    starts: np.ndarray, *, tol: float, max_iter: int,
                    floor: float = 0.0):
    """Batched Dykstra between the body and the affine mean constraint.

    Returns body-feasible iterates; an instance counts as converged when its
    mean residual drops below ``tol``. Stalled instances stop early and are
    reported unconverged.
    """
    x = np.atleast_2d(np.asarray(starts, dtype=float)).copy()
    rhs = np.atleast_2d(np.asarray(rhs, dtype=float))
    B = x.shape[0]
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    y_out = space.project_coords(x, floor)
    res_out = np.linalg.norm(y_out @ rows.T - rhs, axis=1)
    iters = np.zeros(B, dtype=int)
    done = res_out <= tol
    stall = np.zeros(B, dtype=int)
    y_prev = y_out.copy()

    active = np.flatnonzero(~done)
    sweep = 0
    while active.size and sweep < max_iter:
        sweep += 1
        xa, pa, qa = x[active], p[active], q[active]
        y = space.project_coords(xa + pa, floor)
        p[active] = xa + pa - y
        t = y + qa
        z = t - (t @ rows.T - rhs[active]) @ rows
        q[active] = t - z
        x[active] = z

        res = np.linalg.norm(y @ rows.T - rhs[active], axis=1)
        move = np.linalg.norm(y - y_prev[active], axis=1)
        y_out[active] = y
        res_out[active] = res
        y_prev[active] = y
        iters[active] = sweep

        conv = res <= tol
        stalled_now = move <= 1e-14 * (1.0 + np.linalg.norm(y, axis=1))
        stall[active] = np.where(stalled_now, stall[active] + 1, 0)
        stop = conv | (stall[active] >= 64)
        done[active[conv]] = True
        active = active[~stop]
    return y_out, res_out, iters, done


def _affine_system(space: StateSpace, rows: np.ndarray):
    """Full affine system (mean rows + trace row) and its pseudo-inverse."""
    E = np.vstack([rows, space.identity_coords[None, :]])
    return E, np.linalg.pinv(E)


def _rank_refine_matrix(space: StateSpace, rows: np.ndarray, rhs: np.ndarray,
                        seeds: np.ndarray, targets: np.ndarray, *,
                        ranks=None, max_iter: int = 1000, tol: float = 1e-11):
    """Alternate between the affine slice and fixed-rank spectral truncation.

    Fibers that meet the PSD boundary tangentially defeat first-order
    projection methods, but the rank-r variety crosses the affine slice
    transversally there; alternating onto it converges where Dykstra stalls.
    Returns, per instance, the feasible candidate closest to ``targets``
    (NaN coordinates when no rank converged).
    """
    seeds = np.atleast_2d(seeds)
    rhs = np.atleast_2d(rhs)
    B, d = seeds.shape
    N = space.matrix_dim
    E, Epinv = _affine_system(space, rows)
    F = np.hstack([rhs, np.ones((B, 1))])
    if ranks is None:
        ranks = range(1, N)

    best = np.full((B, d), np.nan)
    best_dist = np.full(B, np.inf)
    best_rank = np.zeros(B, dtype=int)
    for r in ranks:
        y = seeds.copy()
        active = np.arange(B)
        for _ in range(max_iter):
            ya = y[active]
            ya = ya - (ya @ E.T - F[active]) @ Epinv.T
            mats = space.matrices_of_coords(ya)
            w, v = np.linalg.eigh(mats)
            w[:, : N - r] = 0.0
            np.maximum(w, 0.0, out=w)
            mats = np.einsum("bik,bk,bjk->bij", v, w, v.conj())
            ynew = space.coords_of_matrices(mats)
            move = np.linalg.norm(ynew - y[active], axis=1)
            y[active] = ynew
            active = active[move > tol]
            if not active.size:
                break
        mean_res = np.linalg.norm(y @ rows.T - rhs, axis=1)
        trace_res = np.abs(y @ space.identity_coords - 1.0)
        feasible = (mean_res <= 1e-9) & (trace_res <= 1e-9)
        dist = np.linalg.norm(y - targets, axis=1)
        better = feasible & (dist < best_dist - 1e-12)
        best[better] = y[better]
        best_dist[better] = dist[better]
        best_rank[better] = r
    return best, best_dist, best_rank


def _project_to_fiber_matrix_batch(space, subspace, rhs, starts, *, tol,
                                   max_iter, floor=0.0, refine=True):
    rows = subspace.rows
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    rhs = np.atleast_2d(np.asarray(rhs, dtype=float))
    if rhs.shape[0] == 1 and starts.shape[0] > 1:
        rhs = np.repeat(rhs, starts.shape[0], axis=0)
    y, res, iters, conv = _dykstra_matrix(space, rows, rhs, starts,
                                          tol=tol, max_iter=max_iter, floor=floor)
    refined = np.zeros(starts.shape[0], dtype=int)
    if refine and floor == 0.0 and not conv.all():
        bad = np.flatnonzero(~conv)
        cand, cand_dist, cand_rank = _rank_refine_matrix(
            space, rows, rhs[bad], y[bad], starts[bad])
        ok = np.isfinite(cand_dist)
        # Accept a refined point when it is feasible; it may sit farther from
        # the target than the (infeasible) stalled iterate, which only means
        # the stalled iterate was underestimating the distance.
        idx = bad[ok]
        y[idx] = cand[ok]
        res[idx] = np.linalg.norm(cand[ok] @ rows.T - rhs[idx], axis=1)
        conv[idx] = res[idx] <= max(tol, 1e-9)
        refined[idx] = cand_rank[ok]
    return y, res, iters, conv, refined


# ---------------------------------------------------------------------------
# Polytope backend: penalty continuation + active-set polish
# ---------------------------------------------------------------------------

def _simplex_project_rows(w: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto the probability simplex."""
    w = np.atleast_2d(w)
    n = w.shape[1]
    s = np.sort(w, axis=1)[:, ::-1]
    cum = np.cumsum(s, axis=1) - 1.0
    ks = np.arange(1, n + 1)
    cond = s - cum / ks > 0.0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = cum[np.arange(w.shape[0]), rho] / (rho + 1.0)
    return np.maximum(w - theta[:, None], 0.0)


def _polytope_kkt_polish(verts, A, m, p, w, *, max_rounds=80):
    """Exact equality-constrained least squares on the detected support."""
    nv = verts.shape[0]
    k = A.shape[0]
    g = np.concatenate([m, [1.0]])
    support = set(np.flatnonzero(w > 1e-9).tolist()) or {int(np.argmax(w))}
    w_out = w.copy()
    for _ in range(max_rounds):
        S = np.array(sorted(support), dtype=int)
        Vs = verts[S]
        H = Vs @ Vs.T
        G = np.vstack([A[:, S], np.ones((1, S.size))])
        kkt = np.block([[H, G.T], [G, np.zeros((k + 1, k + 1))]])
        rhs_v = np.concatenate([Vs @ p, g])
        sol, *_ = np.linalg.lstsq(kkt, rhs_v, rcond=None)
        ws, nu = sol[: S.size], sol[S.size:]
        if not np.all(np.isfinite(ws)):
            break
        if ws.min() < -1e-10:
            support.discard(int(S[np.argmin(ws)]))
            if not support:
                break
            continue
        w_full = np.zeros(nv)
        w_full[S] = ws
        x = w_full @ verts
        reduced = verts @ (x - p) + A.T @ nu[:k] + nu[k]
        reduced[S] = 0.0
        worst = int(np.argmin(reduced))
        if reduced[worst] < -1e-9 * max(1.0, float(np.linalg.norm(p))):
            support.add(worst)
            continue
        return w_full
    return w_out


def _polytope_fiber_qp(space, rows, rhs, targets, *, tol, max_iter):
    """Minimize ||x - target|| over the fiber, in barycentric weights.

    ``rows`` may be an empty (0, n) array, which makes this a plain
    convex-hull projection.
    """
    verts = space.vertices
    nv = verts.shape[0]
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    rhs = np.atleast_2d(np.asarray(rhs, dtype=float)) if rows.size else \
        np.zeros((targets.shape[0], 0))
    if rhs.shape[0] == 1 and targets.shape[0] > 1:
        rhs = np.repeat(rhs, targets.shape[0], axis=0)
    B = targets.shape[0]
    A = rows @ verts.T if rows.size else np.zeros((0, nv))

    sv = np.linalg.norm(verts, ord=2)
    sa = np.linalg.norm(A, ord=2) if A.size else 0.0
    w = np.full((B, nv), 1.0 / nv)
    iters = 0
    for mu in (1e2, 1e4, 1e6):
        L = sv * sv + mu * sa * sa + 1e-12
        step = 1.0 / L
        z = w.copy()
        t_acc = 1.0
        n_stage = min(400, max_iter)
        for _ in range(n_stage):
            x = z @ verts
            grad = (x - targets) @ verts.T
            if A.size:
                grad = grad + mu * ((z @ A.T - rhs) @ A)
            w_new = _simplex_project_rows(z - step * grad)
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_acc * t_acc))
            z = w_new + ((t_acc - 1.0) / t_new) * (w_new - w)
            w = w_new
            t_acc = t_new
            iters += 1
        if not A.size:
            break

    for b in range(B):
        w[b] = _polytope_kkt_polish(verts, A, rhs[b], targets[b], w[b])
    w = np.maximum(w, 0.0)
    w /= w.sum(axis=1, keepdims=True)
    x = w @ verts
    mean_res = np.linalg.norm(x @ rows.T - rhs, axis=1) if rows.size else np.zeros(B)
    return x, w, mean_res, iters


def hull_distance(space: StateSpace, point: np.ndarray) -> float:
    """Distance from a point to the convex hull of the vertices."""
    point = np.asarray(point, dtype=float)
    empty = np.zeros((0, space.ambient_dim))
    x, _w, _res, _ = _polytope_fiber_qp(space, empty, np.zeros((1, 0)),
                                        point[None, :], tol=FIBER_TOL,
                                        max_iter=MAX_ITER)
    return float(np.linalg.norm(x[0] - point))


# ---------------------------------------------------------------------------
# Public fiber operations
# ---------------------------------------------------------------------------

def project_to_fiber_batch(space, subspace, means, starts, *, tol: float = FIBER_TOL,
                           max_iter: int = MAX_ITER):
    """Project a batch of coordinate points onto fibers.

    Returns (coords (B, d), mean residuals, slacks, iterations, converged,
    refined ranks).
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    means = np.atleast_2d(np.asarray(means, dtype=float))
    if space.kind == MATRIX:
        y, res, iters, conv, refined = _project_to_fiber_matrix_batch(
            space, subspace, means, starts, tol=tol, max_iter=max_iter)
        mats = space.matrices_of_coords(y)
        slack = np.linalg.eigvalsh(mats)[:, 0]
        return y, res, slack, iters, conv, refined
    x, _w, res, iters = _polytope_fiber_qp(space, subspace.rows, means, starts,
                                           tol=tol, max_iter=max_iter)
    conv = res <= max(tol, 1e-9)
    B = x.shape[0]
    return x, res, np.zeros(B), np.full(B, iters), conv, np.zeros(B, dtype=int)


def project_to_fiber(space, subspace, m, state, *, tol: float = FIBER_TOL,
                     max_iter: int = MAX_ITER, require: bool = True) -> FiberPoint:
    """Nearest fiber point to ``state``; raises on non-convergence if ``require``."""
    x0 = space.coords_of(state) if not isinstance(state, np.ndarray) or \
        space.kind == POLYTOPE else np.asarray(state, dtype=float)
    x0 = space.coords_of(state)
    y, res, slack, iters, conv, refined = project_to_fiber_batch(
        space, subspace, np.asarray(m, dtype=float)[None, :], x0[None, :],
        tol=tol, max_iter=max_iter)
    point = FiberPoint(state=space.state_of(y[0]), coords=y[0],
                       mean_residual=float(res[0]), feasibility_slack=float(slack[0]),
                       iterations=int(iters[0]), converged=bool(conv[0]),
                       refined_rank=int(refined[0]))
    if require and not point.converged:
        raise ConvergenceError(
            "fiber projection did not reach tolerance",
            residuals={"mean_residual": point.mean_residual, "tol": tol},
            iterations=point.iterations)
    return point


def fiber_distance(space, subspace, m, state, *, tol: float = FIBER_TOL,
                   max_iter: int = MAX_ITER):
    """Minimum distance from ``state`` to the fiber over ``m``.

    Returns ``(distance, FiberPoint)``; raises :class:`InfeasibleMeanError`
    when the fiber is empty and :class:`ConvergenceError` when the solver
    exhausted its budget without a verdict.
    """
    x0 = space.coords_of(state)
    point = project_to_fiber(space, subspace, m, state, tol=tol,
                             max_iter=max_iter, require=False)
    if not point.converged:
        if point.mean_residual > FEASIBILITY_TOL:
            raise InfeasibleMeanError(
                f"mean value is not attained by any state "
                f"(residual {point.mean_residual:.3e})", slack=point.mean_residual)
        raise ConvergenceError(
            "fiber distance did not reach tolerance",
            residuals={"mean_residual": point.mean_residual, "tol": tol},
            iterations=point.iterations)
    return float(np.linalg.norm(point.coords - x0)), point


def fiber_distance_batch(space, subspace, means, state, *, tol: float = FIBER_TOL,
                         max_iter: int = MAX_ITER):
    """Distances from one state to the fibers over a batch of means.

    Returns (distances, mean residuals, converged mask); non-converged
    entries carry NaN distances instead of raising.
    """
    x0 = space.coords_of(state)
    means = np.atleast_2d(np.asarray(means, dtype=float))
    starts = np.repeat(x0[None, :], means.shape[0], axis=0)
    y, res, _slack, _iters, conv, _ref = project_to_fiber_batch(
        space, subspace, means, starts, tol=tol, max_iter=max_iter)
    dist = np.linalg.norm(y - x0[None, :], axis=1)
    dist[~conv] = np.nan
    return dist, res, conv


def mean_membership_batch(space, subspace, means, *, tol: float = FEASIBILITY_TOL,
                          fiber_tol: float = FIBER_TOL, max_iter: int = MAX_ITER):
    """Feasibility of a batch of mean values (no location classification)."""
    means = np.atleast_2d(np.asarray(means, dtype=float))
    starts = np.repeat(space.anchor[None, :], means.shape[0], axis=0)
    _y, res, _slack, _iters, conv, _ref = project_to_fiber_batch(
        space, subspace, means, starts, tol=fiber_tol, max_iter=max_iter)
    feasible = conv | (res <= tol)
    return feasible, res


def mean_membership(space, subspace, m, *, classify: bool = True,
                    tol: float = FEASIBILITY_TOL,
                    probe_delta: float = BOUNDARY_PROBE_DELTA) -> MeanMembership:
    """Feasibility verdict for a mean value, with interior/boundary location.

    Feasibility is decided by projecting a fixed interior state onto the
    fiber and reading the residual. A feasible mean is classified interior
    when every coordinate perturbation m +- delta e_j stays feasible.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (subspace.k,):
        raise ValidationError(
            f"mean value has length {m.shape}, expected ({subspace.k},)")
    if not np.all(np.isfinite(m)):
        raise ValidationError("mean value entries must be finite")
    feasible, res = mean_membership_batch(space, subspace, m[None, :], tol=tol)
    if not feasible[0]:
        return MeanMembership(feasible=False, slack=float(res[0]), location="infeasible")
    if not classify:
        return MeanMembership(feasible=True, slack=float(res[0]), location="boundary")
    k = subspace.k
    probes = np.repeat(m[None, :], 2 * k, axis=0)
    for j in range(k):
        probes[2 * j, j] += probe_delta
        probes[2 * j + 1, j] -= probe_delta
    ok, _ = mean_membership_batch(space, subspace, probes, tol=tol)
    location = "interior" if bool(ok.all()) else "boundary"
    return MeanMembership(feasible=True, slack=float(res[0]), location=location)


def fiber_samples(space, subspace, m, count: int, rng: np.random.Generator,
                  *, scale: float = 0.8, tol: float = FIBER_TOL):
    """Fiber points obtained by projecting seeded random starts."""
    m = np.asarray(m, dtype=float)
    starts = space.anchor[None, :] + rng.normal(size=(count, space.ambient_dim),
                                                scale=scale)
    y, res, _slack, _iters, conv, _ref = project_to_fiber_batch(
        space, subspace, np.repeat(m[None, :], count, axis=0), starts, tol=tol)
    if not conv.all():
        bad = int(np.flatnonzero(~conv)[0])
        raise ConvergenceError(
            "fiber sampling failed to converge",
            residuals={"mean_residual": float(res[bad]), "tol": tol})
    return y


# ---------------------------------------------------------------------------
# Interior fiber points and support detection (facial reduction primitives)
# ---------------------------------------------------------------------------

def _compress_algebra(space: StateSpace, w_iso: np.ndarray) -> StateSpace:
    """State space of the compressed algebra W* A W on the support range."""
    mats = []
    for b in space.onb:
        mats.append(Hermitian(0.5 * ((w_iso.conj().T @ b @ w_iso) +
                                     (w_iso.conj().T @ b @ w_iso).conj().T), tol=1e-8))
    # Keep a linearly independent subset before constructing the space.
    rows = np.array([m.mat.reshape(-1) for m in mats])
    keep: list[int] = []
    basis: list[np.ndarray] = []
    for i, row in enumerate(rows):
        v = row.copy()
        for q in basis:
            v -= (q.conj() @ v) * q
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            basis.append(v / norm)
            keep.append(i)
    return StateSpace.from_algebra_basis([mats[i] for i in keep])


def _compressed_observables(space, sub_space, subspace, w_iso):
    """Rows of the compressed observables in the compressed coordinates."""
    rows = []
    for u in subspace.mats:
        v = w_iso.conj().T @ u.mat @ w_iso
        v = 0.5 * (v + v.conj().T)
        rows.append(sub_space.coords_of_matrix(v))
    return np.array(rows)


def _pd_feasible(space, rows_or_sub, rhs, start, floor, *, tol=1e-9, max_iter=4000):
    """Is there a fiber point with all eigenvalues >= floor? (Dykstra on shifted sets)."""
    rows = rows_or_sub
    y, res, _iters, conv = _dykstra_matrix(space, rows, np.atleast_2d(rhs),
                                           np.atleast_2d(start), tol=tol,
                                           max_iter=max_iter, floor=floor)
    return bool(conv[0]), y[0]


def _interior_point_matrix(space, subspace, m, *, support_cutoff=SUPPORT_CUTOFF):
    rng = np.random.default_rng(0xFACADE)
    m = np.asarray(m, dtype=float)
    starts = np.vstack([space.anchor[None, :],
                        space.anchor[None, :] +
                        rng.normal(size=(4, space.ambient_dim), scale=0.7)])
    means = np.repeat(m[None, :], starts.shape[0], axis=0)
    y, res, _slack, _iters, conv, _ref = project_to_fiber_batch(
        space, subspace, means, starts, tol=1e-10, max_iter=MAX_ITER)
    if not conv.any():
        raise InfeasibleMeanError(
            f"mean value is not attained by any state (residual {res.min():.3e})",
            slack=float(res.min()))
    pts = y[conv]
    cands = [pts.mean(axis=0)]
    for i in range(pts.shape[0]):
        for j in range(i + 1, pts.shape[0]):
            cands.append(0.5 * (pts[i] + pts[j]))
    x_bar = np.mean(np.array(cands), axis=0)

    # Facial reduction loop: compress onto the support until the compressed
    # fiber owns a positive-definite point, then push the slack up by
    # bisection on the eigenvalue floor.
    w_total = np.eye(space.matrix_dim, dtype=complex)
    cur_space, cur_rows, cur_m, cur_x = space, subspace.rows, m, x_bar
    cur_obs = subspace
    for _round in range(space.matrix_dim + 1):
        n_cur = cur_space.matrix_dim
        mat = cur_space.matrix_of_coords(cur_x)
        vals, vecs = np.linalg.eigh(mat)
        rank = int((vals > support_cutoff).sum())
        rank = max(rank, 1)
        if rank == n_cur:
            floor0 = min(support_cutoff, 0.5 / n_cur)
            ok, point = _pd_feasible(cur_space, cur_rows, cur_m, cur_x, floor0)
            if ok:
                lo, hi = floor0, 1.0 / n_cur
                best = point
                for _ in range(12):
                    mid = 0.5 * (lo + hi)
                    ok_mid, cand = _pd_feasible(cur_space, cur_rows, cur_m, best, mid)
                    if ok_mid:
                        lo, best = mid, cand
                    else:
                        hi = mid
                slack = float(np.linalg.eigvalsh(cur_space.matrix_of_coords(best))[0])
                return _lift_interior(space, subspace, cur_space, best, w_total,
                                      m, slack)
            # Full-rank average but no PD fiber point: shave the smallest
            # eigenvalue off the support and reduce.
            rank = max(n_cur - 1, 1)
        w_iso = vecs[:, vals.argsort()[::-1][:rank]]
        w_total = w_total @ w_iso
        sub_space = _compress_algebra(cur_space, w_iso)
        v_rows = _compressed_observables(cur_space, sub_space, cur_obs, w_iso)
        from .bodies import _gram_schmidt_rows
        rows2, _kept, _dropped = _gram_schmidt_rows(v_rows, 1e-10)
        y_mat = w_iso.conj().T @ cur_space.matrix_of_coords(cur_x) @ w_iso
        y_coords = sub_space.coords_of_matrix(0.5 * (y_mat + y_mat.conj().T))
        y_coords = sub_space.project_coords(y_coords[None, :])[0]
        if rows2.shape[0]:
            sub_obs = ObservableSubspace(
                space=sub_space, rows=rows2, k=rows2.shape[0],
                raw_count=cur_obs.k, dropped=(),
                mats=tuple(Hermitian._trusted(sub_space.matrix_of_coords(r))
                           for r in rows2),
                vectors=None)
            sub_m = rows2 @ y_coords
        else:
            sub_obs = None
            sub_m = np.zeros(0)
        if sub_space.matrix_dim == 1:
            point = sub_space.project_coords(y_coords[None, :])[0]
            return _lift_interior(space, subspace, sub_space, point, w_total, m, 1.0)
        cur_space = sub_space
        cur_obs = sub_obs if sub_obs is not None else _trivial_obs(sub_space)
        cur_rows = cur_obs.rows
        cur_m = sub_m if sub_obs is not None else np.zeros(0)
        cur_x = y_coords
    raise ConvergenceError("facial reduction did not terminate")  # pragma: no cover


def _trivial_obs(space: StateSpace) -> ObservableSubspace:
    rows = np.zeros((0, space.ambient_dim))
    return ObservableSubspace(space=space, rows=rows, k=0, raw_count=0,
                              dropped=(), mats=(), vectors=None)


def _lift_interior(space, subspace, sub_space, sub_coords, w_total, m, slack):
    mat = sub_space.matrix_of_coords(sub_coords)
    lifted = w_total @ mat @ w_total.conj().T
    lifted = 0.5 * (lifted + lifted.conj().T)
    coords = space.coords_of_matrix(lifted)
    rank = int((np.linalg.eigvalsh(lifted) > SUPPORT_CUTOFF).sum())
    r = w_total.shape[1]
    support = w_total @ w_total.conj().T
    support = Hermitian(0.5 * (support + support.conj().T), tol=1e-9)
    state = space.state_of(coords)
    residual = float(np.linalg.norm(subspace.rows @ coords - m))
    point = FiberPoint(state=state, coords=coords, mean_residual=residual,
                       feasibility_slack=slack, iterations=0, converged=residual <= 1e-7)
    return InteriorFiberPoint(point=point, support=support, support_rank=r,
                              slack=slack)


def fiber_interior_point(space, subspace, m, *,
                         support_cutoff: float = SUPPORT_CUTOFF) -> InteriorFiberPoint:
    """A relative-interior point of the fiber and its support projection.

    Matrix backend: averages several fiber projections, then facially
    reduces until the compressed fiber contains a positive-definite point,
    whose eigenvalue floor is pushed up by bisection (feasibility at each
    level checked by Dykstra on the shifted sets). The support projection is
    the orthogonal projector onto the range of the result.

    Polytope backend: returns the average of several fiber projections (a
    relative-interior point of the fiber polytope almost surely); there is
    no support projection.
    """
    m = np.asarray(m, dtype=float)
    if space.kind == MATRIX:
        return _interior_point_matrix(space, subspace, m,
                                      support_cutoff=support_cutoff)
    rng = np.random.default_rng(0xFACADE)
    spread = float(np.linalg.norm(space.vertices - space.anchor, axis=1).max())
    starts = np.vstack([space.anchor[None, :],
                        space.anchor[None, :] +
                        rng.normal(size=(4, space.ambient_dim), scale=0.5 * spread)])
    means = np.repeat(m[None, :], starts.shape[0], axis=0)
    y, res, _s, _i, conv, _r = project_to_fiber_batch(space, subspace, means, starts)
    if not conv.any():
        raise InfeasibleMeanError(
            f"mean value is not attained by any state (residual {res.min():.3e})",
            slack=float(res.min()))
    x_bar = y[conv].mean(axis=0)
    residual = float(np.linalg.norm(subspace.rows @ x_bar - m))
    point = FiberPoint(state=x_bar.copy(), coords=x_bar, mean_residual=residual,
                       feasibility_slack=0.0, iterations=0, converged=residual <= 1e-7)
    return InteriorFiberPoint(point=point, support=None, support_rank=0, slack=0.0)
