"""Orbits of the projective action and empirical basin checks.

converge() follows single orbits step by step and declares convergence
when successive canonical iterates stop moving in the chordal metric.
basin_coverage_check() samples the closed unit ball and random lines
through the attractive fixed point, then certifies that every sample
resolves into the forward basin of the attractive point or the backward
basin of the repulsive one.

Parabolic orbits approach their fixed point only polynomially, so the
coverage check combines two resolution rules: strong convergence
(successive displacement below tol) and asymptotic capture (distance to
the target below a capture radius and still decreasing).  Sampling uses
one counter-derived random stream per sample, so reports are reproducible
for a given seed regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .errors import NotNonElliptic
from .linalg3 import ProjectivePoint, chordal_distance
from .su12 import (
    J,
    FixedPointData,
    Kind,
    fixed_points,
    _as_group_matrix,
    classify,
    tangent_line,
)

DEFAULT_MAX_ITER = 10_000
DEFAULT_TOL = 1e-8
CAPTURE_RADIUS = 5e-3    # asymptotic capture radius for slow parabolic orbits
LINE_ANGLE_TOL = 1e-6    # sampled lines must differ from the tangent line by this
_STRIDE = 8              # iterations folded into one resolver step
_NEAR_FIXED_RADIUS = 1e-2
# end-of-budget fallback: lines passing close to the tangent line converge
# like 1/n with a constant proportional to the inverse angle, so they may
# not reach the capture radius; an orbit whose distance record to the
# target is small and still being broken near the end of the budget is
# certified anyway, while a non-converging rotation stops improving
_END_RADIUS = 0.25
_END_STALE = 64          # strides without a new distance record that void the fallback


@dataclass(frozen=True)
class OrbitResult:
    converged: bool
    limit: ProjectivePoint | None
    iterations: int
    final_distance: float


@dataclass(frozen=True)
class BasinReport:
    """Outcome counts of a basin coverage run; counts partition the samples."""

    samples: int
    resolved_forward: int
    resolved_backward: int
    unresolved: int
    seed: int

    @property
    def fraction_to_attractive(self) -> float:
        return self.resolved_forward / self.samples if self.samples else 0.0

    @property
    def fraction_to_repulsive_backward(self) -> float:
        return self.resolved_backward / self.samples if self.samples else 0.0


def iterate(a, p: ProjectivePoint, n: int) -> ProjectivePoint:
    """Canonical form of A^n p by repeated multiply-then-canonicalize."""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    m = _as_group_matrix(a, tol=1e-7)
    v = p.vector
    for _ in range(n):
        v = m @ v
        v = ProjectivePoint.from_vector(v).vector
    return ProjectivePoint.from_vector(v)


def _nearest_fixed_point(data: FixedPointData, p: ProjectivePoint) -> ProjectivePoint:
    if data.fully_degenerate:
        return p
    candidates = [fp.point for fp in data.points]
    if data.fixed_line is not None:
        # every point of the line is fixed: project the iterate onto it
        l = data.fixed_line.vector
        v = p.vector
        proj = v - (np.dot(l, v) / np.vdot(l, l)) * l.conjugate()
        if np.linalg.norm(proj) > 1e-12:
            candidates.append(ProjectivePoint.from_vector(proj))
    if not candidates:
        return p
    return min(candidates, key=lambda c: chordal_distance(c, p))


def converge(a, p: ProjectivePoint, max_iter: int = DEFAULT_MAX_ITER,
             tol: float = DEFAULT_TOL) -> OrbitResult:
    """Iterate until successive canonical points differ by at most tol.

    On success the reported limit is the fixed point of A nearest to the
    final iterate; iterations counts the steps taken before the stopping
    test fired.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    m = _as_group_matrix(a, tol=1e-7)
    data = fixed_points(m, tol=1e-7)
    v = p.vector
    dist = float("inf")
    for k in range(max_iter):
        w = ProjectivePoint.from_vector(m @ v).vector
        dist = chordal_distance(v, w)
        if dist <= tol:
            limit = _nearest_fixed_point(data, ProjectivePoint.from_vector(w))
            return OrbitResult(True, limit, k, dist)
        v = w
    return OrbitResult(False, None, max_iter, dist)


# sampling -------------------------------------------------------------------

def _sample_rng(seed: int, stream: int, index: int) -> Generator:
    return Generator(Philox(key=seed, counter=[0, 0, stream, index]))


def _unit_disc(rng: Generator) -> complex:
    r = np.sqrt(rng.uniform())
    phi = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(phi), r * np.sin(phi))


def _ball_sample(rng: Generator) -> np.ndarray:
    # the ball {Q < 0} lies inside the affine chart x = 1
    while True:
        y = _unit_disc(rng)
        z = _unit_disc(rng)
        if abs(y) ** 2 + abs(z) ** 2 < 1.0:
            return np.array([1.0, y, z], dtype=complex)


def _complex_gaussian(rng: Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _line_sample(rng: Generator, p_vec: np.ndarray, tangent_dual: np.ndarray) -> np.ndarray:
    """Random point on a random line through p, avoiding the tangent line."""
    l_norm = float(np.linalg.norm(tangent_dual))
    while True:
        r = _complex_gaussian(rng, 3)
        r_norm = float(np.linalg.norm(r))
        if r_norm < 1e-8:
            continue
        if abs(np.dot(tangent_dual, r)) <= LINE_ANGLE_TOL * l_norm * r_norm:
            continue  # the line through p and r would coincide with the tangent line
        alpha, beta = _complex_gaussian(rng, 2)
        x = alpha * p_vec + beta * r
        if np.linalg.norm(x) > 1e-8:
            return x


# vectorized resolver ---------------------------------------------------------

def _normalized_power(m: np.ndarray, log2_exp: int) -> np.ndarray:
    a = m / np.abs(m).max()
    for _ in range(log2_exp):
        a = a @ a
        a = a / np.abs(a).max()
    return a


def _cross_norm2(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """|column cross products|^2 for 3xN (or 3-vector) complex arrays."""
    c01 = x[0] * y[1] - x[1] * y[0]
    c02 = x[0] * y[2] - x[2] * y[0]
    c12 = x[1] * y[2] - x[2] * y[1]
    return (c01 * c01.conj() + c02 * c02.conj() + c12 * c12.conj()).real


def _chordal2_to(target_hat: np.ndarray, x: np.ndarray, norms2: np.ndarray) -> np.ndarray:
    return _cross_norm2(target_hat.reshape(3, 1), x) / norms2


def _resolve_batch(m: np.ndarray, points: np.ndarray, target: np.ndarray,
                   fixed_vecs: list[np.ndarray], max_iter: int, tol: float,
                   capture_radius: float) -> np.ndarray:
    """Resolve each column of points toward the target fixed point.

    Returns a status per column: 1 resolved to target, 2 converged to a
    different fixed point, 0 undecided within the iteration budget.
    """
    n = points.shape[1]
    status = np.zeros(n, dtype=np.int8)
    if n == 0:
        return status

    stride_mat = _normalized_power(m, 3)  # m^8, rescaled
    t_hat = target / np.linalg.norm(target)
    f_hats = [f / np.linalg.norm(f) for f in fixed_vecs]
    t_index = min(range(len(f_hats)), key=lambda i: np.linalg.norm(f_hats[i] - t_hat))

    x = points / np.abs(points).max(axis=0)
    alive = np.arange(n)
    norms2 = np.einsum("ij,ij->j", x.conj(), x).real
    d_prev = _chordal2_to(t_hat, x, norms2)
    d_min = d_prev.copy()
    stale = np.zeros(n, dtype=np.int32)
    tol2 = tol * tol
    cap2 = capture_radius * capture_radius
    near2 = _NEAR_FIXED_RADIUS ** 2

    for _ in range(max_iter // _STRIDE):
        y = stride_mat @ x
        ny2 = np.einsum("ij,ij->j", y.conj(), y).real
        step2 = _cross_norm2(x, y) / (norms2 * ny2)

        x = y / np.abs(y).max(axis=0)
        norms2 = np.einsum("ij,ij->j", x.conj(), x).real
        d_now = _chordal2_to(t_hat, x, norms2)
        improved = d_now < d_min
        d_min = np.where(improved, d_now, d_min)
        stale = np.where(improved, 0, stale + 1)

        decided = np.zeros(x.shape[1], dtype=bool)

        converged = step2 <= tol2
        if converged.any():
            dists = np.stack([_chordal2_to(f, x, norms2) for f in f_hats])
            nearest = np.argmin(dists, axis=0)
            near_enough = dists[nearest, np.arange(x.shape[1])] <= near2
            settle = converged & near_enough
            status[alive[settle & (nearest == t_index)]] = 1
            status[alive[settle & (nearest != t_index)]] = 2
            decided |= settle

        captured = (d_now <= cap2) & (d_prev <= cap2) & (d_now < d_prev) & ~decided
        status[alive[captured]] = 1
        decided |= captured

        if decided.any():
            keep = ~decided
            x = x[:, keep]
            norms2 = norms2[keep]
            d_now = d_now[keep]
            d_min = d_min[keep]
            stale = stale[keep]
            alive = alive[keep]
            if x.shape[1] == 0:
                break
        d_prev = d_now

    if alive.size:
        slow = (d_min <= _END_RADIUS ** 2) & (stale <= _END_STALE)
        status[alive[slow]] = 1
    return status


def basin_coverage_check(a, samples: int, line_samples: int | None = None, *,
                         seed: int = 0, max_iter: int = DEFAULT_MAX_ITER,
                         tol: float = DEFAULT_TOL,
                         capture_radius: float = CAPTURE_RADIUS) -> BasinReport:
    """Empirical check that the sampled ball and lines through the
    attractive point resolve into forward-basin(p+) or backward-basin(p-).

    samples points are drawn from the closed unit ball by rejection on the
    affine chart, plus line_samples points (default samples // 10) on
    random projective lines through the attractive fixed point, excluding
    its tangent line.  Each point is iterated forward toward p+ and, if
    undecided, backward toward p-.
    """
    m = _as_group_matrix(a, tol=1e-7)
    cls = classify(m)
    if cls.kind == Kind.ELLIPTIC:
        raise NotNonElliptic("basin coverage applies to hyperbolic and parabolic elements only")
    if line_samples is None:
        line_samples = samples // 10

    p_plus = cls.attractive.point
    p_minus = cls.repulsive.point
    l_plus = tangent_line(p_plus)

    cols = []
    for i in range(samples):
        cols.append(_ball_sample(_sample_rng(seed, 0, i)))
    p_vec = p_plus.vector
    dual = l_plus.vector
    for i in range(line_samples):
        cols.append(_line_sample(_sample_rng(seed, 1, i), p_vec, dual))
    total = samples + line_samples
    points = np.column_stack(cols) if cols else np.zeros((3, 0), dtype=complex)

    fixed_vecs = [fp.point.vector for fp in cls.fixed_points]
    forward = _resolve_batch(m, points, p_plus.vector, fixed_vecs, max_iter, tol, capture_radius)

    rest = forward != 1
    backward_count = 0
    if rest.any():
        m_inv = J @ m.conj().T @ J
        backward = _resolve_batch(m_inv, points[:, rest], p_minus.vector, fixed_vecs,
                                  max_iter, tol, capture_radius)
        backward_count = int((backward == 1).sum())

    forward_count = int((forward == 1).sum())
    unresolved = total - forward_count - backward_count
    return BasinReport(
        samples=total,
        resolved_forward=forward_count,
        resolved_backward=backward_count,
        unresolved=unresolved,
        seed=seed,
    )
