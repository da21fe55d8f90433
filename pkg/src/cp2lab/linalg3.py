"""Dense 3x3 complex linear algebra and projective-point utilities.

Everything is sized for 3x3 problems: characteristic roots come from the
closed-form cubic (depressed cubic, trigonometric branch for three real
roots, Cardano otherwise) followed by a Newton polish, eigenvectors from
full-pivot elimination, Jordan block sizes from ranks of powers, and the
matrix exponential from scaling and squaring.  No general eigensolver is
used or provided.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousClustering, DegenerateNullSpace

MERGE_TOL = 1e-7       # absolute eigenvalue merge tolerance at unit scale
PIVOT_RTOL = 1e-8      # relative pivot threshold for rank decisions
EXP_SERIES_TERMS = 20  # truncation order of the scaled exponential series

_OMEGA = complex(-0.5, 0.5 * math.sqrt(3.0))  # primitive cube root of unity


def as_mat3(m) -> np.ndarray:
    """Coerce to a finite complex 3x3 array."""
    a = np.asarray(m, dtype=complex)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def det3(m) -> complex:
    a = as_mat3(m)
    return complex(
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


def inv3(m) -> np.ndarray:
    """Inverse via the adjugate; raises on (numerically) singular input."""
    a = as_mat3(m)
    d = det3(a)
    scale = float(np.abs(a).max())
    if abs(d) <= 1e-300 or abs(d) < 1e-14 * max(scale, 1.0) ** 3 * 1e-6:
        raise ZeroDivisionError("matrix is numerically singular")
    adj = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != i]
            minor = a[rows[0], cols[0]] * a[rows[1], cols[1]] - a[rows[0], cols[1]] * a[rows[1], cols[0]]
            adj[i, j] = (-1) ** (i + j) * minor
    return adj / d


def char_poly(m) -> tuple[complex, complex, complex]:
    """Coefficients (c2, c1, c0) of det(xI - M) = x^3 + c2 x^2 + c1 x + c0."""
    a = as_mat3(m)
    tr = a[0, 0] + a[1, 1] + a[2, 2]
    m2 = (
        a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    )
    return (-complex(tr), complex(m2), -det3(a))


# cubic solver ---------------------------------------------------------------

def _merge_close(roots: list[complex], tol: float) -> list[complex]:
    """Average clusters of roots that sit within tol of each other."""
    ordered = sorted(roots, key=lambda z: (z.real, z.imag))
    clusters: list[list[complex]] = [[ordered[0]]]
    for z in ordered[1:]:
        mean = sum(clusters[-1]) / len(clusters[-1])
        if abs(z - mean) <= tol:
            clusters[-1].append(z)
        else:
            clusters.append([z])
    merged: list[complex] = []
    for group in clusters:
        mean = sum(group) / len(group)
        merged.extend([mean] * len(group))
    return merged


def _cubic_eval(x: complex, c2: complex, c1: complex, c0: complex) -> complex:
    return ((x + c2) * x + c1) * x + c0


# Coefficient-noise budget for deciding that a residual is "zero".  The
# factor covers both rounding in the closed form and upstream conditioning
# when the cubic is a characteristic polynomial of a matrix that was
# itself produced by floating-point products (e.g. a conjugation); genuine
# roots closer than roughly sqrt(this * eps) merge.
CUBIC_NOISE_FACTOR = 2e4


def _cubic_noise(x: complex, c2: complex, c1: complex, c0: complex) -> float:
    """Residual level indistinguishable from zero at machine precision."""
    ax = abs(x)
    return CUBIC_NOISE_FACTOR * 2.3e-16 * (ax ** 3 + abs(c2) * ax * ax + abs(c1) * ax + abs(c0) + 1e-300)


def _refine_multiple_roots(c2: complex, c1: complex, c0: complex) -> list[complex] | None:
    """Detect a genuine triple or double root from the derivative structure.

    A multiple root is also a root of the derivative; evaluating the cubic
    at the critical points and comparing with the coefficient noise floor
    decides whether the multiplicity is real or the roots are merely
    close.  This recovers full precision where the closed form only
    reaches the eps^(1/2) or eps^(1/3) conditioning limit.
    """
    centre = -c2 / 3.0
    disc = c2 * c2 - 3.0 * c1  # equals (mu - nu)^2 when mu is a double root
    if (
        abs(_cubic_eval(centre, c2, c1, c0)) <= _cubic_noise(centre, c2, c1, c0)
        and abs(disc) <= 1e-8 * max(abs(c2) ** 2, abs(c1), 1e-12)
    ):
        return [centre, centre, centre]
    root = cmath.sqrt(disc)
    for m in ((-c2 + root) / 3.0, (-c2 - root) / 3.0):
        # one Newton step on the derivative sharpens the critical point
        d2 = 6.0 * m + 2.0 * c2
        if abs(d2) > 1e-30:
            m = m - (3.0 * m * m + 2.0 * c2 * m + c1) / d2
        if abs(_cubic_eval(m, c2, c1, c0)) <= _cubic_noise(m, c2, c1, c0):
            simple = -c2 - 2.0 * m
            f = _cubic_eval(simple, c2, c1, c0)
            fp = (3.0 * simple + 2.0 * c2) * simple + c1
            if abs(fp) > 1e-30:
                simple = simple - f / fp
            return [m, m, simple]
    return None


def cubic_roots(c2, c1, c0, merge_tol: float = MERGE_TOL) -> tuple[complex, complex, complex]:
    """Three roots of x^3 + c2 x^2 + c1 x + c0, with multiplicity.

    Closed form on the depressed cubic plus one guarded Newton step per
    root.  Genuine multiple roots are detected through the derivative and
    repeated exactly; beyond that, roots closer than the merge tolerance
    (scaled by the root magnitude) are averaged into a repeated root.
    """
    c2, c1, c0 = complex(c2), complex(c1), complex(c0)

    refined = _refine_multiple_roots(c2, c1, c0)
    if refined is not None:
        tol = merge_tol * max(1.0, max(abs(r) for r in refined))
        merged = _merge_close(refined, tol)
        merged.sort(key=lambda z: (z.real, z.imag))
        return (merged[0], merged[1], merged[2])

    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0

    coef_scale = max(abs(c2), abs(c1), abs(c0), 1.0)
    real_input = max(abs(c2.imag), abs(c1.imag), abs(c0.imag)) <= 1e-14 * coef_scale

    if abs(p) <= 1e-30 * coef_scale ** 2 and abs(q) <= 1e-30 * coef_scale ** 3:
        ts = [0j, 0j, 0j]
    elif real_input and p.real < 0 and (disc := -4.0 * p.real ** 3 - 27.0 * q.real ** 2) >= 0.0:
        # three real roots: trigonometric branch avoids complex cancellation
        pr, qr = p.real, q.real
        mult = 2.0 * math.sqrt(-pr / 3.0)
        arg = 3.0 * qr / (2.0 * pr) * math.sqrt(-3.0 / pr)
        phi = math.acos(min(1.0, max(-1.0, arg)))
        ts = [complex(mult * math.cos((phi - 2.0 * math.pi * k) / 3.0)) for k in range(3)]
    else:
        d = cmath.sqrt(q * q / 4.0 + p ** 3 / 27.0)
        u3 = -q / 2.0 + d
        alt = -q / 2.0 - d
        if abs(alt) > abs(u3):
            u3 = alt
        if u3 == 0:
            u = 0j
            ts = [(-q) ** (1.0 / 3.0) * _OMEGA ** k for k in range(3)] if q != 0 else [0j, 0j, 0j]
        else:
            u = u3 ** (1.0 / 3.0)
            v = -p / (3.0 * u)
            ts = [u * _OMEGA ** k + v * _OMEGA ** (-k) for k in range(3)]

    roots = [t - shift for t in ts]

    for i, x in enumerate(roots):
        f = ((x + c2) * x + c1) * x + c0
        fp = (3.0 * x + 2.0 * c2) * x + c1
        if abs(fp) > 1e-30:
            roots[i] = x - f / fp

    tol = merge_tol * max(1.0, max(abs(r) for r in roots))
    merged = _merge_close(roots, tol)
    merged.sort(key=lambda z: (z.real, z.imag))
    return (merged[0], merged[1], merged[2])


# projective points ----------------------------------------------------------

def canonical_coords(v) -> tuple[complex, complex, complex]:
    """Canonical homogeneous representative: max-modulus pivot set to 1.

    The pivot is the first coordinate of maximal modulus, so exact ties
    resolve to the smallest index.
    """
    a = np.asarray(v, dtype=complex).reshape(3)
    if not np.isfinite(a).all():
        raise ValueError("projective coordinates must be finite")
    piv = int(np.argmax(np.abs(a)))
    if a[piv] == 0:
        raise ValueError("projective point needs a nonzero coordinate")
    w = a / a[piv]
    w[piv] = 1.0
    return (complex(w[0]), complex(w[1]), complex(w[2]))


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of CP^2 stored through its canonical representative."""

    coords: tuple[complex, complex, complex]

    @classmethod
    def from_vector(cls, v) -> "ProjectivePoint":
        return cls(canonical_coords(v))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def __str__(self) -> str:
        x, y, z = self.coords
        return f"[{x:.6g} : {y:.6g} : {z:.6g}]"


def chordal_distance(p, q) -> float:
    """Chordal (Fubini-Study sine) distance; representative independent.

    Computed through the Lagrange identity |x|^2 |y|^2 - |<x,y>|^2 =
    |cross(x, y)|^2, which stays accurate for nearby points where the
    direct cosine formula loses half the digits to cancellation.
    """
    a = p.vector if isinstance(p, ProjectivePoint) else np.asarray(p, dtype=complex).reshape(3)
    b = q.vector if isinstance(q, ProjectivePoint) else np.asarray(q, dtype=complex).reshape(3)
    na = np.vdot(a, a).real
    nb = np.vdot(b, b).real
    cr = np.cross(a, b)
    return math.sqrt(np.vdot(cr, cr).real / (na * nb))


# eigen machinery ------------------------------------------------------------

def _full_pivot_eliminate(m: np.ndarray, rtol: float, scale_ref: float | None = None):
    """Full-pivot Gaussian elimination.

    Returns (u, row_perm, col_perm, rank) where u is the eliminated matrix
    in permuted coordinates.  A pivot counts toward the rank when its
    modulus exceeds rtol times the reference scale.
    """
    a = m.astype(complex).copy()
    scale = float(np.abs(a).max()) if scale_ref is None else scale_ref
    thresh = rtol * max(scale, 1e-300)
    rows = [0, 1, 2]
    cols = [0, 1, 2]
    rank = 0
    for step in range(3):
        sub = np.abs(a[step:, step:])
        flat = int(np.argmax(sub))
        i, j = divmod(flat, 3 - step)
        i += step
        j += step
        if sub[i - step, j - step] <= thresh:
            break
        if i != step:
            a[[step, i], :] = a[[i, step], :]
            rows[step], rows[i] = rows[i], rows[step]
        if j != step:
            a[:, [step, j]] = a[:, [j, step]]
            cols[step], cols[j] = cols[j], cols[step]
        for r in range(step + 1, 3):
            f = a[r, step] / a[step, step]
            a[r, step:] -= f * a[step, step:]
            a[r, step] = 0.0
        rank += 1
    return a, rows, cols, rank


def rank3(m, rtol: float = PIVOT_RTOL, scale_ref: float | None = None) -> int:
    _, _, _, rank = _full_pivot_eliminate(as_mat3(m), rtol, scale_ref)
    return rank


def null_space(m, rtol: float = PIVOT_RTOL) -> list[np.ndarray]:
    """Basis of the numerical null space via full-pivot elimination."""
    a = as_mat3(m)
    u, _, cols, rank = _full_pivot_eliminate(a, rtol)
    nullity = 3 - rank
    basis: list[np.ndarray] = []
    for free in range(rank, 3):
        x = np.zeros(3, dtype=complex)
        x[free] = 1.0
        for i in range(rank - 1, -1, -1):
            acc = sum(u[i, j] * x[j] for j in range(i + 1, 3))
            x[i] = -acc / u[i, i]
        vec = np.zeros(3, dtype=complex)
        for permuted, original in enumerate(cols):
            vec[original] = x[permuted]
        basis.append(vec / np.linalg.norm(vec))
    return basis


@dataclass(frozen=True)
class EigenPair:
    """One distinct eigenvalue with its geometric eigenvector directions."""

    value: complex
    multiplicity: int
    vectors: tuple[ProjectivePoint, ...]


@dataclass(frozen=True)
class EigenData:
    pairs: tuple[EigenPair, ...]

    def eigenvalues(self) -> list[complex]:
        """All three eigenvalues, repeated with algebraic multiplicity."""
        out: list[complex] = []
        for pair in self.pairs:
            out.extend([pair.value] * pair.multiplicity)
        return out


def eig3(m, merge_tol: float = MERGE_TOL, pivot_rtol: float = PIVOT_RTOL) -> EigenData:
    """Eigenvalues from the characteristic cubic, eigenvectors from null spaces."""
    a = as_mat3(m)
    c2, c1, c0 = char_poly(a)
    roots = cubic_roots(c2, c1, c0, merge_tol=merge_tol)

    distinct: list[tuple[complex, int]] = []
    for r in roots:
        if distinct and distinct[-1][0] == r:
            distinct[-1] = (r, distinct[-1][1] + 1)
        else:
            distinct.append((r, 1))

    pairs = []
    eye = np.eye(3, dtype=complex)
    for value, mult in distinct:
        basis = null_space(a - value * eye, rtol=pivot_rtol)
        if not basis:
            raise DegenerateNullSpace(
                f"no null direction found for eigenvalue {value:.6g} at pivot tolerance {pivot_rtol:g}"
            )
        vectors = tuple(ProjectivePoint.from_vector(v) for v in basis)
        pairs.append(EigenPair(value, mult, vectors))
    pairs.sort(key=lambda p: (-p.multiplicity, p.value.real, p.value.imag))
    return EigenData(tuple(pairs))


@dataclass(frozen=True)
class JordanShape:
    """Block sizes per distinct eigenvalue, aligned index by index."""

    eigenvalues: tuple[complex, ...]
    blocks: tuple[tuple[int, ...], ...]

    def for_eigenvalue(self, value: complex, tol: float = 1e-6) -> tuple[int, ...]:
        for ev, blk in zip(self.eigenvalues, self.blocks):
            if abs(ev - value) <= tol * max(1.0, abs(ev)):
                return blk
        raise KeyError(f"{value} is not an eigenvalue of this shape")


def jordan_shape(m, tol: float = MERGE_TOL, pivot_rtol: float = PIVOT_RTOL) -> JordanShape:
    """Jordan block sizes, clustering eigenvalues at the given tolerance.

    Raises AmbiguousClustering when two clusters are separated by less
    than ten times the (scaled) tolerance, since the answer would then
    flip under small perturbations.
    """
    a = as_mat3(m)
    c2, c1, c0 = char_poly(a)
    roots = cubic_roots(c2, c1, c0, merge_tol=tol)

    distinct: list[tuple[complex, int]] = []
    for r in roots:
        if distinct and distinct[-1][0] == r:
            distinct[-1] = (r, distinct[-1][1] + 1)
        else:
            distinct.append((r, 1))

    scale = max(1.0, max(abs(r) for r in roots))
    for i in range(len(distinct)):
        for j in range(i + 1, len(distinct)):
            gap = abs(distinct[i][0] - distinct[j][0])
            if gap < 10.0 * tol * scale:
                raise AmbiguousClustering(
                    f"eigenvalue clusters separated by {gap:.3g} < 10*tol"
                )

    eye = np.eye(3, dtype=complex)
    values = []
    blocks = []
    for value, mult in distinct:
        if mult == 1:
            sizes = (1,)
        else:
            n1 = a - value * eye
            norm1 = float(np.abs(n1).max())
            r1 = rank3(n1, pivot_rtol)
            r2 = rank3(n1 @ n1, pivot_rtol, scale_ref=max(norm1 * norm1, 1e-300))
            ge1 = 3 - r1          # blocks of size >= 1
            ge2 = r1 - r2         # blocks of size >= 2
            ge3 = mult - ge1 - ge2
            counts = (ge1 - ge2, ge2 - ge3, ge3)  # exactly 1, 2, 3
            if min(counts) < 0 or ge1 <= 0:
                raise AmbiguousClustering(
                    f"inconsistent rank profile for eigenvalue {value:.6g}"
                )
            sizes = tuple(
                size for size, count in ((3, ge3), (2, ge2 - ge3), (1, ge1 - ge2))
                for _ in range(count)
            )
        values.append(value)
        blocks.append(sizes)
    return JordanShape(tuple(values), tuple(blocks))


def mat_exp(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated series."""
    a = as_mat3(m)
    norm = float(np.abs(a).sum(axis=1).max())
    s = 0 if norm <= 0.5 else min(64, int(math.ceil(math.log2(norm / 0.5))))
    x = a / (2.0 ** s)
    eye = np.eye(3, dtype=complex)
    r = eye.copy()
    for k in range(EXP_SERIES_TERMS, 0, -1):
        r = eye + (x @ r) / k
    for _ in range(s):
        r = r @ r
    return r
