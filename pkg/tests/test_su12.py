"""Group membership, the algebra layout, classification, normal forms."""

import cmath
import math

import numpy as np
import pytest

from cp2lab import (
    AlgebraElement,
    Kind,
    Location,
    ParabolicKind,
    ProjectivePoint,
    chordal_distance,
    classify,
    conjugate_to_normal_form,
    derivative_eigenvalues,
    fixed_points,
    hermitian_pairing,
    is_group_member,
    line_intersection,
    locate,
    mat_exp,
    q_value,
    tangent_line,
)
from cp2lab.errors import (
    DegenerateElement,
    NotFixed,
    NotInGroup,
    NotNonElliptic,
    NotOnBoundary,
)
from cp2lab.su12 import J

from helpers import (
    conjugate,
    random_algebra,
    random_conjugator,
    random_hyperbolic,
    random_parabolic,
)

RNG_SEED = 777


def _pt(v) -> ProjectivePoint:
    return ProjectivePoint.from_vector(v)


# algebra layout ----------------------------------------------------------------

def test_algebra_zero_gives_zero_matrix():
    assert np.abs(AlgebraElement(0, 0, 0, 0, 0).matrix()).max() == 0


def test_algebra_hyperbolic_normal_layout():
    l, b = 0.9, 0.4
    a = AlgebraElement.hyperbolic_normal(l, b).matrix()
    expected = np.array([
        [1j * b, l, 0],
        [l, 1j * b, 0],
        [0, 0, -2j * b],
    ])
    assert np.abs(a - expected).max() < 1e-15


def test_algebra_parabolic_normal_layout():
    d1, d2, c = 0.3, 0.8, 0.5 - 0.2j
    a = AlgebraElement.parabolic_normal(d1, d2, c).matrix()
    expected = np.array([
        [-1j * (d1 + d2), 1j * (d1 + d2 / 2), c],
        [-1j * (d1 + d2 / 2), 1j * d1, c],
        [np.conj(c), -np.conj(c), 1j * d2],
    ])
    assert np.abs(a - expected).max() < 1e-15
    # (1, 1, 0) is an eigenvector with eigenvalue -i d2 / 2
    v = np.array([1, 1, 0], dtype=complex)
    assert np.abs(a @ v - (-0.5j * d2) * v).max() < 1e-15


def test_algebra_anti_self_adjoint_and_traceless():
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(1000):
        a = random_algebra(rng, 2.0).matrix()
        assert np.abs(a.conj().T @ J + J @ a).max() <= 1e-12
        assert abs(np.trace(a)) <= 1e-12


# membership ----------------------------------------------------------------------

def test_membership_identity():
    assert is_group_member(np.eye(3))


def test_membership_rejects_diagonal_stretch():
    assert not is_group_member(np.diag([2.0, 1.0, 0.5]))


def test_exponential_lands_in_group():
    rng = np.random.default_rng(RNG_SEED + 1)
    for _ in range(1000):
        m = mat_exp(random_algebra(rng, 2.0).matrix())
        assert is_group_member(m, 1e-7)


# locations -----------------------------------------------------------------------

def test_locate_examples():
    assert locate(_pt([1, 0, 0])) == Location.INSIDE
    assert locate(_pt([1, 1, 0])) == Location.BOUNDARY
    assert locate(_pt([0, 0, 1])) == Location.OUTSIDE


# fixed points ----------------------------------------------------------------------

def test_fixed_points_identity_degenerate():
    data = fixed_points(np.eye(3))
    assert data.fully_degenerate


def test_fixed_points_hyperbolic():
    m = mat_exp(AlgebraElement.hyperbolic_normal(1.0, 0.5).matrix())
    data = fixed_points(m)
    targets = {
        "p1": (_pt([1, 1, 0]), Location.BOUNDARY),
        "p2": (_pt([1, -1, 0]), Location.BOUNDARY),
        "q": (_pt([0, 0, 1]), Location.OUTSIDE),
    }
    assert len(data.points) == 3
    for target, loc in targets.values():
        hit = min(data.points, key=lambda fp: chordal_distance(fp.point, target))
        assert chordal_distance(hit.point, target) < 1e-9
        assert hit.location == loc


def test_fixed_points_three_step_single():
    m = mat_exp(AlgebraElement.parabolic_normal(0.0, 0.0, 1.0).matrix())
    data = fixed_points(m)
    assert len(data.points) == 1
    assert chordal_distance(data.points[0].point, _pt([1, 1, 0])) < 1e-9
    assert data.points[0].location == Location.BOUNDARY


# classification --------------------------------------------------------------------

def test_classify_hyperbolic_normal_form():
    m = mat_exp(AlgebraElement.hyperbolic_normal(1.0, 0.0).matrix())
    cls = classify(m)
    assert cls.kind == Kind.HYPERBOLIC
    assert chordal_distance(cls.attractive.point, _pt([1, 1, 0])) < 1e-9
    assert chordal_distance(cls.repulsive.point, _pt([1, -1, 0])) < 1e-9
    assert chordal_distance(cls.exterior.point, _pt([0, 0, 1])) < 1e-9


def test_classify_parabolic_subtypes():
    rot = mat_exp(AlgebraElement.parabolic_normal(0.0, 1.0, 0.0).matrix())
    assert classify(rot).subtype == ParabolicKind.ROTATIONAL

    line = mat_exp(AlgebraElement.parabolic_normal(0.7, 0.0, 0.0).matrix())
    cls = classify(line)
    assert cls.subtype == ParabolicKind.LINE_FIXING
    assert cls.fixed_line is not None
    assert cls.fixed_line.contains(_pt([1, 1, 0]), tol=1e-8)

    three = mat_exp(AlgebraElement.parabolic_normal(0.0, 0.0, 1.0).matrix())
    cls = classify(three)
    assert cls.subtype == ParabolicKind.THREE_STEP
    assert chordal_distance(cls.attractive.point, _pt([1, 1, 0])) < 1e-9


def test_classify_elliptic():
    m = mat_exp(AlgebraElement(0.9, -0.4, 0j, 0j, 0j).matrix())
    cls = classify(m)
    assert cls.kind == Kind.ELLIPTIC
    assert any(fp.location == Location.INSIDE for fp in cls.fixed_points)


def test_classify_rejects_scalars():
    with pytest.raises(DegenerateElement):
        classify(np.eye(3))
    omega = cmath.exp(2j * cmath.pi / 3)
    with pytest.raises(DegenerateElement):
        classify(omega * np.eye(3))


def test_classify_rejects_non_members():
    with pytest.raises(NotInGroup):
        classify(np.diag([2.0, 1.0, 0.5]))


def test_parabolic_moduli_on_unit_circle():
    rng = np.random.default_rng(RNG_SEED + 2)
    for subtype in ("rotational", "line_fixing", "three_step"):
        for _ in range(30):
            m = random_parabolic(rng, subtype)
            from cp2lab import eig3

            assert max(abs(abs(v) - 1) for v in eig3(m).eigenvalues()) <= 1e-8


def test_classification_conjugation_invariant():
    rng = np.random.default_rng(RNG_SEED + 3)
    elements = [
        ("hyperbolic", None, random_hyperbolic(rng)),
        ("parabolic", "rotational", random_parabolic(rng, "rotational")),
        ("parabolic", "line_fixing", random_parabolic(rng, "line_fixing")),
        ("parabolic", "three_step", random_parabolic(rng, "three_step")),
    ]
    for kind, subtype, m in elements:
        base = classify(m)
        assert base.kind.value == kind
        assert (base.subtype.value if base.subtype else None) == subtype
        for _ in range(20):
            g = random_conjugator(rng)
            cls = classify(conjugate(m, g))
            assert cls.kind == base.kind and cls.subtype == base.subtype


# tangent lines ------------------------------------------------------------------

def test_tangent_line_at_model_points():
    l1 = tangent_line(_pt([1, 1, 0]))
    l2 = tangent_line(_pt([1, -1, 0]))
    # {x = y} contains [1:1:t] for all t
    assert l1.contains(_pt([1, 1, 0.3 - 0.7j]), tol=1e-9)
    assert l2.contains(_pt([1, -1, 2.0]), tol=1e-9)
    q = line_intersection(l1, l2)
    assert chordal_distance(q, _pt([0, 0, 1])) < 1e-12


def test_tangent_line_requires_boundary_point():
    with pytest.raises(NotOnBoundary):
        tangent_line(_pt([1, 0, 0]))


def test_tangent_line_touches_ball_only_at_base_point():
    rng = np.random.default_rng(RNG_SEED + 4)
    for _ in range(20):
        y = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
        z = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
        norm = math.sqrt(abs(y) ** 2 + abs(z) ** 2)
        p = _pt([1, y / norm, z / norm])
        assert locate(p) == Location.BOUNDARY
        line = tangent_line(p)
        # second point on the line, then sample combinations away from p
        dual = line.vector
        norm2 = np.vdot(dual, dual).real
        r = None
        for e in np.eye(3, dtype=complex):
            cand = e - (np.dot(dual, e) / norm2) * dual.conjugate()
            if np.linalg.norm(cand) > 0.1 and chordal_distance(cand, p) > 0.1:
                r = cand
                break
        assert r is not None and abs(np.dot(dual, r)) < 1e-9
        for _ in range(20):
            t = rng.uniform(0.2, 5.0) * cmath.exp(2j * math.pi * rng.uniform())
            sample = p.vector + t * r
            assert q_value(sample) > 0  # strictly outside away from p


# derivative eigenvalues ----------------------------------------------------------

def test_derivative_eigenvalues_hyperbolic_table():
    l, b = 0.9, 0.4
    m = mat_exp(AlgebraElement.hyperbolic_normal(l, b).matrix())
    cls = classify(m)

    def close_set(got, expected):
        return all(min(abs(g - e) for g in got) < 1e-10 for e in expected)

    assert close_set(derivative_eigenvalues(m, cls.attractive.point),
                     [cmath.exp(-2 * l), cmath.exp(-l - 3j * b)])
    assert close_set(derivative_eigenvalues(m, cls.repulsive.point),
                     [cmath.exp(2 * l), cmath.exp(l - 3j * b)])
    assert close_set(derivative_eigenvalues(m, cls.exterior.point),
                     [cmath.exp(-l + 3j * b), cmath.exp(l + 3j * b)])


def test_derivative_eigenvalues_elliptic_diagonal():
    theta = 0.7
    m = np.diag([cmath.exp(1j * theta), cmath.exp(1j * theta), cmath.exp(-2j * theta)])
    got = derivative_eigenvalues(m, _pt([1, 0, 0]))
    expected = [1.0, cmath.exp(-3j * theta)]
    assert all(min(abs(g - e) for g in got) < 1e-10 for e in expected)


def test_derivative_eigenvalues_requires_fixed_point():
    m = mat_exp(AlgebraElement.hyperbolic_normal(1.0, 0.0).matrix())
    with pytest.raises(NotFixed):
        derivative_eigenvalues(m, _pt([1, 0.5, 0.1]))


def test_hyperbolic_derivative_moduli_pattern():
    rng = np.random.default_rng(RNG_SEED + 5)
    for _ in range(20):
        m = conjugate(random_hyperbolic(rng), random_conjugator(rng))
        cls = classify(m)
        at = [abs(v) for v in derivative_eigenvalues(m, cls.attractive.point)]
        rp = [abs(v) for v in derivative_eigenvalues(m, cls.repulsive.point)]
        ex = [abs(v) for v in derivative_eigenvalues(m, cls.exterior.point)]
        assert max(at) < 1.0
        assert min(rp) > 1.0
        assert min(ex) < 1.0 < max(ex)


# normal forms --------------------------------------------------------------------

def test_normal_form_of_normal_form_is_identity_conjugation():
    l, b = 0.8, 0.3
    m = mat_exp(AlgebraElement.hyperbolic_normal(l, b).matrix())
    nf = conjugate_to_normal_form(m)
    assert abs(nf.params.l - l) < 1e-9
    assert abs(nf.params.b - b) < 1e-9
    assert np.abs(nf.conjugator.matrix - np.eye(3)).max() < 1e-9


def test_normal_form_recovers_hyperbolic_parameters():
    rng = np.random.default_rng(RNG_SEED + 6)
    for _ in range(10):
        g = random_conjugator(rng)
        m = conjugate(mat_exp(AlgebraElement.hyperbolic_normal(0.7, 0.3).matrix()), g)
        nf = conjugate_to_normal_form(m)
        assert abs(nf.params.l - 0.7) < 1e-6
        assert abs(nf.params.b - 0.3) < 1e-6
        target = mat_exp(AlgebraElement.hyperbolic_normal(nf.params.l, nf.params.b).matrix())
        assert np.abs(nf.matrix - target).max() < 1e-7


def test_normal_form_projective_phase_window():
    nf = conjugate_to_normal_form(mat_exp(AlgebraElement.hyperbolic_normal(0.5, 3.0).matrix()))
    third = 2 * math.pi / 3
    assert -third / 2 < nf.params.projective_phase <= third / 2


def test_normal_form_three_step():
    rng = np.random.default_rng(RNG_SEED + 7)
    for _ in range(10):
        g = random_conjugator(rng)
        m = conjugate(random_parabolic(rng, "three_step"), g)
        nf = conjugate_to_normal_form(m)
        assert nf.subtype == ParabolicKind.THREE_STEP
        assert abs(nf.params.d2) < 1e-8
        assert abs(nf.params.c) > 1e-3
        assert nf.params.central_phase == 1
        target = mat_exp(
            AlgebraElement.parabolic_normal(nf.params.d1, nf.params.d2, nf.params.c).matrix()
        )
        assert np.abs(nf.matrix - target).max() < 1e-7 * max(1.0, np.abs(nf.matrix).max())


def test_normal_form_rotational_recovers_rotation_angle():
    rng = np.random.default_rng(RNG_SEED + 8)
    d2 = 1.1
    m0 = mat_exp(AlgebraElement.parabolic_normal(0.4, d2, 0.3 + 0.2j).matrix())
    for _ in range(5):
        nf = conjugate_to_normal_form(conjugate(m0, random_conjugator(rng)))
        assert nf.subtype == ParabolicKind.ROTATIONAL
        assert abs(nf.params.d2 - d2) < 1e-6


def test_normal_form_rejects_elliptic():
    with pytest.raises(NotNonElliptic):
        conjugate_to_normal_form(mat_exp(AlgebraElement(0.9, -0.4, 0j, 0j, 0j).matrix()))


def test_normal_form_central_multiple_of_unipotent():
    omega = cmath.exp(2j * cmath.pi / 3)
    m = omega * mat_exp(AlgebraElement.parabolic_normal(0.0, 0.0, 1.0).matrix())
    assert is_group_member(m, 1e-9)
    nf = conjugate_to_normal_form(m)
    assert abs(nf.params.central_phase - omega) < 1e-9


# pairing sanity -------------------------------------------------------------------

def test_hermitian_pairing_null_vectors():
    assert hermitian_pairing([1, 1, 0], [1, 1, 0]) == 0
    assert hermitian_pairing([1, -1, 0], [1, -1, 0]) == 0
    assert q_value([0, 0, 1]) > 0
    assert q_value([1, 0, 0]) < 0
