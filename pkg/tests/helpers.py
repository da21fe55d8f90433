"""Shared generators for randomized tests."""

from __future__ import annotations

import numpy as np

from cp2lab import AlgebraElement, mat_exp


def random_algebra(rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    v = rng.uniform(-scale, scale, size=8)
    return AlgebraElement(
        b1=float(v[0]),
        b2=float(v[1]),
        l1=complex(v[2], v[3]),
        l2=complex(v[4], v[5]),
        c=complex(v[6], v[7]),
    )


def random_conjugator(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return mat_exp(random_algebra(rng, scale).matrix())


def random_hyperbolic(rng: np.random.Generator) -> np.ndarray:
    l = float(rng.uniform(0.3, 1.5))
    b = float(rng.uniform(-np.pi, np.pi))
    return mat_exp(AlgebraElement.hyperbolic_normal(l, b).matrix())


def _signed_away_from_zero(rng: np.random.Generator, lo: float = 0.3, hi: float = 1.5) -> float:
    return float(rng.uniform(lo, hi)) * (1.0 if rng.uniform() < 0.5 else -1.0)


def random_parabolic(rng: np.random.Generator, subtype: str) -> np.ndarray:
    d1 = _signed_away_from_zero(rng)
    if subtype == "rotational":
        d2 = _signed_away_from_zero(rng)
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    elif subtype == "line_fixing":
        d2 = 0.0
        c = 0j
    elif subtype == "three_step":
        d2 = 0.0
        mag = rng.uniform(0.3, 1.5)
        phase = rng.uniform(0, 2 * np.pi)
        c = complex(mag * np.cos(phase), mag * np.sin(phase))
    else:
        raise ValueError(subtype)
    return mat_exp(AlgebraElement.parabolic_normal(d1, d2, c).matrix())


def random_elliptic(rng: np.random.Generator) -> np.ndarray:
    b1 = float(rng.uniform(0.5, 1.5))
    b2 = float(rng.uniform(-1.5, -0.5))
    return mat_exp(AlgebraElement(b1, b2, 0j, 0j, 0j).matrix())


def conjugate(m: np.ndarray, g: np.ndarray) -> np.ndarray:
    return g @ m @ np.linalg.inv(g)
