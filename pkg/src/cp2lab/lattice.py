"""Exact integer Picard lattices of rational surfaces.

Unimodular Lorentzian lattices with a distinguished canonical class,
supporting blow-up (append a -1 vector, add it to the canonical class),
contraction of an exceptional class (orthogonal complement with an
integer basis from a gcd-chain unimodular transform, plus the pushforward
map), adjunction genus, the positive-definite form attached to a
square-one class, finite-order checks for isometries on class sets, and
brute-force enumerations used as oracles.

All arithmetic is exact: Python integers and Fractions throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .errors import (
    NoCandidate,
    NonUnimodularComplement,
    NotExceptionalClass,
    NotSquareOne,
    ParityViolation,
    RankMismatch,
    SetNotInvariant,
)


@dataclass(frozen=True)
class DivisorClass:
    """Integer coefficient vector in the basis of its ambient lattice."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(tuple(int(k) * a for a in self.coeffs))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


def _det_int(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _signature(gram: tuple[tuple[int, ...], ...]) -> tuple[int, int]:
    """(positive, negative) inertia of a nondegenerate symmetric matrix.

    Exact symmetric congruence diagonalization over the rationals.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            hit = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0),
                None,
            )
            if hit is None:
                raise ValueError("degenerate symmetric form")
            i, j = hit
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for t in range(n):
                a[t][k], a[t][piv] = a[t][piv], a[t][k]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for t in range(n):
                    a[i][t] -= f * a[k][t]
        for i in range(k + 1, n):
            f = a[k][i] / p
            if f:
                for t in range(n):
                    a[t][i] -= f * a[t][k]
    return pos, neg


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _clear_vector(w: list[int]) -> tuple[list[list[int]], list[list[int]], int]:
    """Unimodular V (and its inverse) with w^T V = (g, 0, ..., 0), g = gcd(w) > 0."""
    n = len(w)
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    vinv = [[int(i == j) for j in range(n)] for i in range(n)]
    cur = list(map(int, w))
    for idx in range(1, n):
        a0, ai = cur[0], cur[idx]
        if ai == 0:
            continue
        g, x, y = _xgcd(a0, ai)
        p, q = -(ai // g), a0 // g
        for r in range(n):
            c0, ci = v[r][0], v[r][idx]
            v[r][0] = x * c0 + y * ci
            v[r][idx] = p * c0 + q * ci
        for c in range(n):
            r0, ri = vinv[0][c], vinv[idx][c]
            vinv[0][c] = q * r0 - p * ri
            vinv[idx][c] = -y * r0 + x * ri
        cur[0], cur[idx] = g, 0
    if cur[0] < 0:
        for r in range(n):
            v[r][0] = -v[r][0]
        for c in range(n):
            vinv[0][c] = -vinv[0][c]
        cur[0] = -cur[0]
    return v, vinv, cur[0]


@dataclass(frozen=True)
class PushforwardMap:
    """Linear map induced by contracting an exceptional class.

    Sends D to D + (D.E) E, rewritten in the integer basis of the
    orthogonal complement of E.
    """

    matrix: tuple[tuple[int, ...], ...]   # (rank-1) x rank
    exceptional: DivisorClass

    def __call__(self, d: DivisorClass) -> DivisorClass:
        if d.rank != len(self.matrix[0]):
            raise RankMismatch(f"class has rank {d.rank}, map expects {len(self.matrix[0])}")
        return DivisorClass(
            tuple(sum(row[j] * d.coeffs[j] for j in range(d.rank)) for row in self.matrix)
        )


@dataclass(frozen=True)
class LatticeIsometry:
    """Integer matrix with M^T G M = G; columns are images of basis vectors."""

    matrix: tuple[tuple[int, ...], ...]

    def apply(self, d: DivisorClass) -> DivisorClass:
        n = len(self.matrix)
        if d.rank != n:
            raise RankMismatch(f"class has rank {d.rank}, isometry expects {n}")
        return DivisorClass(
            tuple(sum(self.matrix[i][j] * d.coeffs[j] for j in range(n)) for i in range(n))
        )


@dataclass(frozen=True)
class DefiniteForm:
    """Positive form v -> (v.C)^2 - D.D for v = (v.C) C + D with D in C-perp.

    Defined whenever C.C = 1 in a Lorentzian lattice; positivity is the
    Hodge-index statement that C-perp is negative definite.
    """

    lattice: "PicardLattice"
    unit_class: DivisorClass

    def __call__(self, v) -> Fraction:
        coeffs = v.coeffs if isinstance(v, DivisorClass) else tuple(v)
        if len(coeffs) != self.lattice.rank:
            raise RankMismatch(f"vector has length {len(coeffs)}, lattice rank {self.lattice.rank}")
        coeffs = tuple(Fraction(c) for c in coeffs)
        gram = self.lattice.gram
        c = self.unit_class.coeffs
        lam = sum(coeffs[i] * gram[i][j] * c[j] for i in range(len(c)) for j in range(len(c)))
        d = tuple(coeffs[i] - lam * c[i] for i in range(len(c)))
        dd = sum(d[i] * gram[i][j] * d[j] for i in range(len(c)) for j in range(len(c)))
        return lam * lam - dd


@dataclass(frozen=True)
class PicardLattice:
    """Unimodular Lorentzian lattice with named basis and canonical class."""

    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    canonical: DivisorClass

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError("gram matrix must be square")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise ValueError("gram matrix must be symmetric")
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be distinct and match the rank")
        if self.canonical.rank != n:
            raise RankMismatch("canonical class length does not match the rank")
        if abs(_det_int([list(r) for r in gram])) != 1:
            raise ValueError("gram matrix must be unimodular")
        if _signature(gram) != (1, n - 1):
            raise ValueError("lattice must have Lorentzian signature (1, rank-1)")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def signature(self) -> tuple[int, int]:
        return _signature(self.gram)

    def determinant(self) -> int:
        return _det_int([list(r) for r in self.gram])

    def basis_class(self, label: str) -> DivisorClass:
        idx = self.labels.index(label)
        return DivisorClass(tuple(int(i == idx) for i in range(self.rank)))

    def class_from(self, coeffs) -> DivisorClass:
        d = DivisorClass(tuple(coeffs))
        if d.rank != self.rank:
            raise RankMismatch(f"class has rank {d.rank}, lattice rank {self.rank}")
        return d

    # pairing and genus

    def intersect(self, d1: DivisorClass, d2: DivisorClass) -> int:
        if d1.rank != self.rank or d2.rank != self.rank:
            raise RankMismatch(
                f"classes of rank {d1.rank}, {d2.rank} in a rank-{self.rank} lattice"
            )
        g = self.gram
        return sum(
            d1.coeffs[i] * g[i][j] * d2.coeffs[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def genus(self, d: DivisorClass) -> int:
        total = self.intersect(d, d) + self.intersect(d, self.canonical)
        if total % 2 != 0:
            raise ParityViolation(f"D.D + D.K = {total} is odd for {d}")
        return total // 2 + 1

    # surgery

    def blow_up(self) -> "PicardLattice":
        """Append an exceptional vector: gram gains a -1 entry, K gains E."""
        n = self.rank
        gram = tuple(tuple(row) + (0,) for row in self.gram) + (tuple([0] * n + [-1]),)
        existing = sum(1 for lab in self.labels if lab.startswith("E") and lab[1:].isdigit())
        labels = self.labels + (f"E{existing + 1}",)
        canonical = DivisorClass(self.canonical.coeffs + (1,))
        return PicardLattice(gram, labels, canonical)

    def proper_transform(self, d: DivisorClass, multiplicity: int) -> DivisorClass:
        """Class of a curve of the given multiplicity through the blown-up point.

        Call on the blown-up lattice with a class from the previous lattice.
        """
        if multiplicity < 0:
            raise ValueError("multiplicity must be non-negative")
        if d.rank != self.rank - 1:
            raise RankMismatch(
                f"expected a rank-{self.rank - 1} class from before the blow-up, got rank {d.rank}"
            )
        return DivisorClass(d.coeffs + (-int(multiplicity),))

    def contract(self, e: DivisorClass) -> tuple["PicardLattice", PushforwardMap]:
        """Contract an exceptional class; returns the complement lattice and
        the pushforward map (new canonical class = pushforward of K + E)."""
        if self.intersect(e, e) != -1 or self.intersect(e, self.canonical) != -1:
            raise NotExceptionalClass(
                f"{e} has E.E = {self.intersect(e, e)}, E.K = {self.intersect(e, self.canonical)}"
            )
        n = self.rank
        g = self.gram
        w = [sum(g[i][j] * e.coeffs[j] for j in range(n)) for i in range(n)]
        v, vinv, content = _clear_vector(w)
        if content != 1:
            raise NonUnimodularComplement(f"pairing vector has content {content}")

        basis = [[v[i][c] for i in range(n)] for c in range(1, n)]  # columns 1..n-1
        new_gram = tuple(
            tuple(
                sum(basis[a][i] * g[i][j] * basis[b][j] for i in range(n) for j in range(n))
                for b in range(n - 1)
            )
            for a in range(n - 1)
        )

        # rows 1..n-1 of Vinv composed with x -> x + (x.E) E
        push_rows = []
        for r in range(n):
            row = [
                sum(vinv[r][i] * (int(i == j) + e.coeffs[i] * w[j]) for i in range(n))
                for j in range(n)
            ]
            push_rows.append(row)
        if any(push_rows[0][j] != 0 for j in range(n)):
            raise NonUnimodularComplement("projection onto the complement is not integral")
        push = PushforwardMap(tuple(tuple(row) for row in push_rows[1:]), e)

        new_canonical = push(self.canonical + e)
        labels = tuple(f"v{i + 1}" for i in range(n - 1))
        try:
            contracted = PicardLattice(new_gram, labels, new_canonical)
        except ValueError as exc:
            raise NonUnimodularComplement(str(exc)) from exc
        return contracted, push

    # forms and isometries

    def definite_form(self, c: DivisorClass) -> DefiniteForm:
        if self.intersect(c, c) != 1:
            raise NotSquareOne(f"{c} has self-intersection {self.intersect(c, c)}, need 1")
        return DefiniteForm(self, c)

    def isometry(self, rows) -> LatticeIsometry:
        mat = tuple(tuple(int(x) for x in row) for row in rows)
        n = self.rank
        if len(mat) != n or any(len(r) != n for r in mat):
            raise RankMismatch("isometry matrix must match the lattice rank")
        g = self.gram
        for a in range(n):
            for b in range(n):
                val = sum(mat[i][a] * g[i][j] * mat[j][b] for i in range(n) for j in range(n))
                if val != g[a][b]:
                    raise ValueError("matrix does not preserve the intersection form")
        return LatticeIsometry(mat)


def p2_lattice() -> PicardLattice:
    """Picard lattice of the projective plane: Z H with H.H = 1, K = -3H."""
    return PicardLattice(((1,),), ("H",), DivisorClass((-3,)))


def hirzebruch_lattice(n: int) -> PicardLattice:
    """Rank-2 lattice of the n-th Hirzebruch surface on the fibre/base basis.

    F.F = 0, F.B = 1, B.B = -n; the canonical class -2B - (n+2)F is fixed
    by requiring both rulings to be rational and K.K = 8.
    """
    if n < 0:
        raise ValueError("Hirzebruch index must be non-negative")
    gram = ((0, 1), (1, -n))
    canonical = DivisorClass((-(n + 2), -2))
    return PicardLattice(gram, ("F", "B"), canonical)


def square_one_classes(n: int, bound: int) -> list[tuple[int, int]]:
    """Square-one curve classes aF + bB on the n-th Hirzebruch lattice.

    Exhaustive scan over |a|, |b| <= bound for (aF + bB)^2 = 2ab - n b^2 = 1,
    keeping only pairs whose sign-normalized representative (fibre pairing
    b > 0) also meets the base non-negatively (a - n b >= 0), as an
    irreducible curve distinct from the rulings must.  Sign-symmetric
    pairs (-a, -b) are listed alongside their positives.  For odd n >= 3
    the bare equation has solutions but the base pairing is negative, so
    the list is empty; only n = 1 admits (1, 1).
    """
    out = []
    for b in range(-bound, bound + 1):
        if b == 0:
            continue
        num = 1 + n * b * b
        if num % (2 * b) != 0:
            continue
        a = num // (2 * b)
        if abs(a) > bound:
            continue
        aa, bb = (a, b) if b > 0 else (-a, -b)
        if aa - n * bb < 0:
            continue
        out.append((a, b))
    out.sort(reverse=True)
    return out


def enumerate_exceptional_classes(lat: PicardLattice, coeff_bound: int) -> list[DivisorClass]:
    """Exhaustive scan for classes with D.D = -1 and D.K = -1."""
    out = []
    for coeffs in product(range(-coeff_bound, coeff_bound + 1), repeat=lat.rank):
        if not any(coeffs):
            continue
        d = DivisorClass(coeffs)
        if lat.intersect(d, d) == -1 and lat.intersect(d, lat.canonical) == -1:
            out.append(d)
    out.sort(key=lambda d: d.coeffs)
    return out


def find_contractible_component(components, lat: PicardLattice) -> int:
    """Index of a component with negative canonical pairing.

    components is a list of (DivisorClass, positive coefficient) with every
    component of negative self-intersection, as in the decomposition of a
    reducible square-zero pencil member; adjunction on the genus-zero sum
    then guarantees some component pairs negatively with K.  Ties break to
    the lowest index; NoCandidate signals a violated configuration or that
    every component is K-orthogonal (as for chains of -2 classes).
    """
    comps = [(d, int(c)) for d, c in components]
    if not comps:
        raise NoCandidate("empty component list")
    if any(c <= 0 for _, c in comps):
        raise NoCandidate("component coefficients must be positive")
    if any(lat.intersect(d, d) >= 0 for d, _ in comps):
        raise NoCandidate("every component must have negative self-intersection")
    for idx, (d, _) in enumerate(comps):
        if lat.intersect(d, lat.canonical) < 0:
            return idx
    raise NoCandidate("no component pairs negatively with the canonical class")


def isometry_order_on_classes(iso: LatticeIsometry, classes, bound: int) -> int | None:
    """Smallest k <= bound with iso^k fixing every listed class, else None.

    The listed set must be invariant; orbits inside a finite invariant set
    are cycles, so k is the lcm of the cycle lengths.
    """
    class_list = list(classes)
    if not class_list:
        return 1
    index = {d.coeffs: i for i, d in enumerate(class_list)}
    succ = []
    for d in class_list:
        image = iso.apply(d)
        if image.coeffs not in index:
            raise SetNotInvariant(f"isometry maps {d} to {image}, outside the given set")
        succ.append(index[image.coeffs])
    order = 1
    seen = [False] * len(class_list)
    for start in range(len(class_list)):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = succ[cur]
            length += 1
        order = lcm(order, length)
    if order > bound:
        return None
    return order
