"""Exact rational convex geometry for Newton polytopes in low dimension.

Polytopes are stored by their minimal vertex sets with Fraction coordinates.
Point membership is decided exactly by Fourier-Motzkin elimination on the
strict-separation system (at most ambient_dim + 1 variables).  Vertex
reduction and facet enumeration work by enumerating supporting hyperplanes
through point subsets inside the affine span; instances in scope are tiny,
so exactness is preferred over asymptotics.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .laurent import LaurentPoly

QVec = tuple[Fraction, ...]


class EmptyPolytopeError(ValueError):
    """Operation requires a nonempty polytope."""


class DimensionMismatchError(ValueError):
    """Operands live in different ambient dimensions."""


def qvec(values: Sequence) -> QVec:
    return tuple(Fraction(v) for v in values)


def qvec_add(u: QVec, v: QVec) -> QVec:
    return tuple(a + b for a, b in zip(u, v))


def qvec_sub(u: QVec, v: QVec) -> QVec:
    return tuple(a - b for a, b in zip(u, v))


def qvec_scale(u: QVec, k: Fraction) -> QVec:
    return tuple(a * k for a in u)


def qdot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def primitivize(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector by a positive rational to a primitive integer vector."""
    if all(isinstance(x, int) for x in v):
        ints = list(v)
    else:
        denom_lcm = 1
        for x in v:
            f = Fraction(x)
            denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
        ints = [int(Fraction(x) * denom_lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("cannot primitivize the zero vector")
    return tuple(x // g for x in ints)


class HalfSpace(NamedTuple):
    """Closed half-space {x : <normal, x> <= offset} with primitive integer normal."""

    normal: tuple[int, ...]
    offset: Fraction

    def contains(self, x: Sequence) -> bool:
        return qdot(self.normal, x) <= self.offset

    def on_boundary(self, x: Sequence) -> bool:
        return qdot(self.normal, x) == self.offset


class Hyperplane(NamedTuple):
    """Affine hyperplane {x : <normal, x> = offset} with primitive integer normal."""

    normal: tuple[int, ...]
    offset: Fraction


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction


class Facet(NamedTuple):
    halfspace: HalfSpace
    vertices: tuple[QVec, ...]


class FacetDescription(NamedTuple):
    facets: tuple[Facet, ...]
    span_equations: tuple[Hyperplane, ...]


# -- small exact linear algebra ------------------------------------------------


def _echelon(rows: list[QVec]) -> tuple[list[QVec], list[int]]:
    """Row echelon form; returns (nonzero rows, pivot column indices)."""
    work = [tuple(Fraction(x) for x in r) for r in rows]
    out: list[QVec] = []
    pivots: list[int] = []
    ncols = len(work[0]) if work else 0
    col = 0
    while work and col < ncols:
        pivot_row = next((r for r in work if r[col] != 0), None)
        if pivot_row is None:
            col += 1
            continue
        work.remove(pivot_row)
        pivot_row = qvec_scale(pivot_row, Fraction(1, 1) / pivot_row[col])
        out.append(pivot_row)
        pivots.append(col)
        work = [
            qvec_sub(r, qvec_scale(pivot_row, r[col])) if r[col] != 0 else r for r in work
        ]
        col += 1
    return out, pivots


def _reduce_against(echelon: list[QVec], pivots: list[int], v: QVec) -> QVec:
    for row, p in zip(echelon, pivots):
        if v[p] != 0:
            v = qvec_sub(v, qvec_scale(row, v[p]))
    return v


def _solve_columns(cols: list[QVec], target: QVec) -> QVec | None:
    """Solve sum_i x_i * cols[i] = target exactly, or None when inconsistent."""
    n = len(cols)
    if n == 0:
        return () if not any(target) else None
    m = len(target)
    aug = [tuple(cols[j][i] for j in range(n)) + (target[i],) for i in range(m)]
    ech, pivots = _echelon(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in reversed(list(zip(ech, pivots))):
        x[p] = row[n] - sum((row[j] * x[j] for j in range(p + 1, n)), Fraction(0))
    return tuple(x)


def _det(matrix: list[Sequence]) -> Fraction | int:
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = 0
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in matrix[1:]]
        total += (-1) ** j * matrix[0][j] * _det(minor)
    return total


def _cross_normal(rows: list[Sequence], dim: int) -> tuple | None:
    """Kernel vector of d-1 rows in dimension d via signed maximal minors; None when degenerate."""
    if dim == 1:
        return (1,)
    out = []
    for i in range(dim):
        sub = [[r[j] for j in range(dim) if j != i] for r in rows]
        out.append((-1) ** i * _det(sub))
    if not any(out):
        return None
    return tuple(out)


def integer_kernel_basis(rows: list[Sequence]) -> list[tuple[int, ...]]:
    """Primitive integer basis of {v : <row, v> = 0 for all rows}."""
    if not rows:
        raise ValueError("need the ambient dimension; pass at least a zero row")
    dim = len(rows[0])
    qrows = [qvec(r) for r in rows]
    ech, pivots = _echelon([r for r in qrows if any(r)])
    free = [j for j in range(dim) if j not in pivots]
    basis: list[tuple[int, ...]] = []
    for j in free:
        v = [Fraction(0)] * dim
        v[j] = Fraction(1)
        for row, p in reversed(list(zip(ech, pivots))):
            v[p] = -sum((row[k] * v[k] for k in range(p + 1, dim)), Fraction(0))
        basis.append(primitivize(v))
    return basis


# -- Fourier-Motzkin feasibility ----------------------------------------------


class _Infeasible(Exception):
    pass


_Row = tuple[tuple[Fraction, ...], Fraction, bool]  # (coeffs, rhs, strict)


def _normalize_rows(rows: Iterable[_Row]) -> list[_Row]:
    best: dict[tuple, tuple[Fraction, bool]] = {}
    for coeffs, rhs, strict in rows:
        if not any(coeffs):
            if rhs < 0 or (strict and rhs == 0):
                raise _Infeasible
            continue
        key = primitivize(coeffs)
        scale = next(Fraction(c) / k for c, k in zip(coeffs, key) if k != 0)
        nrhs = Fraction(rhs) / scale
        cur = best.get(key)
        if cur is None or (nrhs, not strict) < (cur[0], not cur[1]):
            best[key] = (nrhs, strict)
    return [
        (tuple(Fraction(k) for k in key), rhs, strict)
        for key, (rhs, strict) in best.items()
    ]


def fm_feasible(num_vars: int, rows: list[_Row]) -> bool:
    """Exact feasibility of a system of (strict or weak) linear inequalities."""
    try:
        rows = _normalize_rows(rows)
        for var in range(num_vars):
            pos = [r for r in rows if r[0][var] > 0]
            neg = [r for r in rows if r[0][var] < 0]
            rest = [r for r in rows if r[0][var] == 0]
            combined: list[_Row] = list(rest)
            for ap, bp, sp in pos:
                for an, bn, sn in neg:
                    cp, cn = ap[var], -an[var]
                    coeffs = tuple(x / cp + y / cn for x, y in zip(ap, an))
                    combined.append((coeffs, bp / cp + bn / cn, sp or sn))
            rows = _normalize_rows(combined)
    except _Infeasible:
        return False
    return True


# -- hull computation ----------------------------------------------------------


class _HullData(NamedTuple):
    base: QVec
    directions: list[QVec]            # ambient direction basis of the affine span
    coords: dict[QVec, QVec]          # point -> coordinates in the direction basis
    vertices: list[QVec]              # extreme points, lex sorted
    supports: list[tuple[tuple[int, ...], Fraction]]  # supporting (n, c) in span coords


def _affine_frame(points: list[QVec]) -> tuple[QVec, list[QVec], dict[QVec, QVec]]:
    base = points[0]
    directions: list[QVec] = []
    ech: list[QVec] = []
    pivots: list[int] = []
    for p in points[1:]:
        d = qvec_sub(p, base)
        if any(_reduce_against(ech, pivots, d)):
            directions.append(d)
            ech, pivots = _echelon(directions)
    if len(directions) == len(base):
        # Full-dimensional; span coordinates are never consulted.
        return base, directions, {p: p for p in points}
    coords = {}
    for p in points:
        u = _solve_columns(directions, qvec_sub(p, base))
        assert u is not None
        coords[p] = u
    return base, directions, coords


def _hull(points_in: Iterable[QVec]) -> _HullData:
    points = sorted(set(points_in))
    base, directions, coords = _affine_frame(points)
    d = len(directions)
    if d == 0:
        return _HullData(base, [], coords, [base], [])
    us = [coords[p] for p in points]
    if all(x.denominator == 1 for u in us for x in u):
        # Lattice fast path: plain integer arithmetic in the scan below.
        work = [tuple(int(x) for x in u) for u in us]
    else:
        work = us
    supports: dict[tuple[tuple[int, ...], Fraction], None] = {}
    for subset in itertools.combinations(range(len(points)), d):
        anchor = work[subset[0]]
        span_rows = [tuple(a - b for a, b in zip(work[i], anchor)) for i in subset[1:]]
        cross = _cross_normal(span_rows, d)
        if cross is None:
            continue
        n = primitivize(cross)
        c = sum(a * b for a, b in zip(n, anchor))
        values = [sum(a * b for a, b in zip(n, u)) for u in work]
        if all(v <= c for v in values):
            supports[(n, Fraction(c))] = None
        if all(v >= c for v in values):
            neg = tuple(-x for x in n)
            supports[(neg, Fraction(-c))] = None
    vertices = []
    for p, u in zip(points, work):
        active = [n for (n, c) in supports if sum(a * b for a, b in zip(n, u)) == c]
        if active and len(_echelon([qvec(n) for n in active])[0]) == d:
            vertices.append(p)
    return _HullData(base, directions, coords, vertices, sorted(supports))


# -- QPolytope -----------------------------------------------------------------


class QPolytope:
    """Convex polytope in Q^r given by its minimal vertex set.

    The empty polytope (no vertices) is a valid value, distinct from the
    single point at the origin.
    """

    def __init__(self, ambient_dim: int, vertices: Sequence[QVec]):
        vs = [qvec(v) for v in vertices]
        for v in vs:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(
                    f"vertex {v} has dimension {len(v)}, expected {ambient_dim}"
                )
        self.ambient_dim = ambient_dim
        if not vs:
            self.vertices: tuple[QVec, ...] = ()
            self._hull = None
        else:
            hull = _hull(vs)
            self.vertices = tuple(hull.vertices)
            self._hull = hull

    @staticmethod
    def from_points(ambient_dim: int, points: Iterable[Sequence]) -> "QPolytope":
        return QPolytope(ambient_dim, [qvec(p) for p in points])

    @staticmethod
    def empty(ambient_dim: int) -> "QPolytope":
        return QPolytope(ambient_dim, [])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QPolytope)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self) -> str:
        return f"QPolytope(dim={self.ambient_dim}, vertices={[tuple(map(str, v)) for v in self.vertices]})"

    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dim(self) -> int:
        """Affine dimension; -1 for the empty polytope."""
        if self._hull is None:
            return -1
        return len(self._hull.directions)

    # -- operations -------------------------------------------------------

    def translate(self, v: Sequence) -> "QPolytope":
        w = qvec(v)
        return QPolytope(self.ambient_dim, [qvec_add(p, w) for p in self.vertices])

    def minkowski_sum(self, other: "QPolytope") -> "QPolytope":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(f"{self.ambient_dim} vs {other.ambient_dim}")
        if self.is_empty() or other.is_empty():
            return QPolytope.empty(self.ambient_dim)
        points = [qvec_add(p, q) for p in self.vertices for q in other.vertices]
        return QPolytope(self.ambient_dim, points)

    def hull_union(self, other: "QPolytope") -> "QPolytope":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(f"{self.ambient_dim} vs {other.ambient_dim}")
        return QPolytope(self.ambient_dim, list(self.vertices) + list(other.vertices))

    def contains_point(self, x: Sequence) -> bool:
        """Exact membership, decided by Fourier-Motzkin on the separation system."""
        if self.is_empty():
            return False
        point = qvec(x)
        if len(point) != self.ambient_dim:
            raise DimensionMismatchError(f"point dimension {len(point)}")
        # Separating functional (c, c0): <c,v> <= c0 on vertices, <c,x> >= c0 + 1.
        rows: list[_Row] = []
        for v in self.vertices:
            rows.append((v + (Fraction(-1),), Fraction(0), False))
        rows.append((tuple(-a for a in point) + (Fraction(1),), Fraction(-1), False))
        return not fm_feasible(self.ambient_dim + 1, rows)

    def contains_polytope(self, other: "QPolytope") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(f"{self.ambient_dim} vs {other.ambient_dim}")
        return all(self.contains_point(v) for v in other.vertices)

    def project_sigma(self, sigma: Sequence[int]) -> Interval | None:
        """[min, max] of <sigma, v> over vertices; None for the empty polytope."""
        if self.is_empty():
            return None
        values = [qdot(sigma, v) for v in self.vertices]
        return Interval(min(values), max(values))

    def affine_span(self) -> tuple[QVec, tuple[tuple[int, ...], ...]]:
        """(base point, primitive integer basis of the direction lattice)."""
        if self._hull is None:
            raise EmptyPolytopeError("empty polytope has no affine span")
        dirs = tuple(primitivize(d) for d in self._hull.directions)
        return self._hull.base, dirs

    @cached_property
    def facet_description(self) -> FacetDescription:
        if self._hull is None:
            raise EmptyPolytopeError("empty polytope has no facets")
        hull = self._hull
        d = len(hull.directions)
        span_eqs = self._span_equations()
        if d == 0:
            return FacetDescription((), span_eqs)
        facets: list[Facet] = []
        for n_span, c_span in hull.supports:
            touching = [
                v for v in self.vertices if qdot(n_span, hull.coords[v]) == c_span
            ]
            t_coords = [hull.coords[v] for v in touching]
            t_dim = len(_echelon([qvec_sub(u, t_coords[0]) for u in t_coords[1:]])[0]) if len(t_coords) > 1 else 0
            if t_dim != d - 1:
                continue
            facets.append(Facet(self._ambient_halfspace(n_span, touching), tuple(sorted(touching))))
        facets.sort(key=lambda f: (f.halfspace.normal, f.halfspace.offset))
        return FacetDescription(tuple(facets), span_eqs)

    def _span_equations(self) -> tuple[Hyperplane, ...]:
        hull = self._hull
        assert hull is not None
        if len(hull.directions) == self.ambient_dim:
            return ()
        rows = hull.directions or [(0,) * self.ambient_dim]
        eqs = []
        for n in integer_kernel_basis(rows):
            eqs.append(Hyperplane(n, qdot(n, hull.base)))
        return tuple(sorted(eqs))

    def _ambient_halfspace(self, n_span: tuple[int, ...], touching: list[QVec]) -> HalfSpace:
        """Lift a supporting hyperplane from span coordinates to ambient coordinates."""
        hull = self._hull
        assert hull is not None
        d = len(hull.directions)
        if d == self.ambient_dim:
            ambient_rows = [qvec_sub(t, touching[0]) for t in touching[1:]]
            kernel = integer_kernel_basis(ambient_rows or [(0,) * self.ambient_dim])
            assert len(kernel) == 1
            n = kernel[0]
        else:
            # Facet directions in ambient space: combinations of span directions
            # with span-coordinates orthogonal to n_span.
            t_basis = integer_kernel_basis([n_span])
            facet_dirs = [
                tuple(
                    sum((Fraction(t[j]) * hull.directions[j][i] for j in range(d)), Fraction(0))
                    for i in range(self.ambient_dim)
                )
                for t in t_basis
            ]
            witness = tuple(
                sum((Fraction(n_span[j]) * hull.directions[j][i] for j in range(d)), Fraction(0))
                for i in range(self.ambient_dim)
            )
            kernel = integer_kernel_basis(facet_dirs or [(0,) * self.ambient_dim])
            n = next(k for k in kernel if qdot(k, witness) != 0)
        c = qdot(n, touching[0])
        outside = [v for v in self.vertices if qdot(n, v) > c]
        if outside:
            n = tuple(-x for x in n)
            c = -c
        return HalfSpace(n, c)

    def facets(self) -> FacetDescription:
        return self.facet_description

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "vertices": [[str(x) for x in v] for v in self.vertices],
        }


def newton_A(p: LaurentPoly) -> QPolytope:
    """Newton polytope of the base-torus exponents; the y exponent is discarded."""
    points = [qvec(exp.a_part) for exp in p.terms]
    return QPolytope(p.rank, points)
