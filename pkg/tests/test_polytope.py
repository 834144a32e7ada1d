from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from envlab.kclasses import euler
from envlab.laurent import LaurentPoly, poly_from_dict
from envlab.polytope import (
    DimensionMismatchError,
    EmptyPolytopeError,
    Interval,
    QPolytope,
    fm_feasible,
    newton_A,
    qdot,
    qvec,
)

from conftest import random_poly, random_weights

# Frozen worked-example data: cell class, Euler class, their Newton polytopes.
CELL_CLASS = poly_from_dict(2, {(-1, 1, 0): 1, (-1, 2, 0): -1, (-1, 1, 1): -1, (-1, 2, 1): 1})
EULER_CLASS = poly_from_dict(2, {(0, 0, 0): 1, (-1, 1, 0): -1, (0, 1, 0): -1, (-1, 2, 0): 1})
BLUE = [(-1, 1), (-1, 2)]
PARALLELOGRAM = [(0, 0), (0, 1), (-1, 1), (-1, 2)]


def poly2(points):
    return QPolytope.from_points(2, points)


class TestNewton:
    def test_blue_interval(self):
        assert newton_A(CELL_CLASS) == poly2(BLUE)

    def test_parallelogram(self):
        assert newton_A(EULER_CLASS) == poly2(PARALLELOGRAM)

    def test_zero_poly_is_empty(self):
        assert newton_A(LaurentPoly.zero(2)).is_empty()

    def test_y_exponent_discarded(self):
        p = poly_from_dict(2, {(1, 0, 5): 1, (1, 0, -3): 2})
        assert newton_A(p) == poly2([(1, 0)])


class TestMinkowski:
    def test_unit_parallelogram(self):
        sx = poly2([(0, 0), (1, 0)])
        sy = poly2([(0, 0), (0, 1)])
        assert sx.minkowski_sum(sy) == poly2([(0, 0), (1, 0), (0, 1), (1, 1)])

    def test_point_identity(self):
        p = poly2(PARALLELOGRAM)
        assert p.minkowski_sum(poly2([(0, 0)])) == p

    def test_euler_zonotope(self):
        # Segments [0, b] and [0, b - a] sum to the worked-example parallelogram.
        s1 = poly2([(0, 0), (0, 1)])
        s2 = poly2([(0, 0), (-1, 1)])
        assert s1.minkowski_sum(s2) == poly2(PARALLELOGRAM)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            poly2([(0, 0)]).minkowski_sum(QPolytope.from_points(3, [(0, 0, 0)]))


class TestContains:
    def test_origin_is_vertex_of_parallelogram(self):
        assert poly2(PARALLELOGRAM).contains_point((0, 0))

    def test_empty_contains_nothing(self):
        assert not QPolytope.empty(2).contains_point((0, 0))

    def test_blue_interval_misses_origin(self):
        assert not poly2(BLUE).contains_point((0, 0))

    def test_interior_and_boundary_rationals(self):
        p = poly2(PARALLELOGRAM)
        assert p.contains_point((Fraction(-1, 2), Fraction(1, 1)))
        assert p.contains_point((Fraction(-1, 2), Fraction(1, 2)))  # on x+y=0 edge
        assert not p.contains_point((Fraction(-1, 2), Fraction(9, 20)))

    def test_polytope_containment(self):
        assert poly2(PARALLELOGRAM).contains_polytope(poly2(BLUE))
        assert not poly2(BLUE).contains_polytope(poly2(PARALLELOGRAM))

    def test_empty_always_contained(self):
        assert poly2(BLUE).contains_polytope(QPolytope.empty(2))

    def test_brute_force_membership_oracle(self):
        # Oracle: barycentric enumeration over all (dim+1)-subsets of vertices.
        rng = random.Random(13)
        for _ in range(40):
            pts = [tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(rng.randint(1, 6))]
            p = poly2(pts)
            probe = (Fraction(rng.randint(-6, 6), 2), Fraction(rng.randint(-6, 6), 2))
            expected = _barycentric_member(p, probe)
            assert p.contains_point(probe) == expected


def _vertices_from_halfspaces(p: QPolytope) -> set:
    """Re-derive the vertex set from the facet description alone.

    Solve every full-rank system of facet hyperplanes plus the span equations
    and keep the solutions satisfying all half-space constraints.
    """
    from envlab.polytope import _echelon, _solve_columns

    fd = p.facets()
    if p.dim == 0:
        return set(p.vertices)
    planes = [(f.halfspace.normal, f.halfspace.offset) for f in fd.facets]
    equalities = [(h.normal, h.offset) for h in fd.span_equations]
    found = set()
    for subset in itertools.combinations(planes, p.dim):
        rows = list(subset) + equalities
        if len(_echelon([qvec(r[0]) for r in rows])[0]) != p.ambient_dim:
            continue
        cols = [qvec([r[0][j] for r in rows]) for j in range(p.ambient_dim)]
        solution = _solve_columns(cols, qvec([r[1] for r in rows]))
        if solution is None:
            continue
        if all(f.halfspace.contains(solution) for f in fd.facets):
            found.add(solution)
    return found


def _barycentric_member(p: QPolytope, x) -> bool:
    from envlab.polytope import _solve_columns

    verts = list(p.vertices)
    point = qvec(x)
    for size in range(1, len(verts) + 2):
        for subset in itertools.combinations(verts, min(size, len(verts))):
            cols = [qvec(v) + (Fraction(1),) for v in subset]
            sol = _solve_columns(cols, point + (Fraction(1),))
            if sol is not None and all(c >= 0 for c in sol):
                return True
        if size >= len(verts):
            break
    return False


class TestTranslate:
    def test_rational_translation_stays_inside(self):
        blue = poly2(BLUE)
        big = poly2(PARALLELOGRAM)
        for n in range(1, 9):
            moved = blue.translate((Fraction(1, n), Fraction(-1, n)))
            assert big.contains_polytope(moved)

    def test_zero_translation(self):
        p = poly2(PARALLELOGRAM)
        assert p.translate((0, 0)) == p

    def test_point_translation(self):
        assert poly2([(0, 0)]).translate((1, -1)) == poly2([(1, -1)])


class TestFacets:
    def test_parallelogram_halfspaces(self):
        fd = poly2(PARALLELOGRAM).facets()
        got = {(f.halfspace.normal, f.halfspace.offset) for f in fd.facets}
        assert got == {
            ((1, 0), Fraction(0)),
            ((1, 1), Fraction(1)),
            ((-1, 0), Fraction(1)),
            ((-1, -1), Fraction(0)),
        }
        assert fd.span_equations == ()

    def test_single_point(self):
        fd = poly2([(2, 3)]).facets()
        assert fd.facets == ()
        assert {(h.normal, h.offset) for h in fd.span_equations} == {
            ((1, 0), Fraction(2)),
            ((0, 1), Fraction(3)),
        }

    def test_segment_in_plane(self):
        fd = poly2([(0, 0), (1, 0)]).facets()
        assert {(h.normal, h.offset) for h in fd.span_equations} == {((0, 1), Fraction(0))}
        got = {(f.halfspace.normal, f.halfspace.offset) for f in fd.facets}
        assert got == {((-1, 0), Fraction(0)), ((1, 0), Fraction(1))}

    def test_empty_polytope_error(self):
        with pytest.raises(EmptyPolytopeError):
            QPolytope.empty(2).facets()

    def test_facets_reconstruct_polytope(self):
        rng = random.Random(29)
        for _ in range(30):
            dim = rng.randint(1, 3)
            pts = [
                tuple(rng.randint(-3, 3) for _ in range(dim))
                for _ in range(rng.randint(1, 7))
            ]
            p = QPolytope.from_points(dim, pts)
            fd = p.facets()
            assert _vertices_from_halfspaces(p) == set(p.vertices)
            # Every vertex satisfies all constraints; each facet's touching set is on it.
            for v in p.vertices:
                assert all(f.halfspace.contains(v) for f in fd.facets)
                assert all(qdot(h.normal, v) == h.offset for h in fd.span_equations)
            # Intersection of half-spaces within the span recovers exactly the hull:
            # a probe point satisfies everything iff the polytope contains it.
            lo = min((int(x) for v in p.vertices for x in v), default=0) - 1
            hi = max((int(x) for v in p.vertices for x in v), default=0) + 1
            probes = list(p.vertices) + [
                tuple(Fraction(rng.randint(2 * lo, 2 * hi), 2) for _ in range(dim))
                for _ in range(25)
            ]
            for candidate in probes:
                ok = all(f.halfspace.contains(candidate) for f in fd.facets) and all(
                    qdot(h.normal, candidate) == h.offset for h in fd.span_equations
                )
                assert ok == p.contains_point(candidate)


class TestProjection:
    def test_worked_example_projection(self):
        # Pairings of (1,2) with the parallelogram vertices are {0, 2, 1, 3}.
        interval = poly2(PARALLELOGRAM).project_sigma((1, 2))
        assert interval == Interval(Fraction(0), Fraction(3))

    def test_point_projection_degenerate(self):
        assert poly2([(2, -1)]).project_sigma((3, 1)) == Interval(Fraction(5), Fraction(5))

    def test_empty_projection(self):
        assert QPolytope.empty(2).project_sigma((1, 1)) is None

    def test_projection_additive_under_minkowski(self):
        rng = random.Random(37)
        for _ in range(50):
            pts1 = [tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(rng.randint(1, 5))]
            pts2 = [tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(rng.randint(1, 5))]
            sigma = tuple(rng.randint(-2, 2) for _ in range(2))
            p, q = poly2(pts1), poly2(pts2)
            i1, i2 = p.project_sigma(sigma), q.project_sigma(sigma)
            s = p.minkowski_sum(q).project_sigma(sigma)
            assert s == Interval(i1.lo + i2.lo, i1.hi + i2.hi)


class TestAffineSpan:
    def test_blue_interval_span(self):
        base, dirs = poly2(BLUE).affine_span()
        assert base == qvec((-1, 1))
        assert dirs == ((0, 1),)

    def test_full_dimensional(self):
        _, dirs = poly2(PARALLELOGRAM).affine_span()
        assert len(dirs) == 2

    def test_point_span(self):
        base, dirs = poly2([(1, 2)]).affine_span()
        assert base == qvec((1, 2)) and dirs == ()


class TestNewtonProperties:
    def test_product_containment_and_domain_equality(self):
        # N(fg) <= N(f) + N(g), with equality over the integers (a domain).
        rng = random.Random(43)
        for _ in range(60):
            rank = rng.randint(1, 3)
            f = random_poly(rng, rank, max_terms=5, nonzero=True)
            g = random_poly(rng, rank, max_terms=5, nonzero=True)
            sum_poly = newton_A(f).minkowski_sum(newton_A(g))
            prod = newton_A(f * g)
            assert sum_poly.contains_polytope(prod)
            assert prod == sum_poly

    def test_equality_with_euler_factor(self):
        # Vertex coefficients of an Euler class are units.
        rng = random.Random(47)
        for _ in range(40):
            rank = rng.randint(1, 3)
            w = random_weights(rng, rank, rng.randint(1, 3))
            f = euler(w, rank)
            g = random_poly(rng, rank, max_terms=5, nonzero=True)
            assert newton_A(f * g) == newton_A(f).minkowski_sum(newton_A(g))

    def test_sum_containment(self):
        rng = random.Random(53)
        for _ in range(60):
            rank = rng.randint(1, 3)
            f = random_poly(rng, rank, max_terms=5)
            g = random_poly(rng, rank, max_terms=5)
            hull = newton_A(f).hull_union(newton_A(g))
            assert hull.contains_polytope(newton_A(f + g))

    def test_coefficient_map_containment(self):
        rng = random.Random(59)
        for _ in range(60):
            f = random_poly(rng, 2, max_terms=6)
            assert newton_A(f).contains_polytope(newton_A(f.subst_y(1)))


class TestFourierMotzkin:
    def test_infeasible_strict(self):
        # x <= 0 and x >= 1
        rows = [
            ((Fraction(1),), Fraction(0), False),
            ((Fraction(-1),), Fraction(-1), False),
        ]
        assert not fm_feasible(1, rows)

    def test_feasible_band(self):
        rows = [
            ((Fraction(1), Fraction(1)), Fraction(1), False),
            ((Fraction(-1), Fraction(0)), Fraction(0), False),
            ((Fraction(0), Fraction(-1)), Fraction(0), False),
        ]
        assert fm_feasible(2, rows)

    def test_strict_boundary(self):
        # x < 0 and x >= 0
        rows = [
            ((Fraction(1),), Fraction(0), True),
            ((Fraction(-1),), Fraction(0), False),
        ]
        assert not fm_feasible(1, rows)
