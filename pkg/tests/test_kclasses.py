from __future__ import annotations

import random

import pytest

from envlab.kclasses import (
    LocalizedClass,
    MotivicCellClasses,
    ZeroWeightError,
    attracting_part,
    chi_empty_check,
    det_character,
    euler,
    lambda_minus_one,
    lambda_y_dual,
    mc_cell,
    y_times_dual,
    y_twist,
)
from envlab.laurent import ExpVec, LaurentPoly, poly_from_dict
from envlab.polytope import newton_A
from envlab.spaces import UncertifiedSpaceError, product, projective_space, space_from_dict, space_to_dict

from conftest import random_weights


class TestEuler:
    def test_worked_example_normal_class(self, p2):
        space, _ = p2
        got = euler(space.tangent["e2"], 2)
        assert got == poly_from_dict(
            2, {(0, 0, 0): 1, (-1, 1, 0): -1, (0, 1, 0): -1, (-1, 2, 0): 1}
        )

    def test_empty_list(self):
        assert euler((), 3) == LaurentPoly.one(3)

    def test_cotangent_space_weights(self, p1):
        # weights {a, y - a}: (1 - 1/a)(1 - a/y)
        space, _ = p1
        got = euler(space.cotangent_weights("e1"), 1)
        expected = poly_from_dict(1, {(0, 0): 1, (-1, 0): -1}) * poly_from_dict(
            1, {(0, 0): 1, (1, -1): -1}
        )
        assert got == expected

    def test_zero_weight_flagged(self):
        with pytest.raises(ZeroWeightError):
            euler((ExpVec((0, 0)),), 2)


class TestLambdaYDual:
    def test_single_tangent_line(self):
        # W = {a/b}: 1 - y b/a
        got = lambda_y_dual((ExpVec((1, -1)),), 2)
        assert got == poly_from_dict(2, {(0, 0, 0): 1, (-1, 1, 1): -1})

    def test_empty(self):
        assert lambda_y_dual((), 2) == LaurentPoly.one(2)

    def test_substitution_recovers_euler(self):
        rng = random.Random(61)
        for _ in range(100):
            rank = rng.randint(1, 3)
            w = random_weights(rng, rank, rng.randint(0, 4))
            assert lambda_y_dual(w, rank).subst_y(1) == euler(w, rank)

    def test_plus_sign_variant(self):
        got = lambda_y_dual((ExpVec((1,)),), 1, sign=1)
        assert got == poly_from_dict(1, {(0, 0): 1, (-1, 1): 1})

    def test_substituted_product_recovers_full_euler(self, p2):
        # eu(repelling) * lambda_{-y}(attracting^*) at y = 1 gives eu(full tangent).
        space, sigma = p2
        for point in space.points:
            cell = space.cell_data(sigma, point)
            combined = euler(cell.repelling, 2) * lambda_y_dual(cell.attracting, 2)
            assert combined.subst_y(1) == euler(space.tangent[point], 2)


class TestAttractingPart:
    def test_middle_point_split(self, p2):
        space, _ = p2
        plus, minus, zero = attracting_part(space.tangent["e1"], (1, 2))
        assert plus == (ExpVec((-1, 1)),)
        assert minus == (ExpVec((-1, 0)),)
        assert zero == ()

    def test_zero_cochar(self):
        w = (ExpVec((1, 0)), ExpVec((0, -2)))
        plus, minus, zero = attracting_part(w, (0, 0))
        assert plus == () and minus == () and zero == w

    def test_cotangent_split_identity(self, p2):
        # With zero pairing on y, the repelling part of the cotangent weights
        # is the repelling base part plus y times the dual of the attracting part.
        space, sigma = p2
        for point in space.points:
            cell = space.cell_data(sigma, point)
            _, minus, _ = attracting_part(space.cotangent_weights(point), sigma)
            expected = cell.repelling + y_times_dual(cell.attracting)
            assert sorted(minus) == sorted(expected)

    def test_full_torus_variant(self):
        w = (ExpVec((1,), -2), ExpVec((1,), 0))
        plus, minus, zero = attracting_part(w, (1, 1), full_torus=True)
        assert plus == (ExpVec((1,), 0),)
        assert minus == (ExpVec((1,), -2),)


class TestDetCharacter:
    def test_empty(self, p2):
        space, sigma = p2
        assert det_character(space.cell_data(sigma, "e2").attracting, 2) == ExpVec((0, 0))

    def test_sum(self):
        assert det_character((ExpVec((1, 0)), ExpVec((0, 1))), 2) == ExpVec((1, 1))

    def test_additive_over_concatenation(self):
        rng = random.Random(67)
        for _ in range(50):
            w1 = random_weights(rng, 3, rng.randint(0, 3))
            w2 = random_weights(rng, 3, rng.randint(0, 3))
            lhs = det_character(w1 + w2, 3)
            assert lhs == det_character(w1, 3).add(det_character(w2, 3))


class TestTwistIdentity:
    def test_cross_multiplied_identity_random(self):
        # lambda_{-1}(y^{-1} V) * (-y)^{|V|} == lambda_{-y}(V^*) * e^{det V}
        rng = random.Random(71)
        for _ in range(200):
            rank = rng.randint(1, 4)
            v = random_weights(rng, rank, rng.randint(0, 5))
            lhs = lambda_minus_one(y_twist(v, -1), rank) * LaurentPoly.monomial(
                rank, ExpVec.y(rank, len(v)), (-1) ** len(v)
            )
            rhs = lambda_y_dual(v, rank) * LaurentPoly.character(det_character(v, rank))
            assert lhs == rhs

    def test_dimension_one_instance(self):
        # (1 - a/y)(-y) == (1 - y/a) * a
        v = (ExpVec((1,)),)
        lhs = lambda_minus_one(y_twist(v, -1), 1) * LaurentPoly.monomial(1, ExpVec.y(1, 1), -1)
        rhs = lambda_y_dual(v, 1) * LaurentPoly.character(ExpVec((1,)))
        assert lhs == rhs
        assert lhs == poly_from_dict(1, {(1, 0): 1, (0, 1): -1})


class TestMotivicCellClasses:
    def test_worked_example_restriction(self, p2):
        space, sigma = p2
        table = MotivicCellClasses(space, sigma).restriction_table("e1")
        assert table["e2"] == poly_from_dict(
            2, {(-1, 1, 0): 1, (-1, 2, 0): -1, (-1, 1, 1): -1, (-1, 2, 1): 1}
        )

    def test_self_restriction_formula(self, p2):
        space, sigma = p2
        calc = MotivicCellClasses(space, sigma)
        for point in space.points:
            cell = space.cell_data(sigma, point)
            expected = lambda_y_dual(cell.attracting, 2) * euler(cell.repelling, 2)
            assert calc.restriction_table(point)[point] == expected

    def test_middle_cell_diagonal_value(self, p2):
        # At the middle point: (1 - y a/b)(1 - a).
        space, sigma = p2
        got = MotivicCellClasses(space, sigma).restriction_table("e1")["e1"]
        assert got == poly_from_dict(
            2, {(0, 0, 0): 1, (1, -1, 1): -1, (1, 0, 0): -1, (2, -1, 1): 1}
        )

    def test_vanishing_off_downset(self, p2):
        space, sigma = p2
        calc = MotivicCellClasses(space, sigma)
        less = space.closure_less(sigma)
        for row in space.points:
            table = calc.restriction_table(row)
            for col in space.points:
                if col != row and col not in less[row]:
                    assert table[col].is_zero()

    def test_minimal_cell_is_euler_class(self, p2):
        space, sigma = p2
        table = MotivicCellClasses(space, sigma).restriction_table("e2")
        assert table["e2"] == euler(space.tangent["e2"], 2)
        assert table["e0"].is_zero() and table["e1"].is_zero()

    def test_additivity_telescope(self):
        # Summing open-cell classes over the closure reconstructs each closed-cell class.
        for space, sigma in [
            (projective_space(2), (1, 2)),
            (projective_space(3), (3, 1, 2)),
            (product(projective_space(1), projective_space(1)), (2, -1)),
        ]:
            calc = MotivicCellClasses(space, sigma)
            less = space.closure_less(sigma)
            for point in space.points:
                closed = calc.closure_table(point)
                total = {p: LaurentPoly.zero(space.rank) for p in space.points}
                for member in less[point] | {point}:
                    open_table = calc.restriction_table(member)
                    total = {p: total[p] + open_table[p] for p in space.points}
                assert total == closed

    def test_divisibility_by_cell_cotangent_class(self):
        for space, sigma in [
            (projective_space(3), (1, 2, 3)),
            (product(projective_space(1), projective_space(2)), (3, 1, 2)),
        ]:
            calc = MotivicCellClasses(space, sigma)
            less = space.closure_less(sigma)
            for row in space.points:
                table = calc.restriction_table(row)
                for col in less[row] | {row}:
                    divisor = lambda_y_dual(
                        space.cell_data(sigma, col).attracting, space.rank
                    )
                    quotient = divisor.divides_with_quotient(table[col])
                    assert quotient is not None
                    assert divisor * quotient == table[col]

    def test_substituted_newton_containment(self):
        # Setting y to 1 lands inside the Newton polytope of the tangent Euler class.
        space = projective_space(3)
        sigma = (1, 2, 3)
        calc = MotivicCellClasses(space, sigma)
        less = space.closure_less(sigma)
        for row in space.points:
            table = calc.restriction_table(row)
            for col in less[row] | {row}:
                bound = newton_A(euler(space.tangent[col], 3))
                assert bound.contains_polytope(newton_A(table[col].subst_y(1)))

    def test_product_routes_agree(self):
        left = projective_space(1)
        right = projective_space(2)
        both = product(left, right)
        sigma_l, sigma_r = (1,), (1, 2)
        sigma = sigma_l + sigma_r
        calc_l = MotivicCellClasses(left, sigma_l)
        calc_r = MotivicCellClasses(right, sigma_r)
        calc = MotivicCellClasses(both, sigma)
        for p in left.points:
            table_l = calc_l.restriction_table(p)
            for q in right.points:
                table_r = calc_r.restriction_table(q)
                table = calc.restriction_table(f"{p}*{q}")
                for a in left.points:
                    for b in right.points:
                        factorwise = _external_product(table_l[a], table_r[b], left.rank, right.rank)
                        assert table[f"{a}*{b}"] == factorwise

    def test_uncertified_space_refused(self):
        space = space_from_dict(
            {
                "rank": 1,
                "points": ["p", "q"],
                "tangent": {"p": [[1, 0]], "q": [[-1, 0]]},
                "order": {"1": [["q", "p"]]},
                "certifications": {"smooth_closures": False},
            }
        )
        with pytest.raises(UncertifiedSpaceError):
            MotivicCellClasses(space, (1,))

    def test_explicit_space_with_closure_data_matches_builder(self, p2):
        space, sigma = p2
        loaded = space_from_dict(space_to_dict(space, [sigma]))
        for point in space.points:
            assert (
                MotivicCellClasses(loaded, sigma).restriction_table(point)
                == MotivicCellClasses(space, sigma).restriction_table(point)
            )

    def test_mc_cell_wrapper(self, p2):
        space, sigma = p2
        cls = mc_cell(space, sigma, "e1")
        assert isinstance(cls, LocalizedClass)
        assert cls.at("e2") == MotivicCellClasses(space, sigma).restriction_table("e1")["e2"]


def _external_product(p: LaurentPoly, q: LaurentPoly, rank_l: int, rank_r: int) -> LaurentPoly:
    terms = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            exp = ExpVec(e1.a_part + e2.a_part, e1.y_part + e2.y_part)
            terms[exp] = terms.get(exp, 0) + c1 * c2
    return LaurentPoly(rank_l + rank_r, terms)


class TestChiEmptyCheck:
    def test_zero_polynomial(self):
        assert chi_empty_check(LaurentPoly.zero(2))

    def test_nonzero_polynomial(self):
        assert not chi_empty_check(LaurentPoly.one(2))

    def test_rejects_opaque_values(self):
        with pytest.raises(TypeError):
            chi_empty_check(0.0)
