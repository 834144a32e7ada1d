"""One-parameter limit calculus for fractions of localized classes.

Each facet of a Newton polytope determines a one-dimensional subtorus whose
cocharacter is the inward-pointing primitive normal.  A fraction of Laurent
polynomials is regraded by that cocharacter through a splitting character
gamma (pairing 1 with the cocharacter); the limit keeps the bottom-degree
slices.  Exact quotients collapse to a polynomial over the quotient
character lattice; otherwise the reduced symbolic fraction is returned and
only its (non)vanishing is consumed downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .kclasses import MotivicCellClasses, euler
from .laurent import ExpVec, LaurentPoly
from .polytope import HalfSpace, Interval, newton_A, qdot
from .spaces import Cochar, GKMSpace, NonGenericChamberError, pairing


class DivergentLimitError(ArithmeticError):
    """The numerator degenerates faster than the denominator; no finite limit."""


@dataclass(frozen=True)
class FacetContext:
    """Subtorus data attached to a supporting half-space.

    sigma_h is the primitive cocharacter with <sigma_h, x> >= 0 on vectors
    pointing into the half-space, i.e. sigma_h = -normal; gamma is an integer
    character with <sigma_h, gamma> = 1.
    """

    halfspace: HalfSpace
    sigma_h: tuple[int, ...]
    axis: tuple[int, ...]
    orientation: int
    gamma: tuple[int, ...]

    def pi(self, vector: Sequence[int]) -> int:
        return sum(s * v for s, v in zip(self.sigma_h, vector))


def _vectors_by_norm(rank: int) -> Iterator[tuple[int, ...]]:
    """All nonzero integer vectors ordered by (max-norm, #negative entries, lex)."""
    norm = 1
    while True:
        shell = [
            v
            for v in itertools.product(range(-norm, norm + 1), repeat=rank)
            if max(abs(x) for x in v) == norm
        ]
        shell.sort(key=lambda v: (sum(1 for x in v if x < 0), v))
        yield from shell
        norm += 1


def splitting_character(sigma_h: Sequence[int]) -> tuple[int, ...]:
    """Deterministic integer character pairing to 1 with a primitive cocharacter."""
    for gamma in _vectors_by_norm(len(sigma_h)):
        if sum(s * g for s, g in zip(sigma_h, gamma)) == 1:
            return gamma
    raise ValueError(f"no splitting character for {sigma_h}")  # pragma: no cover


def subtorus_from_facet(facet: HalfSpace) -> FacetContext:
    sigma_h = tuple(-x for x in facet.normal)
    first = next(x for x in facet.normal if x != 0)
    if first > 0:
        axis, orientation = facet.normal, -1
    else:
        axis, orientation = sigma_h, 1
    return FacetContext(facet, sigma_h, axis, orientation, splitting_character(sigma_h))


@dataclass(frozen=True)
class LimitResult:
    """Either an exact polynomial limit or a reduced symbolic fraction."""

    value: LaurentPoly | None
    numerator: LaurentPoly | None = None
    denominator: LaurentPoly | None = None

    @property
    def kind(self) -> str:
        return "polynomial" if self.value is not None else "fraction"

    def is_zero(self) -> bool:
        if self.value is not None:
            return self.value.is_zero()
        return self.numerator.is_zero()

    def describe(self, names: Sequence[str] | None = None) -> str:
        if self.value is not None:
            return self.value.render(names)
        return f"({self.numerator.render(names)}) / ({self.denominator.render(names)})"


def _degree_slice(p: LaurentPoly, sigma_h: Sequence[int], degree: int, gamma: Sequence[int]) -> LaurentPoly:
    """Terms of the given sigma_h-degree, regraded into the quotient lattice."""
    terms = {}
    for exp, coeff in p.terms.items():
        d = pairing(sigma_h, exp)
        if d != degree:
            continue
        residual = tuple(a - d * g for a, g in zip(exp.a_part, gamma))
        key = ExpVec(residual, exp.y_part)
        terms[key] = terms.get(key, 0) + coeff
    return LaurentPoly(p.rank, terms)


def limit_fraction(num: LaurentPoly, den: LaurentPoly, ctx: FacetContext) -> LimitResult:
    """Limit of num/den along the facet subtorus, per the regraded bottom slice."""
    if den.is_zero():
        raise ZeroDivisionError("limit of a fraction with zero denominator")
    if num.is_zero():
        return LimitResult(LaurentPoly.zero(num.rank))
    dmin_den = min(pairing(ctx.sigma_h, e) for e in den.terms)
    dmin_num = min(pairing(ctx.sigma_h, e) for e in num.terms)
    if dmin_num < dmin_den:
        raise DivergentLimitError(
            f"numerator degenerates at degree {dmin_num} < denominator {dmin_den} along {ctx.sigma_h}"
        )
    q_den = _degree_slice(den, ctx.sigma_h, dmin_den, ctx.gamma)
    assert not q_den.is_zero()
    q_num = _degree_slice(num, ctx.sigma_h, dmin_den, ctx.gamma)
    if q_num.is_zero():
        return LimitResult(LaurentPoly.zero(num.rank))
    quotient = q_den.divides_with_quotient(q_num)
    if quotient is not None:
        return LimitResult(quotient)
    return LimitResult(None, q_num, q_den)


# -- facet analysis of slope translations ------------------------------------------


@dataclass(frozen=True)
class FacetRow:
    kind: str  # "facet" or "affine-span"
    halfspace: HalfSpace
    sigma_h: tuple[int, ...] | None
    orientation: int | None
    pi_of_slope: int
    limit: LimitResult | None
    verdict: bool

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "normal": list(self.halfspace.normal),
            "offset": str(self.halfspace.offset),
            "sigma_h": list(self.sigma_h) if self.sigma_h else None,
            "orientation": self.orientation,
            "pi_of_slope": self.pi_of_slope,
            "limit": None if self.limit is None else self.limit.describe(),
            "limit_is_zero": None if self.limit is None else self.limit.is_zero(),
            "verdict": self.verdict,
        }


def facet_slope_analysis(
    space: GKMSpace, sigma: Cochar, upper: str, lower: str, slope_diff: ExpVec
) -> list[FacetRow]:
    """Per-facet disjunction check for a slope translation on a pair lower < upper.

    For each facet of the Newton polytope of eu of the full tangent space at
    the lower point: either the limit of the cell-class fraction across the
    facet subtorus vanishes, or the slope difference pairs non-negatively.
    Hyperplanes containing the whole polytope require exact pairing zero.
    """
    less = space.closure_less(sigma)
    if lower not in less[upper]:
        raise ValueError(f"{lower} is not strictly below {upper} in this chamber")
    calc = MotivicCellClasses(space, sigma)
    num = calc.restriction_table(upper)[lower]
    den = euler(space.tangent[lower], space.rank)
    description = newton_A(den).facets()
    rows: list[FacetRow] = []
    for facet in description.facets:
        ctx = subtorus_from_facet(facet.halfspace)
        lim = limit_fraction(num, den, ctx)
        pi_value = ctx.pi(slope_diff.a_part)
        rows.append(
            FacetRow(
                "facet", facet.halfspace, ctx.sigma_h, ctx.orientation,
                pi_value, lim, lim.is_zero() or pi_value >= 0,
            )
        )
    for plane in description.span_equations:
        pi_value = int(qdot(plane.normal, slope_diff.a_part))
        rows.append(
            FacetRow(
                "affine-span", HalfSpace(plane.normal, plane.offset), None, None,
                pi_value, None, pi_value == 0,
            )
        )
    return rows


def analysis_to_tsv(rows: Sequence[FacetRow]) -> str:
    lines = ["facet\tE_H\tsigma_H\tt_orientation\tpi_of_slope\tlimit\tverdict"]
    for i, row in enumerate(rows, start=1):
        e_h = f"<{','.join(str(x) for x in row.halfspace.normal)}, x> <= {row.halfspace.offset}"
        if row.kind == "affine-span":
            e_h = f"<{','.join(str(x) for x in row.halfspace.normal)}, x> = {row.halfspace.offset}"
        sigma_h = ",".join(str(x) for x in row.sigma_h) if row.sigma_h else "-"
        orient = {1: "t", -1: "1/t", None: "-"}[row.orientation]
        limit = row.limit.describe() if row.limit is not None else "-"
        verdict = "pass" if row.verdict else "FAIL"
        lines.append(
            f"tau{i}\t{e_h}\t{sigma_h}\t{orient}\t{row.pi_of_slope}\t{limit}\t{verdict}"
        )
    return "\n".join(lines)


# -- generic one-dimensional restrictions ----------------------------------------


def fraction_limit_is_zero(num: LaurentPoly, den: LaurentPoly, sigma: Cochar) -> bool:
    """Whether num/den restricted along sigma tends to zero as t -> 0.

    Exact valuation comparison of the restricted one-variable polynomials.
    """
    num_t = num.restrict_cochar(sigma)
    den_t = den.restrict_cochar(sigma)
    if den_t.is_zero():
        raise ZeroDivisionError("denominator restricts to zero; cocharacter not generic")
    if num_t.is_zero():
        return True
    val_num = min(e.a_part[0] for e in num_t.terms)
    val_den = min(e.a_part[0] for e in den_t.terms)
    if val_num < val_den:
        raise DivergentLimitError("fraction diverges along the cocharacter")
    return val_num > val_den


def generic_sigma_projection(
    a: LaurentPoly, space: GKMSpace, chamber: Cochar
) -> tuple[Cochar, Interval]:
    """A deterministic generic cocharacter in the chamber, and the projected interval.

    The cocharacter separates every pair of distinct vertices of the Newton
    polytope of ``a`` and pairs nonzero with every tangent weight; the
    projection of the polytope then equals the Newton interval of the
    restricted polynomial, which is asserted.
    """
    if a.is_zero():
        raise ValueError("projection of the zero class is undefined")
    target_class = space.sign_class(chamber)
    vertices = newton_A(a).vertices
    diffs = [
        tuple(x - y for x, y in zip(v, w))
        for i, v in enumerate(vertices)
        for w in vertices[i + 1 :]
    ]
    for sigma in _vectors_by_norm(space.rank):
        try:
            if space.sign_class(sigma) != target_class:
                continue
        except NonGenericChamberError:
            continue
        if any(qdot(sigma, d) == 0 for d in diffs):
            continue
        interval = newton_A(a).project_sigma(sigma)
        restricted = a.restrict_cochar(sigma)
        exps = [e.a_part[0] for e in restricted.terms]
        assert Interval(min(exps), max(exps)) == interval
        return tuple(sigma), interval
    raise RuntimeError("unreachable: a generic cocharacter always exists")  # pragma: no cover
