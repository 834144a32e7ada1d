"""Characteristic-class kernels over fixed-point data.

Lambda operations and Euler classes of weight lists, attracting-part
splittings, determinant characters, and equivariant motivic Chern classes of
attracting cells on spaces whose cell closures are certified smooth.  The
cell class is assembled by additivity from the closed cells: the class of a
smooth closed cell Z restricts at a contained fixed point to
lambda_{-y}(T*Z) * eu(normal of Z), and the open cell is the closure minus
the strictly smaller cells it contains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .laurent import ExpVec, LaurentPoly
from .spaces import (
    Cochar,
    GKMSpace,
    SpaceFormatError,
    UncertifiedSpaceError,
    WeightList,
    _multiset_difference,
    pairing,
)


class ZeroWeightError(ValueError):
    """Euler class of a list containing the zero character vanishes identically."""


def euler(weights: WeightList, rank: int) -> LaurentPoly:
    """K-theoretic Euler class of a weight list: product of (1 - e^{-w})."""
    out = LaurentPoly.one(rank)
    for w in weights:
        if w.is_zero():
            raise ZeroWeightError("Euler class of a zero weight vanishes identically")
        out = out * (LaurentPoly.one(rank) - LaurentPoly.character(w.neg()))
    return out


def lambda_minus_one(weights: WeightList, rank: int) -> LaurentPoly:
    """Alternating sum of exterior powers: product of (1 - e^{w})."""
    out = LaurentPoly.one(rank)
    for w in weights:
        out = out * (LaurentPoly.one(rank) - LaurentPoly.character(w))
    return out


def lambda_y_dual(weights: WeightList, rank: int, sign: int = -1) -> LaurentPoly:
    """lambda_{sign*y} of the dual of a weight list: product of (1 + sign*y*e^{-w})."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = LaurentPoly.one(rank)
    for w in weights:
        factor = LaurentPoly.one(rank) + LaurentPoly.monomial(
            rank, ExpVec(w.neg().a_part, 1 - w.y_part), sign
        )
        out = out * factor
    return out


def y_twist(weights: WeightList, power: int) -> WeightList:
    """Tensor each weight with y^power."""
    return tuple(ExpVec(w.a_part, w.y_part + power) for w in weights)


def y_times_dual(weights: WeightList) -> WeightList:
    """Weights of y tensor the dual space: w -> y - w."""
    return tuple(ExpVec(w.neg().a_part, 1 - w.y_part) for w in weights)


def det_character(weights: WeightList, rank: int) -> ExpVec:
    out = ExpVec.zero(rank)
    for w in weights:
        out = out.add(w)
    return out


def attracting_part(
    weights: WeightList, sigma: Sequence[int], full_torus: bool = False
) -> tuple[WeightList, WeightList, WeightList]:
    """Partition a weight list by the sign of the pairing with a cocharacter.

    By default the pairing ignores the y exponent (a base-torus subtorus);
    with full_torus=True the cocharacter has one extra entry pairing with y.
    """
    plus, minus, zero = [], [], []
    for w in weights:
        if full_torus:
            value = pairing(sigma[:-1], w) + sigma[-1] * w.y_part
        else:
            value = pairing(sigma, w)
        (plus if value > 0 else minus if value < 0 else zero).append(w)
    return tuple(plus), tuple(minus), tuple(zero)


def check_polarization(space: GKMSpace, point: str) -> bool:
    """Tangent-plus-twisted-dual weights of the base equal the cotangent-space weights."""
    tangent = space.tangent[point]
    expected = sorted(tangent + y_times_dual(tangent))
    return expected == sorted(space.cotangent_weights(point))


@dataclass(frozen=True)
class LocalizedClass:
    """A K-class on a space with isolated fixed points, by its restrictions."""

    space: GKMSpace
    values: Mapping[str, LaurentPoly]

    def at(self, point: str) -> LaurentPoly:
        return self.values[point]


class MotivicCellClasses:
    """Restriction tables of motivic Chern classes of attracting cells.

    Tables are memoized per fixed point; the space and chamber are fixed at
    construction.  Requires certified smooth cell closures.
    """

    def __init__(self, space: GKMSpace, sigma: Cochar):
        if not space.smooth_closure_certified:
            raise UncertifiedSpaceError(
                f"space {space.name} does not certify smooth cell closures; "
                "motivic class computation refused"
            )
        space.assert_generic(sigma)
        self.space = space
        self.sigma = tuple(sigma)
        self._less = space.closure_less(self.sigma)
        self._tables: dict[str, dict[str, LaurentPoly]] = {}

    def closure_table(self, point: str) -> dict[str, LaurentPoly]:
        """Restrictions of the class of the closed cell of ``point``."""
        space = self.space
        rank = space.rank
        closure = space.cell_closure_tangent(self.sigma, point)
        expected = self._less[point] | {point}
        if set(closure) != expected:
            raise SpaceFormatError(
                f"closure data of {point} covers {sorted(closure)} but the order gives {sorted(expected)}"
            )
        cell = space.cell_data(self.sigma, point)
        if sorted(closure[point]) != sorted(cell.attracting):
            raise SpaceFormatError(
                f"closure tangent at {point} must equal its attracting weights"
            )
        dim_cell = len(closure[point])
        table: dict[str, LaurentPoly] = {}
        for p in space.points:
            if p not in closure:
                table[p] = LaurentPoly.zero(rank)
                continue
            inside = closure[p]
            if len(inside) != dim_cell:
                raise SpaceFormatError(
                    f"closure of {point} has tangent rank {len(inside)} at {p}, expected {dim_cell}"
                )
            normal = _multiset_difference(space.tangent[p], inside)
            table[p] = lambda_y_dual(inside, rank) * euler(normal, rank)
        return table

    def restriction_table(self, point: str) -> dict[str, LaurentPoly]:
        """Restrictions of the class of the open cell of ``point``."""
        if point in self._tables:
            return self._tables[point]
        table = self.closure_table(point)
        for smaller in sorted(self._less[point]):
            sub = self.restriction_table(smaller)
            table = {p: table[p] - sub[p] for p in self.space.points}
        self._tables[point] = table
        return table

    def dim_cell(self, point: str) -> int:
        return self.space.cell_data(self.sigma, point).dim_cell


def mc_cell(space: GKMSpace, sigma: Cochar, point: str) -> LocalizedClass:
    """Motivic Chern class (the -y variant) of the attracting cell of a fixed point."""
    calc = MotivicCellClasses(space, sigma)
    return LocalizedClass(space, calc.restriction_table(point))


def chi_empty_check(limit_value) -> bool:
    """True when a computed limit is exactly the zero class."""
    if isinstance(limit_value, LaurentPoly):
        return limit_value.is_zero()
    is_zero = getattr(limit_value, "is_zero", None)
    if is_zero is None:
        raise TypeError(f"cannot interpret {limit_value!r} as a limit value")
    result = is_zero() if callable(is_zero) else is_zero
    return bool(result)
