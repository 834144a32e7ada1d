"""Stable-envelope candidates on cotangent bundles and their axiom checks.

The candidate table is assembled from motivic cell classes normalized by
y^{dim cell}.  Three families of checks run per ordered pair of fixed
points:

* support (necessary fixed-point conditions only): the entry vanishes when
  the column point is not below the row point, and the lambda_{-y} class of
  the column point's cell cotangent space divides the entry otherwise;
* normalization: an exact cross-multiplied Laurent identity at the diagonal;
* Newton-polytope smallness for a slope: containment after rational
  translation, plus (in strong mode) exclusion of the distinguished point.

Genuine sheaf-level support is not decidable from restrictions alone; the
reports label the support verdicts as necessary conditions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .kclasses import (
    MotivicCellClasses,
    det_character,
    euler,
    lambda_y_dual,
    y_times_dual,
)
from .laurent import ExpVec, LaurentPoly
from .polytope import newton_A, qvec
from .spaces import Cochar, GKMSpace, SpaceError

DEFAULT_SEARCH_CAP = 10_000
SEARCH_CAP_ENV = "ENVLAB_SEARCH_CAP"


class SlopeError(SpaceError):
    pass


class SearchCapExceededError(RuntimeError):
    """The minimal-n search hit its cap without success."""


@dataclass(frozen=True)
class Slope:
    """A rational multiple of a named linearized line bundle, or the trivial slope."""

    trivial: bool = True
    bundle: str | None = None
    denominator: int = 1

    def __post_init__(self):
        if self.denominator < 1:
            raise SlopeError("slope denominator must be a positive integer")
        if not self.trivial and not self.bundle:
            raise SlopeError("non-trivial slope needs a bundle name")

    @staticmethod
    def trivial_slope() -> "Slope":
        return Slope(True, None, 1)

    @staticmethod
    def of_bundle(name: str, denominator: int = 1) -> "Slope":
        return Slope(False, name, denominator)

    def with_denominator(self, n: int) -> "Slope":
        return Slope(self.trivial, self.bundle, n)

    def describe(self) -> str:
        if self.trivial:
            return "trivial"
        if self.denominator == 1:
            return self.bundle or "?"
        return f"{self.bundle}/{self.denominator}"

    def character(self, space: GKMSpace, point: str) -> ExpVec:
        """Integer character of the underlying bundle at a fixed point."""
        if self.trivial:
            return ExpVec.zero(space.rank)
        if self.bundle not in space.bundles:
            raise SlopeError(f"space {space.name} has no bundle named {self.bundle!r}")
        return space.bundles[self.bundle].restrictions[point]

    def translation(self, space: GKMSpace, upper: str, lower: str) -> tuple[Fraction, ...]:
        """Rational translation vector (s|_upper - s|_lower) / n."""
        diff = self.character(space, upper).sub(self.character(space, lower))
        return tuple(Fraction(x, self.denominator) for x in diff.a_part)

    def ampleness(self, space: GKMSpace) -> str:
        if self.trivial:
            return "trivial"
        if self.bundle not in space.bundles:
            raise SlopeError(f"space {space.name} has no bundle named {self.bundle!r}")
        return space.bundles[self.bundle].ampleness


@dataclass
class StabCandidate:
    """A stable-envelope candidate: one localized class per fixed point."""

    space: GKMSpace
    sigma: Cochar
    entries: dict[tuple[str, str], LaurentPoly]
    dims: dict[str, int]
    label: str = "mC/y^dim"

    def entry(self, row: str, col: str) -> LaurentPoly:
        return self.entries[(row, col)]

    def replaced(self, row: str, col: str, value: LaurentPoly, label: str) -> "StabCandidate":
        entries = dict(self.entries)
        entries[(row, col)] = value
        return StabCandidate(self.space, self.sigma, entries, dict(self.dims), label)

    def perturbed(self, row: str, col: str, delta: LaurentPoly, label: str) -> "StabCandidate":
        return self.replaced(row, col, self.entries[(row, col)] + delta, label)


def candidate_from_mc(space: GKMSpace, sigma: Cochar) -> StabCandidate:
    """Motivic cell classes with every y exponent lowered by the cell dimension."""
    calc = MotivicCellClasses(space, sigma)
    entries: dict[tuple[str, str], LaurentPoly] = {}
    dims: dict[str, int] = {}
    for row in space.points:
        dims[row] = calc.dim_cell(row)
        table = calc.restriction_table(row)
        for col in space.points:
            entries[(row, col)] = table[col].shift_y(-dims[row])
    return StabCandidate(space, tuple(sigma), entries, dims)


def slope_translate(cand: StabCandidate, slope: Slope) -> StabCandidate:
    """Candidate for an integral slope: entry (F, F') times e^{s|_F' - s|_F}."""
    if slope.trivial:
        return cand
    if slope.denominator != 1:
        raise SlopeError("slope translation on classes requires an integral slope")
    space = cand.space
    entries = {}
    for (row, col), value in cand.entries.items():
        shift = slope.character(space, col).sub(slope.character(space, row))
        entries[(row, col)] = value.shift(shift)
    return StabCandidate(space, cand.sigma, entries, dict(cand.dims), f"{cand.label}*{slope.describe()}")


# -- axiom checks ---------------------------------------------------------------


def check_axiom_a(cand: StabCandidate) -> dict[tuple[str, str], dict]:
    """Support conditions at fixed points: vanishing off the down-set, divisibility on it.

    These are necessary conditions; sheaf-level support is out of reach of the
    localization model.
    """
    space = cand.space
    results = {}
    less = space.closure_less(cand.sigma)
    for row in space.points:
        for col in space.points:
            entry = cand.entry(row, col)
            if col != row and col not in less[row]:
                ok = entry.is_zero()
                results[(row, col)] = {
                    "mode": "vanishing",
                    "passed": ok,
                    "witness": None if ok else entry.to_text(),
                }
                continue
            divisor = lambda_y_dual(space.cell_data(cand.sigma, col).attracting, space.rank)
            quotient = divisor.divides_with_quotient(entry)
            results[(row, col)] = {
                "mode": "divisibility",
                "passed": quotient is not None,
                "witness": quotient.to_text() if quotient is not None else None,
            }
    return results


def check_axiom_b(cand: StabCandidate) -> dict[str, dict]:
    """Diagonal normalization, cross-multiplied to stay in the polynomial ring:

    entry(F,F) * e^{det attracting} * (-1)^{#attracting} == eu(repelling + y*attracting^*).
    """
    space = cand.space
    rank = space.rank
    results = {}
    for point in space.points:
        cell = space.cell_data(cand.sigma, point)
        lhs = (
            cand.entry(point, point)
            .shift(det_character(cell.attracting, rank))
            .scalar_mul((-1) ** len(cell.attracting))
        )
        rhs = euler(cell.repelling + y_times_dual(cell.attracting), rank)
        results[point] = {
            "passed": lhs == rhs,
            "lhs": lhs.to_text(),
            "rhs": rhs.to_text(),
        }
    return results


def check_axiom_c(
    cand: StabCandidate, slope: Slope, strong: bool = True
) -> dict[tuple[str, str], dict]:
    """Newton-polytope smallness for ordered pairs F' < F.

    The entry's polytope, translated by the rational slope difference plus the
    determinant of the column's attracting weights, must lie in the polytope
    of eu of the column's repelling cotangent weights; strong mode also
    excludes the origin from the translated polytope.
    """
    space = cand.space
    rank = space.rank
    results = {}
    origin = qvec([0] * rank)
    less = space.closure_less(cand.sigma)
    for row in space.points:
        for col in less[row]:
            cell = space.cell_data(cand.sigma, col)
            nu_minus = cell.repelling + y_times_dual(cell.attracting)
            bound = newton_A(euler(nu_minus, rank))
            det_plus = det_character(cell.attracting, rank)
            shift = tuple(
                a + b
                for a, b in zip(slope.translation(space, row, col), qvec(det_plus.a_part))
            )
            moved = newton_A(cand.entry(row, col)).translate(shift)
            contained = bound.contains_polytope(moved)
            excluded = not moved.contains_point(origin)
            passed = contained and (excluded or not strong)
            results[(row, col)] = {
                "contained": contained,
                "origin_excluded": excluded,
                "passed": passed,
                "polytope": moved.to_json()["vertices"],
                "bound": bound.to_json()["vertices"],
            }
    return results


@dataclass
class AxiomReport:
    space_name: str
    sigma: Cochar
    slope: str
    strong: bool
    support: dict[tuple[str, str], dict]
    normalization: dict[str, dict]
    smallness: dict[tuple[str, str], dict]

    @property
    def verdict(self) -> bool:
        return (
            all(r["passed"] for r in self.support.values())
            and all(r["passed"] for r in self.normalization.values())
            and all(r["passed"] for r in self.smallness.values())
        )

    def failures(self) -> list[str]:
        out = []
        for (row, col), r in sorted(self.support.items()):
            if not r["passed"]:
                out.append(f"support[{row},{col}]:{r['mode']}")
        for point, r in sorted(self.normalization.items()):
            if not r["passed"]:
                out.append(f"normalization[{point}]")
        for (row, col), r in sorted(self.smallness.items()):
            if not r["passed"]:
                out.append(f"smallness[{row},{col}]")
        return out

    def to_json_dict(self) -> dict:
        return {
            "space": self.space_name,
            "sigma": list(self.sigma),
            "slope": self.slope,
            "mode": "strong" if self.strong else "weak",
            "support_note": "support verified via necessary fixed-point conditions only",
            "verdict": self.verdict,
            "support": [
                {"pair": [row, col], **r} for (row, col), r in sorted(self.support.items())
            ],
            "normalization": [
                {"point": p, **r} for p, r in sorted(self.normalization.items())
            ],
            "smallness": [
                {"pair": [row, col], **r} for (row, col), r in sorted(self.smallness.items())
            ],
        }

    def to_tsv(self) -> str:
        lines = ["axiom\tpair\tverdict\tdetail"]
        for (row, col), r in sorted(self.support.items()):
            lines.append(f"support\t{row},{col}\t{'pass' if r['passed'] else 'FAIL'}\t{r['mode']}")
        for p, r in sorted(self.normalization.items()):
            lines.append(f"normalization\t{p},{p}\t{'pass' if r['passed'] else 'FAIL'}\t")
        for (row, col), r in sorted(self.smallness.items()):
            detail = f"contained={r['contained']} origin_excluded={r['origin_excluded']}"
            lines.append(f"smallness\t{row},{col}\t{'pass' if r['passed'] else 'FAIL'}\t{detail}")
        lines.append(f"overall\t\t{'pass' if self.verdict else 'FAIL'}\t")
        return "\n".join(lines)


def verify_candidate(cand: StabCandidate, slope: Slope, strong: bool = True) -> AxiomReport:
    return AxiomReport(
        cand.space.name,
        cand.sigma,
        slope.describe(),
        strong,
        check_axiom_a(cand),
        check_axiom_b(cand),
        check_axiom_c(cand, slope, strong),
    )


# -- minimal denominator search ---------------------------------------------------


@dataclass(frozen=True)
class MinimalN:
    n: int
    probe: tuple[bool, ...]  # results at n+1 .. n+probe_width


def search_cap(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    return int(os.environ.get(SEARCH_CAP_ENV, DEFAULT_SEARCH_CAP))


def minimal_n(
    space: GKMSpace,
    sigma: Cochar,
    slope: Slope,
    cap: int | None = None,
    probe_width: int = 5,
) -> MinimalN:
    """Smallest n >= 1 for which the strong smallness check passes at slope s/n.

    Upward linear search: the predicate is only known to hold eventually, not
    monotonically.  The following probe_width denominators are re-checked as a
    stability probe.
    """
    if slope.trivial:
        return MinimalN(1, tuple(True for _ in range(probe_width)))
    if slope.ampleness(space) != "anti-ample":
        raise SlopeError(
            f"minimal-n search requires an anti-ample slope; {slope.bundle!r} is "
            f"{slope.ampleness(space)}"
        )
    cand = candidate_from_mc(space, sigma)
    cap_value = search_cap(cap)

    def passes(n: int) -> bool:
        results = check_axiom_c(cand, slope.with_denominator(n), strong=True)
        return all(r["passed"] for r in results.values())

    for n in range(1, cap_value + 1):
        if passes(n):
            return MinimalN(n, tuple(passes(n + k) for k in range(1, probe_width + 1)))
    raise SearchCapExceededError(
        f"no denominator up to {cap_value} satisfies the strong smallness check "
        f"for slope {slope.describe()} on {space.name}"
    )


# -- uniqueness probes --------------------------------------------------------------


@dataclass(frozen=True)
class Perturbation:
    row: str
    col: str
    delta: LaurentPoly
    label: str


def generate_perturbation_family(
    cand: StabCandidate, minimum: int = 50
) -> list[Perturbation]:
    """Single-entry perturbations engineered so each must break some axiom check.

    Kinds: any monomial where the entry must vanish; any monomial on the
    diagonal (breaks the exact normalization identity); the excluded-vertex
    monomial and far-outside monomials on strictly-ordered pairs (break strong
    smallness); a constant monomial where the cell cotangent divisor is not a
    unit (breaks divisibility).
    """
    space = cand.space
    rank = space.rank
    out: list[Perturbation] = []
    coeff_cycle = (1, -1, 2, -3, 5, 7, -4)
    ypow_cycle = (0, 1, -1, 2, -2)

    def variants(base: ExpVec, kind: str, row: str, col: str, count: int) -> None:
        for k in range(count):
            exp = ExpVec(base.a_part, base.y_part + ypow_cycle[k % len(ypow_cycle)])
            coeff = coeff_cycle[k % len(coeff_cycle)]
            out.append(
                Perturbation(
                    row, col, LaurentPoly.monomial(rank, exp, coeff), f"{kind}[{row},{col}]#{k}"
                )
            )

    rounds = 0
    while len(out) < minimum:
        per_kind = rounds + 1
        out.clear()
        for row in space.points:
            for col in space.points:
                cell = space.cell_data(cand.sigma, col)
                if not space.leq(cand.sigma, col, row):
                    variants(ExpVec.zero(rank), "vanishing", row, col, per_kind)
                elif row == col:
                    variants(ExpVec.zero(rank), "diagonal", row, col, per_kind)
                else:
                    det_plus = det_character(cell.attracting, rank)
                    variants(det_plus.neg(), "excluded-vertex", row, col, per_kind)
                    nu_minus = cell.repelling + y_times_dual(cell.attracting)
                    bound = newton_A(euler(nu_minus, rank))
                    spread = 1 + max(
                        abs(int(x)) for v in bound.vertices for x in v
                    ) + max(abs(x) for x in det_plus.a_part + (0,))
                    far = ExpVec(tuple(spread + i for i in range(rank)), 0)
                    variants(far, "outside", row, col, per_kind)
                    if cell.attracting:
                        variants(ExpVec.zero(rank), "divisibility", row, col, per_kind)
        rounds += 1
    return out


def uniqueness_probe(
    cand: StabCandidate,
    perturbations: Iterable[Perturbation],
    slope: Slope | None = None,
) -> dict:
    """Each nonzero perturbation of a single entry must break at least one check."""
    slope = slope or Slope.trivial_slope()
    rows = []
    all_broke = True
    for pert in perturbations:
        if pert.delta.is_zero():
            rows.append({"label": pert.label, "broke": [], "passed": True})
            continue
        report = verify_candidate(
            cand.perturbed(pert.row, pert.col, pert.delta, pert.label), slope, strong=True
        )
        failures = report.failures()
        if not failures:
            all_broke = False
        rows.append({"label": pert.label, "broke": failures, "passed": bool(failures)})
    return {"verdict": all_broke, "rows": rows}


def tables_equal(a: StabCandidate, b: StabCandidate) -> bool:
    return a.entries == b.entries
