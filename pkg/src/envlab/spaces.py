"""Combinatorial fixed-point models of smooth projective torus varieties.

A space is described purely by discrete data: fixed points, tangent weights
with nonzero base-torus part (isolated fixed points), named linearized line
bundles, and, per weight chamber, the closure order of the attracting cells
together with the tangent weights of each cell closure at the points it
contains.  Builders supply that geometry; it is never computed from
equations of varieties.  User-defined spaces load from JSON and carry
explicit certification flags for smooth cell closures and the local product
property; computations that rely on those facts refuse to run without them.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Mapping, NamedTuple, Sequence

from .laurent import ExpVec
from .polytope import _solve_columns, qvec

WeightList = tuple[ExpVec, ...]
Cochar = tuple[int, ...]


class SpaceError(ValueError):
    pass


class SpaceFormatError(SpaceError):
    """Malformed or inconsistent space data."""


class NonGenericChamberError(SpaceError):
    """The cocharacter pairs to zero with some tangent weight."""


class ClosureDataUnavailableError(SpaceError):
    """The space carries no cell-closure tangent data for this chamber."""


class UncertifiedSpaceError(SpaceError):
    """Computation requires a certification flag the space does not carry."""


def pairing(sigma: Sequence[int], w: ExpVec) -> int:
    return sum(s * a for s, a in zip(sigma, w.a_part))


class CellData(NamedTuple):
    point: str
    attracting: WeightList
    repelling: WeightList

    @property
    def dim_cell(self) -> int:
        return len(self.attracting)


@dataclass(frozen=True)
class Bundle:
    restrictions: Mapping[str, ExpVec]
    ampleness: str  # ample | anti-ample | trivial | other


class GKMSpace:
    """Base class; concrete spaces provide closure geometry per chamber."""

    def __init__(
        self,
        name: str,
        rank: int,
        points: Sequence[str],
        tangent: Mapping[str, WeightList],
        bundles: Mapping[str, Bundle],
        smooth_closure_certified: bool,
        local_product_certified: bool,
    ):
        self.name = name
        self.rank = rank
        self.points = tuple(points)
        self.tangent = {p: tuple(tangent[p]) for p in self.points}
        self.bundles = dict(bundles)
        self.smooth_closure_certified = smooth_closure_certified
        self.local_product_certified = local_product_certified
        self._validate()

    def _validate(self) -> None:
        if len(set(self.points)) != len(self.points):
            raise SpaceFormatError("duplicate fixed point names")
        if not self.points:
            raise SpaceFormatError("a space needs at least one fixed point")
        dims = {len(ws) for ws in self.tangent.values()}
        if len(dims) != 1:
            raise SpaceFormatError(f"tangent weight counts differ across points: {dims}")
        for p, ws in self.tangent.items():
            for w in ws:
                if len(w.a_part) != self.rank:
                    raise SpaceFormatError(f"weight {w} at {p} has wrong rank")
                if w.y_part != 0:
                    raise SpaceFormatError(f"tangent weight {w} at {p} carries a y part")
                if not any(w.a_part):
                    raise SpaceFormatError(f"zero tangent weight at {p}: fixed point not isolated")
        for name, bundle in self.bundles.items():
            for p in self.points:
                if p not in bundle.restrictions:
                    raise SpaceFormatError(f"bundle {name} missing restriction at {p}")
                if bundle.restrictions[p].y_part != 0:
                    raise SpaceFormatError(f"bundle {name} restriction at {p} carries a y part")

    @property
    def dim(self) -> int:
        return len(next(iter(self.tangent.values())))

    def assert_generic(self, sigma: Cochar) -> None:
        if len(sigma) != self.rank:
            raise NonGenericChamberError(
                f"cocharacter length {len(sigma)} does not match rank {self.rank}"
            )
        for p, ws in self.tangent.items():
            for w in ws:
                if pairing(sigma, w) == 0:
                    raise NonGenericChamberError(
                        f"cocharacter {sigma} pairs to zero with weight {w.a_part} at {p}"
                    )

    def sign_class(self, sigma: Cochar) -> tuple[int, ...]:
        self.assert_generic(sigma)
        signs = []
        for p in self.points:
            for w in self.tangent[p]:
                signs.append(1 if pairing(sigma, w) > 0 else -1)
        return tuple(signs)

    def cell_data(self, sigma: Cochar, point: str) -> CellData:
        self.assert_generic(sigma)
        plus = tuple(w for w in self.tangent[point] if pairing(sigma, w) > 0)
        minus = tuple(w for w in self.tangent[point] if pairing(sigma, w) < 0)
        return CellData(point, plus, minus)

    def cotangent_weights(self, point: str) -> WeightList:
        """Tangent weights of the cotangent bundle total space at the point."""
        base = self.tangent[point]
        fiber = tuple(ExpVec(w.neg().a_part, 1) for w in base)
        return base + fiber

    def closure_less(self, sigma: Cochar) -> dict[str, frozenset[str]]:
        """point -> set of strictly smaller points in the chamber's cell order."""
        raise NotImplementedError

    def leq(self, sigma: Cochar, smaller: str, larger: str) -> bool:
        return smaller == larger or smaller in self.closure_less(sigma)[larger]

    def cell_closure_tangent(self, sigma: Cochar, point: str) -> dict[str, WeightList]:
        """Tangent weights of the closed cell of ``point`` at each point it contains."""
        raise NotImplementedError

    def chamber_representatives(self) -> list[Cochar]:
        """One generic cocharacter per realizable chamber sign-class."""
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}: {len(self.points)} fixed points, rank {self.rank}>"


def _multiset_difference(whole: WeightList, part: WeightList) -> WeightList:
    counts = Counter(whole)
    counts.subtract(Counter(part))
    if any(c < 0 for c in counts.values()):
        raise SpaceFormatError("closure tangent weights are not a sub-multiset of the tangent space")
    out: list[ExpVec] = []
    for w in whole:
        if counts[w] > 0:
            counts[w] -= 1
            out.append(w)
    return tuple(out)


class ProjectiveSpace(GKMSpace):
    """Projective space of dimension n with pairwise distinct coordinate weights.

    Fixed points e_i are the coordinate lines; tangent(e_i) = {chi_j - chi_i}.
    The tautological line at e_i carries the i-th coordinate weight, so
    O(-1) restricts at e_i to chi_i.
    """

    def __init__(self, n: int, coordinate_weights: Sequence[ExpVec], name: str | None = None):
        weights = tuple(coordinate_weights)
        if len(weights) != n + 1:
            raise SpaceFormatError(f"P^{n} needs {n + 1} coordinate weights, got {len(weights)}")
        if len(set(weights)) != len(weights):
            raise SpaceFormatError("coordinate weights must be pairwise distinct")
        rank = len(weights[0].a_part)
        self.coordinate_weights = weights
        self.n = n
        points = [f"e{i}" for i in range(n + 1)]
        tangent = {
            f"e{i}": tuple(weights[j].sub(weights[i]) for j in range(n + 1) if j != i)
            for i in range(n + 1)
        }
        bundles = {
            "O(-1)": Bundle({f"e{i}": weights[i] for i in range(n + 1)}, "anti-ample"),
            "O(1)": Bundle({f"e{i}": weights[i].neg() for i in range(n + 1)}, "ample"),
        }
        super().__init__(name or f"P{n}", rank, points, tangent, bundles, True, True)

    def _sigma_values(self, sigma: Cochar) -> dict[str, int]:
        self.assert_generic(sigma)
        return {f"e{i}": pairing(sigma, w) for i, w in enumerate(self.coordinate_weights)}

    def closure_less(self, sigma: Cochar) -> dict[str, frozenset[str]]:
        t = self._sigma_values(sigma)
        return {
            p: frozenset(q for q in self.points if t[q] > t[p]) for p in self.points
        }

    def cell_closure_tangent(self, sigma: Cochar, point: str) -> dict[str, WeightList]:
        t = self._sigma_values(sigma)
        members = [i for i in range(self.n + 1) if t[f"e{i}"] >= t[point]]
        chi = self.coordinate_weights
        return {
            f"e{j}": tuple(chi[l].sub(chi[j]) for l in members if l != j)
            for j in members
        }

    def chamber_representatives(self) -> list[Cochar]:
        reps: list[Cochar] = []
        seen: set[tuple[int, ...]] = set()
        for perm in itertools.permutations(range(self.n + 1)):
            targets = {perm[k]: k for k in range(self.n + 1)}
            sigma = _cochar_with_values(self.coordinate_weights, targets, self.rank)
            if sigma is None:
                continue
            cls = self.sign_class(sigma)
            if cls not in seen:
                seen.add(cls)
                reps.append(sigma)
        return reps


def _cochar_with_values(
    weights: Sequence[ExpVec], targets: dict[int, int], rank: int
) -> Cochar | None:
    """Integer cocharacter with <sigma, chi_i> + c = targets[i], if one exists."""
    cols = [qvec([w.a_part[j] for w in weights]) for j in range(rank)]
    cols.append(qvec([1] * len(weights)))
    rhs = qvec([targets[i] for i in range(len(weights))])
    solution = _solve_columns(cols, rhs)
    if solution is None:
        return None
    denom = 1
    for x in solution[:rank]:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    return tuple(int(x * denom) for x in solution[:rank])


def projective_space(n: int, coordinate_weights: Sequence[ExpVec] | None = None) -> ProjectiveSpace:
    if coordinate_weights is None:
        coordinate_weights = [ExpVec.zero(n)] + [ExpVec.unit(n, i) for i in range(n)]
    return ProjectiveSpace(n, [ExpVec(tuple(w.a_part), 0) for w in coordinate_weights])


class ProductSpace(GKMSpace):
    """Product of two spaces over the product torus; weights embed blockwise."""

    def __init__(self, left: GKMSpace, right: GKMSpace, name: str | None = None):
        self.left = left
        self.right = right
        rank = left.rank + right.rank
        points = [f"{p}*{q}" for p in left.points for q in right.points]
        tangent = {
            f"{p}*{q}": tuple(self._embed_left(w) for w in left.tangent[p])
            + tuple(self._embed_right(w) for w in right.tangent[q])
            for p in left.points
            for q in right.points
        }
        bundles = {}
        for bname in sorted(set(left.bundles) & set(right.bundles)):
            lb, rb = left.bundles[bname], right.bundles[bname]
            amp = lb.ampleness if lb.ampleness == rb.ampleness else "other"
            bundles[bname] = Bundle(
                {
                    f"{p}*{q}": self._embed_left(lb.restrictions[p]).add(
                        self._embed_right(rb.restrictions[q])
                    )
                    for p in left.points
                    for q in right.points
                },
                amp,
            )
        super().__init__(
            name or f"{left.name}x{right.name}",
            rank,
            points,
            tangent,
            bundles,
            left.smooth_closure_certified and right.smooth_closure_certified,
            left.local_product_certified and right.local_product_certified,
        )

    def _embed_left(self, w: ExpVec) -> ExpVec:
        return ExpVec(w.a_part + (0,) * self.right.rank, w.y_part)

    def _embed_right(self, w: ExpVec) -> ExpVec:
        return ExpVec((0,) * self.left.rank + w.a_part, w.y_part)

    def _split(self, sigma: Cochar) -> tuple[Cochar, Cochar]:
        return tuple(sigma[: self.left.rank]), tuple(sigma[self.left.rank :])

    def _split_point(self, point: str) -> tuple[str, str]:
        # Factor names may themselves contain '*' (nested products).
        matches = [
            (p, point[len(p) + 1 :])
            for p in self.left.points
            if point.startswith(p + "*") and point[len(p) + 1 :] in self.right.points
        ]
        if len(matches) != 1:
            raise SpaceFormatError(f"cannot split product point name {point!r} uniquely")
        return matches[0]

    def closure_less(self, sigma: Cochar) -> dict[str, frozenset[str]]:
        sl, sr = self._split(sigma)
        less_l = self.left.closure_less(sl)
        less_r = self.right.closure_less(sr)
        out = {}
        for p in self.left.points:
            for q in self.right.points:
                down_l = less_l[p] | {p}
                down_r = less_r[q] | {q}
                cell = {f"{a}*{b}" for a in down_l for b in down_r} - {f"{p}*{q}"}
                out[f"{p}*{q}"] = frozenset(cell)
        return out

    def cell_closure_tangent(self, sigma: Cochar, point: str) -> dict[str, WeightList]:
        p, q = self._split_point(point)
        sl, sr = self._split(sigma)
        cl = self.left.cell_closure_tangent(sl, p)
        cr = self.right.cell_closure_tangent(sr, q)
        return {
            f"{a}*{b}": tuple(self._embed_left(w) for w in cl[a])
            + tuple(self._embed_right(w) for w in cr[b])
            for a in cl
            for b in cr
        }

    def chamber_representatives(self) -> list[Cochar]:
        return [
            tuple(sl) + tuple(sr)
            for sl in self.left.chamber_representatives()
            for sr in self.right.chamber_representatives()
        ]


def product(left: GKMSpace, right: GKMSpace) -> ProductSpace:
    return ProductSpace(left, right)


class ExplicitSpace(GKMSpace):
    """Space defined by explicit data, typically loaded from a JSON file."""

    def __init__(
        self,
        name: str,
        rank: int,
        points: Sequence[str],
        tangent: Mapping[str, WeightList],
        bundles: Mapping[str, Bundle],
        order_classes: Mapping[Cochar, Sequence[tuple[str, str]]],
        smooth_closure_certified: bool,
        local_product_certified: bool,
        closure_tangent: Mapping[Cochar, Mapping[str, Mapping[str, WeightList]]] | None = None,
    ):
        super().__init__(
            name, rank, points, tangent, bundles,
            smooth_closure_certified, local_product_certified,
        )
        self._order_classes: dict[Cochar, dict[str, frozenset[str]]] = {}
        for rep, pairs in order_classes.items():
            self._order_classes[tuple(rep)] = self._transitive_order(pairs)
        self._closure_tangent = (
            {tuple(rep): {f: dict(table) for f, table in data.items()} for rep, data in closure_tangent.items()}
            if closure_tangent
            else {}
        )

    def _transitive_order(self, pairs: Sequence[tuple[str, str]]) -> dict[str, frozenset[str]]:
        less: dict[str, set[str]] = {p: set() for p in self.points}
        for smaller, larger in pairs:
            if smaller not in less or larger not in less:
                raise SpaceFormatError(f"order pair ({smaller}, {larger}) names unknown points")
            less[larger].add(smaller)
        changed = True
        while changed:
            changed = False
            for p in self.points:
                extra = set().union(*(less[q] for q in less[p])) - less[p] if less[p] else set()
                if extra:
                    less[p] |= extra
                    changed = True
        for p in self.points:
            if p in less[p]:
                raise SpaceFormatError(f"closure order has a cycle through {p}")
        return {p: frozenset(s) for p, s in less.items()}

    def _match_class(self, sigma: Cochar) -> Cochar:
        cls = self.sign_class(sigma)
        for rep in self._order_classes:
            if self.sign_class(rep) == cls:
                return rep
        raise SpaceFormatError(
            f"no stored closure order matches the chamber of {sigma}"
        )

    def closure_less(self, sigma: Cochar) -> dict[str, frozenset[str]]:
        return self._order_classes[self._match_class(sigma)]

    def cell_closure_tangent(self, sigma: Cochar, point: str) -> dict[str, WeightList]:
        rep = self._match_class(sigma)
        data = self._closure_tangent.get(rep)
        if data is None or point not in data:
            raise ClosureDataUnavailableError(
                f"space {self.name} carries no cell-closure tangent data for chamber {sigma}; "
                "supply a closure_tangent block to enable class computation"
            )
        return {f: tuple(ws) for f, ws in data[point].items()}

    def chamber_representatives(self) -> list[Cochar]:
        return list(self._order_classes)


# -- JSON interchange -----------------------------------------------------------


def _weight_from_json(entry: Sequence[int], rank: int, where: str) -> ExpVec:
    if len(entry) != rank + 1:
        raise SpaceFormatError(
            f"{where}: weight {entry} must list {rank} base exponents plus the y exponent"
        )
    return ExpVec(tuple(int(x) for x in entry[:-1]), int(entry[-1]))


def space_from_dict(data: Mapping, name: str = "custom") -> ExplicitSpace:
    try:
        rank = int(data["rank"])
        points = list(data["points"])
        tangent_raw = data["tangent"]
        certs = data.get("certifications", {})
    except (KeyError, TypeError) as exc:
        raise SpaceFormatError(f"missing required space field: {exc}") from exc
    try:
        tangent = {}
        for p in points:
            if p not in tangent_raw:
                raise SpaceFormatError(f"missing tangent weights for point {p}")
            tangent[p] = tuple(
                _weight_from_json(w, rank, f"tangent[{p}]") for w in tangent_raw[p]
            )
        bundles = {}
        for bname, bdata in (data.get("bundles") or {}).items():
            restr = {
                p: ExpVec(tuple(int(x) for x in bdata["restrictions"][p]), 0) for p in points
            }
            bundles[bname] = Bundle(restr, bdata.get("ampleness", "other"))
        order_classes = {}
        for key, pairs in (data.get("order") or {}).items():
            rep = tuple(int(x) for x in key.split(","))
            order_classes[rep] = [(str(a), str(b)) for a, b in pairs]
        closure = None
        if data.get("closure_tangent"):
            closure = {}
            for key, per_point in data["closure_tangent"].items():
                rep = tuple(int(x) for x in key.split(","))
                closure[rep] = {
                    f: {
                        g: tuple(
                            _weight_from_json(w, rank, f"closure_tangent[{f}][{g}]")
                            for w in ws
                        )
                        for g, ws in table.items()
                    }
                    for f, table in per_point.items()
                }
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpaceFormatError):
            raise
        raise SpaceFormatError(f"malformed space data: {exc!r}") from exc
    return ExplicitSpace(
        str(data.get("name", name)),
        rank,
        points,
        tangent,
        bundles,
        order_classes,
        bool(certs.get("smooth_closures", False)),
        bool(certs.get("local_product", False)),
        closure,
    )


def load_space(path: str) -> ExplicitSpace:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpaceFormatError(f"invalid JSON in {path}: {exc}") from exc
    return space_from_dict(data, name=path)


def space_to_dict(space: GKMSpace, sigmas: Sequence[Cochar]) -> dict:
    """Serialize a space, including closure data for the given chambers."""
    def weight_json(w: ExpVec) -> list[int]:
        return list(w.a_part) + [w.y_part]

    order = {}
    closure = {}
    for sigma in sigmas:
        key = ",".join(str(x) for x in sigma)
        less = space.closure_less(sigma)
        order[key] = sorted([a, b] for b in space.points for a in less[b])
        closure[key] = {
            p: {
                f: [weight_json(w) for w in ws]
                for f, ws in space.cell_closure_tangent(sigma, p).items()
            }
            for p in space.points
        }
    return {
        "name": space.name,
        "rank": space.rank,
        "points": list(space.points),
        "tangent": {p: [weight_json(w) for w in space.tangent[p]] for p in space.points},
        "bundles": {
            bname: {
                "restrictions": {p: list(b.restrictions[p].a_part) for p in space.points},
                "ampleness": b.ampleness,
            }
            for bname, b in space.bundles.items()
        },
        "order": order,
        "closure_tangent": closure,
        "certifications": {
            "smooth_closures": space.smooth_closure_certified,
            "local_product": space.local_product_certified,
        },
    }


_BUILTIN_PATTERN = re.compile(r"^P(\d+)(?:[xX]P(\d+))*$")


def builtin_space(spec: str, coordinate_weights: Sequence[ExpVec] | None = None) -> GKMSpace:
    """Build a space from a name like ``P2`` or ``P1xP2``.

    Explicit coordinate weights apply only to a single projective factor.
    """
    if not _BUILTIN_PATTERN.match(spec):
        raise SpaceFormatError(f"unknown builtin space {spec!r}; expected P<n> or P<n>xP<m>")
    parts = [int(s[1:]) for s in spec.replace("X", "x").split("x")]
    if coordinate_weights is not None:
        if len(parts) != 1:
            raise SpaceFormatError("explicit coordinate weights require a single projective factor")
        return projective_space(parts[0], coordinate_weights)
    space: GKMSpace = projective_space(parts[0])
    for n in parts[1:]:
        space = product(space, projective_space(n))
    return space
