"""Exact sparse Laurent polynomial arithmetic in r torus characters plus y.

A monomial exponent is an ExpVec: an integer vector of length r (the
exponents of the base-torus characters) together with one extra integer
exponent for the distinguished character y.  A polynomial is a finite map
ExpVec -> nonzero int, kept in canonical form (no zero coefficients), so
equality is structural.

Coefficients are arbitrary-precision integers; rational numbers never enter
polynomial coefficients.  The fixed total monomial order used for division
and for the text format is lexicographic on (y_part, a_part).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence


class RankMismatchError(ValueError):
    """Operands live over tori of different ranks."""


class ExpVec(NamedTuple):
    """A character of the torus: base exponents plus the y exponent."""

    a_part: tuple[int, ...]
    y_part: int = 0

    @property
    def rank(self) -> int:
        return len(self.a_part)

    def add(self, other: "ExpVec") -> "ExpVec":
        if len(self.a_part) != len(other.a_part):
            raise RankMismatchError(f"rank {len(self.a_part)} vs {len(other.a_part)}")
        return ExpVec(
            tuple(x + y for x, y in zip(self.a_part, other.a_part)),
            self.y_part + other.y_part,
        )

    def sub(self, other: "ExpVec") -> "ExpVec":
        return self.add(other.neg())

    def neg(self) -> "ExpVec":
        return ExpVec(tuple(-x for x in self.a_part), -self.y_part)

    def scale(self, k: int) -> "ExpVec":
        return ExpVec(tuple(k * x for x in self.a_part), k * self.y_part)

    def is_zero(self) -> bool:
        return self.y_part == 0 and not any(self.a_part)

    def order_key(self) -> tuple:
        # Fixed total monomial order: lexicographic on (y_part, a_part).
        return (self.y_part, self.a_part)

    @staticmethod
    def zero(rank: int) -> "ExpVec":
        return ExpVec((0,) * rank, 0)

    @staticmethod
    def unit(rank: int, index: int) -> "ExpVec":
        a = [0] * rank
        a[index] = 1
        return ExpVec(tuple(a), 0)

    @staticmethod
    def y(rank: int, power: int = 1) -> "ExpVec":
        return ExpVec((0,) * rank, power)


class LaurentPoly:
    """Sparse Laurent polynomial over the integers, immutable after construction."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[ExpVec, int] | None = None):
        clean: dict[ExpVec, int] = {}
        if terms:
            for exp, coeff in terms.items():
                if coeff == 0:
                    continue
                if len(exp.a_part) != rank:
                    raise RankMismatchError(
                        f"exponent {exp} has rank {len(exp.a_part)}, expected {rank}"
                    )
                clean[exp] = coeff
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(rank: int) -> "LaurentPoly":
        return LaurentPoly(rank, {})

    @staticmethod
    def one(rank: int) -> "LaurentPoly":
        return LaurentPoly(rank, {ExpVec.zero(rank): 1})

    @staticmethod
    def monomial(rank: int, exp: ExpVec, coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly(rank, {exp: coeff})

    @staticmethod
    def character(exp: ExpVec) -> "LaurentPoly":
        """The multiplicative character e^exp as a one-term polynomial."""
        return LaurentPoly(len(exp.a_part), {exp: 1})

    # -- basic protocol ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[ExpVec, int]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def _check_rank(self, other: "LaurentPoly") -> None:
        if self.rank != other.rank:
            raise RankMismatchError(f"rank {self.rank} vs {other.rank}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_rank(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            new = out.get(exp, 0) + coeff
            if new == 0:
                out.pop(exp, None)
            else:
                out[exp] = new
        return LaurentPoly(self.rank, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_rank(other)
        out: dict[ExpVec, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = e1.add(e2)
                new = out.get(exp, 0) + c1 * c2
                if new == 0:
                    out.pop(exp, None)
                else:
                    out[exp] = new
        return LaurentPoly(self.rank, out)

    def scalar_mul(self, k: int) -> "LaurentPoly":
        if k == 0:
            return LaurentPoly.zero(self.rank)
        return LaurentPoly(self.rank, {e: k * c for e, c in self.terms.items()})

    def shift(self, exp: ExpVec) -> "LaurentPoly":
        """Multiply by the monomial e^exp."""
        return LaurentPoly(self.rank, {e.add(exp): c for e, c in self.terms.items()})

    def shift_y(self, power: int) -> "LaurentPoly":
        """Multiply by y^power."""
        return self.shift(ExpVec.y(self.rank, power))

    # -- specializations ---------------------------------------------------

    def subst_y(self, value: int) -> "LaurentPoly":
        """Collapse the y exponent by substituting y -> value (value = +-1)."""
        if value not in (1, -1):
            raise ValueError(f"only y -> +-1 supported, got {value}")
        out: dict[ExpVec, int] = {}
        for exp, coeff in self.terms.items():
            target = ExpVec(exp.a_part, 0)
            c = coeff if value == 1 or exp.y_part % 2 == 0 else -coeff
            new = out.get(target, 0) + c
            if new == 0:
                out.pop(target, None)
            else:
                out[target] = new
        return LaurentPoly(self.rank, out)

    def restrict_cochar(self, sigma: Sequence[int]) -> "LaurentPoly":
        """Restrict along a cocharacter: each base exponent v maps to <sigma, v>.

        The result is a Laurent polynomial in one base variable t plus y;
        coefficients may merge or cancel.
        """
        if len(sigma) != self.rank:
            raise RankMismatchError(f"cocharacter length {len(sigma)} vs rank {self.rank}")
        out: dict[ExpVec, int] = {}
        for exp, coeff in self.terms.items():
            t = sum(s * a for s, a in zip(sigma, exp.a_part))
            target = ExpVec((t,), exp.y_part)
            new = out.get(target, 0) + coeff
            if new == 0:
                out.pop(target, None)
            else:
                out[target] = new
        return LaurentPoly(1, out)

    # -- division ----------------------------------------------------------

    def leading(self) -> tuple[ExpVec, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=ExpVec.order_key)
        return exp, self.terms[exp]

    def _exponent_box(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Componentwise (min, max) over all exponents, y last."""
        rows = [e.a_part + (e.y_part,) for e in self.terms]
        lo = tuple(min(r[i] for r in rows) for i in range(self.rank + 1))
        hi = tuple(max(r[i] for r in rows) for i in range(self.rank + 1))
        return lo, hi

    def divides_with_quotient(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """Return q with self * q == other, or None when no such q exists.

        Iterated leading-term elimination under the fixed monomial order.
        Termination guard: since the coefficients form a domain, the Newton
        polytope of a product is the Minkowski sum of the factors', so every
        exponent of a quotient lies in the componentwise box
        [min(p) - min(d), max(p) - max(d)].  A candidate step outside that
        box proves non-divisibility.
        """
        self._check_rank(other)
        if self.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_zero():
            return LaurentPoly.zero(self.rank)
        lo_p, hi_p = other._exponent_box()
        lo_d, hi_d = self._exponent_box()
        box_lo = tuple(a - b for a, b in zip(lo_p, lo_d))
        box_hi = tuple(a - b for a, b in zip(hi_p, hi_d))
        if any(lo > hi for lo, hi in zip(box_lo, box_hi)):
            return None
        lead_d, lc_d = self.leading()
        remainder = other
        quotient: dict[ExpVec, int] = {}
        while not remainder.is_zero():
            lead_r, lc_r = remainder.leading()
            if lc_r % lc_d != 0:
                return None
            mu = lead_r.sub(lead_d)
            flat = mu.a_part + (mu.y_part,)
            if any(x < lo or x > hi for x, lo, hi in zip(flat, box_lo, box_hi)):
                return None
            c = lc_r // lc_d
            quotient[mu] = c
            remainder = remainder - self.shift(mu).scalar_mul(c)
        return LaurentPoly(self.rank, quotient)

    def divides(self, other: "LaurentPoly") -> bool:
        return self.divides_with_quotient(other) is not None

    # -- rendering and text round trip --------------------------------------

    def sorted_terms(self) -> list[tuple[ExpVec, int]]:
        return sorted(self.terms.items(), key=lambda item: item[0].order_key())

    def render(self, names: Sequence[str] | None = None, y_name: str = "y") -> str:
        """Human-readable multiplicative rendering, e.g. ``1 - y*b/a``."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.rank)]
        if len(names) != self.rank:
            raise ValueError("need one name per base variable")
        pieces: list[str] = []
        for exp, coeff in self.sorted_terms():
            numer: list[str] = []
            denom: list[str] = []
            for name, e in zip((y_name, *names), (exp.y_part, *exp.a_part)):
                if e == 0:
                    continue
                part = name if abs(e) == 1 else f"{name}^{abs(e)}"
                (numer if e > 0 else denom).append(part)
            mag = abs(coeff)
            if mag != 1 or not numer:
                numer.insert(0, str(mag))
            body = "*".join(numer)
            if denom:
                body += "/" + "*".join(denom) if len(denom) == 1 else "/(" + "*".join(denom) + ")"
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def to_text(self) -> str:
        """Bit-exact text form: one ``coeff @ [e1,...,er; ey]`` line per term."""
        lines = []
        for exp, coeff in self.sorted_terms():
            a = ",".join(str(x) for x in exp.a_part)
            lines.append(f"{coeff} @ [{a}; {exp.y_part}]")
        return "\n".join(lines)

    @staticmethod
    def from_text(rank: int, text: str) -> "LaurentPoly":
        terms: dict[ExpVec, int] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            coeff_part, exp_part = line.split("@")
            coeff = int(coeff_part.strip())
            body = exp_part.strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise ValueError(f"malformed term: {line!r}")
            a_text, y_text = body[1:-1].split(";")
            a_text = a_text.strip()
            a = tuple(int(x) for x in a_text.split(",")) if a_text else ()
            exp = ExpVec(a, int(y_text.strip()))
            if exp in terms:
                raise ValueError(f"duplicate exponent in text form: {line!r}")
            terms[exp] = coeff
        return LaurentPoly(rank, terms)

    def __repr__(self) -> str:
        return f"LaurentPoly(rank={self.rank}, {self.render()})"


def poly_from_dict(rank: int, data: Mapping[tuple, int]) -> LaurentPoly:
    """Build a polynomial from ``{(a_exponents..., y_exponent): coeff}`` pairs.

    Keys may also be ``(a_tuple, y)`` pairs; both spellings are handy in tests.
    """
    terms: dict[ExpVec, int] = {}
    for key, coeff in data.items():
        if len(key) == 2 and isinstance(key[0], tuple):
            exp = ExpVec(tuple(key[0]), key[1])
        else:
            exp = ExpVec(tuple(key[:-1]), key[-1])
        terms[exp] = terms.get(exp, 0) + coeff
    return LaurentPoly(rank, terms)


def product_of(factors: Iterable[LaurentPoly], rank: int) -> LaurentPoly:
    out = LaurentPoly.one(rank)
    for f in factors:
        out = out * f
    return out
