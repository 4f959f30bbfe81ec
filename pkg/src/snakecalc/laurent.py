"""Exact sparse multivariate Laurent polynomials with integer coefficients.

Variables are interned names; exponent vectors are sorted tuples of
(name, exponent) pairs with nonzero exponents (negative allowed).  The
canonical text format sorts terms by total degree descending, then lex,
and prints ``c*x^a*y1^b`` with unit coefficients and first powers elided.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

Expvec = tuple  # sorted tuple of (str, int)


def _mul_exps(e1: Expvec, e2: Expvec) -> Expvec:
    d = dict(e1)
    for v, k in e2:
        k2 = d.get(v, 0) + k
        if k2:
            d[v] = k2
        else:
            del d[v]
    return tuple(sorted(d.items()))


def _inv_exps(e: Expvec) -> Expvec:
    return tuple((v, -k) for v, k in e)


class LaurentPoly:
    """Immutable in spirit; self.terms maps exponent vector -> nonzero int."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Expvec, int] | None = None):
        self.terms: dict[Expvec, int] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[e] = self.terms.get(e, 0) + c
            self.terms = {e: c for e, c in self.terms.items() if c}

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def const(c: int) -> "LaurentPoly":
        return LaurentPoly({(): c})

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly.const(1)

    @staticmethod
    def var(name: str, power: int = 1) -> "LaurentPoly":
        if power == 0:
            return LaurentPoly.one()
        return LaurentPoly({((name, power),): 1})

    @staticmethod
    def monomial(coeff: int, exps: Mapping[str, int]) -> "LaurentPoly":
        e = tuple(sorted((v, k) for v, k in exps.items() if k))
        return LaurentPoly({e: coeff})

    # -- ring operations --------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        out: dict[Expvec, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _mul_exps(e1, e2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers only via monomial inversion")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- structure --------------------------------------------------------

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def as_monomial(self) -> tuple[int, Expvec]:
        if not self.is_monomial():
            raise ValueError(f"not a monomial: {self}")
        ((e, c),) = self.terms.items()
        return c, e

    def monomial_inverse(self) -> "LaurentPoly":
        c, e = self.as_monomial()
        if c not in (1, -1):
            raise ValueError("only unit-coefficient monomials invert")
        return LaurentPoly({_inv_exps(e): c})

    def div_monomial(self, m: "LaurentPoly") -> "LaurentPoly":
        return self * m.monomial_inverse()

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """self / other when the quotient is a single monomial, else None."""
        if not other.terms:
            return None
        lead = max(other.terms)
        c0 = other.terms[lead]
        for e, c in self.terms.items():
            if c % c0:
                continue
            q = LaurentPoly({_mul_exps(e, _inv_exps(lead)): c // c0})
            if q * other == self:
                return q
        return None

    def substitute(self, assign: Mapping[str, "LaurentPoly | int"]) -> "LaurentPoly":
        """Substitute polynomials (or ints) for variables; others unchanged."""
        out = LaurentPoly.zero()
        for e, c in self.terms.items():
            term = LaurentPoly.const(c)
            for v, k in e:
                if v in assign:
                    rep = _coerce(assign[v])
                    if k < 0:
                        rep = rep.monomial_inverse() ** (-k)
                    else:
                        rep = rep ** k
                    term = term * rep
                else:
                    term = term * LaurentPoly.var(v, k)
            out = out + term
        return out

    def total_degree(self, e: Expvec) -> int:
        return sum(k for _, k in e)

    def degree_in(self, name: str) -> int:
        """Maximal exponent of `name` (0 if absent everywhere)."""
        return max((dict(e).get(name, 0) for e in self.terms), default=0)

    def coefficients_in(self, name: str) -> dict[int, "LaurentPoly"]:
        out: dict[int, dict[Expvec, int]] = {}
        for e, c in self.terms.items():
            d = dict(e)
            k = d.pop(name, 0)
            out.setdefault(k, {})[tuple(sorted(d.items()))] = c
        return {k: LaurentPoly(t) for k, t in out.items()}

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms,
                      key=lambda e: (-self.total_degree(e), _lex_key(e)))
        parts = []
        for e in keys:
            c = self.terms[e]
            factors = []
            for v, k in e:
                factors.append(v if k == 1 else f"{v}^{k}")
            if not factors:
                body = str(abs(c))
            else:
                body = "*".join(factors)
                if abs(c) != 1:
                    body = f"{abs(c)}*{body}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("-" if c < 0 else "+") + body)
        return "".join(parts)

    __repr__ = __str__


def _lex_key(e: Expvec):
    # Lex on variable names with exponents descending for equal prefixes;
    # stable canonical order for printing.
    return tuple((v, -k) for v, k in e)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot coerce {type(x)} to LaurentPoly")


X = LaurentPoly.var("x")
Y = LaurentPoly.var("y")
ONE = LaurentPoly.one()
ZERO = LaurentPoly.zero()
