"""Exact multivariate polynomials with integer coefficients.

A polynomial is a map from monomials to nonzero ints.  A monomial is a tuple of
``(EntryVar, exponent)`` pairs sorted by variable, so equal polynomials have
equal term maps and compare and hash structurally.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, NamedTuple, Union


class EntryVar(NamedTuple):
    """The symbol for entry (row, col) of the matrix assigned to letter x<letter>."""
    letter: int
    row: int
    col: int

    def __str__(self):
        if self.row < 10 and self.col < 10:
            return f"x{self.letter}_{self.row}{self.col}"
        return f"x{self.letter}_{self.row},{self.col}"


Monomial = tuple  # tuple[tuple[EntryVar, int], ...]
Scalar = Union[int, Fraction]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: Monomial):
    # ascending key == descending graded lex (variables ordered by (letter, row, col))
    return (-_degree(m), tuple((v, -e) for v, e in m))


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(): c}) if c else ZERO

    @classmethod
    def var(cls, v: EntryVar) -> "Poly":
        return cls({((v, 1),): 1})

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _lift(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return ZERO
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = ONE
        for _ in range(n):
            result = result * self
        return result

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant(self) -> int:
        return self.terms.get((), 0)

    def variables(self) -> list[EntryVar]:
        return sorted({v for m in self.terms for v, _ in m})

    def degree(self) -> int:
        return max((_degree(m) for m in self.terms), default=0)

    def monomials(self) -> list[Monomial]:
        """Monomials in canonical order: higher degree first, then lex."""
        return sorted(self.terms, key=_grlex_key)

    def eval(self, assignment: Mapping[EntryVar, Scalar]) -> Scalar:
        total: Scalar = 0
        for m, c in self.terms.items():
            term: Scalar = c
            for v, e in m:
                try:
                    term *= assignment[v] ** e
                except KeyError:
                    raise KeyError(f"no value for variable {v}") from None
            total += term
        return total

    def substitute(self, assignment: Mapping[EntryVar, Scalar]) -> "Poly":
        """Partial evaluation at integer values; unlisted variables stay symbolic."""
        out = ZERO
        for m, c in self.terms.items():
            coeff = c
            rest = []
            for v, e in m:
                if v in assignment:
                    coeff *= assignment[v] ** e
                else:
                    rest.append((v, e))
            out = out + Poly({tuple(rest): coeff})
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            c = self.terms[m]
            body = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not parts:
                parts.append(text if c > 0 else f"-{text}")
            else:
                parts.append(f"+ {text}" if c > 0 else f"- {text}")
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __reduce__(self):
        return (Poly, (self.terms,))


ZERO = Poly()
ONE = Poly({(): 1})
