"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` lives in a fixed ring ``Q[x1, ..., xn]``; terms are stored as a
map from exponent tuples (length ``n``) to :class:`fractions.Fraction`
coefficients, with zero coefficients never stored.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]


class SignatureError(ValueError):
    """Operands live on different ambient spaces."""


class NotDivisible(ArithmeticError):
    pass


def as_scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_scalar(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def base_monomial_factors(exps: Exponent) -> list[str]:
    out = []
    for i, e in enumerate(exps):
        if e == 1:
            out.append(f"x{i + 1}")
        elif e > 1:
            out.append(f"x{i + 1}^{e}")
    return out


def format_term(coeff: Fraction, factors: Sequence[str]) -> tuple[str, str]:
    """Return ``(sign, body)`` for one term of a canonical sum."""
    sign = "-" if coeff < 0 else "+"
    mag = abs(coeff)
    if not factors:
        return sign, format_scalar(mag)
    body = "*".join(factors)
    if mag != 1:
        body = f"{format_scalar(mag)}*{body}"
    return sign, body


def join_terms(pieces: Iterable[tuple[str, str]]) -> str:
    out = ""
    for k, (sign, body) in enumerate(pieces):
        if k == 0:
            out = body if sign == "+" else f"-{body}"
        else:
            out += f" {sign} {body}"
    return out or "0"


def monomial_sort_key(exps: Exponent):
    # Higher total degree first, then lexicographically larger exponent.
    return (-sum(exps), tuple(-e for e in exps))


class Poly:
    """Immutable polynomial in ``nvars`` even coordinates."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise SignatureError(f"exponent {e} does not have length {nvars}")
                c = as_scalar(c)
                if c:
                    clean[tuple(e)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = as_scalar(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        if not 0 <= i < nvars:
            raise SignatureError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    # inspection --------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Exponent]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    # arithmetic --------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise SignatureError(f"polynomial rings differ: {self.nvars} vs {other.nvars} variables")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = as_scalar(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            return self == Poly.const(self.nvars, other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # calculus and evaluation -------------------------------------------------
    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Poly._raw(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise SignatureError(f"point has {len(point)} coordinates, ring has {self.nvars}")
        pt = [as_scalar(v) for v in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def reindex(self, nvars: int, mapping: Mapping[int, int]) -> "Poly":
        """Move variable ``i`` to position ``mapping[i]`` in a ring with ``nvars`` variables.

        Variables absent from ``mapping`` must not occur.
        """
        out = {}
        for e, c in self._terms.items():
            e2 = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    if i not in mapping:
                        raise ValueError(f"x{i + 1} occurs but is not mapped")
                    e2[mapping[i]] += k
            out[tuple(e2)] = c
        return Poly._raw(nvars, out)

    # exact division ----------------------------------------------------------
    def leading(self) -> tuple[Exponent, Fraction]:
        e = max(self._terms)
        return e, self._terms[e]

    def divexact(self, other: "Poly") -> "Poly":
        """Quotient ``self / other``; raises :class:`NotDivisible` when inexact."""
        other = self._coerce(other)
        if not other._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(1 / other.constant_value())
        le, lc = other.leading()
        rem = dict(self._terms)
        quo: dict[Exponent, Fraction] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            diff = tuple(a - b for a, b in zip(e, le))
            if min(diff) < 0:
                raise NotDivisible("polynomial division is not exact")
            q = c / lc
            quo[diff] = q
            for e2, c2 in other._terms.items():
                t = tuple(a + b for a, b in zip(diff, e2))
                s = rem.get(t, 0) - q * c2
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return Poly._raw(self.nvars, quo)

    def divides(self, other: "Poly") -> bool:
        try:
            other.divexact(self)
        except NotDivisible:
            return False
        return True

    # text --------------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: monomial_sort_key(t[0]))

    def __str__(self) -> str:
        return join_terms(format_term(c, base_monomial_factors(e)) for e, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self})"


def poly_vector_zero(v: Sequence[Poly]) -> bool:
    return all(not p for p in v)
