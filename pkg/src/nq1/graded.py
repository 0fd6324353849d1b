"""Functions on E[1]: exterior polynomials in odd generators xi_a with
polynomial coefficients in the even coordinates x_i.

Indices are 0-based in the Python API; the text form uses ``x1``, ``xi1``, ...
An odd monomial is a strictly increasing tuple of odd indices, the empty tuple
being the unit.  Signs coming from reordering are absorbed into the
coefficient, so two functions are equal exactly when their term maps agree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .polynomial import (
    Exponent,
    Poly,
    SignatureError,
    as_scalar,
    base_monomial_factors,
    format_term,
    join_terms,
    monomial_sort_key,
)

OddMonomial = tuple[int, ...]
Key = tuple[OddMonomial, Exponent]


@lru_cache(maxsize=65536)
def merge_odd(m1: OddMonomial, m2: OddMonomial) -> tuple[OddMonomial, int] | None:
    """Sorted concatenation of two odd monomials with its Koszul sign.

    Returns ``None`` when an index repeats (the product vanishes).
    """
    if not m1:
        return m2, 1
    if not m2:
        return m1, 1
    s2 = set(m2)
    if any(a in s2 for a in m1):
        return None
    inversions = sum(1 for a in m1 for b in m2 if a > b)
    return tuple(sorted(m1 + m2)), (-1 if inversions & 1 else 1)


def sort_odd(indices: Sequence[int]) -> tuple[OddMonomial, int] | None:
    """Normalize an arbitrary product ``xi_{i1} ... xi_{ik}``."""
    if len(set(indices)) != len(indices):
        return None
    inv = sum(1 for p in range(len(indices)) for q in range(p + 1, len(indices)) if indices[p] > indices[q])
    return tuple(sorted(indices)), (-1 if inv & 1 else 1)


def odd_monomials(r: int, k: int) -> list[OddMonomial]:
    return list(combinations(range(r), k))


def odd_factor(m: OddMonomial) -> str:
    return "^".join(f"xi{a + 1}" for a in m)


class GradedFunction:
    """Element of C(E[1]) over a trivialized chart with ``n`` even and ``r`` odd generators."""

    __slots__ = ("n", "r", "_terms", "_hash")

    def __init__(self, n: int, r: int, terms: Mapping[Key, object] | None = None):
        self.n = n
        self.r = r
        clean: dict[Key, Fraction] = {}
        if terms:
            for (m, e), c in terms.items():
                if len(e) != n:
                    raise SignatureError(f"exponent {e} does not have length {n}")
                if any(not 0 <= a < r for a in m):
                    raise SignatureError(f"odd index out of range in {m} (rank {r})")
                norm = sort_odd(tuple(m))
                if norm is None:
                    continue
                mm, sign = norm
                key = (mm, tuple(e))
                v = clean.get(key, 0) + sign * as_scalar(c)
                if v:
                    clean[key] = v
                else:
                    clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, r: int, terms: dict[Key, Fraction]) -> "GradedFunction":
        f = cls.__new__(cls)
        f.n, f.r, f._terms, f._hash = n, r, terms, None
        return f

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, n: int, r: int) -> "GradedFunction":
        return cls._raw(n, r, {})

    @classmethod
    def const(cls, n: int, r: int, c) -> "GradedFunction":
        c = as_scalar(c)
        return cls._raw(n, r, {((), (0,) * n): c} if c else {})

    @classmethod
    def one(cls, n: int, r: int) -> "GradedFunction":
        return cls.const(n, r, 1)

    @classmethod
    def x(cls, n: int, r: int, i: int) -> "GradedFunction":
        return cls.from_poly(Poly.var(n, i), r)

    @classmethod
    def xi(cls, n: int, r: int, a: int) -> "GradedFunction":
        if not 0 <= a < r:
            raise SignatureError(f"odd index {a} out of range for rank {r}")
        return cls._raw(n, r, {((a,), (0,) * n): Fraction(1)})

    @classmethod
    def from_poly(cls, p: Poly, r: int, m: OddMonomial = ()) -> "GradedFunction":
        if m and sort_odd(m) != (m, 1):
            raise ValueError("odd monomial must be strictly increasing")
        return cls._raw(p.nvars, r, {(m, e): c for e, c in p.items()})

    @classmethod
    def from_parts(cls, n: int, r: int, parts: Mapping[OddMonomial, Poly]) -> "GradedFunction":
        out = {}
        for m, p in parts.items():
            for e, c in p.items():
                out[(m, e)] = c
        return cls(n, r, out)

    # inspection --------------------------------------------------------------
    @property
    def signature(self) -> tuple[int, int]:
        return (self.n, self.r)

    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficients(self) -> dict[OddMonomial, Poly]:
        """The sparse map odd monomial -> base polynomial."""
        parts: dict[OddMonomial, dict] = {}
        for (m, e), c in self._terms.items():
            parts.setdefault(m, {})[e] = c
        return {m: Poly._raw(self.n, t) for m, t in parts.items()}

    def coefficient(self, m: OddMonomial) -> Poly:
        return Poly._raw(self.n, {e: c for (mm, e), c in self._terms.items() if mm == m})

    def xi_degrees(self) -> set[int]:
        return {len(m) for m, _ in self._terms}

    def degree(self) -> int | None:
        """The xi-degree if homogeneous; ``None`` for zero; raises otherwise."""
        degs = self.xi_degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"function is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len(self.xi_degrees()) <= 1

    def degree_parts(self) -> dict[int, "GradedFunction"]:
        parts: dict[int, dict] = {}
        for (m, e), c in self._terms.items():
            parts.setdefault(len(m), {})[(m, e)] = c
        return {k: GradedFunction._raw(self.n, self.r, t) for k, t in sorted(parts.items())}

    def part(self, k: int) -> "GradedFunction":
        return GradedFunction._raw(self.n, self.r, {key: c for key, c in self._terms.items() if len(key[0]) == k})

    def base_part(self) -> Poly:
        return self.coefficient(())

    # arithmetic --------------------------------------------------------------
    def _check(self, other: "GradedFunction") -> None:
        if (self.n, self.r) != (other.n, other.r):
            raise SignatureError(f"signature mismatch: {(self.n, self.r)} vs {(other.n, other.r)}")

    def _coerce(self, other) -> "GradedFunction":
        if isinstance(other, GradedFunction):
            self._check(other)
            return other
        if isinstance(other, Poly):
            if other.nvars != self.n:
                raise SignatureError("polynomial ring does not match the base dimension")
            return GradedFunction.from_poly(other, self.r)
        return GradedFunction.const(self.n, self.r, other)

    def __add__(self, other) -> "GradedFunction":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return GradedFunction._raw(self.n, self.r, out)

    __radd__ = __add__

    def __neg__(self) -> "GradedFunction":
        return GradedFunction._raw(self.n, self.r, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "GradedFunction":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "GradedFunction":
        return (-self) + other

    def scale(self, c) -> "GradedFunction":
        c = as_scalar(c)
        if not c:
            return GradedFunction.zero(self.n, self.r)
        return GradedFunction._raw(self.n, self.r, {k: c * v for k, v in self._terms.items()})

    def __mul__(self, other) -> "GradedFunction":
        if not isinstance(other, (GradedFunction, Poly)):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        out: dict[Key, Fraction] = {}
        for (m1, e1), c1 in self._terms.items():
            for (m2, e2), c2 in other._terms.items():
                merged = merge_odd(m1, m2)
                if merged is None:
                    continue
                m, sign = merged
                key = (m, tuple(a + b for a, b in zip(e1, e2)))
                v = c1 * c2
                s = out.get(key, 0) + (v if sign > 0 else -v)
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return GradedFunction._raw(self.n, self.r, out)

    def __rmul__(self, other) -> "GradedFunction":
        if isinstance(other, Poly):
            return self._coerce(other) * self
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int) -> "GradedFunction":
        if not isinstance(k, int) or k < 0:
            raise ValueError("powers must be non-negative integers")
        out = GradedFunction.one(self.n, self.r)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedFunction):
            return (self.n, self.r) == (other.n, other.r) and self._terms == other._terms
        try:
            return self == self._coerce(other)
        except (TypeError, SignatureError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.r, frozenset(self._terms.items())))
        return self._hash

    # derivations -------------------------------------------------------------
    def diff_x(self, i: int) -> "GradedFunction":
        out = {}
        for (m, e), c in self._terms.items():
            k = e[i]
            if k:
                out[(m, e[:i] + (k - 1,) + e[i + 1:])] = c * k
        return GradedFunction._raw(self.n, self.r, out)

    def diff_xi(self, a: int) -> "GradedFunction":
        """Left derivative d/dxi_a (degree -1, odd)."""
        out = {}
        for (m, e), c in self._terms.items():
            if a in m:
                pos = m.index(a)
                mm = m[:pos] + m[pos + 1:]
                out[(mm, e)] = -c if pos & 1 else c
        return GradedFunction._raw(self.n, self.r, out)

    # evaluation / substitution -----------------------------------------------
    def eval_base(self, point: Sequence) -> "GradedFunction":
        """Specialize every base coefficient at a rational point of R^n."""
        if len(point) != self.n:
            raise SignatureError(f"point has {len(point)} coordinates, base has dimension {self.n}")
        pt = [as_scalar(v) for v in point]
        zero_e = (0,) * self.n
        out: dict[Key, Fraction] = {}
        for (m, e), c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            key = (m, zero_e)
            s = out.get(key, 0) + v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return GradedFunction._raw(self.n, self.r, out)

    def substitute(
        self,
        even: Sequence["GradedFunction"],
        odd: Sequence["GradedFunction"],
        target: tuple[int, int],
    ) -> "GradedFunction":
        """Algebra homomorphism sending x_i -> even[i], xi_a -> odd[a].

        Images live on the ``target`` signature and must have the right parity.
        """
        if len(even) != self.n or len(odd) != self.r:
            raise SignatureError("substitution needs one image per generator")
        tn, tr = target
        result = GradedFunction.zero(tn, tr)
        for (m, e), c in self._terms.items():
            term = GradedFunction.const(tn, tr, c)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term * even[i]
            for a in m:
                term = term * odd[a]
            result = result + term
        return result

    # text --------------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Key, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: (len(t[0][0]), t[0][0], monomial_sort_key(t[0][1])))

    def term_strings(self) -> list[tuple[str, str]]:
        out = []
        for (m, e), c in self.sorted_terms():
            factors = base_monomial_factors(e)
            if m:
                factors.append(odd_factor(m))
            out.append(format_term(c, factors))
        return out

    def __str__(self) -> str:
        return join_terms(self.term_strings())

    def __repr__(self) -> str:
        return f"GradedFunction(n={self.n}, r={self.r}, {self})"


def gf_mul(f: GradedFunction, g: GradedFunction) -> GradedFunction:
    if not isinstance(f, GradedFunction) or not isinstance(g, GradedFunction):
        raise TypeError("gf_mul expects graded functions")
    f._check(g)
    return f * g


def gf_add(f: GradedFunction, g: GradedFunction) -> GradedFunction:
    f._check(g)
    return f + g


def gf_scale(c, f: GradedFunction) -> GradedFunction:
    return f.scale(c)


def gf_degree_parts(f: GradedFunction) -> dict[int, GradedFunction]:
    return f.degree_parts()


def gf_eval_base(f: GradedFunction, point: Sequence) -> GradedFunction:
    return f.eval_base(point)
