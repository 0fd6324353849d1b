"""Graded derivations of C(E[1]).

A derivation is determined by its values on the generators, so a
:class:`VectorField` stores one coefficient per even coordinate and one per
odd coordinate::

    X = sum_i a_i d/dx_i + sum_a b_a d/dxi_a

Coefficients multiply from the left and ``d/dxi_a`` is the left derivative.
A homogeneous field of degree d has ``deg a_i = d`` and ``deg b_a = d + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .graded import GradedFunction
from .polynomial import Poly, SignatureError, as_scalar, join_terms


class DegreeError(ValueError):
    """A field does not have the degree an operation requires."""


def _sign(p: int | None, q: int | None) -> int:
    if p is None or q is None:
        return 1
    return -1 if (p * q) & 1 else 1


class VectorField:
    __slots__ = ("n", "r", "even", "odd", "_degrees", "_hash")

    def __init__(self, n: int, r: int, even: Sequence[GradedFunction] | None = None,
                 odd: Sequence[GradedFunction] | None = None):
        zero = GradedFunction.zero(n, r)
        even = tuple(even) if even is not None else (zero,) * n
        odd = tuple(odd) if odd is not None else (zero,) * r
        if len(even) != n or len(odd) != r:
            raise SignatureError(f"expected {n} even and {r} odd coefficients")
        for f in even + odd:
            if (f.n, f.r) != (n, r):
                raise SignatureError("coefficient lives on a different signature")
        self.n, self.r = n, r
        self.even: tuple[GradedFunction, ...] = even
        self.odd: tuple[GradedFunction, ...] = odd
        degs = set()
        for f in even:
            degs.update(f.xi_degrees())
        for f in odd:
            degs.update(k - 1 for k in f.xi_degrees())
        self._degrees = frozenset(degs)
        self._hash = None

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, n: int, r: int) -> "VectorField":
        return cls(n, r)

    @classmethod
    def d_x(cls, n: int, r: int, i: int) -> "VectorField":
        zero = GradedFunction.zero(n, r)
        even = [zero] * n
        even[i] = GradedFunction.one(n, r)
        return cls(n, r, even, None)

    @classmethod
    def d_xi(cls, n: int, r: int, a: int) -> "VectorField":
        zero = GradedFunction.zero(n, r)
        odd = [zero] * r
        odd[a] = GradedFunction.one(n, r)
        return cls(n, r, None, odd)

    @classmethod
    def from_generator_images(cls, n: int, r: int, images: Sequence[GradedFunction]) -> "VectorField":
        """Field with X(x_i) = images[i] and X(xi_a) = images[n + a]."""
        return cls(n, r, images[:n], images[n:])

    @classmethod
    def section(cls, n: int, r: int, components: Sequence[Poly]) -> "VectorField":
        """Degree -1 field sum_a s_a d/dxi_a for a section s of E."""
        return cls(n, r, None, [GradedFunction.from_poly(p, r) for p in components])

    @classmethod
    def base_field(cls, n: int, r: int, components: Sequence[Poly]) -> "VectorField":
        """Degree 0 field sum_i v_i d/dx_i lifting a vector field on the body."""
        return cls(n, r, [GradedFunction.from_poly(p, r) for p in components], None)

    # inspection --------------------------------------------------------------
    @property
    def signature(self) -> tuple[int, int]:
        return (self.n, self.r)

    def coefficients(self) -> tuple[GradedFunction, ...]:
        return self.even + self.odd

    def __bool__(self) -> bool:
        return any(self.even) or any(self.odd)

    def is_zero(self) -> bool:
        return not self

    def degrees(self) -> frozenset[int]:
        return self._degrees

    def is_homogeneous(self) -> bool:
        return len(self._degrees) <= 1

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous field; ``None`` for the zero field."""
        if not self._degrees:
            return None
        if len(self._degrees) > 1:
            raise DegreeError(f"field is not homogeneous (degrees {sorted(self._degrees)})")
        return next(iter(self._degrees))

    def homogeneous_parts(self) -> dict[int, "VectorField"]:
        parts = {}
        for d in sorted(self._degrees):
            parts[d] = VectorField(self.n, self.r,
                                   [f.part(d) for f in self.even],
                                   [f.part(d + 1) for f in self.odd])
        return parts

    # linear structure --------------------------------------------------------
    def _check(self, other: "VectorField") -> None:
        if (self.n, self.r) != (other.n, other.r):
            raise SignatureError(f"signature mismatch: {(self.n, self.r)} vs {(other.n, other.r)}")

    def __add__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        self._check(other)
        return VectorField(self.n, self.r,
                           [a + b for a, b in zip(self.even, other.even)],
                           [a + b for a, b in zip(self.odd, other.odd)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.n, self.r, [-a for a in self.even], [-a for a in self.odd])

    def __sub__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, f) -> "VectorField":
        """Left multiplication by a function or scalar: (f X)(g) = f X(g)."""
        if isinstance(f, Poly):
            f = GradedFunction.from_poly(f, self.r)
        if isinstance(f, GradedFunction):
            if (f.n, f.r) != (self.n, self.r):
                raise SignatureError("function and field live on different signatures")
            return VectorField(self.n, self.r, [f * a for a in self.even], [f * a for a in self.odd])
        try:
            c = as_scalar(f)
        except TypeError:
            return NotImplemented
        return VectorField(self.n, self.r, [a.scale(c) for a in self.even], [a.scale(c) for a in self.odd])

    def scale(self, c) -> "VectorField":
        return as_scalar(c) * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return (self.n, self.r) == (other.n, other.r) and self.even == other.even and self.odd == other.odd

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.r, self.even, self.odd))
        return self._hash

    # action and bracket ------------------------------------------------------
    def __call__(self, f: GradedFunction) -> GradedFunction:
        return vf_apply(self, f)

    def eval_base(self, point: Sequence) -> "VectorField":
        return VectorField(self.n, self.r,
                           [a.eval_base(point) for a in self.even],
                           [a.eval_base(point) for a in self.odd])

    # text --------------------------------------------------------------------
    def term_strings(self) -> list[tuple[str, str]]:
        pieces = []
        names = [f"d/dx{i + 1}" for i in range(self.n)] + [f"d/dxi{a + 1}" for a in range(self.r)]
        for coeff, name in zip(self.coefficients(), names):
            for sign, body in coeff.term_strings():
                if body == "1":
                    pieces.append((sign, name))
                else:
                    pieces.append((sign, f"{body}*{name}"))
        return pieces

    def __str__(self) -> str:
        return join_terms(self.term_strings())

    def __repr__(self) -> str:
        return f"VectorField(n={self.n}, r={self.r}, {self})"


@dataclass(frozen=True)
class TangentFiberVector:
    """Evaluation of a field at a body point, in E_p[1] (+) T_pM."""

    point: tuple[Fraction, ...]
    fiber: tuple[Fraction, ...]
    tangent: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return not any(self.fiber) and not any(self.tangent)


def vf_apply(X: VectorField, f: GradedFunction) -> GradedFunction:
    if (X.n, X.r) != (f.n, f.r):
        raise SignatureError("field and function live on different signatures")
    out = GradedFunction.zero(f.n, f.r)
    for i, a in enumerate(X.even):
        if a:
            d = f.diff_x(i)
            if d:
                out = out + a * d
    for k, b in enumerate(X.odd):
        if b:
            d = f.diff_xi(k)
            if d:
                out = out + b * d
    return out


def _generator_functions(n: int, r: int) -> list[GradedFunction]:
    return [GradedFunction.x(n, r, i) for i in range(n)] + [GradedFunction.xi(n, r, a) for a in range(r)]


def _homogeneous_commutator(X: VectorField, Y: VectorField, dx, dy) -> VectorField:
    s = _sign(dx, dy)
    xc, yc = X.coefficients(), Y.coefficients()
    images = []
    for a, b in zip(xc, yc):
        # [X,Y](z) = X(Y(z)) - (-1)^{|X||Y|} Y(X(z)), with Y(z) = b and X(z) = a.
        v = vf_apply(X, b)
        w = vf_apply(Y, a)
        images.append(v - w if s > 0 else v + w)
    return VectorField.from_generator_images(X.n, X.r, images)


def vf_commutator(X: VectorField, Y: VectorField) -> VectorField:
    """Graded commutator; inhomogeneous fields are bracketed part by part."""
    X._check(Y)
    if not X or not Y:
        return VectorField.zero(X.n, X.r)
    if X.is_homogeneous() and Y.is_homogeneous():
        return _homogeneous_commutator(X, Y, X.degree, Y.degree)
    total = VectorField.zero(X.n, X.r)
    for dx, Xp in X.homogeneous_parts().items():
        for dy, Yp in Y.homogeneous_parts().items():
            total = total + _homogeneous_commutator(Xp, Yp, dx, dy)
    return total


bracket = vf_commutator


def vf_evaluate(X: VectorField, point: Sequence) -> TangentFiberVector:
    """Image of a degree -1 or degree 0 field in E_p[1] (+) T_pM."""
    pt = tuple(as_scalar(v) for v in point)
    if len(pt) != X.n:
        raise SignatureError(f"point has {len(pt)} coordinates, base has dimension {X.n}")
    if not X.is_homogeneous():
        raise DegreeError("evaluation needs a homogeneous field")
    d = X.degree
    zero_r = (Fraction(0),) * X.r
    zero_n = (Fraction(0),) * X.n
    if d is None:
        return TangentFiberVector(pt, zero_r, zero_n)
    if d == -1:
        fib = tuple(b.base_part().evaluate(pt) for b in X.odd)
        return TangentFiberVector(pt, fib, zero_n)
    if d == 0:
        tan = tuple(a.base_part().evaluate(pt) for a in X.even)
        return TangentFiberVector(pt, zero_r, tan)
    raise DegreeError(f"evaluation is defined for degrees -1 and 0, not {d}")


@dataclass
class HomologicalCheck:
    ok: bool
    square: VectorField
    witness: tuple[str, GradedFunction] | None = None

    def __bool__(self) -> bool:
        return self.ok


def generator_names(n: int, r: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)] + [f"xi{a + 1}" for a in range(r)]


def first_nonzero_coefficient(X: VectorField) -> tuple[str, GradedFunction] | None:
    for name, c in zip(generator_names(X.n, X.r), X.coefficients()):
        if c:
            return name, c
    return None


def vf_is_homological(Q: VectorField) -> HomologicalCheck:
    """Decide [Q, Q] = 0 for a degree 1 field; the witness is (generator, [Q,Q](generator))."""
    if Q.degree not in (None, 1):
        raise DegreeError(f"a homological field has degree 1, got {Q.degree}")
    sq = vf_commutator(Q, Q)
    witness = first_nonzero_coefficient(sq)
    return HomologicalCheck(witness is None, sq, witness)


def base_symbol(X: VectorField) -> tuple[Poly, ...]:
    """The d/dx part of a degree 0 field as polynomials (its symbol)."""
    return tuple(a.base_part() for a in X.even)


def section_components(X: VectorField) -> tuple[Poly, ...]:
    """Coefficients of a degree -1 field in the frame d/dxi_a."""
    return tuple(b.base_part() for b in X.odd)


def iter_generator_pairs(items: Sequence) -> Iterator[tuple[int, int]]:
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield i, j
