"""Lie algebroid data and homological vector fields of degree 1.

A Lie algebroid over a coordinate chart with a global frame ``e_1..e_r`` is
given by structure functions ``c[i][j][k]`` (``[e_i, e_j] = sum_k c_ij^k e_k``)
and anchor components ``rho[i][a]`` (``rho(e_i) = sum_a rho_i^a d/dx_a``).
On E[1] it corresponds to the degree 1 field::

    Q = 1/2 xi_j xi_i c_ij^k d/dxi_k + rho_i^a xi_i d/dx_a

The bracket and anchor are recovered as derived brackets,
``[[Q, d/dxi_i], d/dxi_j] = c_ij^k d/dxi_k`` and ``[[Q, d/dxi_i], x_a] = rho_i^a``.

Covariant differential operators (CDOs) on E are stored as a symbol (a vector
field on the base) plus a matrix ``M`` acting on the frame by
``D(e_b) = -sum_g M[b][g] e_g``.  With this sign, a degree 0 field ``X0``
corresponds to ``M[b][g] =`` coefficient of ``xi_b`` in ``X0(xi_g)``, i.e.
``[X0, d/dxi_b] = -sum_g M[b][g] d/dxi_g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .graded import GradedFunction
from .polynomial import Poly, SignatureError, as_scalar
from .vector_fields import DegreeError, VectorField, vf_commutator, vf_is_homological

Matrix = tuple[tuple[Poly, ...], ...]


class NotHomologicalError(ValueError):
    """Raised when an operation needs [Q, Q] = 0 and it fails."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _to_poly(n: int, v) -> Poly:
    if isinstance(v, Poly):
        if v.nvars != n:
            raise SignatureError(f"polynomial in {v.nvars} variables, base has dimension {n}")
        return v
    return Poly.const(n, v)


@dataclass(frozen=True)
class LieAlgebroidData:
    n: int
    r: int
    c: tuple[tuple[tuple[Poly, ...], ...], ...]
    rho: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        if len(self.c) != self.r or any(len(row) != self.r or any(len(v) != self.r for v in row) for row in self.c):
            raise SignatureError("structure functions must form an r x r x r array")
        if len(self.rho) != self.r or any(len(row) != self.n for row in self.rho):
            raise SignatureError("anchor must form an r x n array")

    @classmethod
    def zero(cls, n: int, r: int) -> "LieAlgebroidData":
        z = Poly.zero(n)
        return cls(n, r, tuple(tuple((z,) * r for _ in range(r)) for _ in range(r)),
                   tuple((z,) * n for _ in range(r)))

    @classmethod
    def from_entries(cls, n: int, r: int, c: Mapping[tuple[int, int, int], object] | None = None,
                     rho: Mapping[tuple[int, int], object] | None = None,
                     antisymmetrize: bool = True) -> "LieAlgebroidData":
        """Build from sparse 0-based entries ``c[(i, j, k)]`` and ``rho[(i, a)]``.

        With ``antisymmetrize`` each entry ``(i, j, k)`` also sets ``(j, i, k)`` to
        its negative; conflicting entries raise ``ValueError``.
        """
        cc = [[[Poly.zero(n) for _ in range(r)] for _ in range(r)] for _ in range(r)]
        seen: dict[tuple[int, int, int], Poly] = {}
        for (i, j, k), v in (c or {}).items():
            p = _to_poly(n, v)
            entries = [((i, j, k), p)]
            if antisymmetrize:
                entries.append(((j, i, k), -p))
            for key, val in entries:
                if key in seen and seen[key] != val:
                    raise ValueError(f"conflicting values for c[{key[0] + 1},{key[1] + 1},{key[2] + 1}]")
                seen[key] = val
                cc[key[0]][key[1]][key[2]] = val
        rr = [[Poly.zero(n) for _ in range(n)] for _ in range(r)]
        for (i, a), v in (rho or {}).items():
            rr[i][a] = _to_poly(n, v)
        return cls(n, r, tuple(tuple(tuple(v) for v in row) for row in cc), tuple(tuple(row) for row in rr))

    def anchor_of(self, i: int, f: Poly) -> Poly:
        """rho(e_i) applied to a base function."""
        out = Poly.zero(self.n)
        for a, p in enumerate(self.rho[i]):
            if p:
                out = out + p * f.diff(a)
        return out

    def anchor_section(self, s: Sequence[Poly], f: Poly) -> Poly:
        out = Poly.zero(self.n)
        for i, si in enumerate(s):
            if si:
                out = out + si * self.anchor_of(i, f)
        return out

    def section_bracket(self, s: Sequence[Poly], t: Sequence[Poly]) -> tuple[Poly, ...]:
        """Bracket of sections extended from the frame by the Leibniz rule."""
        out = [Poly.zero(self.n) for _ in range(self.r)]
        for a, sa in enumerate(s):
            if not sa:
                continue
            for b, tb in enumerate(t):
                if not tb:
                    continue
                st = sa * tb
                for m, cm in enumerate(self.c[a][b]):
                    if cm:
                        out[m] = out[m] + st * cm
        for m in range(self.r):
            out[m] = out[m] + self.anchor_section(s, t[m]) - self.anchor_section(t, s[m])
        return tuple(out)

    def frame(self, i: int) -> tuple[Poly, ...]:
        return tuple(Poly.const(self.n, 1 if j == i else 0) for j in range(self.r))

    def describe(self) -> dict:
        """Nonzero entries with 1-based indices, as strings."""
        cs = {}
        for i in range(self.r):
            for j in range(self.r):
                for k in range(self.r):
                    if self.c[i][j][k]:
                        cs[f"{i + 1},{j + 1},{k + 1}"] = str(self.c[i][j][k])
        rs = {}
        for i in range(self.r):
            for a in range(self.n):
                if self.rho[i][a]:
                    rs[f"{i + 1},{a + 1}"] = str(self.rho[i][a])
        return {"dim_base": self.n, "rank": self.r, "c": cs, "rho": rs}


def build_q(A: LieAlgebroidData) -> VectorField:
    n, r = A.n, A.r
    even = []
    for a in range(n):
        f = GradedFunction.zero(n, r)
        for i in range(r):
            if A.rho[i][a]:
                f = f + GradedFunction.from_poly(A.rho[i][a], r, (i,))
        even.append(f)
    odd = []
    half = Fraction(1, 2)
    for k in range(r):
        f = GradedFunction.zero(n, r)
        for i in range(r):
            for j in range(r):
                p = A.c[i][j][k]
                if p and i != j:
                    # xi_j xi_i is the monomial (i, j) with sign -1 when i < j.
                    mono, sign = ((i, j), -1) if i < j else ((j, i), 1)
                    f = f + GradedFunction.from_poly(p.scale(half * sign), r, mono)
        odd.append(f)
    return VectorField(n, r, even, odd)


def extract_algebroid(Q: VectorField, check: bool = True) -> LieAlgebroidData:
    """Read structure functions and anchor off a degree 1 field.

    With ``check`` the field must be homological; otherwise the raw linear
    extraction is returned (a left inverse of :func:`build_q`).
    """
    if Q.degree not in (None, 1):
        raise DegreeError(f"expected a degree 1 field, got degree {Q.degree}")
    if check:
        hc = vf_is_homological(Q)
        if not hc:
            name, val = hc.witness
            raise NotHomologicalError(f"[Q,Q]({name}) = {val} is not zero", hc.witness)
    n, r = Q.n, Q.r
    firsts = [vf_commutator(Q, VectorField.d_xi(n, r, i)) for i in range(r)]
    c = []
    for i in range(r):
        row = []
        for j in range(r):
            b = vf_commutator(firsts[i], VectorField.d_xi(n, r, j))
            row.append(tuple(f.base_part() for f in b.odd))
        c.append(tuple(row))
    rho = tuple(tuple(f.base_part() for f in firsts[i].even) for i in range(r))
    return LieAlgebroidData(n, r, tuple(c), rho)


# ---------------------------------------------------------------------------
# independent axiom check


@dataclass
class AxiomCheck:
    axiom: str
    status: str
    witness: str | None = None

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class AxiomReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if c.status != "pass"]

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


def _section_str(s: Sequence[Poly]) -> str:
    parts = []
    for k, p in enumerate(s):
        if p:
            parts.append(f"({p})*e{k + 1}")
    return " + ".join(parts) or "0"


def _test_monomials(n: int, max_degree: int = 2) -> list[Poly]:
    out = []
    for d in range(1, max_degree + 1):
        for combo in _exponents(n, d):
            out.append(Poly(n, {combo: 1}))
    return out


def _exponents(n: int, d: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    for k in range(d, -1, -1):
        for rest in _exponents(n - 1, d - k):
            yield (k,) + rest


def _jacobiator(A: LieAlgebroidData, s, t, u) -> tuple[Poly, ...]:
    br = A.section_bracket
    terms = [br(s, br(t, u)), br(t, br(u, s)), br(u, br(s, t))]
    return tuple(a + b + c for a, b, c in zip(*terms))


def verify_algebroid_axioms(A: LieAlgebroidData, test_degree: int = 2) -> AxiomReport:
    """Check the Lie algebroid axioms directly on sections, without building Q.

    Checks antisymmetry of the structure functions, the Jacobi identity on
    frame triples, compatibility of the anchor with brackets, the Leibniz rule
    and the Jacobi identity on test sections ``f e_i`` with monomials ``f`` of
    degree up to ``test_degree``.
    """
    n, r = A.n, A.r
    report = AxiomReport()

    wit = None
    for i in range(r):
        for j in range(i, r):
            for k in range(r):
                s = A.c[i][j][k] + A.c[j][i][k]
                if s:
                    wit = f"c[{i + 1},{j + 1},{k + 1}] + c[{j + 1},{i + 1},{k + 1}] = {s}"
                    break
            if wit:
                break
        if wit:
            break
    report.checks.append(AxiomCheck("antisymmetry", "fail" if wit else "pass", wit))

    wit = None
    for i, j, k in combinations(range(r), 3):
        jac = _jacobiator(A, A.frame(i), A.frame(j), A.frame(k))
        if any(jac):
            wit = f"Jacobi on (e{i + 1}, e{j + 1}, e{k + 1}) = {_section_str(jac)}"
            break
    report.checks.append(AxiomCheck("jacobi", "fail" if wit else "pass", wit))

    wit = None
    for i, j in combinations(range(r), 2):
        for a in range(n):
            lhs = Poly.zero(n)
            for k in range(r):
                lhs = lhs + A.c[i][j][k] * A.rho[k][a]
            rhs = A.anchor_of(i, A.rho[j][a]) - A.anchor_of(j, A.rho[i][a])
            if lhs != rhs:
                wit = (f"rho([e{i + 1}, e{j + 1}])(x{a + 1}) = {lhs} but "
                       f"[rho(e{i + 1}), rho(e{j + 1})](x{a + 1}) = {rhs}")
                break
        if wit:
            break
    report.checks.append(AxiomCheck("anchor_morphism", "fail" if wit else "pass", wit))

    tests = _test_monomials(n, test_degree)
    wit = None
    for i in range(r):
        for j in range(r):
            for f in tests:
                ft = tuple(f * p for p in A.frame(j))
                lhs = A.section_bracket(A.frame(i), ft)
                rhs = tuple(f * p for p in A.c[i][j])
                rf = A.anchor_of(i, f)
                rhs = tuple(p + (rf if k == j else Poly.zero(n)) for k, p in enumerate(rhs))
                if lhs != rhs:
                    wit = f"Leibniz fails for [e{i + 1}, ({f})*e{j + 1}]"
                    break
            if wit:
                break
        if wit:
            break
    report.checks.append(AxiomCheck("leibniz", "fail" if wit else "pass", wit))

    wit = None
    if r >= 2:
        for f in tests:
            for i in range(r):
                fs = tuple(f * p for p in A.frame(i))
                for j, k in combinations(range(r), 2):
                    jac = _jacobiator(A, fs, A.frame(j), A.frame(k))
                    if any(jac):
                        wit = (f"Jacobi on (({f})*e{i + 1}, e{j + 1}, e{k + 1}) = {_section_str(jac)}")
                        break
                if wit:
                    break
            if wit:
                break
    report.checks.append(AxiomCheck("jacobi_test_sections", "fail" if wit else "pass", wit))
    return report


# ---------------------------------------------------------------------------
# derived brackets


def _require_degree(X: VectorField, d: int, what: str) -> None:
    if X and X.degree != d:
        raise DegreeError(f"{what} must have degree {d}, got {X.degree}")


def derived_bracket(Q: VectorField, a: VectorField, b: VectorField) -> VectorField:
    """[[Q, a], b] for degree -1 fields a, b."""
    _require_degree(Q, 1, "Q")
    _require_degree(a, -1, "first argument")
    _require_degree(b, -1, "second argument")
    return vf_commutator(vf_commutator(Q, a), b)


def anchor_apply(Q: VectorField, a: VectorField, f: GradedFunction) -> GradedFunction:
    """[[Q, a], f] = [Q, a](f) for a function f of xi-degree 0."""
    _require_degree(Q, 1, "Q")
    _require_degree(a, -1, "section")
    if f and f.degree() != 0:
        raise DegreeError("anchor_apply needs a function of xi-degree 0")
    return vf_commutator(Q, a)(f)


# ---------------------------------------------------------------------------
# covariant differential operators


@dataclass(frozen=True)
class CDORep:
    n: int
    r: int
    symbol: tuple[Poly, ...]
    matrix: Matrix

    def __post_init__(self):
        if len(self.symbol) != self.n:
            raise SignatureError("symbol must have n components")
        if len(self.matrix) != self.r or any(len(row) != self.r for row in self.matrix):
            raise SignatureError("matrix part must be r x r")

    def apply_function(self, f: Poly) -> Poly:
        out = Poly.zero(self.n)
        for a, v in enumerate(self.symbol):
            if v:
                out = out + v * f.diff(a)
        return out

    def __call__(self, s: Sequence[Poly]) -> tuple[Poly, ...]:
        return cdo_apply(self, s)

    def describe(self) -> dict:
        return {"symbol": [str(p) for p in self.symbol],
                "matrix": [[str(p) for p in row] for row in self.matrix]}


def _zero_matrix(n: int, r: int) -> list[list[Poly]]:
    return [[Poly.zero(n) for _ in range(r)] for _ in range(r)]


def _freeze(M) -> Matrix:
    return tuple(tuple(row) for row in M)


def cdo_from_degree0(X0: VectorField) -> CDORep:
    """The CDO s -> [X0, s] on degree -1 fields, i.e. on sections of E."""
    if X0 and X0.degree != 0:
        raise DegreeError(f"expected a degree 0 field, got degree {X0.degree}")
    n, r = X0.n, X0.r
    symbol = tuple(a.base_part() for a in X0.even)
    M = _zero_matrix(n, r)
    for g, img in enumerate(X0.odd):
        for b in range(r):
            M[b][g] = img.coefficient((b,))
    return CDORep(n, r, symbol, _freeze(M))


def degree0_from_cdo(D: CDORep) -> VectorField:
    """Inverse of :func:`cdo_from_degree0`."""
    n, r = D.n, D.r
    even = [GradedFunction.from_poly(p, r) for p in D.symbol]
    odd = []
    for g in range(r):
        f = GradedFunction.zero(n, r)
        for b in range(r):
            if D.matrix[b][g]:
                f = f + GradedFunction.from_poly(D.matrix[b][g], r, (b,))
        odd.append(f)
    return VectorField(n, r, even, odd)


def cdo_apply(D: CDORep, s: Sequence[Poly]) -> tuple[Poly, ...]:
    """D(sum_b s_b e_b) = sum_b symbol(s_b) e_b - sum_{b,g} s_b M[b][g] e_g."""
    if len(s) != D.r:
        raise SignatureError("section has the wrong number of components")
    out = [D.apply_function(p) for p in s]
    for b, sb in enumerate(s):
        if not sb:
            continue
        for g, m in enumerate(D.matrix[b]):
            if m:
                out[g] = out[g] - sb * m
    return tuple(out)


def cdo_dual(D: CDORep) -> CDORep:
    """Dual CDO on E*, written in the dual frame with the same conventions."""
    r = D.r
    M = [[-D.matrix[b][a] for b in range(r)] for a in range(r)]
    return CDORep(D.n, r, D.symbol, _freeze(M))


def cdo_pairing_defect(D: CDORep, Dstar: CDORep) -> list[list[Poly]]:
    """<D*(xi_g), e_b> + <xi_g, D(e_b)> - symbol(<xi_g, e_b>) for all frame pairs; zero iff dual."""
    r = D.r
    out = []
    for g in range(r):
        row = []
        xi_g = tuple(Poly.const(D.n, 1 if k == g else 0) for k in range(r))
        dxi = cdo_apply(Dstar, xi_g)
        for b in range(r):
            e_b = tuple(Poly.const(D.n, 1 if k == b else 0) for k in range(r))
            de = cdo_apply(D, e_b)
            # <xi_g, e_b> is constant, so its derivative vanishes.
            row.append(dxi[b] + de[g])
        out.append(row)
    return out


def cdo_commutator(D1: CDORep, D2: CDORep) -> CDORep:
    if (D1.n, D1.r) != (D2.n, D2.r):
        raise SignatureError("CDOs live on different bundles")
    n, r = D1.n, D1.r
    symbol = tuple(D1.apply_function(D2.symbol[a]) - D2.apply_function(D1.symbol[a]) for a in range(n))
    # With A = -M, D(e_b) = sum_g A[b][g] e_g and [D1, D2] has
    # A = D1(A2) - D2(A1) + A2 A1 - A1 A2.
    A1 = [[-p for p in row] for row in D1.matrix]
    A2 = [[-p for p in row] for row in D2.matrix]
    M = _zero_matrix(n, r)
    for b in range(r):
        for g in range(r):
            v = D1.apply_function(A2[b][g]) - D2.apply_function(A1[b][g])
            for k in range(r):
                v = v + A2[b][k] * A1[k][g] - A1[b][k] * A2[k][g]
            M[b][g] = -v
    return CDORep(n, r, symbol, _freeze(M))


def scalar_matrix(rows: Sequence[Sequence[object]], n: int) -> Matrix:
    return tuple(tuple(Poly.const(n, as_scalar(v)) for v in row) for row in rows)
