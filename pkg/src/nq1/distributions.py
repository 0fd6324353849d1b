"""Graded distributions on E[1] and their classical description.

A distribution is given by homogeneous generators of degree -1 (sections of a
subbundle B of E) and degree 0 (lifts of an involutive distribution F on the
base).  The C(M)-module it generates is what membership and involutivity
refer to.  Pointwise independence is certified by a symbolic rank over Q(x)
together with exact ranks at rational sample points.

The classical side is a :class:`ClassicalTriple` ``(B, F, nabla)``: the
connection matrices ``N`` of the flat F-connection on E/B are written in a
complement frame ``c_1..c_m`` of B, one matrix per F generator ``Y``, with
``nabla_Y (c_i mod B) = sum_j N[i][j] (c_j mod B)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graded import GradedFunction, odd_monomials
from .linalg import (PolySolution, inverse_matrix, rank_at, rank_over_fractions, rank_rational,
                     solve_over_fractions)
from .polynomial import Poly, SignatureError, as_scalar
from .report import CheckResult
from .vector_fields import DegreeError, VectorField, vf_commutator

Section = tuple[Poly, ...]
PolyMatrix = tuple[tuple[Poly, ...], ...]

CERTIFIED = "certified-distribution"
MODULE_ONLY = "module-only"
UNCHECKED = "unchecked"


class ClassicalDataError(ValueError):
    """Classical data cannot be extracted or is inconsistent."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness


class FrameError(ValueError):
    """A supplied family of sections is not a frame (over polynomials)."""


def sample_points(n: int, count: int = 8, seed: int = 0) -> list[tuple[Fraction, ...]]:
    """The origin followed by ``count`` pseudo-random rational points."""
    pts = [(Fraction(0),) * n]
    if n == 0:
        return pts
    rng = random.Random(seed)
    for _ in range(count):
        pt = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n))
        if pt not in pts:
            pts.append(pt)
    return pts


def fmt_point(p: Sequence[Fraction]) -> list[str]:
    return [str(Fraction(v)) for v in p]


# ---------------------------------------------------------------------------
# the distribution type


@dataclass
class Distribution:
    n: int
    r: int
    generators: tuple[VectorField, ...]
    labels: tuple[str, ...]
    status: str = UNCHECKED
    failing_point: tuple[Fraction, ...] | None = None
    points: tuple[tuple[Fraction, ...], ...] = ()
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if not self.labels:
            self.labels = tuple(f"g{k + 1}" for k in range(len(self.generators)))
        self.labels = tuple(self.labels)
        if len(self.labels) != len(self.generators):
            raise ValueError("one label per generator is required")
        for g in self.generators:
            if (g.n, g.r) != (self.n, self.r):
                raise SignatureError("generator lives on a different signature")
            if not g.is_homogeneous():
                raise DegreeError("generators must be homogeneous")
        if not self.points:
            self.points = tuple(sample_points(self.n))

    @classmethod
    def of(cls, n: int, r: int, gens: Sequence[VectorField], labels: Sequence[str] | None = None,
           points=None) -> "Distribution":
        return cls(n, r, tuple(gens), tuple(labels or ()), points=tuple(points or ()))

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def indexed(self, degree: int) -> list[tuple[int, VectorField]]:
        return [(k, g) for k, g in enumerate(self.generators) if g and g.degree == degree]

    @property
    def minus1(self) -> list[VectorField]:
        return [g for _, g in self.indexed(-1)]

    @property
    def zero(self) -> list[VectorField]:
        return [g for _, g in self.indexed(0)]

    def describe(self) -> dict:
        gens = []
        for label, g in zip(self.labels, self.generators):
            gens.append({"label": label, "degree": g.degree, "field": str(g)})
        out = {"generators": gens, "status": self.status}
        if self.failing_point is not None:
            out["failing_point"] = fmt_point(self.failing_point)
        return out


def _fiber_rows(gens: Sequence[VectorField]) -> list[list[Poly]]:
    return [[f.base_part() for f in g.odd] for g in gens]


def _symbol_rows(gens: Sequence[VectorField]) -> list[list[Poly]]:
    return [[f.base_part() for f in g.even] for g in gens]


def dist_validate(gens: Sequence[VectorField], n: int | None = None, r: int | None = None,
                  labels: Sequence[str] | None = None, points=None, samples: int = 8,
                  seed: int = 0) -> Distribution:
    """Certify pointwise independence of degree -1 and degree 0 generators."""
    gens = list(gens)
    if gens:
        n, r = gens[0].n, gens[0].r
    if n is None or r is None:
        raise ValueError("signature is needed when there are no generators")
    pts = tuple(points) if points is not None else tuple(sample_points(n, samples, seed))
    D = Distribution(n, r, tuple(gens), tuple(labels or ()), points=pts)
    for label, g in zip(D.labels, gens):
        if g and g.degree not in (-1, 0):
            raise DegreeError(f"generator {label} has degree {g.degree}; distributions are generated in degrees -1 and 0")
    zero_labels = [label for label, g in zip(D.labels, gens) if not g]
    m1 = [g for g in gens if g and g.degree == -1]
    m0 = [g for g in gens if g and g.degree == 0]
    fib, sym = _fiber_rows(m1), _symbol_rows(m0)
    rank_fib = rank_over_fractions(fib, n) if fib else 0
    rank_sym = rank_over_fractions(sym, n) if sym else 0
    D.details = {"symbolic_rank_fiber": rank_fib, "symbolic_rank_symbol": rank_sym,
                 "degree_minus1": len(m1), "degree_0": len(m0),
                 "sample_points": [fmt_point(p) for p in pts]}
    if zero_labels:
        D.status, D.failing_point = MODULE_ONLY, pts[0]
        D.details["reason"] = f"generator {zero_labels[0]} is zero"
        return D
    if rank_fib < len(m1) or rank_sym < len(m0):
        D.status, D.failing_point = MODULE_ONLY, pts[0]
        D.details["reason"] = "generators are dependent over the rational function field"
        return D
    for p in pts:
        if (fib and rank_at(fib, p) < len(m1)) or (sym and rank_at(sym, p) < len(m0)):
            D.status, D.failing_point = MODULE_ONLY, p
            D.details["reason"] = "evaluations are dependent at a sample point"
            return D
    D.status = CERTIFIED
    return D


# ---------------------------------------------------------------------------
# membership


@dataclass
class Membership:
    member: bool
    certainty: str | None
    coefficients: list[GradedFunction] | None = None
    numerators: list[GradedFunction] | None = None
    denominator: Poly | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.member

    def describe(self, labels: Sequence[str]) -> dict:
        out: dict = {"member": self.member}
        if self.certainty:
            out["certainty"] = self.certainty
        if self.member:
            if self.coefficients is not None:
                out["coefficients"] = {lab: str(h) for lab, h in zip(labels, self.coefficients) if h}
            elif self.numerators is not None:
                out["coefficients"] = {lab: f"({h})/({self.denominator})"
                                       for lab, h in zip(labels, self.numerators) if h}
        if self.reason:
            out["reason"] = self.reason
        return out


def _xi_monomial(n: int, r: int, m) -> GradedFunction:
    return GradedFunction._raw(n, r, {(m, (0,) * n): Fraction(1)})


def module_membership(V: VectorField, D: Distribution, points=None) -> Membership:
    """Decide whether V = sum_j h_j G_j with functions h_j of the right degrees."""
    if (V.n, V.r) != (D.n, D.r):
        raise SignatureError("field and distribution live on different signatures")
    n, r = D.n, D.r
    gens = D.generators
    zero_h = [GradedFunction.zero(n, r) for _ in gens]
    if not V:
        return Membership(True, "polynomial-exact", zero_h)
    d = V.degree
    columns: list[tuple[int, tuple, VectorField]] = []
    for j, G in enumerate(gens):
        if not G:
            continue
        k = d - G.degree
        if not 0 <= k <= r:
            continue
        for m in odd_monomials(r, k):
            W = G if not m else _xi_monomial(n, r, m) * G
            if W:
                columns.append((j, m, W))
    keys = set()
    for coeff_index, f in enumerate(V.coefficients()):
        for m in f.coefficients():
            keys.add((coeff_index, m))
    col_parts = []
    for _, _, W in columns:
        parts = {}
        for coeff_index, f in enumerate(W.coefficients()):
            for m, p in f.coefficients().items():
                parts[(coeff_index, m)] = p
                keys.add((coeff_index, m))
        col_parts.append(parts)
    v_parts = {}
    for coeff_index, f in enumerate(V.coefficients()):
        for m, p in f.coefficients().items():
            v_parts[(coeff_index, m)] = p
    zero = Poly.zero(n)
    rows, rhs = [], []
    for key in sorted(keys):
        row = [parts.get(key, zero) for parts in col_parts]
        b = v_parts.get(key, zero)
        if not any(row):
            if b:
                return Membership(False, None, reason="a coefficient of the field is outside the span of all generators")
            continue
        rows.append(row)
        rhs.append(b)
    if not columns:
        return Membership(False, None, reason="no generator can contribute in this degree")
    sol = solve_over_fractions(rows, rhs, n)
    if sol is None:
        return Membership(False, None, reason="the linear system over the rational function field is inconsistent")
    return _membership_from_solution(sol, columns, len(gens), n, r,
                                     points if points is not None else D.points)


def _assemble(values: Sequence[Poly], columns, ngens: int, n: int, r: int) -> list[GradedFunction]:
    h = [GradedFunction.zero(n, r) for _ in range(ngens)]
    for (j, m, _), p in zip(columns, values):
        if p:
            h[j] = h[j] + GradedFunction.from_poly(p, r, m)
    return h


def _membership_from_solution(sol: PolySolution, columns, ngens, n, r, points) -> Membership:
    if sol.is_polynomial():
        return Membership(True, "polynomial-exact", _assemble(sol.polynomial_values(), columns, ngens, n, r))
    bad = sol.denominator_vanishes_at(points)
    nums = _assemble(sol.numerators, columns, ngens, n, r)
    if bad:
        return Membership(False, None, numerators=nums, denominator=sol.denominator,
                          reason=f"coefficients have denominator {sol.denominator} vanishing at a sample point")
    return Membership(True, "sample-certified", None, nums, sol.denominator)


def module_equal(D1: Distribution, D2: Distribution) -> CheckResult:
    """Mutual membership of all generators."""
    for src, dst, tag in ((D1, D2, "first_in_second"), (D2, D1, "second_in_first")):
        for label, g in zip(src.labels, src.generators):
            if not module_membership(g, dst):
                return CheckResult("module_equal", False,
                                   {"direction": tag, "generator": label, "field": str(g),
                                    "claim": "not_in_distribution"}, {"field": g})
    return CheckResult("module_equal", True)


# ---------------------------------------------------------------------------
# involutivity and Q-invariance


def generator_pairs(D: Distribution):
    """Bracket pairs to test, (degree 0, degree -1) first, then degree 0 pairs."""
    z = D.indexed(0)
    m = D.indexed(-1)
    for i, X in z:
        for j, Y in m:
            yield i, j
    for a in range(len(z)):
        for b in range(a + 1, len(z)):
            yield z[a][0], z[b][0]


def dist_is_involutive(D: Distribution) -> CheckResult:
    """Closure under brackets of generators.

    Brackets of two degree -1 fields vanish; generators of other degrees are
    bracketed pairwise as well.
    """
    pairs = list(generator_pairs(D))
    others = [k for k, g in enumerate(D.generators) if g and g.degree not in (-1, 0)]
    for k in others:
        for j in range(len(D.generators)):
            if D.generators[j] and (j not in others or j >= k):
                pairs.append((k, j))
    for i, j in pairs:
        V = vf_commutator(D.generators[i], D.generators[j])
        mem = module_membership(V, D)
        if not mem:
            return CheckResult("involutive", False,
                               {"pair": [D.labels[i], D.labels[j]], "bracket": str(V),
                                "claim": "not_in_distribution"},
                               {"bracket": V, "pair": (i, j)})
    return CheckResult("involutive", True)


def dist_is_q_invariant(D: Distribution, Q: VectorField) -> CheckResult:
    for label, g in zip(D.labels, D.generators):
        V = vf_commutator(Q, g)
        if not module_membership(V, D):
            return CheckResult("q_invariant", False,
                               {"generator": label, "bracket": str(V), "claim": "not_in_distribution"},
                               {"bracket": V, "generator": label})
    return CheckResult("q_invariant", True)


# ---------------------------------------------------------------------------
# classical data


def _mat_str(M) -> list[list[str]]:
    return [[str(p) for p in row] for row in M]


def _sec_str(s: Sequence[Poly]) -> list[str]:
    return [str(p) for p in s]


@dataclass
class ClassicalTriple:
    """Subbundle B, involutive F on the base and flat F-connection on E/B.

    ``B``: spanning sections (r-vectors); ``F``: base vector fields
    (n-vectors); ``complement``: sections completing B to a frame; ``nabla``:
    one (m x m) matrix per F generator in the complement frame;
    ``flat_frame``: optional sections whose classes form a nabla-flat frame of
    E/B.
    """

    n: int
    r: int
    B: tuple[Section, ...]
    F: tuple[Section, ...]
    complement: tuple[Section, ...]
    nabla: tuple[PolyMatrix, ...]
    flat_frame: tuple[Section, ...] | None = None

    def __post_init__(self):
        self.B = tuple(tuple(s) for s in self.B)
        self.F = tuple(tuple(s) for s in self.F)
        self.complement = tuple(tuple(s) for s in self.complement)
        self.nabla = tuple(tuple(tuple(row) for row in M) for M in self.nabla)
        if self.flat_frame is not None:
            self.flat_frame = tuple(tuple(s) for s in self.flat_frame)
        m = len(self.complement)
        if any(len(s) != self.r for s in self.B + self.complement):
            raise SignatureError("sections must have r components")
        if any(len(v) != self.n for v in self.F):
            raise SignatureError("base vector fields must have n components")
        if len(self.B) + m != self.r:
            raise ValueError("B and its complement must together have r elements")
        if len(self.nabla) != len(self.F):
            raise ValueError("one connection matrix per F generator is required")
        if any(len(M) != m or any(len(row) != m for row in M) for M in self.nabla):
            raise ValueError("connection matrices must be square of size rank(E/B)")

    @property
    def quotient_rank(self) -> int:
        return len(self.complement)

    def frame_matrix(self) -> list[list[Poly]]:
        return [list(s) for s in self.B + self.complement]

    def describe(self) -> dict:
        out = {"B": [_sec_str(s) for s in self.B], "F": [_sec_str(v) for v in self.F],
               "complement": [_sec_str(s) for s in self.complement],
               "nabla": [_mat_str(M) for M in self.nabla]}
        if self.flat_frame is not None:
            out["flat_frame"] = [_sec_str(s) for s in self.flat_frame]
        return out


def apply_base_field(Y: Sequence[Poly], f: Poly) -> Poly:
    out = Poly.zero(f.nvars)
    for a, v in enumerate(Y):
        if v:
            out = out + v * f.diff(a)
    return out


def base_bracket(X: Sequence[Poly], Y: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(apply_base_field(X, Y[a]) - apply_base_field(Y, X[a]) for a in range(len(X)))


def decompose_section(s: Sequence[Poly], frame: Sequence[Sequence[Poly]], n: int) -> PolySolution | None:
    """Coefficients of ``s`` in the rows of ``frame`` over Q(x)."""
    rows = [[frame[i][a] for i in range(len(frame))] for a in range(len(s))]
    return solve_over_fractions(rows, list(s), n)


def in_span(v: Sequence[Poly], gens: Sequence[Sequence[Poly]], n: int, points) -> bool:
    """Is ``v`` a combination of ``gens`` with coefficients regular at the sample points?"""
    if not any(v):
        return True
    if not gens:
        return False
    sol = decompose_section(v, gens, n)
    if sol is None:
        return False
    return sol.is_polynomial() or not sol.denominator_vanishes_at(points)


def greedy_complement(B: Sequence[Sequence[Poly]], r: int, point) -> list[int]:
    rows = [[p.evaluate(point) for p in s] for s in B]
    chosen = []
    for c in range(r):
        e = [Fraction(1 if k == c else 0) for k in range(r)]
        if rank_rational(rows + [e]) > len(rows):
            rows.append(e)
            chosen.append(c)
    return chosen


def std_section(n: int, r: int, c: int) -> Section:
    return tuple(Poly.const(n, 1 if k == c else 0) for k in range(r))


def connection_matrix(X0: VectorField, B: Sequence[Section], complement: Sequence[Section],
                      n: int) -> list[list[Poly]]:
    """Rows: [X0, c_i] mod B written in the complement frame; must be polynomial."""
    r = X0.r
    frame = list(B) + list(complement)
    k = len(B)
    out = []
    for ci, c in enumerate(complement):
        field_c = VectorField.section(n, r, c)
        br = vf_commutator(X0, field_c)
        comps = [f.base_part() for f in br.odd]
        sol = decompose_section(comps, frame, n)
        if sol is None:
            raise ClassicalDataError("complement does not complete B to a frame")
        if not sol.is_polynomial():
            raise ClassicalDataError(
                f"connection coefficients are not polynomial (denominator {sol.denominator})",
                {"complement_index": ci + 1, "bracket": str(br)})
        vals = sol.polynomial_values()
        out.append(vals[k:])
    return out


def dist_to_classical(D: Distribution, check_involutive: bool = True) -> tuple[ClassicalTriple, list[CheckResult]]:
    """Extract (B, F, nabla) and verify well-definedness, flatness and involutivity of F."""
    n, r = D.n, D.r
    if D.status == MODULE_ONLY:
        raise ClassicalDataError("the module is not a distribution", D.describe())
    checks: list[CheckResult] = []
    if check_involutive:
        inv = dist_is_involutive(D)
        if not inv:
            raise ClassicalDataError("the distribution is not involutive", inv.witness)
    B = [tuple(f.base_part() for f in g.odd) for g in D.minus1]
    X0s = D.zero
    F = [tuple(f.base_part() for f in g.even) for g in X0s]
    comp_idx = greedy_complement(B, r, D.points[0])
    complement = [std_section(n, r, c) for c in comp_idx]
    # well-definedness: [X0, b] stays in B
    ok, wit = True, None
    for i, X0 in enumerate(X0s):
        for j, b in enumerate(D.minus1):
            br = vf_commutator(X0, b)
            comps = [f.base_part() for f in br.odd]
            if not in_span(comps, B, n, D.points):
                ok, wit = False, {"pair": [i + 1, j + 1], "bracket": str(br), "claim": "not_in_distribution"}
                break
        if not ok:
            break
    checks.append(CheckResult("nabla_well_defined", ok, wit))
    if not ok:
        raise ClassicalDataError("the connection on E/B is not well defined", wit)
    nabla = [connection_matrix(X0, B, complement, n) for X0 in X0s]
    T = ClassicalTriple(n, r, tuple(B), tuple(F), tuple(complement), tuple(tuple(map(tuple, M)) for M in nabla))
    checks.append(f_involutive(T, D.points))
    checks.append(nabla_flat(T, D.points))
    return T, checks


def f_involutive(T: ClassicalTriple, points) -> CheckResult:
    for i in range(len(T.F)):
        for j in range(i + 1, len(T.F)):
            br = base_bracket(T.F[i], T.F[j])
            if not in_span(br, T.F, T.n, points):
                return CheckResult("F_involutive", False,
                                   {"pair": [i + 1, j + 1], "bracket": _sec_str(br)})
    return CheckResult("F_involutive", True)


def _mat_apply(Y, M):
    return [[apply_base_field(Y, p) for p in row] for row in M]


def _mat_mul(A, B_):
    m = len(A)
    k = len(B_)
    cols = len(B_[0]) if B_ else 0
    out = []
    for i in range(m):
        row = []
        for j in range(cols):
            s = None
            for t in range(k):
                term = A[i][t] * B_[t][j]
                s = term if s is None else s + term
            row.append(s)
        out.append(row)
    return out


def curvature(T: ClassicalTriple, i: int, j: int) -> tuple[list[list[Poly]], Poly] | None:
    """Scaled curvature ``den * R(Y_i, Y_j)`` in the complement frame, or ``None`` if F is not closed."""
    n, m = T.n, T.quotient_rank
    Yi, Yj = T.F[i], T.F[j]
    Ni, Nj = T.nabla[i], T.nabla[j]
    br = base_bracket(Yi, Yj)
    sol = decompose_section(br, T.F, n) if any(br) else None
    if any(br) and sol is None:
        return None
    den = sol.denominator if sol else Poly.one(n)
    nums = sol.numerators if sol else [Poly.zero(n)] * len(T.F)
    # nabla_Y acts on row vectors g by Y(g) + g N^Y, so the curvature matrix is
    # Yi(Nj) - Yj(Ni) + Nj Ni - Ni Nj - nabla_{[Yi,Yj]}.
    A = _mat_apply(Yi, Nj)
    Bm = _mat_apply(Yj, Ni)
    P1 = _mat_mul(Nj, Ni) if m else []
    P2 = _mat_mul(Ni, Nj) if m else []
    R = []
    for a in range(m):
        row = []
        for b in range(m):
            v = (A[a][b] - Bm[a][b] + P1[a][b] - P2[a][b]) * den
            for k, h in enumerate(nums):
                if h:
                    v = v - h * T.nabla[k][a][b]
            row.append(v)
        R.append(row)
    return R, den


def nabla_flat(T: ClassicalTriple, points=None) -> CheckResult:
    for i in range(len(T.F)):
        for j in range(i + 1, len(T.F)):
            res = curvature(T, i, j)
            if res is None:
                return CheckResult("nabla_flat", False, {"pair": [i + 1, j + 1], "reason": "F is not involutive"})
            R, _ = res
            if any(p for row in R for p in row):
                return CheckResult("nabla_flat", False, {"pair": [i + 1, j + 1], "curvature": _mat_str(R)})
    return CheckResult("nabla_flat", True)


def covariant_derivative(T: ClassicalTriple, k: int, s: Sequence[Poly]) -> tuple[tuple[Poly, ...], Poly] | None:
    """nabla_{F_k}(s mod B) in complement coordinates, as (numerators, denominator)."""
    n = T.n
    sol = decompose_section(s, T.frame_matrix(), n)
    if sol is None:
        return None
    nb = len(T.B)
    gamma = sol.numerators[nb:]
    den = sol.denominator
    Y = T.F[k]
    N = T.nabla[k]
    m = T.quotient_rank
    out = []
    for b in range(m):
        # Y(g/den) = (Y(g) den - g Y(den)) / den^2
        v = apply_base_field(Y, gamma[b]) * den - gamma[b] * apply_base_field(Y, den)
        for a in range(m):
            if gamma[a] and N[a][b]:
                v = v + gamma[a] * N[a][b] * den
        out.append(v)
    return tuple(out), den * den


def is_flat_section(T: ClassicalTriple, s: Sequence[Poly]) -> bool:
    for k in range(len(T.F)):
        res = covariant_derivative(T, k, s)
        if res is None or any(res[0]):
            return False
    return True


def _frame_inverse(P: Sequence[Sequence[Poly]], n: int) -> list[list[Poly]]:
    inv = inverse_matrix(P, n)
    if inv is None:
        raise FrameError("the sections are linearly dependent")
    N, d = inv
    try:
        return [[p.divexact(d) for p in row] for row in N]
    except ArithmeticError as exc:
        raise FrameError(f"the frame is not invertible over polynomials (determinant factor {d})") from exc


def lift_generators(T: ClassicalTriple, flat: Sequence[Section]) -> list[VectorField]:
    """Degree 0 lifts X0 of each F generator killing the frame B + flat lifts."""
    n, r = T.n, T.r
    P = [list(s) for s in T.B] + [list(s) for s in flat]
    if len(P) != r:
        raise FrameError("B together with the flat sections must have r elements")
    inv = inverse_matrix(P, n)
    if inv is None:
        raise FrameError("B together with the flat sections is not a frame")
    Ninv, d = inv
    lifts = []
    for Y in T.F:
        YP = [[apply_base_field(Y, p) for p in row] for row in P]
        prod = _mat_mul(Ninv, YP)
        try:
            M = [[p.divexact(d) for p in row] for row in prod]
        except ArithmeticError as exc:
            raise FrameError("the lift of an F generator has non-polynomial coefficients") from exc
        from .algebroid import CDORep, degree0_from_cdo
        lifts.append(degree0_from_cdo(CDORep(n, r, tuple(Y), tuple(tuple(row) for row in M))))
    return lifts


def classical_to_dist(T: ClassicalTriple, flat_frame: Sequence[Section] | None = None,
                      points=None, samples: int = 8, seed: int = 0) -> Distribution:
    """Distribution with D_-1 = B and D_0 spanned by frame-killing lifts of F."""
    n, r = T.n, T.r
    flat = flat_frame if flat_frame is not None else T.flat_frame
    if flat is None:
        from .reduction import flat_frame_solve
        flat = flat_frame_solve(T)
    flat = [tuple(s) for s in flat]
    for s in flat:
        if not is_flat_section(T, s):
            raise ClassicalDataError("a supplied frame section is not flat", {"section": _sec_str(s)})
    lifts = lift_generators(T, flat)
    gens = [VectorField.section(n, r, b) for b in T.B] + lifts
    labels = [f"b{k + 1}" for k in range(len(T.B))] + [f"lift{k + 1}" for k in range(len(lifts))]
    return dist_validate(gens, n, r, labels, points=points, samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# Taylor expansion of degree 1 fields


@dataclass
class TaylorExpansion:
    X: list[VectorField]
    b: dict[tuple[int, int], VectorField]
    coframe: list[GradedFunction]
    reassembled: VectorField
    ok: bool


def taylor_expand_degree1(P: VectorField, frame: Sequence[Sequence[Poly]]) -> TaylorExpansion:
    """P = sum_i xi'_i X^i + 1/2 sum_{i,k} xi'_i xi'_k b^{ik} with X^i = [P, a_i], b^{ik} = [[P, a_i], a_k]."""
    if P and P.degree != 1:
        raise DegreeError(f"expected a degree 1 field, got degree {P.degree}")
    n, r = P.n, P.r
    frame = [tuple(s) for s in frame]
    if len(frame) != r:
        raise FrameError(f"a frame has {r} sections")
    G = _frame_inverse(frame, n)
    coframe = []
    for i in range(r):
        f = GradedFunction.zero(n, r)
        for beta in range(r):
            if G[beta][i]:
                f = f + GradedFunction.from_poly(G[beta][i], r, (beta,))
        coframe.append(f)
    fields = [VectorField.section(n, r, s) for s in frame]
    X = [vf_commutator(P, a) for a in fields]
    b = {}
    for i in range(r):
        for k in range(r):
            b[(i, k)] = vf_commutator(X[i], fields[k])
    total = VectorField.zero(n, r)
    half = Fraction(1, 2)
    for i in range(r):
        total = total + coframe[i] * X[i]
        for k in range(r):
            if b[(i, k)]:
                total = total + (coframe[i] * coframe[k]).scale(half) * b[(i, k)]
    return TaylorExpansion(X, b, coframe, total, total == P)


def scalar_section(n: int, values: Sequence) -> Section:
    return tuple(Poly.const(n, as_scalar(v)) for v in values)
