"""Invariant functions and quotient NQ-1 manifolds.

Two settings are supported.

* ``point_body``: the body is a point, so C(E[1]) is finite dimensional and
  invariants are computed completely.  Singular modules (not distributions)
  are handled here too: the invariant algebra and the action of Q on it are
  reported, with the degrees of its algebra generators.
* ``adapted_chart``: F is spanned by the coordinate fields ``d/dx_i`` for
  ``i`` in ``F_coords``.  The remaining coordinates ``y`` and the coframe dual
  to a nabla-flat frame of E/B are the coordinates of the quotient.

The reduced field is obtained by restricting Q to invariants and rewriting it
in the reduced coordinates; its algebroid is read off with the derived
bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebroid import LieAlgebroidData, extract_algebroid
from .distributions import (CERTIFIED, ClassicalDataError, ClassicalTriple, Distribution,
                            FrameError, _frame_inverse, _mat_mul, decompose_section,
                            dist_is_involutive, dist_is_q_invariant, dist_to_classical,
                            is_flat_section)
from .graded import GradedFunction, odd_monomials
from .linalg import SparseRowReducer, canonical_basis, rank_over_fractions, solve_rational
from .polynomial import Poly
from .report import CheckResult
from .vector_fields import VectorField, vf_is_homological

POINT_BODY = "point_body"
ADAPTED_CHART = "adapted_chart"


class ReductionError(ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness


class FlatFrameError(ValueError):
    pass


@dataclass
class ReductionSetting:
    mode: str | None = None
    F_coords: tuple[int, ...] | None = None
    flat_frame: tuple[tuple[Poly, ...], ...] | None = None
    max_xi_degree: int | None = None
    max_base_degree: int = 6

    def resolved_mode(self, n: int) -> str:
        mode = self.mode or (POINT_BODY if n == 0 else ADAPTED_CHART)
        if mode not in (POINT_BODY, ADAPTED_CHART):
            raise ReductionError(f"unknown reduction mode {mode!r}")
        if mode == POINT_BODY and n != 0:
            raise ReductionError("point_body mode needs a body of dimension 0; use adapted_chart")
        return mode


# ---------------------------------------------------------------------------
# invariant functions


def _exponents_upto(n: int, d: int) -> list[tuple[int, ...]]:
    out = []

    def rec(prefix, left, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k, slots - 1)

    rec([], d, n)
    return sorted(out, key=lambda e: (sum(e), tuple(-v for v in e)))


@dataclass
class InvariantBasis:
    functions: list[GradedFunction]
    max_xi_degree: int
    max_base_degree: int
    complete: bool

    def by_degree(self) -> dict[int, list[GradedFunction]]:
        out: dict[int, list[GradedFunction]] = {}
        for f in self.functions:
            out.setdefault(f.degree() or 0, []).append(f)
        return out

    def describe(self) -> dict:
        return {"basis": [str(f) for f in self.functions], "max_xi_degree": self.max_xi_degree,
                "max_base_degree": self.max_base_degree, "complete": self.complete}


def invariant_functions(D: Distribution, setting: ReductionSetting | None = None,
                        max_xi_degree: int | None = None,
                        max_base_degree: int | None = None) -> InvariantBasis:
    """Basis of the functions killed by every generator, up to the cutoffs.

    Each xi-degree is an exact kernel computation over Q on the space of
    functions with polynomial coefficients of degree at most the base cutoff.
    The basis is the reduced echelon form with simplest monomials as pivots.
    """
    setting = setting or ReductionSetting()
    n, r = D.n, D.r
    K = max_xi_degree if max_xi_degree is not None else (setting.max_xi_degree if setting.max_xi_degree is not None else r)
    K = min(K, r)
    bdeg = max_base_degree if max_base_degree is not None else setting.max_base_degree
    if n == 0:
        bdeg = 0
    exps = _exponents_upto(n, bdeg)
    gens = [g for g in D.generators if g]
    out: list[GradedFunction] = []
    for k in range(K + 1):
        cols = [(m, e) for e in exps for m in odd_monomials(r, k)]
        cols.sort(key=lambda c: (sum(c[1]), c[0], tuple(-v for v in c[1])))
        rows: dict[tuple, dict[int, Fraction]] = {}
        for ci, (m, e) in enumerate(cols):
            f = GradedFunction._raw(n, r, {(m, e): Fraction(1)})
            for gi, g in enumerate(gens):
                img = g(f)
                for key, c in img.terms.items():
                    rows.setdefault((gi, key), {})[ci] = c
        red = SparseRowReducer()
        for row in rows.values():
            red.add(row)
        kernel = canonical_basis(red.nullspace(len(cols)))
        for vec in kernel:
            out.append(GradedFunction(n, r, {cols[ci]: c for ci, c in vec.items()}))
    complete = n == 0 and K == r
    return InvariantBasis(out, K, bdeg, complete)


def _vectorize(fs: Sequence[GradedFunction]):
    keys = sorted({k for f in fs for k in f.terms})
    index = {k: i for i, k in enumerate(keys)}
    return index, [[f.terms.get(k, Fraction(0)) for k in keys] for f in fs]


def express_in_basis(f: GradedFunction, basis: Sequence[GradedFunction]) -> list[Fraction] | None:
    """Constant coefficients of f in the given functions, or None."""
    if not f:
        return [Fraction(0)] * len(basis)
    if not basis:
        return None
    keys = sorted({k for b in basis for k in b.terms} | set(f.terms))
    rows = [[b.terms.get(k, Fraction(0)) for b in basis] for k in keys]
    rhs = [f.terms.get(k, Fraction(0)) for k in keys]
    return solve_rational(rows, rhs)


def generator_degrees(basis: InvariantBasis) -> dict[int, int]:
    """Number of algebra generators of the invariant algebra in each positive xi-degree."""
    by = basis.by_degree()
    out = {}
    for k in sorted(by):
        if k == 0:
            continue
        products = []
        for i in range(1, k):
            for f in by.get(i, []):
                for g in by.get(k - i, []):
                    p = f * g
                    if p:
                        products.append(p)
        mine = by[k]
        if products:
            index, rows = _vectorize(mine + products)
            red = SparseRowReducer()
            for row in rows[len(mine):]:
                red.add({j: v for j, v in enumerate(row) if v})
            decomp = red.rank
            total = SparseRowReducer()
            for row in rows:
                total.add({j: v for j, v in enumerate(row) if v})
            count = total.rank - decomp
        else:
            count = len(mine)
        if count:
            out[k] = count
    return out


# ---------------------------------------------------------------------------
# flat frames


def _coordinate_connections(T: ClassicalTriple, S: Sequence[int]) -> list[list[list[Poly]]]:
    n = T.n
    m = T.quotient_rank
    out = []
    for i in S:
        e = tuple(Poly.const(n, 1 if a == i else 0) for a in range(n))
        sol = decompose_section(e, T.F, n)
        if sol is None or not sol.is_polynomial():
            raise FlatFrameError(f"d/dx{i + 1} is not a polynomial combination of the F generators")
        h = sol.polynomial_values()
        N = [[Poly.zero(n) for _ in range(m)] for _ in range(m)]
        for k, hk in enumerate(h):
            if hk:
                for a in range(m):
                    for b in range(m):
                        N[a][b] = N[a][b] + hk * T.nabla[k][a][b]
        out.append(N)
    return out


def adapted_coordinates(T: ClassicalTriple, points=None) -> list[int]:
    """Indices S with F = span{d/dx_i : i in S}; raises if F is not of that form."""
    from .distributions import in_span, sample_points
    n = T.n
    pts = points if points is not None else sample_points(n)
    S = []
    for i in range(n):
        e = tuple(Poly.const(n, 1 if a == i else 0) for a in range(n))
        if in_span(e, T.F, n, pts):
            S.append(i)
    rank = rank_over_fractions([list(v) for v in T.F], n) if T.F else 0
    if len(S) != rank:
        raise FlatFrameError("F is not spanned by coordinate fields in this chart; change coordinates "
                             "or supply F_coords and a flat frame")
    for v in T.F:
        if any(v[a] for a in range(n) if a not in S):
            raise FlatFrameError("F is not spanned by coordinate fields in this chart")
    return S


def check_adapted(T: ClassicalTriple, S: Sequence[int], points=None) -> None:
    from .distributions import in_span, sample_points
    n = T.n
    pts = points if points is not None else sample_points(n)
    coord = [tuple(Poly.const(n, 1 if a == i else 0) for a in range(n)) for i in S]
    for i, e in zip(S, coord):
        if not in_span(e, T.F, n, pts):
            raise ReductionError(f"d/dx{i + 1} is not in F; F_coords does not describe F")
    for k, v in enumerate(T.F):
        if not in_span(v, coord, n, pts):
            raise ReductionError(f"F generator {k + 1} is not in the span of the F_coords fields")


def _radial_integral(p: Poly, S: Sequence[int]) -> Poly:
    out = {}
    for e, c in p.items():
        d = sum(e[i] for i in S)
        if d == 0:
            raise FlatFrameError("unexpected term without F-coordinates in the radial integral")
        out[e] = c / d
    return Poly(p.nvars, out)


def flat_frame_solve(T: ClassicalTriple, F_coords: Sequence[int] | None = None,
                     max_steps: int = 64) -> list[tuple[Poly, ...]]:
    """Lifts of a nabla-flat frame of E/B with value the complement frame on {x_F = 0}.

    Zero connection matrices give the complement itself.  Otherwise F must be
    a coordinate distribution; the frame matrix E solves d_i E = -E N^i and is
    found by Picard iteration along rays, which terminates exactly when the
    solution is polynomial (e.g. nilpotent constant matrices).
    """
    n, m = T.n, T.quotient_rank
    comp = [list(s) for s in T.complement]
    if all(not p for M in T.nabla for row in M for p in row) or m == 0:
        return [tuple(s) for s in comp]
    S = list(F_coords) if F_coords is not None else adapted_coordinates(T)
    Ns = _coordinate_connections(T, S)
    ident = [[Poly.const(n, 1 if a == b else 0) for b in range(m)] for a in range(m)]
    drive = [[Poly.zero(n) for _ in range(m)] for _ in range(m)]
    for i, N in zip(S, Ns):
        xi = Poly.var(n, i)
        for a in range(m):
            for b in range(m):
                if N[a][b]:
                    drive[a][b] = drive[a][b] + xi * N[a][b]
    E = ident
    for _ in range(max_steps):
        H = _mat_mul(E, drive)
        nxt = [[ident[a][b] - _radial_integral(H[a][b], S) for b in range(m)] for a in range(m)]
        if nxt == E:
            break
        E = nxt
        if max(p.total_degree() for row in E for p in row) > 4 * max_steps:
            break
    else:
        raise FlatFrameError("no polynomial flat frame found; supply flat_frame explicitly")
    for i, N in zip(S, Ns):
        EN = _mat_mul(E, N)
        for a in range(m):
            for b in range(m):
                if E[a][b].diff(i) + EN[a][b]:
                    raise FlatFrameError("no polynomial flat frame found; supply flat_frame explicitly")
    out = []
    for a in range(m):
        s = [Poly.zero(n) for _ in range(T.r)]
        for c in range(m):
            if E[a][c]:
                for k in range(T.r):
                    if comp[c][k]:
                        s[k] = s[k] + E[a][c] * comp[c][k]
        out.append(tuple(s))
    return out


# ---------------------------------------------------------------------------
# reduction


@dataclass
class QuotientResult:
    mode: str
    algebroid: LieAlgebroidData | None
    q_reduced: VectorField | None
    embedding: dict[str, GradedFunction]
    frame: list[tuple[Poly, ...]]
    transverse: list[int]
    checks: list[CheckResult] = field(default_factory=list)
    invariants: InvariantBasis | None = None
    q_matrix: list[list[Fraction]] | None = None
    generator_degrees: dict[int, int] | None = None

    @property
    def singular(self) -> bool:
        return self.algebroid is None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def describe(self) -> dict:
        out: dict = {"mode": self.mode, "checks": [c.to_json() for c in self.checks]}
        if self.algebroid is not None:
            out["algebroid"] = self.algebroid.describe()
            out["q_reduced"] = str(self.q_reduced)
            out["embedding"] = {k: str(v) for k, v in self.embedding.items()}
            out["transverse_coordinates"] = [f"x{i + 1}" for i in self.transverse]
        if self.invariants is not None:
            out["invariants"] = self.invariants.describe()
        if self.q_matrix is not None:
            out["q_on_invariants"] = [[str(v) for v in row] for row in self.q_matrix]
        if self.generator_degrees is not None:
            out["generator_degrees"] = {str(k): v for k, v in self.generator_degrees.items()}
            degs = sorted(self.generator_degrees)
            out["summary"] = "invariants generated in degree " + ", ".join(str(d) for d in degs) if degs \
                else "invariants are constants"
        return out


def reduce(Q: VectorField, D: Distribution, setting: ReductionSetting | None = None) -> QuotientResult:
    setting = setting or ReductionSetting()
    mode = setting.resolved_mode(D.n)
    inv = dist_is_involutive(D)
    if not inv:
        raise ReductionError("the distribution is not involutive", inv.witness)
    qi = dist_is_q_invariant(D, Q)
    if not qi:
        raise ReductionError("the distribution is not preserved by [Q, -]", qi.witness)
    if D.status != CERTIFIED:
        if mode == POINT_BODY:
            return _singular_point_reduce(Q, D, setting, [inv, qi])
        raise ReductionError("the module is not a certified distribution; only point bodies support singular modules",
                             D.describe())
    return _regular_reduce(Q, D, setting, mode, [inv, qi])


def _singular_point_reduce(Q, D, setting, checks) -> QuotientResult:
    basis = invariant_functions(D, setting)
    rows = []
    ok, wit = True, None
    for f in basis.functions:
        coeffs = express_in_basis(Q(f), basis.functions)
        if coeffs is None:
            ok, wit = False, {"function": str(f), "image": str(Q(f)), "claim": "not_invariant"}
            break
        rows.append(coeffs)
    checks = checks + [CheckResult("q_preserves_invariants", ok, wit)]
    if not ok:
        raise ReductionError("Q does not preserve the invariant functions", wit)
    degs = generator_degrees(basis)
    vanishes = all(not v for row in rows for v in row)
    checks.append(CheckResult("q_reduced_vanishes" if vanishes else "q_reduced_square_zero", True))
    return QuotientResult(POINT_BODY, None, None, {}, [], [], checks, basis, rows, degs)


def _regular_reduce(Q, D, setting, mode, checks) -> QuotientResult:
    n, r = D.n, D.r
    try:
        T, extra = dist_to_classical(D, check_involutive=False)
    except ClassicalDataError as exc:
        raise ReductionError(str(exc), exc.witness) from exc
    checks = checks + extra
    if mode == POINT_BODY:
        S: list[int] = []
    elif setting.F_coords is not None:
        S = sorted(setting.F_coords)
        check_adapted(T, S, D.points)
    else:
        try:
            S = adapted_coordinates(T, D.points)
        except FlatFrameError as exc:
            raise ReductionError(str(exc)) from exc
    if setting.flat_frame is not None:
        flat = [tuple(s) for s in setting.flat_frame]
    else:
        try:
            flat = flat_frame_solve(T, S)
        except FlatFrameError as exc:
            raise ReductionError(str(exc)) from exc
    bad = [s for s in flat if not is_flat_section(T, s)]
    checks.append(CheckResult("flat_frame", not bad, {"claim": "not_flat"} if bad else None))
    if bad:
        raise ReductionError("the flat frame is not flat")
    k, m = len(T.B), len(flat)
    try:
        G = _frame_inverse([list(b) for b in T.B] + [list(s) for s in flat], n)
    except FrameError as exc:
        raise ReductionError(str(exc)) from exc
    transverse = [i for i in range(n) if i not in S]
    nn = len(transverse)
    y_img = [GradedFunction.x(n, r, t) for t in transverse]
    eta_img = []
    for j in range(m):
        f = GradedFunction.zero(n, r)
        for beta in range(r):
            if G[beta][k + j]:
                f = f + GradedFunction.from_poly(G[beta][k + j], r, (beta,))
        eta_img.append(f)
    embedding = {f"y{a + 1}": y for a, y in enumerate(y_img)}
    embedding.update({f"eta{j + 1}": e for j, e in enumerate(eta_img)})

    wit = None
    for label, g in zip(D.labels, D.generators):
        for name, z in embedding.items():
            if g(z):
                wit = {"generator": label, "function": name, "image": str(g(z))}
                break
        if wit:
            break
    checks.append(CheckResult("embedding_invariant", wit is None, wit))
    if wit:
        raise ReductionError("the reduced coordinates are not invariant", wit)

    s_fields = [VectorField.section(n, r, s) for s in flat]
    b_fields = [VectorField.section(n, r, b) for b in T.B]
    mapping = {t: a for a, t in enumerate(transverse)}

    def to_reduced(p: Poly, what: str) -> Poly:
        try:
            return p.reindex(nn, mapping)
        except ValueError as exc:
            raise ReductionError(f"{what} depends on F-coordinates: {p}") from exc

    even = []
    for a, y in enumerate(y_img):
        q = Q(y)
        for b in b_fields:
            if b(q):
                raise ReductionError("Q(y) does not vanish on B", {"function": f"y{a + 1}"})
        f = GradedFunction.zero(nn, m)
        for j, s in enumerate(s_fields):
            c = to_reduced(s(q).base_part(), "reduced anchor")
            if c:
                f = f + GradedFunction.from_poly(c, m, (j,))
        even.append(f)
    odd = []
    for kk, eta in enumerate(eta_img):
        q = Q(eta)
        f = GradedFunction.zero(nn, m)
        for a_ in range(m):
            for b_ in range(a_ + 1, m):
                g = s_fields[b_](s_fields[a_](q)).base_part()
                c = to_reduced(g, "reduced structure function")
                if c:
                    f = f + GradedFunction.from_poly(c, m, (a_, b_))
        odd.append(f)
    Qr = VectorField(nn, m, even, odd)

    def iota(f: GradedFunction) -> GradedFunction:
        return f.substitute(y_img, eta_img, (n, r))

    wit = None
    gens_red = [GradedFunction.x(nn, m, a) for a in range(nn)] + [GradedFunction.xi(nn, m, j) for j in range(m)]
    names = [f"y{a + 1}" for a in range(nn)] + [f"eta{j + 1}" for j in range(m)]
    for name, z in zip(names, gens_red):
        lhs = Q(iota(z))
        rhs = iota(Qr(z))
        if lhs != rhs:
            wit = {"function": name, "Q_of_image": str(lhs), "image_of_reduced": str(rhs)}
            break
    checks.append(CheckResult("intertwines_q", wit is None, wit))
    if wit:
        raise ReductionError("the reduced field does not intertwine with Q", wit)
    hc = vf_is_homological(Qr)
    checks.append(CheckResult("q_reduced_homological", hc.ok,
                              None if hc.ok else {"generator": hc.witness[0], "value": str(hc.witness[1])}))
    if not hc.ok:
        raise ReductionError("the reduced field is not homological")
    A = extract_algebroid(Qr)
    return QuotientResult(mode, A, Qr, embedding, flat, transverse, checks)
