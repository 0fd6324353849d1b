"""Strict Lie 2-algebras and their actions (mu, eta) on E[1].

``L = L_-1 (+) L_0`` with bases ``w_1..w_p`` and ``e_1..e_q``.  The structure
is a differential ``delta(w_a) = sum_i delta[a][i] e_i``, a Lie bracket
``[e_i, e_j] = sum_k bracket[i][j][k] e_k`` and a module structure
``[e_i, w_a] = sum_b module[i][a][b] w_b``; ``[w_a, e_i] = -[e_i, w_a]``.

An action assigns degree 0 fields to the ``e_i``, degree -1 fields to the
``w_a`` and degree -1 fields ``eta(e_i ^ e_j)`` (i < j) to pairs; ``eta`` is
extended antisymmetrically and bilinearly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .algebroid import extract_algebroid
from .distributions import (Distribution, dist_is_involutive, dist_is_q_invariant, dist_validate,
                            generator_pairs, module_membership, sample_points)
from .imfoliation import anchor_vector, base_field_str
from .linalg import rank_rational
from .polynomial import SignatureError, as_scalar
from .reduction import QuotientResult, ReductionSetting, reduce
from .report import CheckResult
from .vector_fields import DegreeError, VectorField, vf_commutator

Vec = tuple[Fraction, ...]


class ActionError(ValueError):
    pass


def _zeros(k: int) -> list[Fraction]:
    return [Fraction(0)] * k


@dataclass
class StrictLie2Algebra:
    m1: int
    m0: int
    delta: tuple[Vec, ...]
    bracket: tuple[tuple[Vec, ...], ...]
    module: tuple[tuple[Vec, ...], ...]

    @classmethod
    def from_entries(cls, m1: int, m0: int, delta: Mapping[tuple[int, int], object] | None = None,
                     bracket: Mapping[tuple[int, int, int], object] | None = None,
                     module: Mapping[tuple[int, int, int], object] | None = None) -> "StrictLie2Algebra":
        """Sparse 0-based entries; bracket entries are antisymmetrized."""
        d = [_zeros(m0) for _ in range(m1)]
        for (a, i), v in (delta or {}).items():
            d[a][i] = as_scalar(v)
        b = [[_zeros(m0) for _ in range(m0)] for _ in range(m0)]
        for (i, j, k), v in (bracket or {}).items():
            v = as_scalar(v)
            if i == j and v:
                raise ValueError("the bracket of a basis element with itself must vanish")
            for (p, q, s) in ((i, j, v), (j, i, -v)):
                if b[p][q][k] and b[p][q][k] != s:
                    raise ValueError(f"conflicting values for bracket[{p + 1},{q + 1},{k + 1}]")
                b[p][q][k] = s
        mod = [[_zeros(m1) for _ in range(m1)] for _ in range(m0)]
        for (i, a, c), v in (module or {}).items():
            mod[i][a][c] = as_scalar(v)
        return cls(m1, m0, tuple(tuple(r) for r in d), tuple(tuple(tuple(v) for v in row) for row in b),
                   tuple(tuple(tuple(v) for v in row) for row in mod))

    @classmethod
    def lie_algebra(cls, m0: int, bracket=None) -> "StrictLie2Algebra":
        return cls.from_entries(0, m0, bracket=bracket)

    # linear operations on coordinate vectors
    def br00(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vec:
        out = _zeros(self.m0)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in enumerate(self.bracket[i][j]):
                    if c:
                        out[k] += xi * yj * c
        return tuple(out)

    def br0m(self, x: Sequence[Fraction], w: Sequence[Fraction]) -> Vec:
        """[x, w] for x in L_0 and w in L_-1."""
        out = _zeros(self.m1)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for a, wa in enumerate(w):
                if not wa:
                    continue
                for b, c in enumerate(self.module[i][a]):
                    if c:
                        out[b] += xi * wa * c
        return tuple(out)

    def d(self, w: Sequence[Fraction]) -> Vec:
        out = _zeros(self.m0)
        for a, wa in enumerate(w):
            if wa:
                for i, c in enumerate(self.delta[a]):
                    out[i] += wa * c
        return tuple(out)

    def e(self, i: int) -> Vec:
        return tuple(Fraction(1 if k == i else 0) for k in range(self.m0))

    def w(self, a: int) -> Vec:
        return tuple(Fraction(1 if k == a else 0) for k in range(self.m1))

    def check_axioms(self) -> list[CheckResult]:
        checks = []
        wit = None
        for i, j, k in combinations(range(self.m0), 3):
            x, y, z = self.e(i), self.e(j), self.e(k)
            t = [self.br00(x, self.br00(y, z)), self.br00(y, self.br00(z, x)), self.br00(z, self.br00(x, y))]
            s = tuple(a + b + c for a, b, c in zip(*t))
            if any(s):
                wit = {"triple": [f"e{i + 1}", f"e{j + 1}", f"e{k + 1}"], "value": [str(v) for v in s]}
                break
        checks.append(CheckResult("jacobi", wit is None, wit))
        wit = None
        for i in range(self.m0):
            for j in range(self.m0):
                for a in range(self.m1):
                    x, y, w = self.e(i), self.e(j), self.w(a)
                    lhs = tuple(p - q for p, q in zip(self.br0m(x, self.br0m(y, w)), self.br0m(y, self.br0m(x, w))))
                    rhs = self.br0m(self.br00(x, y), w)
                    if lhs != rhs:
                        wit = {"elements": [f"e{i + 1}", f"e{j + 1}", f"w{a + 1}"]}
                        break
                if wit:
                    break
            if wit:
                break
        checks.append(CheckResult("module", wit is None, wit))
        wit = None
        for i in range(self.m0):
            for a in range(self.m1):
                x, w = self.e(i), self.w(a)
                if self.d(self.br0m(x, w)) != self.br00(x, self.d(w)):
                    wit = {"elements": [f"e{i + 1}", f"w{a + 1}"]}
                    break
            if wit:
                break
        checks.append(CheckResult("differential_equivariant", wit is None, wit))
        wit = None
        for a in range(self.m1):
            for b in range(a, self.m1):
                wa, wb = self.w(a), self.w(b)
                s = tuple(p + q for p, q in zip(self.br0m(self.d(wa), wb), self.br0m(self.d(wb), wa)))
                if any(s):
                    wit = {"elements": [f"w{a + 1}", f"w{b + 1}"]}
                    break
            if wit:
                break
        checks.append(CheckResult("differential_leibniz", wit is None, wit))
        return checks

    def describe(self) -> dict:
        return {"dim_minus1": self.m1, "dim0": self.m0,
                "delta": [[str(v) for v in row] for row in self.delta],
                "bracket": {f"{i + 1},{j + 1},{k + 1}": str(c) for i in range(self.m0) for j in range(self.m0)
                            for k, c in enumerate(self.bracket[i][j]) if c and i < j},
                "module": {f"{i + 1},{a + 1},{b + 1}": str(c) for i in range(self.m0) for a in range(self.m1)
                           for b, c in enumerate(self.module[i][a]) if c}}


@dataclass
class Lie2Action:
    L: StrictLie2Algebra
    n: int
    r: int
    mu0: tuple[VectorField, ...]
    mu1: tuple[VectorField, ...]
    eta_pairs: dict[tuple[int, int], VectorField] = field(default_factory=dict)

    def __post_init__(self):
        self.mu0, self.mu1 = tuple(self.mu0), tuple(self.mu1)
        if len(self.mu0) != self.L.m0 or len(self.mu1) != self.L.m1:
            raise ActionError("mu needs one field per basis element of L_0 and of L_-1")
        for X in self.mu0:
            self._sig(X)
            if X and X.degree != 0:
                raise DegreeError("mu on L_0 must take degree 0 values")
        for X in self.mu1:
            self._sig(X)
            if X and X.degree != -1:
                raise DegreeError("mu on L_-1 must take degree -1 values")
        clean = {}
        for (i, j), X in self.eta_pairs.items():
            self._sig(X)
            if X and X.degree != -1:
                raise DegreeError("eta must take degree -1 values")
            if i == j:
                if X:
                    raise ActionError("eta(e ^ e) must vanish")
                continue
            key, val = ((i, j), X) if i < j else ((j, i), -X)
            if key in clean and clean[key] != val:
                raise ActionError(f"conflicting values for eta[e{key[0] + 1}^e{key[1] + 1}]")
            clean[key] = val
        self.eta_pairs = clean

    def _sig(self, X: VectorField) -> None:
        if (X.n, X.r) != (self.n, self.r):
            raise SignatureError("action field lives on a different signature")

    def zero_field(self) -> VectorField:
        return VectorField.zero(self.n, self.r)

    def mu_0(self, x: Sequence[Fraction]) -> VectorField:
        out = self.zero_field()
        for c, X in zip(x, self.mu0):
            if c:
                out = out + X.scale(c)
        return out

    def mu_1(self, w: Sequence[Fraction]) -> VectorField:
        out = self.zero_field()
        for c, X in zip(w, self.mu1):
            if c:
                out = out + X.scale(c)
        return out

    def eta_basis(self, i: int, j: int) -> VectorField:
        if i == j:
            return self.zero_field()
        if i < j:
            return self.eta_pairs.get((i, j), self.zero_field())
        return -self.eta_pairs.get((j, i), self.zero_field())

    def eta(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> VectorField:
        out = self.zero_field()
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj and i != j:
                    out = out + self.eta_basis(i, j).scale(xi * yj)
        return out

    def without_eta(self) -> "Lie2Action":
        return Lie2Action(self.L, self.n, self.r, self.mu0, self.mu1, {})


def _diff_witness(label: str, lhs: VectorField, rhs: VectorField) -> dict:
    return {"elements": label, "lhs": str(lhs), "rhs": str(rhs), "difference": str(lhs - rhs)}


def action_check_constraints(phi: Lie2Action, Q: VectorField) -> list[CheckResult]:
    """The four constraints making (mu, eta) an L-infinity morphism, on basis tuples."""
    L = phi.L
    checks = []
    wit = None
    for a in range(L.m1):
        lhs = vf_commutator(Q, phi.mu1[a])
        rhs = phi.mu_0(L.d(L.w(a)))
        if lhs != rhs:
            wit = _diff_witness(f"w{a + 1}", lhs, rhs)
            break
    if wit is None:
        for i in range(L.m0):
            lhs = vf_commutator(Q, phi.mu0[i])
            if lhs:
                wit = _diff_witness(f"e{i + 1}", lhs, phi.zero_field())
                break
    checks.append(CheckResult("constr1", wit is None, wit))

    wit = None
    for i, j in combinations(range(L.m0), 2):
        x, y = L.e(i), L.e(j)
        lhs = phi.mu_0(L.br00(x, y)) - vf_commutator(phi.mu0[i], phi.mu0[j])
        rhs = vf_commutator(Q, phi.eta_basis(i, j))
        if lhs != rhs:
            wit = _diff_witness(f"e{i + 1},e{j + 1}", lhs, rhs)
            break
    checks.append(CheckResult("constr2", wit is None, wit))

    wit = None
    for a in range(L.m1):
        for i in range(L.m0):
            x, w = L.e(i), L.w(a)
            wx = tuple(-v for v in L.br0m(x, w))
            lhs = phi.mu_1(wx) - vf_commutator(phi.mu1[a], phi.mu0[i])
            rhs = phi.eta(L.d(w), x)
            if lhs != rhs:
                wit = _diff_witness(f"w{a + 1},e{i + 1}", lhs, rhs)
                break
        if wit:
            break
    checks.append(CheckResult("constr3", wit is None, wit))

    wit = None
    for i, j, k in combinations(range(L.m0), 3):
        x, y, z = L.e(i), L.e(j), L.e(k)
        total = (phi.eta(x, L.br00(y, z)) - phi.eta(y, L.br00(x, z)) + phi.eta(z, L.br00(x, y))
                 + vf_commutator(phi.mu0[i], phi.eta_basis(j, k))
                 - vf_commutator(phi.mu0[j], phi.eta_basis(i, k))
                 + vf_commutator(phi.mu0[k], phi.eta_basis(i, j)))
        if total:
            wit = _diff_witness(f"e{i + 1},e{j + 1},e{k + 1}", total, phi.zero_field())
            break
    checks.append(CheckResult("constr4", wit is None, wit))
    return checks


def action_generators(phi: Lie2Action, Q: VectorField, completed: bool = True) -> list[tuple[str, VectorField]]:
    """Labelled generators mu(L_-1), mu(L_0), eta(pairs) and, if completed, [Q, eta(pairs)]."""
    L = phi.L
    out = [(f"mu(w{a + 1})", X) for a, X in enumerate(phi.mu1)]
    out += [(f"mu(e{i + 1})", X) for i, X in enumerate(phi.mu0)]
    pairs = list(combinations(range(L.m0), 2))
    out += [(f"eta(e{i + 1}^e{j + 1})", phi.eta_basis(i, j)) for i, j in pairs]
    if completed:
        out += [(f"dQ eta(e{i + 1}^e{j + 1})", vf_commutator(Q, phi.eta_basis(i, j))) for i, j in pairs]
    return [(label, X) for label, X in out if X]


def action_distribution(phi: Lie2Action, Q: VectorField, completed: bool = True, points=None,
                        samples: int = 8, seed: int = 0) -> Distribution:
    gens = action_generators(phi, Q, completed)
    return dist_validate([g for _, g in gens], phi.n, phi.r, [lab for lab, _ in gens],
                         points=points, samples=samples, seed=seed)


def action_closure_check(D: Distribution, Q: VectorField | None = None) -> list[CheckResult]:
    """[D_0, D_-1] in D_-1 on generators; when it holds, also involutivity and [Q, D] in D."""
    wit, data = None, {}
    for i, j in generator_pairs(D):
        if D.generators[j].degree != -1:
            continue
        V = vf_commutator(D.generators[i], D.generators[j])
        if not module_membership(V, D):
            wit = {"pair": [D.labels[i], D.labels[j]], "bracket": str(V), "claim": "not_in_distribution"}
            data = {"bracket": V, "pair": (i, j)}
            break
    checks = [CheckResult("closure", wit is None, wit, data)]
    if wit is None:
        checks.append(dist_is_involutive(D))
        if Q is not None:
            checks.append(dist_is_q_invariant(D, Q))
    return checks


@dataclass
class ActionQuotient:
    result: QuotientResult
    ideal_system: dict


def action_quotient(phi: Lie2Action, Q: VectorField, setting: ReductionSetting | None = None,
                    points=None) -> ActionQuotient:
    D = action_distribution(phi, Q, points=points)
    closure = action_closure_check(D, Q)
    if not all(c.ok for c in closure):
        bad = next(c for c in closure if not c.ok)
        raise ActionError(f"the completed distribution fails {bad.name}: {bad.witness}")
    if not D.certified:
        raise ActionError("the completed module is not a distribution")
    res = reduce(Q, D, setting)
    A = extract_algebroid(Q)
    n, r = phi.n, phi.r
    L = phi.L
    Bsecs = [X for X in phi.mu1 if X] + [phi.eta_basis(i, j) for i, j in combinations(range(L.m0), 2)
                                         if phi.eta_basis(i, j)]
    B = [str(X) for X in Bsecs]
    F = [str(VectorField.base_field(n, r, [f.base_part() for f in X.even])) for X in phi.mu0 if X]
    for X in Bsecs:
        if X.degree == -1:
            v = anchor_vector(A, [f.base_part() for f in X.odd])
            if any(v):
                F.append(base_field_str(n, r, v))
    return ActionQuotient(res, {"B": B, "F": F})


def strict_action_check(phi: Lie2Action, Q: VectorField, points=None) -> list[CheckResult]:
    """Strict DGLA morphism checks (eta = 0) and almost-freeness at sample points."""
    if phi.eta_pairs and any(phi.eta_pairs.values()):
        raise ActionError("a strict action has eta = 0")
    checks = [c for c in action_check_constraints(phi, Q) if c.name != "constr4"]
    pts = points if points is not None else sample_points(phi.n)
    rows_fn = list(phi.mu1) + list(phi.mu0)
    k = len(rows_fn)
    wit = None
    for p in pts:
        rows = []
        for X in rows_fn:
            tan = [f.base_part().evaluate(p) if X and X.degree == 0 else Fraction(0) for f in X.even]
            fib = [f.base_part().evaluate(p) if X and X.degree == -1 else Fraction(0) for f in X.odd]
            rows.append(tan + fib)
        if k and rank_rational(rows) < k:
            wit = {"point": [str(v) for v in p], "rank": rank_rational(rows), "dim": k}
            break
    checks.append(CheckResult("almost_free", wit is None, wit))
    return checks

