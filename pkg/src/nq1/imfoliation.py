"""IM-foliations ``(B, F, nabla)`` of a Lie algebroid and their distributions.

The space of nabla-flat sections is represented by finitely many
representatives: a flat frame ``s_1..s_m`` of E/B (lifted to E) together with
the generators of B.  Every flat section is a combination of these with
F-invariant coefficients plus a section of B, and each axiom is stable under
such combinations, so checking the representatives decides the axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebroid import LieAlgebroidData, build_q, extract_algebroid
from .distributions import (ClassicalDataError, ClassicalTriple, Distribution, base_bracket,
                            classical_to_dist, dist_is_involutive, dist_is_q_invariant,
                            dist_to_classical, f_involutive, in_span, is_flat_section, nabla_flat,
                            sample_points)
from .polynomial import Poly, SignatureError
from .report import CheckResult
from .vector_fields import VectorField


class FlatFrameUnavailable(ValueError):
    pass


def section_str(n: int, r: int, s: Sequence[Poly]) -> str:
    """A section rendered as the degree -1 field it corresponds to."""
    return str(VectorField.section(n, r, s))


def base_field_str(n: int, r: int, v: Sequence[Poly]) -> str:
    return str(VectorField.base_field(n, r, v))


def anchor_vector(A: LieAlgebroidData, s: Sequence[Poly]) -> tuple[Poly, ...]:
    out = []
    for a in range(A.n):
        v = Poly.zero(A.n)
        for i, si in enumerate(s):
            if si and A.rho[i][a]:
                v = v + si * A.rho[i][a]
        out.append(v)
    return tuple(out)


@dataclass
class IMFoliation:
    algebroid: LieAlgebroidData
    triple: ClassicalTriple
    name: str = ""
    checks: list[CheckResult] = field(default_factory=list)

    def __post_init__(self):
        A, T = self.algebroid, self.triple
        if (A.n, A.r) != (T.n, T.r):
            raise SignatureError("algebroid and classical data live on different signatures")

    @property
    def n(self) -> int:
        return self.algebroid.n

    @property
    def r(self) -> int:
        return self.algebroid.r

    def describe(self) -> dict:
        out = {"algebroid": self.algebroid.describe(), "triple": self.triple.describe()}
        if self.name:
            out["name"] = self.name
        return out


def resolve_flat_frame(I: IMFoliation) -> list[tuple[Poly, ...]]:
    T = I.triple
    if T.flat_frame is not None:
        return [tuple(s) for s in T.flat_frame]
    from .reduction import FlatFrameError, flat_frame_solve
    try:
        return flat_frame_solve(T)
    except FlatFrameError as exc:
        raise FlatFrameUnavailable(
            f"no flat frame of A/B is available ({exc}); supply flat_frame, or check the "
            "distribution side with analyze-distribution instead") from exc


def imf_check_axioms(I: IMFoliation, points=None) -> list[CheckResult]:
    """Symbolic checks of the structural conditions and axioms (i)-(iv)."""
    A, T = I.algebroid, I.triple
    n, r = A.n, A.r
    pts = points if points is not None else sample_points(n)
    flat = resolve_flat_frame(I)
    checks: list[CheckResult] = []

    bad = [k for k, s in enumerate(flat) if not is_flat_section(T, s)]
    checks.append(CheckResult("flat_frame", not bad,
                              {"section": section_str(n, r, flat[bad[0]]), "claim": "not_flat"} if bad else None))

    wit = None
    for i in range(len(T.B)):
        for j in range(i + 1, len(T.B)):
            br = A.section_bracket(T.B[i], T.B[j])
            if not in_span(br, T.B, n, pts):
                wit = {"pair": [f"b{i + 1}", f"b{j + 1}"], "bracket": section_str(n, r, br),
                       "claim": "not_in_B"}
                break
        if wit:
            break
    checks.append(CheckResult("B_subalgebroid", wit is None, wit))
    checks.append(f_involutive(T, pts))
    checks.append(nabla_flat(T, pts))

    # (i) brackets of flat representatives are flat
    reps = [(f"s{k + 1}", s) for k, s in enumerate(flat)]
    wit = None
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            br = A.section_bracket(reps[i][1], reps[j][1])
            if not is_flat_section(T, br):
                wit = {"pair": [reps[i][0], reps[j][0]], "bracket": section_str(n, r, br), "claim": "not_flat"}
                break
        if wit:
            break
    checks.append(CheckResult("axiom_i", wit is None, wit))

    # (ii) [flat, B] lies in B
    wit = None
    for k, (name, s) in enumerate(reps):
        for j, b in enumerate(T.B):
            br = A.section_bracket(s, b)
            if not in_span(br, T.B, n, pts):
                wit = {"pair": [name, f"b{j + 1}"], "bracket": section_str(n, r, br), "claim": "not_in_B"}
                break
        if wit:
            break
    checks.append(CheckResult("axiom_ii", wit is None, wit))

    # (iii) rho(B) lies in F
    wit = None
    for j, b in enumerate(T.B):
        v = anchor_vector(A, b)
        if not in_span(v, T.F, n, pts):
            wit = {"section": f"b{j + 1}", "anchor": base_field_str(n, r, v), "claim": "not_in_F"}
            break
    checks.append(CheckResult("axiom_iii", wit is None, wit))

    # (iv) rho(flat) preserves F
    wit = None
    for name, s in reps:
        v = anchor_vector(A, s)
        for j, Z in enumerate(T.F):
            br = base_bracket(v, Z)
            if not in_span(br, T.F, n, pts):
                wit = {"pair": [name, f"F{j + 1}"], "bracket": base_field_str(n, r, br), "claim": "not_in_F"}
                break
        if wit:
            break
    checks.append(CheckResult("axiom_iv", wit is None, wit))
    I.checks = checks
    return checks


def imf_from_distribution(D: Distribution, Q: VectorField) -> IMFoliation:
    """The IM-foliation of a certified involutive Q-invariant distribution."""
    inv = dist_is_involutive(D)
    if not inv:
        raise ClassicalDataError("the distribution is not involutive", inv.witness)
    qi = dist_is_q_invariant(D, Q)
    if not qi:
        raise ClassicalDataError("the distribution is not preserved by [Q, -]", qi.witness)
    T, _ = dist_to_classical(D, check_involutive=False)
    from .reduction import FlatFrameError, flat_frame_solve
    try:
        T.flat_frame = tuple(flat_frame_solve(T))
    except FlatFrameError:
        T.flat_frame = None
    I = IMFoliation(extract_algebroid(Q), T)
    if T.flat_frame is not None:
        imf_check_axioms(I, D.points)
    return I


@dataclass
class CertifiedDistribution:
    distribution: Distribution
    involutive: CheckResult
    q_invariant: CheckResult

    @property
    def ok(self) -> bool:
        return self.involutive.ok and self.q_invariant.ok


def distribution_from_imf(I: IMFoliation, points=None) -> CertifiedDistribution:
    """Build D from the classical data and verify [Q, D] in D and involutivity directly."""
    flat = resolve_flat_frame(I)
    D = classical_to_dist(I.triple, flat_frame=flat, points=points)
    Q = build_q(I.algebroid)
    return CertifiedDistribution(D, dist_is_involutive(D), dist_is_q_invariant(D, Q))
