"""Named instances shared by the tests, built directly through the Python API."""

from fractions import Fraction

from nq1.algebroid import LieAlgebroidData, build_q
from nq1.graded import GradedFunction
from nq1.lie2 import Lie2Action, StrictLie2Algebra
from nq1.vector_fields import VectorField, vf_commutator

N3 = R3 = 3


def x(i, n=N3, r=R3):
    return GradedFunction.x(n, r, i)


def xi(a, n=N3, r=R3):
    return GradedFunction.xi(n, r, a)


def dx(i, n=N3, r=R3):
    return VectorField.d_x(n, r, i)


def dxi(a, n=N3, r=R3):
    return VectorField.d_xi(n, r, a)


def su2() -> LieAlgebroidData:
    return LieAlgebroidData.from_entries(0, 3, c={(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1})


def q_su2() -> VectorField:
    return build_q(su2())


def tangent(n: int = 3) -> LieAlgebroidData:
    return LieAlgebroidData.from_entries(n, n, rho={(i, i): 1 for i in range(n)})


def q_de_rham(n: int = 3) -> VectorField:
    return build_q(tangent(n))


def completion_action() -> Lie2Action:
    L = StrictLie2Algebra.lie_algebra(2)
    mu0 = [dx(0), x(0) * dx(2) - dx(1) + xi(0) * dxi(2)]
    return Lie2Action(L, 3, 3, mu0, [], {(0, 1): -dxi(2)})


def completion_image() -> list[VectorField]:
    phi = completion_action()
    return list(phi.mu0) + [phi.eta_basis(0, 1)]


def completion_distribution() -> list[VectorField]:
    return completion_image() + [vf_commutator(q_de_rham(), completion_action().eta_basis(0, 1))]


def unclosed_fields():
    """X-bar, Y-bar and [X, Y]-bar as degree -1 fields."""
    Xb = dxi(0)
    Yb = (Fraction(1, 2) * x(0) ** 2) * dxi(2) - x(0) * dxi(1)
    XYb = x(0) * dxi(2) - dxi(1)
    return Xb, Yb, XYb


def unclosed_action() -> Lie2Action:
    Q = q_de_rham()
    Xb, Yb, XYb = unclosed_fields()
    L = StrictLie2Algebra.from_entries(1, 2, delta={(0, 0): 1})
    return Lie2Action(L, 3, 3, [vf_commutator(Q, Xb), vf_commutator(Q, Yb)], [Xb], {(0, 1): -XYb})


def translation():
    A = LieAlgebroidData.from_entries(1, 1, rho={(0, 0): 1})
    Q = build_q(A)
    L = StrictLie2Algebra.from_entries(1, 1, delta={(0, 0): 1})
    d = VectorField.d_xi(1, 1, 0)
    return Q, Lie2Action(L, 1, 1, [vf_commutator(Q, d)], [d])
