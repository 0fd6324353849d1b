from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from factories import fields, functions
from nq1.algebroid import LieAlgebroidData, build_q
from nq1.graded import GradedFunction
from nq1.vector_fields import (DegreeError, VectorField, vf_apply, vf_commutator, vf_evaluate,
                               vf_is_homological)


def su2_q(c12=1, n=0):
    return build_q(LieAlgebroidData.from_entries(n, 3, c={(0, 1, 2): c12, (1, 2, 0): 1, (2, 0, 1): 1}))


def de_rham(n=3):
    return build_q(LieAlgebroidData.from_entries(n, n, rho={(i, i): 1 for i in range(n)}))


def sign(p, q):
    return -1 if (p * q) % 2 else 1


def test_apply_examples():
    xi1, xi2 = GradedFunction.xi(0, 2, 0), GradedFunction.xi(0, 2, 1)
    assert vf_apply(VectorField.d_xi(0, 2, 0), xi1 * xi2) == xi2
    x1 = GradedFunction.x(1, 1, 0)
    X = GradedFunction.xi(1, 1, 0) * VectorField.d_x(1, 1, 0)
    assert vf_apply(X, x1 ** 2) == 2 * x1 * GradedFunction.xi(1, 1, 0)
    xi = [GradedFunction.xi(0, 3, a) for a in range(3)]
    assert vf_apply(su2_q(), xi[0]) == xi[2] * xi[1]


def test_su2_field_as_printed():
    xi = [GradedFunction.xi(0, 3, a) for a in range(3)]
    d = [VectorField.d_xi(0, 3, a) for a in range(3)]
    expected = (xi[1] * xi[0]) * d[2] + (xi[0] * xi[2]) * d[1] + (xi[2] * xi[1]) * d[0]
    assert su2_q() == expected


def test_commutator_examples():
    d1 = VectorField.d_xi(0, 1, 0)
    assert vf_commutator(d1, d1).is_zero()
    assert vf_commutator(su2_q(), su2_q()).is_zero()
    assert vf_commutator(de_rham(), VectorField.d_xi(3, 3, 0)) == VectorField.d_x(3, 3, 0)


def test_evaluate_examples():
    v = vf_evaluate(VectorField.d_xi(2, 3, 0), (5, 7))
    assert v.fiber == (1, 0, 0) and not any(v.tangent)
    n, r = 3, 3
    X = (GradedFunction.x(n, r, 0) * VectorField.d_x(n, r, 2) - VectorField.d_x(n, r, 1)
         + GradedFunction.xi(n, r, 0) * VectorField.d_xi(n, r, 2))
    a, b, c = Fraction(2, 3), Fraction(-1), Fraction(5)
    v = vf_evaluate(X, (a, b, c))
    assert v.tangent == (0, -1, a) and not any(v.fiber)
    assert vf_evaluate(GradedFunction.xi(n, r, 1) * VectorField.d_xi(n, r, 2), (1, 2, 3)).is_zero()
    with pytest.raises(DegreeError):
        vf_evaluate(de_rham(), (0, 0, 0))
    with pytest.raises(DegreeError):
        vf_evaluate(VectorField.d_x(3, 3, 0) + VectorField.d_xi(3, 3, 0), (0, 0, 0))


def test_homological_examples():
    assert vf_is_homological(su2_q())
    assert vf_is_homological(de_rham())
    # rescaling one constant keeps a Lie algebra, so both routes accept it
    assert vf_is_homological(su2_q(c12=2))
    broken = build_q(LieAlgebroidData.from_entries(0, 3, c={(0, 1, 1): 1, (1, 2, 0): 1}))
    bad = vf_is_homological(broken)
    assert not bad and bad.witness is not None and bad.witness[1]
    with pytest.raises(DegreeError):
        vf_is_homological(VectorField.d_x(1, 1, 0))


def test_generator_images_round_trip():
    X = su2_q() + VectorField.d_xi(0, 3, 1)
    gens = [GradedFunction.xi(0, 3, a) for a in range(3)]
    assert VectorField.from_generator_images(0, 3, [X(g) for g in gens]) == X


@given(st.data())
def test_graded_antisymmetry(data):
    X, Y = data.draw(fields(2, 2)), data.draw(fields(2, 2))
    p, q = X.degree or 0, Y.degree or 0
    assert vf_commutator(X, Y) == -vf_commutator(Y, X).scale(sign(p, q))


@given(st.data())
def test_graded_jacobi(data):
    X, Y, Z = (data.draw(fields(2, 2, max_deg=1)) for _ in range(3))
    p, q = X.degree or 0, Y.degree or 0
    lhs = vf_commutator(X, vf_commutator(Y, Z))
    rhs = vf_commutator(vf_commutator(X, Y), Z) + vf_commutator(Y, vf_commutator(X, Z)).scale(sign(p, q))
    assert lhs == rhs


@given(st.data())
def test_commutator_acts_as_derivation_commutator(data):
    X, Y = data.draw(fields(2, 2)), data.draw(fields(2, 2))
    f = data.draw(functions(2, 2))
    p, q = X.degree or 0, Y.degree or 0
    assert vf_commutator(X, Y)(f) == X(Y(f)) - Y(X(f)).scale(sign(p, q))


@given(st.data())
def test_leibniz_rule(data):
    X = data.draw(fields(2, 3))
    f, g = data.draw(functions(2, 3)), data.draw(functions(2, 3))
    p, k = X.degree or 0, f.degree() or 0
    assert X(f * g) == X(f) * g + (f * X(g)).scale(sign(p, k))


@given(fields(1, 3))
def test_dq_squares_to_zero(X):
    Q = su2_q(n=1)
    assert vf_is_homological(Q)
    assert vf_commutator(Q, vf_commutator(Q, X)).is_zero()
