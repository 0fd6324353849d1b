import random

import pytest
from hypothesis import given, settings, strategies as st

from factories import fields, polys, rand_algebroid_raw, rand_poly, rand_valid_algebroid
from nq1.algebroid import (CDORep, LieAlgebroidData, NotHomologicalError, anchor_apply, build_q, cdo_apply,
                           cdo_commutator, cdo_dual, cdo_from_degree0, cdo_pairing_defect, degree0_from_cdo,
                           derived_bracket, extract_algebroid, scalar_matrix, verify_algebroid_axioms)
from nq1.graded import GradedFunction
from nq1.polynomial import Poly
from nq1.vector_fields import DegreeError, VectorField, vf_commutator, vf_is_homological

SU2 = LieAlgebroidData.from_entries(0, 3, c={(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1})
TR3 = LieAlgebroidData.from_entries(3, 3, rho={(i, i): 1 for i in range(3)})


def test_build_q_examples():
    assert str(build_q(SU2)) == "-xi2^xi3*d/dxi1 + xi1^xi3*d/dxi2 - xi1^xi2*d/dxi3"
    assert str(build_q(TR3)) == "xi1*d/dx1 + xi2*d/dx2 + xi3*d/dx3"
    assert build_q(LieAlgebroidData.zero(0, 2)).is_zero()


def test_extract_examples():
    assert extract_algebroid(build_q(SU2)) == SU2
    assert extract_algebroid(build_q(TR3)) == TR3
    assert extract_algebroid(VectorField.zero(2, 2)) == LieAlgebroidData.zero(2, 2)


def test_extract_rejects_non_homological():
    broken = build_q(LieAlgebroidData.from_entries(0, 3, c={(0, 1, 1): 1, (1, 2, 0): 1}))
    with pytest.raises(NotHomologicalError) as info:
        extract_algebroid(broken)
    assert info.value.witness is not None
    with pytest.raises(DegreeError):
        extract_algebroid(VectorField.d_x(1, 1, 0))


def test_axiom_report_examples():
    assert verify_algebroid_axioms(SU2).ok
    # these constants still satisfy Jacobi; the brute-force Jacobiator vanishes
    assert verify_algebroid_axioms(LieAlgebroidData.from_entries(0, 3, c={(0, 1, 2): 1, (1, 2, 0): 1})).ok
    broken = verify_algebroid_axioms(LieAlgebroidData.from_entries(0, 3, c={(0, 1, 1): 1, (1, 2, 0): 1}))
    assert not broken.ok
    assert broken.failures()[0].axiom == "jacobi"
    rank1 = LieAlgebroidData.from_entries(1, 1, rho={(0, 0): Poly.var(1, 0)})
    assert verify_algebroid_axioms(rank1).ok


def test_anchor_failure_is_reported():
    # two commuting sections whose anchors do not commute
    A = LieAlgebroidData.from_entries(1, 2, rho={(0, 0): 1, (1, 0): Poly.var(1, 0)})
    report = verify_algebroid_axioms(A)
    assert not report.ok
    assert not vf_is_homological(build_q(A))


def test_derived_bracket_examples():
    Q = build_q(SU2)
    d = [VectorField.d_xi(0, 3, a) for a in range(3)]
    assert derived_bracket(Q, d[0], d[1]) == d[2]
    assert derived_bracket(Q, d[0], d[0]).is_zero()
    Qd = build_q(TR3)
    x1 = GradedFunction.x(3, 3, 0)
    assert anchor_apply(Qd, VectorField.d_xi(3, 3, 0), x1) == GradedFunction.one(3, 3)
    with pytest.raises(DegreeError):
        derived_bracket(Q, Q, d[0])


def test_cdo_examples():
    D = cdo_from_degree0(VectorField.d_x(2, 2, 0))
    assert D.symbol == (Poly.const(2, 1), Poly.zero(2))
    assert all(not p for row in D.matrix for p in row)
    n, r = 0, 3
    X0 = GradedFunction.xi(n, r, 0) * VectorField.d_xi(n, r, 2)
    D = cdo_from_degree0(X0)
    nonzero = [(b, g) for b in range(r) for g in range(r) if D.matrix[b][g]]
    assert nonzero == [(0, 2)]
    # D(e_1) = [X0, d/dxi1] = -d/dxi3
    e1 = (Poly.const(0, 1), Poly.zero(0), Poly.zero(0))
    assert cdo_apply(D, e1) == (Poly.zero(0), Poly.zero(0), Poly.const(0, -1))
    assert VectorField.section(0, 3, cdo_apply(D, e1)) == vf_commutator(X0, VectorField.d_xi(0, 3, 0))
    assert degree0_from_cdo(D) == X0


def test_cdo_of_action_image():
    n, r = 3, 3
    Q = build_q(TR3)
    s = GradedFunction.x(n, r, 0) * VectorField.d_xi(n, r, 2) - VectorField.d_xi(n, r, 1)
    D = cdo_from_degree0(vf_commutator(Q, s))
    assert D.symbol == (Poly.zero(3), Poly.const(3, -1), Poly.var(3, 0))
    assert D.matrix[0][2] == Poly.const(3, 1)


def test_dual_examples():
    M = scalar_matrix([[0, 1], [2, 3]], 1)
    D = CDORep(1, 2, (Poly.zero(1),), M)
    Dd = cdo_dual(D)
    assert all(Dd.matrix[a][b] == -M[b][a] for a in range(2) for b in range(2))
    D = CDORep(1, 2, (Poly.const(1, 1),), scalar_matrix([[0, 0], [0, 0]], 1))
    assert cdo_dual(D) == D
    X0 = GradedFunction.xi(0, 3, 0) * VectorField.d_xi(0, 3, 2)
    D = cdo_from_degree0(X0)
    assert all(not p for row in cdo_pairing_defect(D, cdo_dual(D)) for p in row)


@given(st.data())
def test_cdo_intertwines_commutators(data):
    X, Y = data.draw(fields(2, 2, 0)), data.draw(fields(2, 2, 0))
    assert cdo_from_degree0(vf_commutator(X, Y)) == cdo_commutator(cdo_from_degree0(X), cdo_from_degree0(Y))


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6))
def test_round_trip_on_raw_data(seed):
    rng = random.Random(seed)
    A = rand_algebroid_raw(rng, rng.randint(0, 3), rng.randint(0, 3))
    assert extract_algebroid(build_q(A), check=False) == A


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.data())
def test_derived_bracket_leibniz(seed, data):
    rng = random.Random(seed)
    n, r = rng.randint(1, 3), rng.randint(1, 3)
    A = rand_valid_algebroid(rng, n, r)
    Q = build_q(A)
    a = data.draw(fields(n, r, -1))
    b = data.draw(fields(n, r, -1))
    f = GradedFunction.from_poly(rand_poly(rng, n), r)
    lhs = derived_bracket(Q, a, f * b)
    rhs = f * derived_bracket(Q, a, b) + anchor_apply(Q, a, f) * b
    assert lhs == rhs


@given(polys(2))
def test_anchor_of_tangent_algebroid_is_derivative(p):
    A = LieAlgebroidData.from_entries(2, 2, rho={(0, 0): 1, (1, 1): 1})
    assert A.anchor_of(0, p) == p.diff(0)
