import random

import pytest
from hypothesis import given, settings, strategies as st

from cases import dxi, dx, unclosed_fields, completion_distribution, completion_image, q_de_rham, q_su2, x, xi
from factories import SMALL, fields, rand_function
from nq1.algebroid import LieAlgebroidData, build_q
from nq1.distributions import (CERTIFIED, MODULE_ONLY, ClassicalDataError, ClassicalTriple, classical_to_dist,
                               dist_is_involutive, dist_is_q_invariant, dist_to_classical, dist_validate,
                               module_equal, module_membership, nabla_flat, sample_points, std_section,
                               taylor_expand_degree1)
from nq1.graded import GradedFunction
from nq1.polynomial import Poly
from nq1.vector_fields import DegreeError, VectorField, vf_commutator


def test_sample_points_are_reproducible():
    pts = sample_points(2)
    assert pts[0] == (0, 0) and len(pts) == 9
    assert pts == sample_points(2)
    assert pts != sample_points(2, seed=1)


def test_validate_examples():
    assert dist_validate([VectorField.d_xi(0, 3, 0)]).status == CERTIFIED
    d1 = VectorField.d_xi(0, 3, 0)
    D = dist_validate([d1, vf_commutator(q_su2(), d1)])
    assert D.status == MODULE_ONLY
    assert dist_validate(completion_image()).status == CERTIFIED
    with pytest.raises(DegreeError):
        dist_validate([VectorField.d_x(1, 1, 0) + VectorField.d_xi(1, 1, 0)])


def test_validate_reports_failing_point():
    D = dist_validate([GradedFunction.x(1, 1, 0) * VectorField.d_x(1, 1, 0)])
    assert D.status == MODULE_ONLY and D.failing_point == (0,)


def test_membership_examples():
    Xb, Yb, XYb = unclosed_fields()
    Q = q_de_rham()
    D = dist_validate([Xb, XYb, vf_commutator(Q, Xb), vf_commutator(Q, XYb)])
    assert not module_membership(dx(2), D)
    D1 = dist_validate([dxi(0)])
    m = module_membership(xi(1) * dxi(0), D1)
    assert m and m.coefficients == [xi(1)]
    assert module_membership(XYb, dist_validate([Xb, XYb]))


def test_membership_with_rational_coefficient():
    D = dist_validate([x(0) * dxi(0) + dxi(1)])
    V = (x(0) ** 2) * dxi(0) + x(0) * dxi(1)
    m = module_membership(V, D)
    assert m and m.certainty == "polynomial-exact"
    D = dist_validate([x(0) * dxi(0), dxi(1)])
    assert not module_membership(dxi(0), D)


def test_involutivity_examples():
    Q = q_su2()
    D = dist_validate([VectorField.d_xi(0, 3, 2)])
    assert dist_is_involutive(D)
    Xb, Yb, XYb = unclosed_fields()
    Q = q_de_rham()
    gens = [Xb, vf_commutator(Q, Xb), vf_commutator(Q, Yb), -XYb, vf_commutator(Q, -XYb)]
    res = dist_is_involutive(dist_validate(gens, labels=["mu(w1)", "mu(e1)", "mu(e2)", "eta", "dQ eta"]))
    assert not res and res.witness["pair"] == ["mu(e1)", "eta"]
    assert dist_is_involutive(dist_validate(completion_distribution()))
    res = dist_is_involutive(dist_validate(completion_image()))
    assert not res and res.witness["bracket"] == "d/dx3"


def test_q_invariance_examples():
    d1 = VectorField.d_xi(0, 3, 0)
    assert dist_is_q_invariant(dist_validate([d1, vf_commutator(q_su2(), d1)]), q_su2())
    res = dist_is_q_invariant(dist_validate(completion_image()), q_de_rham())
    assert not res and res.witness["bracket"] == "-d/dx3"
    assert dist_is_q_invariant(dist_validate(completion_distribution()), q_de_rham())


def test_completed_distribution_is_coordinate_span():
    D = dist_validate(completion_distribution())
    E = dist_validate([dx(0), dx(1), dx(2), dxi(2)])
    assert module_equal(D, E)


def test_classical_data_of_completed_example():
    D = dist_validate(completion_distribution())
    T, checks = dist_to_classical(D)
    assert all(c.ok for c in checks)
    assert len(T.B) == 1 and T.B[0][:2] == (Poly.zero(3), Poly.zero(3)) and T.B[0][2]
    assert T.quotient_rank == 2
    assert all(not p for M in T.nabla for row in M for p in row)
    back = classical_to_dist(T)
    assert module_equal(back, D)


def test_classical_data_of_everything():
    n, r = 2, 2
    D = dist_validate([VectorField.d_xi(n, r, a) for a in range(r)] + [VectorField.d_x(n, r, i) for i in range(n)])
    T, _ = dist_to_classical(D)
    assert len(T.B) == 2 and T.quotient_rank == 0 and len(T.F) == 2


def test_classical_data_rejects_singular_module():
    d1 = VectorField.d_xi(0, 3, 0)
    D = dist_validate([d1, vf_commutator(q_su2(), d1)])
    with pytest.raises(ClassicalDataError):
        dist_to_classical(D)


def test_empty_triple_gives_zero_distribution():
    T = ClassicalTriple(0, 0, (), (), (), ())
    assert classical_to_dist(T).generators == ()


def test_connection_curvature_detected():
    n, r = 2, 1
    one, x1 = Poly.const(2, 1), Poly.var(2, 0)
    T = ClassicalTriple(n, r, (), ((one, Poly.zero(2)), (Poly.zero(2), one)), (std_section(n, r, 0),),
                        (((Poly.zero(2),),), ((x1,),)))
    res = nabla_flat(T)
    assert not res


def test_taylor_examples():
    Q = q_su2()
    frame = [tuple(Poly.const(0, 1 if a == b else 0) for a in range(3)) for b in range(3)]
    P = vf_commutator(Q, GradedFunction.xi(0, 3, 0) * VectorField.d_xi(0, 3, 1))
    assert taylor_expand_degree1(P, frame).ok
    assert taylor_expand_degree1(VectorField.zero(0, 3), frame).ok
    P = GradedFunction.xi(1, 1, 0) * VectorField.d_x(1, 1, 0)
    t = taylor_expand_degree1(P, [(Poly.const(1, 1),)])
    assert t.ok and t.X[0] == VectorField.d_x(1, 1, 0) and not t.b[(0, 0)]


@settings(max_examples=40)
@given(st.data())
def test_taylor_reassembly_random(data):
    P = data.draw(fields(2, 2, 1))
    frame = [(Poly.const(2, 1), Poly.var(2, 0)), (Poly.zero(2), Poly.const(2, 1))]
    assert taylor_expand_degree1(P, frame).ok


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6))
def test_membership_is_closed_under_combinations(seed):
    rng = random.Random(seed)
    gens = completion_distribution()
    D = dist_validate(gens)
    for g in gens:
        assert module_membership(g, D)
    d = rng.choice([-1, 0])
    V = VectorField.zero(3, 3)
    for g in gens:
        k = d - g.degree
        V = V + rand_function(rng, 3, 3, k, max_deg=2) * g
    assert module_membership(V, D)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_extracted_connection_is_flat_for_ideals(seed):
    rng = random.Random(seed)
    # random Heisenberg-type algebroid over a line: [a1,a2] = p(x) a3, centre a3
    p = Poly(1, {(rng.randint(0, 2),): rng.choice(SMALL)})
    A = LieAlgebroidData.from_entries(1, 3, c={(0, 1, 2): p})
    Q = build_q(A)
    D = dist_validate([VectorField.d_xi(1, 3, 2), VectorField.d_x(1, 3, 0)])
    assert dist_is_involutive(D) and dist_is_q_invariant(D, Q)
    T, checks = dist_to_classical(D)
    assert all(c.ok for c in checks)
