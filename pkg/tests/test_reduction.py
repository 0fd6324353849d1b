from fractions import Fraction
from math import comb

import pytest

from cases import completion_distribution, q_de_rham, q_su2, su2, tangent
from nq1.algebroid import LieAlgebroidData, build_q
from nq1.distributions import ClassicalTriple, dist_to_classical, dist_validate, is_flat_section, std_section
from nq1.polynomial import Poly
from nq1.reduction import (FlatFrameError, ReductionError, ReductionSetting, adapted_coordinates, flat_frame_solve,
                           generator_degrees, invariant_functions, reduce)
from nq1.vector_fields import VectorField, vf_commutator


def su2_singular():
    d1 = VectorField.d_xi(0, 3, 0)
    return dist_validate([d1, vf_commutator(q_su2(), d1)])


def test_invariants_of_singular_su2_module():
    B = invariant_functions(su2_singular())
    assert [str(f) for f in B.functions] == ["1", "xi2^xi3"]
    assert B.complete
    assert generator_degrees(B) == {2: 1}


def test_singular_reduction_on_point_body():
    R = reduce(q_su2(), su2_singular())
    assert R.singular and R.ok
    assert all(not v for row in R.q_matrix for v in row)
    assert R.describe()["summary"] == "invariants generated in degree 2"


def test_singular_module_rejected_off_point_body():
    with pytest.raises(ReductionError):
        reduce(q_su2(), su2_singular(), ReductionSetting(mode="adapted_chart"))


def test_non_involutive_is_rejected_with_witness():
    from cases import completion_image
    with pytest.raises(ReductionError) as exc:
        reduce(q_de_rham(), dist_validate(completion_image()))
    assert exc.value.witness["bracket"] == "d/dx3"


def test_completed_completion_quotient():
    R = reduce(q_de_rham(), dist_validate(completion_distribution()))
    assert R.ok and not R.singular
    A = R.algebroid
    assert (A.n, A.r) == (0, 2)
    assert all(not p for row in A.c for col in row for p in col)
    assert not R.q_reduced


def test_heisenberg_centre_quotient_is_abelian():
    H = LieAlgebroidData.from_entries(0, 3, c={(0, 1, 2): 1})
    R = reduce(build_q(H), dist_validate([VectorField.d_xi(0, 3, 2)]))
    assert (R.algebroid.n, R.algebroid.r) == (0, 2) and not R.q_reduced


def test_quotient_by_whole_algebra_is_trivial():
    gens = [VectorField.d_xi(0, 3, a) for a in range(3)]
    R = reduce(build_q(su2()), dist_validate(gens))
    assert R.algebroid.r == 0


def test_affine_ideal_quotient():
    A = LieAlgebroidData.from_entries(0, 2, c={(0, 1, 1): 1})
    R = reduce(build_q(A), dist_validate([VectorField.d_xi(0, 2, 1)]))
    assert R.algebroid.r == 1 and not R.q_reduced


def test_tangent_foliation_quotient():
    Q = build_q(tangent(2))
    d = VectorField.d_xi(2, 2, 0)
    D = dist_validate([d, vf_commutator(Q, d)])
    R = reduce(Q, D)
    assert R.ok
    assert R.transverse == [1]
    assert R.algebroid.describe()["rho"] == {"1,1": "1"}
    assert [str(f) for f in invariant_functions(D, max_base_degree=2).functions] == \
        ["1", "x2", "x2^2", "xi2", "x2*xi2", "x2^2*xi2"]


@pytest.mark.parametrize("n,deg,count", [(2, 1, 4), (2, 2, 6), (3, 1, 9), (3, 2, 18)])
def test_adapted_chart_invariant_counts(n, deg, count):
    """Killing the first coordinate direction leaves polynomials in the rest."""
    Q = build_q(tangent(n))
    d = VectorField.d_xi(n, n, 0)
    D = dist_validate([d, vf_commutator(Q, d)])
    B = invariant_functions(D, max_xi_degree=1, max_base_degree=deg)
    polys = comb(n - 1 + deg, deg)
    assert len(B.functions) == polys * n == count


def test_flat_frame_for_zero_connection_is_complement():
    T, _ = dist_to_classical(dist_validate(completion_distribution()))
    assert flat_frame_solve(T) == [tuple(s) for s in T.complement]


def test_flat_frame_nilpotent_connection():
    one, z = Poly.const(2, 1), Poly.zero(2)
    T = ClassicalTriple(2, 2, (), ((one, z), (z, one)), (std_section(2, 2, 0), std_section(2, 2, 1)),
                        (((z, one), (z, z)), ((z, z), (z, z))))
    frame = flat_frame_solve(T)
    assert frame == [(one, -Poly.var(2, 0)), (z, one)]
    assert all(is_flat_section(T, s) for s in frame)
    assert adapted_coordinates(T) == [0, 1]


def test_flat_frame_upper_triangular_three():
    n = 1
    one, z = Poly.const(n, 1), Poly.zero(n)
    N = ((z, one, z), (z, z, one), (z, z, z))
    T = ClassicalTriple(n, 3, (), ((one,),), tuple(std_section(n, 3, a) for a in range(3)), (N,))
    frame = flat_frame_solve(T)
    assert all(is_flat_section(T, s) for s in frame)
    x = Poly.var(1, 0)
    assert frame[0] == (one, -x, Poly(1, {(2,): Fraction(1, 2)}))
    assert frame[1] == (z, one, -x) and frame[2] == (z, z, one)


def test_flat_frame_non_polynomial_fails_cleanly():
    one = Poly.const(1, 1)
    T = ClassicalTriple(1, 1, (), ((one,),), (std_section(1, 1, 0),), (((one,),),))
    with pytest.raises(FlatFrameError):
        flat_frame_solve(T)
