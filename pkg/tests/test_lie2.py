import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cases import dx, dxi, unclosed_action, completion_action, q_de_rham, translation, x
from factories import full_constants, lie_algebra
from nq1.distributions import module_membership
from nq1.lie2 import (ActionError, Lie2Action, StrictLie2Algebra, action_check_constraints, action_closure_check,
                      action_distribution, action_generators, action_quotient, strict_action_check)
from nq1.graded import GradedFunction
from nq1.vector_fields import DegreeError, VectorField, vf_commutator


def by_name(checks):
    return {c.name: c for c in checks}


def test_completion_constraints_hold():
    assert all(c.ok for c in action_check_constraints(completion_action(), q_de_rham()))


def test_completion_needs_eta():
    checks = by_name(action_check_constraints(completion_action().without_eta(), q_de_rham()))
    assert not checks["constr2"]
    assert checks["constr2"].witness["difference"] == "-d/dx3"


def test_completion_raw_image_is_not_closed():
    Q = q_de_rham()
    D = action_distribution(completion_action(), Q, completed=False)
    res = by_name(action_closure_check(D, Q))
    assert res["closure"]
    assert not res["involutive"] and not res["q_invariant"]
    assert res["involutive"].witness["pair"] == ["mu(e1)", "mu(e2)"]
    assert res["involutive"].witness["bracket"] == "d/dx3"
    assert res["q_invariant"].witness["bracket"] == "-d/dx3"


def test_completion_distribution_is_closed_and_reduces():
    Q = q_de_rham()
    D = action_distribution(completion_action(), Q)
    assert D.certified
    assert all(c.ok for c in action_closure_check(D, Q))
    q = action_quotient(completion_action(), Q)
    A = q.result.algebroid
    assert (A.n, A.r) == (0, 2)
    assert all(not p for row in A.c for col in row for p in col)
    assert q.ideal_system["B"] == ["-d/dxi3"]


def test_generator_labels():
    labels = [lab for lab, _ in action_generators(completion_action(), q_de_rham())]
    assert labels == ["mu(e1)", "mu(e2)", "eta(e1^e2)", "dQ eta(e1^e2)"]


def test_unclosed_constraints_hold_and_closure_fails():
    Q = q_de_rham()
    phi = unclosed_action()
    assert all(c.ok for c in action_check_constraints(phi, Q))
    D = action_distribution(phi, Q)
    res = action_closure_check(D, Q)
    assert len(res) == 1 and not res[0]
    assert res[0].witness["pair"] == ["mu(e1)", "eta(e1^e2)"]
    V = res[0].data["bracket"]
    assert V == -dxi(2)
    assert not module_membership(V, D)
    # -[X, [X, Y]] = -d/dx3 on the body, and its degree -1 image is -d/dxi3
    X, Y = dx(0), (x(0) ** 2 * Fraction(1, 2)) * dx(2) - x(0) * dx(1)
    assert vf_commutator(X, vf_commutator(X, Y)) == dx(2)


def test_unclosed_quotient_rejected():
    with pytest.raises(ActionError):
        action_quotient(unclosed_action(), q_de_rham())


def test_translation_strict_action():
    Q, phi = translation()
    checks = strict_action_check(phi, Q)
    assert all(c.ok for c in checks)
    assert "almost_free" in by_name(checks)
    q = action_quotient(phi, Q)
    assert (q.result.algebroid.n, q.result.algebroid.r) == (0, 0)


def test_strict_check_rejects_eta():
    with pytest.raises(ActionError):
        strict_action_check(completion_action(), q_de_rham())


def test_strict_check_detects_non_free_action():
    Q, _ = translation()
    L = StrictLie2Algebra.lie_algebra(1)
    X = vf_commutator(Q, GradedFunction.x(1, 1, 0) * VectorField.d_xi(1, 1, 0))
    res = by_name(strict_action_check(Lie2Action(L, 1, 1, [X], []), Q))
    assert res["constr1"]
    assert not res["almost_free"] and res["almost_free"].witness["point"] == ["0"]


def test_degree_validation():
    L = StrictLie2Algebra.lie_algebra(1)
    with pytest.raises(DegreeError):
        Lie2Action(L, 3, 3, [dxi(0)], [])
    with pytest.raises(ActionError):
        Lie2Action(L, 3, 3, [dx(0), dx(1)], [])
    with pytest.raises(ActionError):
        Lie2Action(StrictLie2Algebra.lie_algebra(2), 3, 3, [dx(0), dx(1)], [], {(0, 0): dxi(0)})


def test_lie2_axioms_examples():
    L = StrictLie2Algebra.from_entries(1, 2, delta={(0, 0): 1})
    assert all(c.ok for c in L.check_axioms())
    # delta not equivariant: [e2, w1] = w1 but [e2, delta w1] = [e2, e1] = 0
    L = StrictLie2Algebra.from_entries(1, 2, delta={(0, 0): 1}, module={(1, 0, 0): 1})
    assert not by_name(L.check_axioms())["differential_equivariant"]
    dim, c = lie_algebra("su2")
    L = StrictLie2Algebra.lie_algebra(dim, {k: v for k, v in c.items()})
    assert by_name(L.check_axioms())["jacobi"]
    L = StrictLie2Algebra.lie_algebra(3, {(0, 1, 1): 1, (1, 2, 0): 1})
    assert not by_name(L.check_axioms())["jacobi"]


@settings(max_examples=50)
@given(st.integers(0, 10 ** 6))
def test_adjoint_module_of_lie_algebra_is_lie2(seed):
    """g acting on a copy of itself with delta = identity is a strict Lie 2-algebra."""
    rng = random.Random(seed)
    dim, c = lie_algebra(rng.choice(["abelian", "heisenberg", "su2", "affine"]))
    full = full_constants(dim, c)
    module = {(i, a, b): full[i][a][b] for i in range(dim) for a in range(dim) for b in range(dim)
              if full[i][a][b]}
    L = StrictLie2Algebra.from_entries(dim, dim, delta={(a, a): 1 for a in range(dim)}, bracket=c, module=module)
    assert all(ch.ok for ch in L.check_axioms())
