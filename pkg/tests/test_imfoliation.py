import random

import pytest
from hypothesis import given, settings, strategies as st

from cases import completion_distribution, q_de_rham
from factories import rand_poly
from nq1 import CORPUS
from nq1.algebroid import LieAlgebroidData
from nq1.distributions import ClassicalTriple, dist_validate, module_membership, std_section
from nq1.dsl import load
from nq1.graded import GradedFunction
from nq1.imfoliation import (FlatFrameUnavailable, IMFoliation, distribution_from_imf, imf_check_axioms,
                             imf_from_distribution)
from nq1.polynomial import Poly
from nq1.vector_fields import VectorField

POSITIVE = ["imf_completion", "imf_su2_full", "imf_su2_zero", "imf_heisenberg", "imf_tr2", "imf_rank1", "imf_affine"]


def corpus_imf(name):
    m = load((CORPUS / f"{name}.nq1").read_text())
    return IMFoliation(m.algebroid, m.imfoliations[0].triple)


def by_name(checks):
    return {c.name: c for c in checks}


@pytest.mark.parametrize("name", POSITIVE)
def test_corpus_examples_satisfy_axioms(name):
    I = corpus_imf(name)
    checks = imf_check_axioms(I)
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]
    cd = distribution_from_imf(I)
    assert cd.ok


def test_non_ideal_fails_bracket_axiom():
    checks = by_name(imf_check_axioms(corpus_imf("imf_su2_not_ideal")))
    assert not checks["axiom_ii"]
    assert checks["axiom_ii"].witness["pair"] == ["s1", "b1"]
    assert checks["axiom_ii"].witness["bracket"] == "-d/dxi3"
    assert checks["axiom_i"] and checks["axiom_iii"]


def test_non_ideal_distribution_side_agrees():
    cd = distribution_from_imf(corpus_imf("imf_su2_not_ideal"))
    assert not cd.ok


def test_curved_connection_is_reported():
    text = """manifold { base = 2; rank = 2 }
    algebroid { rho[1,1] = 1; rho[2,2] = 1 }
    imfoliation { B = []; F = [d/dx1]; nabla[1][1,2] = 1 }"""
    m = load(text)
    I = IMFoliation(m.algebroid, m.imfoliations[0].triple)
    checks = by_name(imf_check_axioms(I))
    assert checks["flat_frame"]
    assert not checks["axiom_iv"] and checks["axiom_iv"].witness["bracket"] == "d/dx2"


def test_missing_flat_frame_is_reported():
    n, r = 1, 1
    one = Poly.const(1, 1)
    A = LieAlgebroidData.from_entries(1, 1, rho={(0, 0): 1})
    # non-polynomial flat frame: d E/dx = -E, solution exp(-x)
    T = ClassicalTriple(n, r, (), ((one,),), (std_section(n, r, 0),), (((one,),),))
    with pytest.raises(FlatFrameUnavailable):
        imf_check_axioms(IMFoliation(A, T))


def test_round_trip_from_distribution():
    D = dist_validate(completion_distribution())
    I = imf_from_distribution(D, q_de_rham())
    assert I.checks and all(c.ok for c in I.checks)
    back = distribution_from_imf(I)
    assert back.ok
    for g in D.generators:
        assert module_membership(g, back.distribution)
    for g in back.distribution.generators:
        assert module_membership(g, D)


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6))
def test_anchor_axiom_matches_symbol_membership(seed):
    """rho(B) in F (base data) agrees with membership of the anchor field in the module spanned by F."""
    rng = random.Random(seed)
    n = 2
    A = LieAlgebroidData.from_entries(n, 1, rho={(0, a): rand_poly(rng, n, 1, 1) for a in range(n)})
    F = [tuple(Poly.const(n, rng.randint(-1, 1)) for _ in range(n))] if rng.random() < 0.7 else []
    F = [v for v in F if any(v)]
    T = ClassicalTriple(n, 1, (std_section(n, 1, 0),), tuple(F), (), tuple(() for _ in F))
    iii = by_name(imf_check_axioms(IMFoliation(A, T)))["axiom_iii"]
    field = VectorField.zero(n, 1)
    for a in range(n):
        field = field + GradedFunction.from_poly(A.rho[0][a], 1, ()) * VectorField.d_x(n, 1, a)
    fields = [sum((GradedFunction.from_poly(v[a], 1, ()) * VectorField.d_x(n, 1, a) for a in range(n)),
                  VectorField.zero(n, 1)) for v in F]
    if not fields:
        expected = not field
    else:
        expected = bool(module_membership(field, dist_validate(fields)))
    assert bool(iii) == expected
