import json

import numpy as np
import pytest

from jacsym import reference
from jacsym.construct import ConstructionParams, solve_alpha
from jacsym.polybasis import JacobiBasis
from jacsym.quadrature import gauss_jacobi, make_rule
from jacsym.tableau import (
    ButcherTableau,
    check_simplifying,
    check_symplectic,
    classical_order,
    discretize,
    explicit_euler,
    implicit_midpoint,
    listing_order,
    verify,
)

CHEB3 = JacobiBasis(-0.5, 0.5)
CHEB4 = JacobiBasis(0.5, -0.5)


def build(basis, xi, eta, rho, s, method="closed", free=()):
    coeffs = solve_alpha(ConstructionParams(basis, xi, eta, rho)).member(free)
    return discretize(coeffs, make_rule(basis, s, method))


GENERATED = {
    "chebyshev3_order3": (CHEB3, 3, 1, 2, 3, 1e-12),
    "chebyshev4_order3": (CHEB4, 3, 1, 2, 3, 1e-12),
    "chebyshev3_order5": (CHEB3, 5, 2, 2, 5, 1e-11),
    "chebyshev4_order5": (CHEB4, 5, 2, 2, 5, 1e-11),
}


@pytest.mark.parametrize("name", sorted(GENERATED))
@pytest.mark.parametrize("method", ["closed", "eigen"])
def test_generated_matches_published(name, method):
    basis, xi, eta, rho, s, tol = GENERATED[name]
    t = build(basis, xi, eta, rho, s, method)
    assert reference.max_deviation(t, getattr(reference, name)()) <= tol


def test_listing_order_matches_printed_rows():
    t = listing_order(build(CHEB3, 5, 2, 2, 5))
    ref = reference.chebyshev3_order5()
    # printed rows are in descending abscissa, compare without re-sorting
    assert np.max(np.abs(t.A - ref.A)) <= 1e-11
    np.testing.assert_allclose(t.c, ref.c, atol=1e-11)
    assert t.b[0] == pytest.approx(0.07495247467278, abs=1e-11)
    assert t.A[0, 0] == pytest.approx(0.03747623733639, abs=1e-11)
    t4 = listing_order(build(CHEB4, 5, 2, 2, 5))
    assert t4.A[0, 2] == pytest.approx(-0.05927448800758, abs=1e-11)


def test_legendre_one_stage_is_midpoint():
    t = build(JacobiBasis(0, 0), 2, 1, 1, 1, "eigen")
    mid = implicit_midpoint()
    np.testing.assert_allclose(t.A, mid.A, atol=1e-15)
    np.testing.assert_allclose(t.b, mid.b, atol=1e-15)
    np.testing.assert_allclose(t.c, mid.c, atol=1e-15)


@pytest.mark.parametrize("family", ["chebyshev1_family", "chebyshev2_family"])
@pytest.mark.parametrize("gamma", [-0.3, 0.0, 0.05, 0.1])
def test_published_families(family, gamma):
    t = getattr(reference, family)(gamma)
    assert check_symplectic(t) <= 1e-14
    assert classical_order(t) == 4


def test_family_regenerated_by_pipeline():
    # three-point rule on an order-4 expansion reproduces a member of each family
    for basis, family in [(JacobiBasis(-0.5, -0.5), "chebyshev1_family"), (JacobiBasis(0.5, 0.5), "chebyshev2_family")]:
        t = build(basis, 4, 2, 2, 3, "eigen")
        ref0 = getattr(reference, family)(0.0)
        ref1 = getattr(reference, family)(1.0)
        # A is affine in gamma; recover it from the (0, 1) entry
        gamma = (t.A[0, 1] - ref0.A[0, 1]) / (ref1.A[0, 1] - ref0.A[0, 1])
        assert reference.max_deviation(t, getattr(reference, family)(gamma)) < 1e-14


def test_explicit_euler_not_symplectic():
    assert check_symplectic(explicit_euler()) == 1.0
    assert verify(explicit_euler())["pass"] is False


@pytest.mark.parametrize(
    "name,order", [("chebyshev3_order3", 3), ("chebyshev4_order3", 3), ("chebyshev3_order5", 5), ("chebyshev4_order5", 5)]
)
def test_classical_order_of_published(name, order):
    t = getattr(reference, name)()
    # printed digits limit the 5-stage tables to about 1e-14
    assert classical_order(t) == order
    assert check_symplectic(t) <= 1e-13


@pytest.mark.parametrize("basis", [CHEB3, CHEB4])
@pytest.mark.parametrize("mu", [-1.0, 0.0, 1.0])
def test_family_members_keep_order_three(basis, mu):
    t = build(basis, 3, 1, 2, 3, free=[mu])
    assert check_symplectic(t) <= 1e-11
    assert classical_order(t) >= 3
    assert t.declared_order == 3
    assert t.provenance["free_values"] == [mu]


def test_simplifying_assumptions_inherited():
    t = build(CHEB3, 5, 2, 2, 5)
    assert check_simplifying(t, "B", 5) < 1e-12
    assert check_simplifying(t, "C", 2) < 1e-12
    assert check_simplifying(t, "D", 2) < 1e-12
    assert check_simplifying(t, "C", 3) > 1e-6
    with pytest.raises(ValueError):
        check_simplifying(t, "E", 2)


def test_declared_order_drops_with_coarse_rule():
    coeffs = solve_alpha(ConstructionParams(CHEB3, 5, 2, 2)).particular
    fine = discretize(coeffs, make_rule(CHEB3, 5))
    coarse = discretize(coeffs, make_rule(CHEB3, 3))
    assert fine.declared_order == 5
    assert coarse.declared_order < 5
    assert "warning" in coarse.provenance
    assert classical_order(coarse) >= coarse.declared_order


def test_discretize_rejects_mismatched_rule():
    coeffs = solve_alpha(ConstructionParams(CHEB3, 2, 1, 1)).particular
    with pytest.raises(ValueError):
        discretize(coeffs, gauss_jacobi(CHEB4, 2))


def test_verify_report():
    rep = verify(reference.chebyshev3_order3())
    assert rep["pass"]
    assert rep["classical_order"] == 3
    assert rep["symplectic_residual"] <= 1e-14
    assert set(rep["B"]) == {1, 2, 3, 4, 5}


def test_json_round_trip_is_exact():
    t = build(CHEB4, 5, 2, 2, 5)
    back = ButcherTableau.from_dict(json.loads(t.to_json()))
    np.testing.assert_array_equal(back.A, t.A)
    np.testing.assert_array_equal(back.b, t.b)
    np.testing.assert_array_equal(back.c, t.c)
    assert verify(back) == verify(t)


def test_from_dict_validation():
    with pytest.raises(ValueError):
        ButcherTableau.from_dict({"s": 2, "A": [[0.5]], "b": [1.0]})
    t = ButcherTableau.from_dict({"A": [[0.25, 0.0], [0.5, 0.25]], "b": [0.5, 0.5]})
    np.testing.assert_allclose(t.c, [0.25, 0.75])
    with pytest.raises(ValueError):
        ButcherTableau([[0.5, 0.1]], [1.0], [0.5])


def test_pretty_print():
    text = implicit_midpoint().pretty(digits=3)
    assert "0.500 |" in text
    assert text.splitlines()[-1].strip().endswith("1.000")
