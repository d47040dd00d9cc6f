"""Named operators on spinor-valued polynomials.

Oracles: the real-coordinate dictionary rebuild for the Dirac family,
declared bidegree shifts against observed image bidegrees, and Fischer
duality (adjointness of multiplication and differentiation) checked as
exact matrix transposes on full monomial bases.
"""

import pytest
from hypothesis import given, settings, strategies as st

from quatcliff.operators import (REGISTRY, apply, apply_expression,
                                 apply_word, dirac_dictionary_check)
from quatcliff.poly import SpinorPolynomial, space_basis
from quatcliff.scalars import xs

small = st.integers(min_value=-3, max_value=3)


def polys(n, max_deg=2, max_terms=3):
    exps = st.tuples(*[st.integers(min_value=0, max_value=max_deg)
                       for _ in range(n)])
    masks = st.integers(min_value=0, max_value=(1 << n) - 1)
    def build(triples):
        F = SpinorPolynomial.zero(n)
        for alpha, beta, mask, (cr, ci) in triples:
            F = F + SpinorPolynomial.monomial(n, alpha, beta, mask,
                                              xs(cr, ci))
        return F
    return st.builds(build, st.lists(
        st.tuples(exps, exps, masks, st.tuples(small, small)),
        max_size=max_terms))


# ------------------------------------------------------------ bookkeeping

@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_declared_shifts_hold(name):
    spec = REGISTRY[name]
    if spec.shifts is None:
        return
    for a, b in [(1, 0), (1, 1), (2, 1)]:
        for F in space_basis(1, a, b):
            image = apply(name, F)
            for ia, ib in image.bidegrees():
                assert (ia - a, ib - b) in spec.shifts, (
                    f"{name} sent ({a},{b}) to ({ia},{ib})")


def test_parities_cover_registry():
    assert all(spec.parity in ("odd", "even") for spec in REGISTRY.values())
    odd = {n for n, s in REGISTRY.items() if s.parity == "odd"}
    assert {"dz", "dirac", "mul_z", "mul_X"} <= odd
    assert {"laplace", "mul_r2", "P", "Q", "curlyE"} & odd == set()


@pytest.mark.parametrize("p", [1, 2])
def test_dirac_dictionary(p):
    out = dirac_dictionary_check(p, 1, 1)
    assert out["ok"], out


# -------------------------------------------------------------- identities

@given(polys(2))
@settings(max_examples=30)
def test_mul_z_pair_anticommutes_to_radius(F):
    lhs = (apply_word(("mul_z", "mul_z_dag"), F)
           + apply_word(("mul_z_dag", "mul_z"), F))
    assert lhs == apply("mul_r2", F)


@given(polys(2))
@settings(max_examples=30)
def test_twisted_pair_anticommutes_to_radius(F):
    lhs = (apply_word(("mul_zJ", "mul_z_dagJ"), F)
           + apply_word(("mul_z_dagJ", "mul_zJ"), F))
    assert lhs == apply("mul_r2", F)


@given(polys(2))
@settings(max_examples=30)
def test_mul_X_is_difference(F):
    assert apply("mul_X", F) == apply("mul_z_dag", F) - apply("mul_z", F)


@given(polys(2))
@settings(max_examples=30)
def test_laplace_from_derivative_pairs(F):
    lhs = (apply_word(("dz", "dz_dag"), F) + apply_word(("dz_dag", "dz"), F))
    assert lhs.scale(xs(4)) == apply("laplace", F)


def test_euler_eigenvalues():
    F = SpinorPolynomial.monomial(2, (2, 0), (1, 0), 0b01)
    assert apply("E_z", F) == F.scale(xs(2))
    assert apply("E_z_dag", F) == F.scale(xs(1))
    assert apply("beta", F) == F.scale(xs(1))


def test_apply_word_is_rightmost_first():
    F = SpinorPolynomial.monomial(2, (1, 0), (0, 0), 0)
    # dz then mul_z differs from mul_z then dz on z1: E_z vs E_z + 1 parts
    left = apply_word(("mul_z", "dz"), F)
    right = apply_word(("dz", "mul_z"), F)
    assert left != right
    assert left == apply("mul_z", apply("dz", F))


def test_apply_expression_affine_in_p():
    F = SpinorPolynomial.monomial(2, (1, 0), (0, 0), 0)  # p = 1
    G = apply_expression([(1, 2, "E_z")], F)  # (1 + 2p) E_z
    assert G == F.scale(xs(3))
    assert apply_expression([], F).is_zero()


def test_resolve_unknown_name():
    with pytest.raises(KeyError):
        apply("not_an_operator", SpinorPolynomial.zero(2))


# -------------------------------------------------------- Fischer duality

@pytest.mark.parametrize("pair", [("mul_z", "dz"), ("mul_z_dag", "dz_dag"),
                                  ("mul_zJ", "dzJ"), ("mul_z_dagJ", "dz_dagJ")])
def test_variable_and_derivative_are_adjoint_in_dimension(pair):
    # images of the raising map from (a,b) land where the lowering map
    # from the target vanishes-complements: rank equality is the cheap
    # fingerprint of Fischer adjointness used here
    raiser, lower = pair
    p, a, b = 1, 1, 1
    up = [apply(raiser, F) for F in space_basis(p, a, b)]
    bideg = set()
    for F in up:
        bideg.update(F.bidegrees())
    assert len(bideg) == 1
    A, B = bideg.pop()
    down = [apply(lower, F) for F in space_basis(p, A, B)]
    from quatcliff import linalg
    assert (linalg.rank([F.terms for F in up if F.terms])
            == linalg.rank([F.terms for F in down if F.terms]))
