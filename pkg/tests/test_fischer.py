"""Kernel spaces, projections, embedding factors and the tilings.

Dimension oracles come from binomial counts (harmonics via the two
polynomial dimensions, cells via the column formula); everything else is
checked by exact rank arithmetic.  Frozen dimension tables below were
produced by the kernel computations themselves and double as regression
pins; the structural identities (tiling sums, union ranks, projector
idempotence) are the actual oracles.
"""

import random
from fractions import Fraction

import pytest

from quatcliff import fischer as fi
from quatcliff import linalg
from quatcliff.operators import apply, apply_word
from quatcliff.poly import SpinorPolynomial, poly_dim, space_basis
from quatcliff.scalars import xs


def rand_combo(vectors, rng, n):
    F = SpinorPolynomial.zero(n)
    for v in vectors:
        c = rng.randint(-3, 3)
        if c:
            F = F + v.scale(xs(c))
    return F


# ------------------------------------------------------------ kernel spaces

HS_DIMS_P2 = {(0, 0): 1, (1, 0): 4, (1, 1): 5, (2, 0): 10, (2, 1): 16,
              (2, 2): 14, (3, 1): 35}
HS_DIMS_P1 = {(0, 0): 1, (1, 0): 2, (1, 1): 0, (2, 0): 3, (2, 1): 0,
              (3, 0): 4}
S_DIMS_P2 = {(0, 0, 0): 1, (0, 1, 0): 0, (1, 0, 0): 4, (1, 1, 0): 10,
             (1, 1, 1): 0, (1, 2, 0): 20, (2, 0, 0): 5, (2, 1, 0): 16,
             (2, 1, 1): 14, (2, 2, 0): 35, (2, 2, 1): 40}


@pytest.mark.parametrize("p,a,b", [(1, 1, 1), (1, 2, 1), (2, 1, 1),
                                   (2, 2, 1)])
def test_harmonic_dim_oracle(p, a, b):
    assert fi.harmonic_space(p, a, b).dim == fi.harmonic_dim_oracle(p, a, b)
    assert fi.harmonic_dim_oracle(p, a, b) == (
        poly_dim(p, a, b) - poly_dim(p, a - 1, b - 1))


def test_symplectic_harmonic_dims_frozen():
    for (a, b), dim in HS_DIMS_P2.items():
        assert fi.symplectic_harmonic_space(2, a, b).dim == dim
    for (a, b), dim in HS_DIMS_P1.items():
        assert fi.symplectic_harmonic_space(1, a, b).dim == dim


def test_s_space_dims_frozen():
    for (r, a, b), dim in S_DIMS_P2.items():
        assert fi.s_space(2, r, a, b).dim == dim
    # scalar-valued bottom column concentrates at degree zero
    assert fi.s_space(1, 0, 0, 0).dim == 1
    assert fi.s_space(1, 0, 1, 0).dim == 0


def test_t_space_dims():
    # right edge of the triangle at degree zero: plain cell dimensions
    assert {r: fi.t_space(2, r, 0, 0).dim for r in (2, 3, 4)} == \
        {2: 5, 3: 4, 4: 1}


def test_dagger_mirror_dims():
    assert (fi.symplectic_harmonic_space(2, 1, 2, dagger=True).dim
            == fi.symplectic_harmonic_space(2, 2, 1).dim)
    assert (fi.s_space(2, 1, 0, 1, dagger=True).dim
            == fi.s_space(2, 1, 1, 0).dim)


# ----------------------------------------------------------------- tilings

@pytest.mark.parametrize("p,a,b", [(1, 1, 1), (1, 2, 1), (1, 1, 2),
                                   (2, 1, 1), (2, 2, 1)])
def test_harmonic_tiling(p, a, b):
    rep = fi.symplectic_harmonic_decomposition(p, a, b)
    assert rep.passed, rep.details


@pytest.mark.parametrize("p,a,b", [(1, 1, 0), (1, 2, 1), (2, 1, 0),
                                   (2, 1, 1), (2, 2, 1)])
def test_sl2_module_checks(p, a, b):
    out = fi.sl2_module_checks(p, a, b)
    assert out["passed"], out


@pytest.mark.parametrize("p,r,k,a,b", [(1, 0, 1, 1, 1), (1, 1, 0, 2, 1),
                                       (2, 1, 1, 1, 1), (2, 0, 1, 1, 2),
                                       (2, 0, 0, 1, 2)])
def test_qmonogenic_tiling_both_mirrors(p, r, k, a, b):
    rep = fi.qmonogenic_decomposition(p, r, k, a, b)
    assert rep.passed, rep.details


@pytest.mark.parametrize("p,a,b", [(1, 2, 1), (1, 1, 2), (2, 1, 0),
                                   (2, 0, 1)])
def test_trivial_intersections(p, a, b):
    out = fi.trivial_intersection_check(p, a, b)
    assert out["passed"], out


def test_trivial_intersection_needs_unbalanced():
    with pytest.raises(ValueError):
        fi.trivial_intersection_check(1, 1, 1)


@pytest.mark.parametrize("p", [1, 2])
def test_cells_structure(p):
    out = fi.cells_check(p)
    assert out["passed"], out
    assert out["total_dim"] == 1 << (2 * p)


# -------------------------------------------------------------- projections

def _random_harmonic(p, a, b, rng):
    if a < 0 or b < 0:
        return SpinorPolynomial.zero(2 * p)
    return rand_combo(fi.harmonic_space(p, a, b).vectors, rng, 2 * p)


def test_projection_kernel_identity():
    rng = random.Random(3)
    H = _random_harmonic(2, 2, 1, rng)
    params = (2, 2, 1, 0)
    assert fi.project_ker("laplace", H, params) == H


@pytest.mark.parametrize("seed", range(4))
def test_projection_laplace_random(seed):
    rng = random.Random(seed)
    p, a, b = 2, 2, 2
    T = _random_harmonic(p, a, b, rng)
    T = T + apply("mul_r2", _random_harmonic(p, a - 1, b - 1, rng))
    T = T + apply_word(("mul_r2", "mul_r2"),
                       _random_harmonic(p, a - 2, b - 2, rng))
    params = (p, a, b, 0)
    out = fi.project_ker("laplace", T, params)
    assert not apply("laplace", out).terms
    assert fi.project_ker("laplace", out, params) == out


@pytest.mark.parametrize("seed", range(4))
def test_projection_P_random(seed):
    # grade-2 input over p=2: bottom-cell layer plus Q of a lower bottom
    rng = random.Random(100 + seed)
    p, a, b, r = 2, 1, 1, 2
    n = 2 * p
    C0 = rand_combo(space_basis(p, a, b, ("cell", 2, 2)), rng, n)
    C1 = rand_combo(space_basis(p, a, b, ("cell", 0, 0)), rng, n)
    T = C0 + apply("Q", C1)
    params = (p, a, b, r)
    out = fi.project_ker("P", T, params)
    assert not apply("P", out).terms
    assert fi.project_ker("P", out, params) == out
    # the second power of P already kills this input, so order=1 agrees
    assert fi.project_ker("P", T, params, order=1) == out


def test_projection_P_three_layers():
    # a column long enough for a genuine Q^2 layer needs p=4
    rng = random.Random(7)
    p, r = 4, 4
    n = 2 * p
    C0 = rand_combo(space_basis(p, 0, 0, ("cell", 4, 4)), rng, n)
    C1 = rand_combo(space_basis(p, 0, 0, ("cell", 2, 2)), rng, n)
    C2 = rand_combo(space_basis(p, 0, 0, ("cell", 0, 0)), rng, n)
    T = C0 + apply("Q", C1) + apply_word(("Q", "Q"), C2)
    params = (p, 0, 0, r)
    out = fi.project_ker("P", T, params)
    assert out == C0
    assert not apply("P", out).terms


@pytest.mark.parametrize("seed", range(4))
def test_projection_curlyE_random(seed):
    rng = random.Random(200 + seed)
    p, a, b = 2, 2, 2
    n = 2 * p
    T = SpinorPolynomial.zero(n)
    for i in range(3):
        layer = rand_combo(
            fi.kernel_space(("curlyE",), p, a + i, b - i).vectors, rng, n)
        for _ in range(i):
            layer = apply("curlyE_dag", layer)
        T = T + layer
    params = (p, a, b, 0)
    out = fi.project_ker("curlyE", T, params)
    assert not apply("curlyE", out).terms
    assert fi.project_ker("curlyE", out, params) == out


def test_projection_rejects_mixed_bidegree():
    F = (SpinorPolynomial.monomial(2, (1, 0), (0, 0), 0)
         + SpinorPolynomial.monomial(2, (1, 1), (1, 0), 0))
    with pytest.raises(ValueError):
        fi.project_ker("laplace", F, (1, 1, 0, 0))


def test_projection_rejects_deep_nilpotency():
    r6 = SpinorPolynomial.monomial(2, (0, 0), (0, 0), 0)
    for _ in range(3):
        r6 = apply("mul_r2", r6)
    with pytest.raises(ValueError):
        fi.project_ker("laplace", r6, (1, 3, 3, 0))
    r4 = apply_word(("mul_r2", "mul_r2"),
                    SpinorPolynomial.monomial(2, (0, 0), (0, 0), 0))
    with pytest.raises(ValueError):
        fi.project_ker("laplace", r4, (1, 2, 2, 0), order=1)


def test_projection_rejects_unknown_kind_and_order():
    F = SpinorPolynomial.monomial(2, (1, 0), (0, 0), 0)
    with pytest.raises(ValueError):
        fi.project_ker("beta", F, (1, 1, 0, 0))
    with pytest.raises(ValueError):
        fi.project_ker("laplace", F, (1, 1, 0, 0), order=3)


def test_composite_projection_recovers_embedding_factor():
    fac = fi.embedding_factor(2, 2, 2, 1, 0)
    src = fi.s_space(2, *fac.source)
    params = (2, 2, 1, 0)
    for v in src.vectors[:3]:
        head = apply_word(fac.head_word(), v)
        out = fi.composite_projection(head, params)
        assert out == fac.apply(v)
        assert out == fi._composite_projection_swapped(head, params)


# --------------------------------------------------------- embedding factors

def test_embedding_factor_validation():
    with pytest.raises(ValueError):
        fi.embedding_factor(16, 1, 1, 0, 0)
    with pytest.raises(ValueError):
        fi.embedding_factor(0, 1, 0, 1, 0)
    with pytest.raises(ValueError):
        fi.embedding_factor(0, 1, 1, 0, 2)


def test_embedding_factor_out_of_range_source_is_empty():
    fac = fi.embedding_factor(8, 1, 1, 1, 0)  # needs column r-2 < 0
    assert fac.is_empty


def test_embedding_factor_alpha0_is_identity():
    fac = fi.embedding_factor(0, 2, 2, 1, 1)
    assert fac.head_word() == ()
    assert fac.rendered() == "(1) 1"
    S = fi.s_space(2, 1, 2, 1)
    if S.dim:
        assert fac.apply(S.vectors[0]) == S.vectors[0]


def test_embedding_factor_alpha2_coefficients_frozen():
    fac = fi.embedding_factor(2, 2, 2, 1, 0)
    assert fac.rendered() == "(1) mul_z_dagJ + (-1/3) curlyE_dag mul_z"
    assert fac.source == (1, 2, 0)


def test_piece_activity_witnesses():
    acts = {e["alpha"]: e for e in fi.piece_activity(2, 1, 1, 1)}
    assert acts[5]["counted"] and acts[5]["rank"] == 4
    assert not acts[6]["counted"]
    assert acts[6]["reason"] == "coincides"
    assert acts[6]["coincides_with"]["kept_alpha"] == 5
    assert acts[6]["coincides_with"]["pair_union_rank"] == 4

    acts0 = {e["alpha"]: e for e in fi.piece_activity(2, 1, 1, 0)}
    assert acts0[2]["reason"] == "annihilated" and acts0[2]["src_dim"] == 10
    assert acts0[5]["reason"] == "annihilated"
    assert acts0[6]["reason"] == "annihilated"


@pytest.mark.parametrize("r", [0, 1, 2])
def test_sixteen_piece_tiling_clean_label(r):
    rep = fi.symplectic_harmonics_16_decomposition(2, 1, 0, r)
    assert rep.passed, rep.details
    assert rep.details["naive_16_sum_matches"]
    assert rep.details["exclusions"] == []
    assert rep.details["projection_orders_agree"]
    assert rep.details["factors_match_projection"]


@pytest.mark.parametrize("a,b,r", [(1, 1, 0), (1, 1, 1), (2, 1, 1),
                                   (2, 1, 2)])
def test_sixteen_piece_tiling_with_exclusions(a, b, r):
    rep = fi.symplectic_harmonics_16_decomposition(2, a, b, r)
    assert rep.passed, rep.details
    assert not rep.details["naive_16_sum_matches"]
    assert rep.details["exclusions"]
    # the tiling itself is exact after the witnessed exclusions
    d = rep.details
    assert d["sum_of_pieces"] == d["ambient_dim"] == d["union_rank"]


def test_sixteen_piece_tiling_requires_a_ge_b():
    with pytest.raises(ValueError):
        fi.symplectic_harmonics_16_decomposition(2, 0, 1, 0)


# ------------------------------------------------------- global decomposition

def test_pieces_sorted_and_nonempty():
    pieces = fi.full_decomposition_pieces(1, 2, 1)
    keys = [(lab["l"], lab["j"], lab["t"], lab["alpha"], lab["r"])
            for lab, _, _ in pieces]
    assert keys == sorted(keys)
    assert all(vecs for _, vecs, _ in pieces)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_graded_tiling_p1(k):
    out = fi.graded_tiling_check(1, k)
    assert out["passed"], out


def test_graded_tiling_p2_degree1():
    out = fi.graded_tiling_check(2, 1)
    assert out["passed"], out


def test_decompose_constant_is_single_cartan_piece():
    F = SpinorPolynomial.monomial(4, (0, 0, 0, 0), (0, 0, 0, 0), 0)
    rep = fi.decompose_polynomial(F, 2)
    assert rep.passed and not rep.residual.terms
    assert [(c["l"], c["j"], c["t"], c["alpha"], c["r"])
            for c in rep.components] == [(0, 0, 0, 0, 0)]


def test_decompose_radial_square():
    G = SpinorPolynomial.zero(2)
    for k in range(2):
        alpha = [0, 0]
        beta = [0, 0]
        alpha[k] = 1
        beta[k] = 1
        G = G + SpinorPolynomial.monomial(2, tuple(alpha), tuple(beta), 0)
    rep = fi.decompose_polynomial(G, 1)
    assert rep.passed
    assert [(c["l"], c["j"], c["t"], c["alpha"], c["r"])
            for c in rep.components] == [(1, 0, 0, 0, 0)]
    assert rep.components[0]["source"] == SpinorPolynomial.monomial(
        2, (0, 0), (0, 0), 0)


def test_decompose_random_zero_residual():
    rng = random.Random(42)
    for _ in range(5):
        F = SpinorPolynomial.zero(2)
        for A in range(3):
            for B in range(3 - A):
                F = F + rand_combo(space_basis(1, A, B), rng, 2)
        rep = fi.decompose_polynomial(F, 1)
        assert rep.passed and not rep.residual.terms
        rebuilt = SpinorPolynomial.zero(2)
        for c in rep.components:
            rebuilt = rebuilt + c["component"]
        assert rebuilt == F


def test_decompose_rejects_rank_mismatch():
    F = SpinorPolynomial.monomial(2, (1, 0), (0, 0), 0)
    with pytest.raises(ValueError):
        fi.decompose_polynomial(F, 2)


def test_worked_example_exact_values():
    ex = fi.example_decomposition()
    assert ex["passed"]
    assert ex["only_expected_components"]
    n = 4
    half = xs(Fraction(1, 2))
    quarter = xs(Fraction(1, 4))
    S1 = (SpinorPolynomial.monomial(n, (0, 1, 0, 0), (0, 0, 0, 0), 0b0001)
          + SpinorPolynomial.monomial(n, (1, 0, 0, 0), (0, 0, 0, 0), 0b0010)
          ).scale(half)
    S2 = (SpinorPolynomial.monomial(n, (0, 0, 0, 0), (0, 0, 0, 0), 0b0011)
          .scale(-quarter)
          + SpinorPolynomial.monomial(n, (0, 0, 0, 0), (0, 0, 0, 0), 0b1100)
          .scale(quarter))
    S0 = SpinorPolynomial.monomial(n, (0, 0, 0, 0), (0, 0, 0, 0), 0,
                                   xs(Fraction(1, 6)))
    assert ex["S1"] == S1
    assert ex["S2"] == S2
    assert ex["A"] == Fraction(-1, 2)
    assert ex["S0"] == S0
    assert ex["rewrite_exact"]


# ------------------------------------------------- one-variable families

def test_euclidean_dims():
    for k in range(0, 4):
        out = fi.euclidean_fischer_dims(4, k)
        assert out["passed"], out
    out2 = fi.euclidean_fischer_dims(4, 2)
    assert out2["ambient_dim"] == 10 * 4
    with pytest.raises(ValueError):
        fi.euclidean_fischer_dims(6, 1)


def test_hermitian_dims():
    for a in range(0, 3):
        for b in range(0, 3 - a):
            out = fi.hermitian_fischer_dims(2, a, b)
            assert out["passed"], out
