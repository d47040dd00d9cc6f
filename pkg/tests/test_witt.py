"""Witt frame, spinor module and the cell triangle.

The full Clifford algebra is the oracle here: every sign rule on the mask
representation (wedge, contract, inner product, P, Q, beta) is compared with
the literal product of Clifford elements.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quatcliff.clifford import CliffordElement, inner_product
from quatcliff.scalars import XS_ONE, XS_ZERO, xs
from quatcliff import witt
from quatcliff.witt import (CellLabel, P_op, Q_op, SpinorElement, beta,
                            build_witt_frame, cell_basis, cell_decompose,
                            cell_dim, cell_labels, conjugation_action,
                            detect_spin_convention, grade_masks,
                            project_to_cell, pq_scalars, rotation_I,
                            rotation_J, rotation_K, spin_elements,
                            spinor_inner, valid_cell, witt_J_images)

small = st.integers(min_value=-3, max_value=3)


def frame(p):
    return witt._frame(p)


def spinors(p):
    n = 2 * p
    masks = st.integers(min_value=0, max_value=(1 << n) - 1)
    def build(pairs):
        el = SpinorElement(n)
        for mask, (ar, ai) in pairs:
            el = el + SpinorElement(n, {mask: xs(ar, ai)})
        return el
    return st.builds(build, st.lists(st.tuples(masks, st.tuples(small, small)),
                                     max_size=4))


# ---------------------------------------------------------------- Witt frame

@pytest.mark.parametrize("p", [1, 2])
def test_witt_relations(p):
    fr = frame(p)
    zero = CliffordElement.zero(fr.m)
    for j in range(1, fr.n + 1):
        for k in range(1, fr.n + 1):
            assert fr.f[j] * fr.f[k] + fr.f[k] * fr.f[j] == zero
            assert fr.fdag[j] * fr.fdag[k] + fr.fdag[k] * fr.fdag[j] == zero
            anti = fr.f[j] * fr.fdag[k] + fr.fdag[k] * fr.f[j]
            assert anti == CliffordElement.scalar(fr.m, 1 if j == k else 0)


@pytest.mark.parametrize("p", [1, 2])
def test_idempotent(p):
    fr = frame(p)
    assert fr.idempotent * fr.idempotent == fr.idempotent
    assert not fr.idempotent.is_zero()
    for k in range(1, fr.n + 1):
        assert (fr.f[k] * fr.idempotent).is_zero()


def test_spinor_blades_are_independent():
    fr = frame(2)
    from quatcliff import linalg
    blades = [fr.spinor_blade(m).terms
              for r in range(fr.n + 1) for m in grade_masks(fr.n, r)]
    assert linalg.rank(blades) == 2 ** fr.n


# ------------------------------------------------- mask action vs. Clifford

@given(spinors(2), st.integers(min_value=1, max_value=4))
@settings(max_examples=30, deadline=None)
def test_wedge_matches_clifford_product(s, k):
    fr = frame(2)
    assert s.wedge(k).to_clifford(fr) == fr.fdag[k] * s.to_clifford(fr)


@given(spinors(2), st.integers(min_value=1, max_value=4))
@settings(max_examples=30, deadline=None)
def test_contract_matches_clifford_product(s, k):
    fr = frame(2)
    assert s.contract(k).to_clifford(fr) == fr.f[k] * s.to_clifford(fr)


@given(spinors(2))
@settings(max_examples=25, deadline=None)
def test_value_operators_match_clifford(s):
    fr = frame(2)
    p_cl = CliffordElement.zero(fr.m)
    q_cl = CliffordElement.zero(fr.m)
    b_cl = CliffordElement.zero(fr.m)
    for j in range(1, fr.p + 1):
        p_cl = p_cl + fr.f[2 * j] * fr.f[2 * j - 1]
        q_cl = q_cl + fr.fdag[2 * j - 1] * fr.fdag[2 * j]
    for k in range(1, fr.n + 1):
        b_cl = b_cl + fr.fdag[k] * fr.f[k]
    x = s.to_clifford(fr)
    assert P_op(s).to_clifford(fr) == p_cl * x
    assert Q_op(s).to_clifford(fr) == q_cl * x
    assert beta(s).to_clifford(fr) == b_cl * x


@given(spinors(2), spinors(2))
@settings(max_examples=25, deadline=None)
def test_spinor_inner_matches_clifford_pairing(x, y):
    fr = frame(2)
    assert spinor_inner(x, y) == inner_product(x.to_clifford(fr),
                                               y.to_clifford(fr))


def test_beta_on_blades():
    s = SpinorElement(4, {0b0011: XS_ONE, 0b0100: xs(2)})
    assert beta(s) == SpinorElement(4, {0b0011: xs(2), 0b0100: xs(2)})


def test_spinor_to_element_round_trip():
    fr = frame(2)
    s = SpinorElement(4, {0b0011: xs(1, 2), 0b1000: xs(0, 0, 1)})
    assert fr.spinor_to_element(s.to_clifford(fr)) == s


def test_grade_masks_order():
    # ascending-tuple order: (1,4) before (2,3)
    got = grade_masks(4, 2)
    assert got == [0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]


# ------------------------------------------------------------ spin elements

@pytest.mark.parametrize("p", [1, 2])
def test_spin_elements_are_unit(p):
    s_i, s_j = spin_elements(p)
    one = CliffordElement.scalar(4 * p, 1)
    assert s_i * s_i.conjugate() == one
    assert s_j * s_j.conjugate() == one


@pytest.mark.parametrize("p", [1, 2])
def test_detected_convention_reproduces_rotations(p):
    convention = detect_spin_convention(p)
    fr = frame(p)
    s_i, s_j = spin_elements(p)
    for alpha in range(1, fr.m + 1):
        e = CliffordElement.generator(fr.m, alpha)
        img, sign = rotation_I(alpha)
        assert conjugation_action(s_i, e, convention) == \
            CliffordElement.generator(fr.m, img).scale(sign)
        img, sign = rotation_J(alpha)
        assert conjugation_action(s_j, e, convention) == \
            CliffordElement.generator(fr.m, img).scale(sign)


def test_conventions_agree_across_p():
    assert detect_spin_convention(1) == detect_spin_convention(2)


def test_rotation_k_squares_to_minus_one():
    for alpha in range(1, 9):
        img, sign = rotation_K(alpha)
        img2, sign2 = rotation_K(img)
        assert img2 == alpha and sign * sign2 == -1
        # same for the other two structures
        for rot in (rotation_I, rotation_J):
            a1, s1 = rot(alpha)
            a2, s2 = rot(a1)
            assert a2 == alpha and s1 * s2 == -1


def test_witt_j_images_under_conjugation():
    p = 2
    fr = frame(p)
    convention = detect_spin_convention(p)
    _, s_j = spin_elements(p)
    for (kind, k), (kind2, k2, sign) in witt_J_images(p).items():
        v = fr.f[k] if kind == "f" else fr.fdag[k]
        w = fr.f[k2] if kind2 == "f" else fr.fdag[k2]
        assert conjugation_action(s_j, v, convention) == w.scale(sign)


# -------------------------------------------------------------------- cells

@pytest.mark.parametrize("p", [1, 2, 3])
def test_cell_labels_and_dims(p):
    labels = cell_labels(p)
    seen = set()
    for lbl in labels:
        assert valid_cell(p, lbl.r, lbl.s)
        seen.add((lbl.r, lbl.s))
        basis = cell_basis(p, lbl.r, lbl.s)
        assert len(basis) == cell_dim(p, lbl.r, lbl.s) > 0
        for v in basis:
            assert v.grades() == [lbl.r]
    # no valid cell missed
    for r in range(2 * p + 1):
        for s in range(2 * p + 1):
            if valid_cell(p, r, s):
                assert (r, s) in seen


@pytest.mark.parametrize("p", [1, 2, 3])
def test_column_tiling(p):
    from quatcliff import linalg
    for r in range(2 * p + 1):
        col = [lbl for lbl in cell_labels(p) if lbl.r == r]
        vecs = []
        total = 0
        for lbl in col:
            basis = cell_basis(p, lbl.r, lbl.s)
            total += len(basis)
            vecs.extend(v.terms for v in basis)
        assert total == math.comb(2 * p, r)
        assert linalg.rank(vecs) == total


@pytest.mark.parametrize("p", [1, 2, 3])
def test_pq_scalars_on_cells(p):
    for lbl in cell_labels(p):
        pq, qp = pq_scalars(p, lbl.r, lbl.s)
        for v in cell_basis(p, lbl.r, lbl.s):
            assert P_op(Q_op(v)) == v.scale(pq)
            assert Q_op(P_op(v)) == v.scale(qp)
        # symmetry of the PQ eigenvalue along the row
        k = (lbl.r - lbl.s) // 2
        k_mirror = p - lbl.s - k - 1
        if 0 <= k_mirror:
            r_mirror = lbl.s + 2 * k_mirror
            if valid_cell(p, r_mirror, lbl.s):
                assert pq_scalars(p, r_mirror, lbl.s)[0] == pq


@pytest.mark.parametrize("p", [1, 2, 3])
def test_ladder_injectivity_by_grade(p):
    # P injective on grades above p, Q injective below p, kernels agree at p
    n = 2 * p
    from quatcliff import linalg
    for r in range(n + 1):
        masks = grade_masks(n, r)
        p_images = [P_op(SpinorElement.basis_vector(n, m)).terms for m in masks]
        q_images = [Q_op(SpinorElement.basis_vector(n, m)).terms for m in masks]
        ker_p = linalg.nullspace(p_images)
        ker_q = linalg.nullspace(q_images)
        if r > p:
            assert ker_p == []
        if r < p:
            assert ker_q == []
        if r == p:
            assert ker_p == ker_q


def test_cell_decompose_matches_cell_basis():
    for cb in cell_decompose(2):
        assert cb.vectors == cell_basis(2, cb.label.r, cb.label.s)
        assert cb.dim == cell_dim(2, cb.label.r, cb.label.s)


def test_projection_worked_value():
    # p = 2: fd1 fd2 I projects onto the bottom cell of column 2 as
    # (fd1 fd2 + fd3 fd4) I / 2
    x = SpinorElement.basis_vector(4, 0b0011)
    got = project_to_cell(x, CellLabel(2, 0))
    half = xs(Fraction(1, 2))
    assert got == SpinorElement(4, {0b0011: half, 0b1100: half})


@given(spinors(2))
@settings(max_examples=20, deadline=None)
def test_projection_resolves_identity_per_column(s):
    # summing the projections over the cells of each column recovers the
    # corresponding graded component
    for r in range(5):
        graded = s.grade_part(r)
        acc = SpinorElement(4)
        for lbl in cell_labels(2):
            if lbl.r == r:
                acc = acc + project_to_cell(s, lbl)
        assert acc == graded


@given(spinors(2))
@settings(max_examples=15, deadline=None)
def test_projection_is_idempotent_and_orthogonal(s):
    for lbl in (CellLabel(2, 0), CellLabel(1, 1), CellLabel(2, 2)):
        pr = project_to_cell(s, lbl)
        assert project_to_cell(pr, lbl) == pr
        # residual orthogonal to the cell
        rem = s - pr
        for v in cell_basis(2, lbl.r, lbl.s):
            assert spinor_inner(v, rem) == XS_ZERO
