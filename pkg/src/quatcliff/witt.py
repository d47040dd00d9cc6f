"""Witt basis, primitive idempotent, spinor space and the symplectic cells.

Conventions, fixed once for the whole package:

  f_k      = -1/2 (e_{2k-1} - i e_{2k})          k = 1 .. n,  n = 2p
  fdag_k   = +1/2 (e_{2k-1} + i e_{2k})
  I        = (f_1 fdag_1)(f_2 fdag_2) ... (f_n fdag_n)

The spinor space S is spanned by fdag_A I over subsets A of {1..n}; a
SpinorElement stores subsets as bitmasks.  Left multiplication by fdag_k is a
signed wedge, by f_k a signed contraction, both with sign (-1)^(number of
indices in A below k); witt-to-clifford conversion plus the full algebra in
clifford.py serves as the oracle for these rules in the tests.

The value operators here are

  beta = sum fdag_k f_k        (grade counter on S)
  P    = sum f_{2j} f_{2j-1)   (column lowering, see cells below)
  Q    = sum fdag_{2j-1} fdag_{2j}

and the cell triangle: column r holds the grade-r spinors, the bottom cell of
column s is S^s_s = Ker P restricted to grade s, and S^{s+2k}_s = Q^k S^s_s.
"""

from fractions import Fraction
from functools import lru_cache

from . import linalg
from .clifford import CliffordElement
from .scalars import ExtendedScalar, XS_ONE, XS_ZERO, Rat, xs


class SpinorElement:
    """Element of S for n Witt pairs: dict {mask over n bits: ExtendedScalar}."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for mask, c in terms.items():
                if c:
                    self.terms[mask] = c

    @classmethod
    def basis_vector(cls, n, mask, coeff=XS_ONE):
        return cls(n, {mask: coeff})

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("mixing spinor spaces of different rank")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        linalg.axpy(out, other.terms, XS_ONE)
        return SpinorElement(self.n, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        linalg.axpy(out, other.terms, -XS_ONE)
        return SpinorElement(self.n, out)

    def __neg__(self):
        return SpinorElement(self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, c):
        if not isinstance(c, ExtendedScalar):
            c = xs(c)
        return SpinorElement(self.n, linalg.vec_scale(self.terms, c))

    def wedge(self, k):
        """Left multiplication by fdag_k."""
        bit = 1 << (k - 1)
        below = bit - 1
        out = {}
        for mask, c in self.terms.items():
            if mask & bit:
                continue
            sign = (mask & below).bit_count() & 1
            out[mask | bit] = -c if sign else c
        return SpinorElement(self.n, out)

    def contract(self, k):
        """Left multiplication by f_k."""
        bit = 1 << (k - 1)
        below = bit - 1
        out = {}
        for mask, c in self.terms.items():
            if not mask & bit:
                continue
            sign = (mask & below).bit_count() & 1
            out[mask ^ bit] = -c if sign else c
        return SpinorElement(self.n, out)

    def grade_part(self, r):
        return SpinorElement(self.n, {m: c for m, c in self.terms.items()
                                      if m.bit_count() == r})

    def grades(self):
        return sorted({m.bit_count() for m in self.terms})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SpinorElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for mask in sorted(self.terms, key=mask_sort_key):
            c = self.terms[mask]
            name = "I" if mask == 0 else "fd{%s}I" % ",".join(
                str(k + 1) for k in range(self.n) if mask >> k & 1)
            bits.append(f"({c})*{name}")
        return " + ".join(bits)

    __repr__ = __str__

    def to_clifford(self, frame):
        out = CliffordElement.zero(frame.m)
        for mask, c in self.terms.items():
            out = out + frame.spinor_blade(mask).scale(c)
        return out


def mask_sort_key(mask):
    """Blade subsets ordered lexicographically on their ascending index tuples."""
    return tuple(k + 1 for k in range(mask.bit_length()) if mask >> k & 1)


def mask_indices(mask):
    return [k + 1 for k in range(mask.bit_length()) if mask >> k & 1]


def grade_masks(n, r):
    """All grade-r masks, in the canonical (lexicographic subset) order."""
    from itertools import combinations
    masks = []
    for combo in combinations(range(1, n + 1), r):
        m = 0
        for k in combo:
            m |= 1 << (k - 1)
        masks.append(m)
    masks.sort(key=mask_sort_key)
    return masks


def beta(s):
    """Spin-Euler operator: multiplies each grade-r component by r."""
    out = {}
    for mask, c in s.terms.items():
        r = mask.bit_count()
        if r:
            out[mask] = c * r
    return SpinorElement(s.n, out)


def P_op(s):
    """P = sum_j f_{2j} f_{2j-1}; drops the spinor grade by two."""
    p = s.n // 2
    out = SpinorElement(s.n)
    for j in range(1, p + 1):
        out = out + s.contract(2 * j - 1).contract(2 * j)
    return out


def Q_op(s):
    """Q = sum_j fdag_{2j-1} fdag_{2j}; raises the spinor grade by two."""
    p = s.n // 2
    out = SpinorElement(s.n)
    for j in range(1, p + 1):
        out = out + s.wedge(2 * j).wedge(2 * j - 1)
    return out


def spinor_inner(x, y):
    """Hermitian inner product on S; equals 2^-n on each diagonal blade pair.

    Computed componentwise; tests confirm it against the Clifford-algebra
    pairing of the converted elements.
    """
    x._check(y)
    total = XS_ZERO
    for mask, c in x.terms.items():
        d = y.terms.get(mask)
        if d is not None:
            total = total + c.conjugate() * d
    return total * Fraction(1, 2 ** x.n)


class WittFrame:
    """Clifford-algebra realisation of the Witt basis for given p."""

    __slots__ = ("p", "n", "m", "f", "fdag", "idempotent", "_blade_cache")

    def __init__(self, p):
        self.p = p
        self.n = 2 * p
        self.m = 4 * p
        half = Fraction(1, 2)
        self.f = [None]
        self.fdag = [None]
        for k in range(1, self.n + 1):
            e_odd = CliffordElement.generator(self.m, 2 * k - 1)
            e_even = CliffordElement.generator(self.m, 2 * k)
            self.f.append(e_odd.scale(xs(-half)) + e_even.scale(xs(0, half)))
            self.fdag.append(e_odd.scale(xs(half)) + e_even.scale(xs(0, half)))
        ide = CliffordElement.scalar(self.m, 1)
        for k in range(1, self.n + 1):
            ide = ide * (self.f[k] * self.fdag[k])
        self.idempotent = ide
        self._blade_cache = {0: ide}

    def spinor_blade(self, mask):
        """fdag_{a1} ... fdag_{ak} I for the ascending index set in mask."""
        cached = self._blade_cache.get(mask)
        if cached is not None:
            return cached
        low = mask & -mask
        k = low.bit_length()
        out = self.fdag[k] * self.spinor_blade(mask ^ low)
        self._blade_cache[mask] = out
        return out

    def spinor_to_element(self, x):
        """Inverse of SpinorElement.to_clifford, via exact solve on blades."""
        masks = [m for r in range(self.n + 1) for m in grade_masks(self.n, r)]
        basis = [self.spinor_blade(m).terms for m in masks]
        coeffs = linalg.solve_in_span(basis, x.terms)
        if coeffs is None:
            raise ValueError("element is not in the spinor module")
        return SpinorElement(self.n, {m: c for m, c in zip(masks, coeffs) if c})


def build_witt_frame(p):
    return WittFrame(p)


# cached frames: immutable after construction, safe to share
@lru_cache(maxsize=None)
def _frame(p):
    return WittFrame(p)


def spin_elements(p):
    """The two spin group elements realising the complex structures.

    s_I = prod_j (sqrt2/2)(1 + e_{2j-1} e_{2j})            j = 1 .. 2p
    s_J = prod_j (1/2)(1 + e_{4j-3} e_{4j-1})(1 - e_{4j-2} e_{4j})   j = 1 .. p
    """
    m = 4 * p
    half = Fraction(1, 2)
    one = CliffordElement.scalar(m, 1)
    s_i = one
    for j in range(1, 2 * p + 1):
        factor = (one + CliffordElement.blade(m, [2 * j - 1, 2 * j]))
        s_i = s_i * factor.scale(xs(0, 0, half, 0))
    s_j = one
    for j in range(1, p + 1):
        base = 4 * (j - 1)
        first = one + CliffordElement.blade(m, [base + 1, base + 3])
        second = one - CliffordElement.blade(m, [base + 2, base + 4])
        s_j = s_j * (first * second).scale(xs(half))
    return s_i, s_j


def conjugation_action(s, x, convention="s*x*bar(s)"):
    """Conjugate x by the spin element s.

    Both candidate conventions are available; detect_spin_convention picks the
    one reproducing the rotation matrices on all generators and the reports
    record the winner.
    """
    if convention == "s*x*bar(s)":
        return s * x * s.conjugate()
    if convention == "bar(s)*x*s":
        return s.conjugate() * x * s
    raise ValueError(f"unknown convention {convention!r}")


def rotation_I(alpha):
    """Signed permutation of generators for the first complex structure."""
    if alpha % 2 == 1:
        return alpha + 1, 1
    return alpha - 1, -1


def rotation_J(alpha):
    """Second complex structure; acts per block of four real coordinates."""
    pos = (alpha - 1) % 4
    if pos == 0:
        return alpha + 2, 1
    if pos == 1:
        return alpha + 2, -1
    if pos == 2:
        return alpha - 2, -1
    return alpha - 2, 1


def rotation_K(alpha):
    """Third structure, the composite of the other two."""
    img, sign = rotation_I(alpha)
    img2, sign2 = rotation_J(img)
    return img2, sign * sign2


def witt_J_images(p):
    """The fixed action of the second structure on Witt vectors.

    Returns {('f'|'fdag', k): (kind, index, sign)} for k = 1 .. 2p.
    """
    out = {}
    for j in range(1, p + 1):
        k1, k2 = 2 * j - 1, 2 * j
        out[("f", k1)] = ("fdag", k2, -1)
        out[("f", k2)] = ("fdag", k1, 1)
        out[("fdag", k1)] = ("f", k2, -1)
        out[("fdag", k2)] = ("f", k1, 1)
    return out


def detect_spin_convention(p):
    """Try both conjugation orders; return the one matching the rotations.

    The covering map direction is not something we take on faith: the check
    below demands s_I and s_J both reproduce their signed permutations on
    every generator, and the Witt-vector images for s_J as well.
    """
    frame = _frame(p)
    s_i, s_j = spin_elements(p)
    j_images = witt_J_images(p)
    for convention in ("s*x*bar(s)", "bar(s)*x*s"):
        ok = True
        for alpha in range(1, frame.m + 1):
            e = CliffordElement.generator(frame.m, alpha)
            img, sign = rotation_I(alpha)
            expect = CliffordElement.generator(frame.m, img).scale(sign)
            if conjugation_action(s_i, e, convention) != expect:
                ok = False
                break
            img, sign = rotation_J(alpha)
            expect = CliffordElement.generator(frame.m, img).scale(sign)
            if conjugation_action(s_j, e, convention) != expect:
                ok = False
                break
        if ok:
            for (kind, k), (kind2, k2, sign) in j_images.items():
                v = frame.f[k] if kind == "f" else frame.fdag[k]
                w = frame.f[k2] if kind2 == "f" else frame.fdag[k2]
                if conjugation_action(s_j, v, convention) != w.scale(sign):
                    ok = False
                    break
        if ok:
            return convention
    raise AssertionError("no conjugation convention reproduces the rotations")


class CellLabel:
    """Cell S^r_s: r is the column (spinor grade), s the row."""

    __slots__ = ("r", "s")

    def __init__(self, r, s):
        self.r = r
        self.s = s

    def __eq__(self, other):
        return isinstance(other, CellLabel) and (self.r, self.s) == (other.r, other.s)

    def __hash__(self):
        return hash((self.r, self.s))

    def __repr__(self):
        return f"CellLabel(r={self.r}, s={self.s})"

    def to_json(self):
        return {"r": self.r, "s": self.s}


def valid_cell(p, r, s):
    return 0 <= s <= min(r, 2 * p - r) and (r - s) % 2 == 0


def cell_labels(p):
    return [CellLabel(r, s) for r in range(2 * p + 1)
            for s in range(r % 2, min(r, 2 * p - r) + 1, 2)]


def cell_dim(p, r, s):
    """dim S^r_s; every cell of row s shares the bottom-cell dimension."""
    from math import comb
    if not valid_cell(p, r, s):
        return 0
    low = comb(2 * p, s - 2) if s >= 2 else 0
    return comb(2 * p, s) - low


class CellBasis:
    __slots__ = ("label", "vectors")

    def __init__(self, label, vectors):
        self.label = label
        self.vectors = vectors

    @property
    def dim(self):
        return len(self.vectors)

    def __repr__(self):
        return f"CellBasis({self.label!r}, dim={self.dim})"


_cell_cache = {}


def cell_basis(p, r, s):
    """Canonical basis of the cell S^r_s (empty list for invalid labels)."""
    key = (p, r, s)
    cached = _cell_cache.get(key)
    if cached is not None:
        return cached
    n = 2 * p
    if not valid_cell(p, r, s):
        _cell_cache[key] = []
        return []
    if r == s:
        masks = grade_masks(n, s)
        images = [P_op(SpinorElement.basis_vector(n, m)).terms for m in masks]
        kernel = linalg.nullspace(images)
        vecs = [{masks[j]: c for j, c in coords.items()} for coords in kernel]
    else:
        k = (r - s) // 2
        vecs = []
        for base_vec in cell_basis(p, s, s):
            cur = base_vec
            for _ in range(k):
                cur = Q_op(cur)
            vecs.append(cur.terms)
    reduced, _ = linalg.rref(vecs, key_order=grade_masks(n, r))
    out = [SpinorElement(n, row) for row in reduced]
    _cell_cache[key] = out
    return out


def cell_decompose(p):
    """All cells of the triangle, as canonical bases, column-major order."""
    return [CellBasis(lbl, cell_basis(p, lbl.r, lbl.s)) for lbl in cell_labels(p)]


def project_to_cell(s, label):
    """Orthogonal projection of a SpinorElement onto one cell span."""
    p = s.n // 2
    basis = cell_basis(p, label.r, label.s)
    if not basis:
        return SpinorElement(s.n)
    gram_cols = []
    for vj in basis:
        col = {}
        for i, vi in enumerate(basis):
            val = spinor_inner(vi, vj)
            if val:
                col[i] = val
        gram_cols.append(col)
    rhs = {}
    for i, vi in enumerate(basis):
        val = spinor_inner(vi, s)
        if val:
            rhs[i] = val
    coeffs = linalg.solve_in_span(gram_cols, rhs)
    out = SpinorElement(s.n)
    for c, v in zip(coeffs, basis):
        if c:
            out = out + v.scale(c)
    return out


def pq_scalars(p, r, s):
    """Exact scalars of the compositions PQ and QP on the cell S^r_s.

    With k = (r - s)/2 steps of Q from the bottom cell, PQ acts as
    (k+1)(p-s-k) and QP as k(p-s-k+1); both are verified against the operator
    action in the tests, not assumed.
    """
    k = (r - s) // 2
    return (k + 1) * (p - s - k), k * (p - s - k + 1)
