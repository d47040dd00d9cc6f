"""Spinor-valued polynomials in n = 2p complex variables.

A term is keyed by (alpha, beta, mask): alpha and beta are exponent tuples of
length n for the z and conjugate-z variables, mask is a spinor blade over n
bits.  Coefficients live in Q(i, sqrt2).  The canonical term order, used for
printing, JSON and basis enumeration, is

    (total degree, alpha + beta as one tuple, ascending spinor index tuple)

Scalar-valued polynomials are the mask-0 slice.
"""

from itertools import combinations_with_replacement
from math import comb

from . import linalg
from .scalars import ExtendedScalar, XS_ONE, xs
from .witt import SpinorElement, grade_masks, mask_sort_key


def term_sort_key(key):
    alpha, beta, mask = key
    return (sum(alpha) + sum(beta), alpha + beta, mask_sort_key(mask))


class SpinorPolynomial:
    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = c

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def monomial(cls, n, alpha, beta, mask=0, coeff=XS_ONE):
        alpha, beta = tuple(alpha), tuple(beta)
        if len(alpha) != n or len(beta) != n:
            raise ValueError("exponent tuple length must equal n")
        if not isinstance(coeff, ExtendedScalar):
            coeff = xs(coeff)
        return cls(n, {(alpha, beta, mask): coeff})

    @classmethod
    def from_value(cls, n, value, alpha=None, beta=None):
        """Constant polynomial (or one monomial times) a SpinorElement value."""
        alpha = tuple(alpha) if alpha is not None else (0,) * n
        beta = tuple(beta) if beta is not None else (0,) * n
        return cls(n, {(alpha, beta, mask): c for mask, c in value.terms.items()})

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("mixing polynomial rings of different rank")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        linalg.axpy(out, other.terms, XS_ONE)
        return SpinorPolynomial(self.n, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        linalg.axpy(out, other.terms, -XS_ONE)
        return SpinorPolynomial(self.n, out)

    def __neg__(self):
        return SpinorPolynomial(self.n, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        if not isinstance(c, ExtendedScalar):
            c = xs(c)
        return SpinorPolynomial(self.n, linalg.vec_scale(self.terms, c))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SpinorPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # ---------------------------------------------------------- inspection

    def bidegrees(self):
        return sorted({(sum(a), sum(b)) for a, b, _ in self.terms})

    def bidegree_part(self, a, b):
        return SpinorPolynomial(self.n, {
            k: c for k, c in self.terms.items()
            if sum(k[0]) == a and sum(k[1]) == b})

    def value_grades(self):
        return sorted({m.bit_count() for _, _, m in self.terms})

    def value_grade_part(self, r):
        return SpinorPolynomial(self.n, {
            k: c for k, c in self.terms.items() if k[2].bit_count() == r})

    def evaluate_value(self):
        """Collapse a constant polynomial to its SpinorElement value."""
        zero_exp = (0,) * self.n
        out = {}
        for (a, b, mask), c in self.terms.items():
            if a != zero_exp or b != zero_exp:
                raise ValueError("polynomial is not constant")
            out[mask] = c
        return SpinorElement(self.n, out)

    # ---------------------------------------------------- primitive moves

    def mul_z_var(self, k):
        """Multiply by z_k (1-based)."""
        i = k - 1
        out = {}
        for (a, b, m), c in self.terms.items():
            a2 = a[:i] + (a[i] + 1,) + a[i + 1:]
            out[(a2, b, m)] = c
        return SpinorPolynomial(self.n, out)

    def mul_zbar_var(self, k):
        i = k - 1
        out = {}
        for (a, b, m), c in self.terms.items():
            b2 = b[:i] + (b[i] + 1,) + b[i + 1:]
            out[(a, b2, m)] = c
        return SpinorPolynomial(self.n, out)

    def diff_z(self, k):
        """d/dz_k."""
        i = k - 1
        out = {}
        for (a, b, m), c in self.terms.items():
            e = a[i]
            if e:
                a2 = a[:i] + (e - 1,) + a[i + 1:]
                out[(a2, b, m)] = c * e
        return SpinorPolynomial(self.n, out)

    def diff_zbar(self, k):
        i = k - 1
        out = {}
        for (a, b, m), c in self.terms.items():
            e = b[i]
            if e:
                b2 = b[:i] + (e - 1,) + b[i + 1:]
                out[(a, b2, m)] = c * e
        return SpinorPolynomial(self.n, out)

    def wedge(self, k):
        """Left multiplication of the value by fdag_k."""
        bit = 1 << (k - 1)
        below = bit - 1
        out = {}
        for (a, b, m), c in self.terms.items():
            if m & bit:
                continue
            sign = (m & below).bit_count() & 1
            out[(a, b, m | bit)] = -c if sign else c
        return SpinorPolynomial(self.n, out)

    def contract(self, k):
        """Left multiplication of the value by f_k."""
        bit = 1 << (k - 1)
        below = bit - 1
        out = {}
        for (a, b, m), c in self.terms.items():
            if not m & bit:
                continue
            sign = (m & below).bit_count() & 1
            out[(a, b, m ^ bit)] = -c if sign else c
        return SpinorPolynomial(self.n, out)

    def scale_by_euler(self, which):
        """Multiply each term by its z-degree ('z') or zbar-degree ('zbar')."""
        out = {}
        for key, c in self.terms.items():
            d = sum(key[0]) if which == "z" else sum(key[1])
            if d:
                out[key] = c * d
        return SpinorPolynomial(self.n, out)

    # ------------------------------------------------------- serialisation

    def sorted_keys(self):
        return sorted(self.terms, key=term_sort_key)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for a, b, m in self.sorted_keys():
            c = self.terms[(a, b, m)]
            factors = []
            for i, e in enumerate(a):
                if e:
                    factors.append(f"z{i + 1}" + (f"^{e}" if e > 1 else ""))
            for i, e in enumerate(b):
                if e:
                    factors.append(f"w{i + 1}" + (f"^{e}" if e > 1 else ""))
            factors.append("I" if m == 0 else "fd{%s}I" % ",".join(
                str(k + 1) for k in range(self.n) if m >> k & 1))
            bits.append(f"({c})*" + "*".join(factors))
        return " + ".join(bits)

    __repr__ = __str__

    def to_json(self):
        out = []
        for a, b, m in self.sorted_keys():
            out.append({
                "alpha": list(a),
                "beta": list(b),
                "spinor": [k + 1 for k in range(self.n) if m >> k & 1],
                "coeff": self.terms[(a, b, m)].to_json(),
            })
        return out

    @classmethod
    def from_json(cls, data, n=None):
        if n is None:
            if not data:
                raise ValueError("cannot infer rank from an empty polynomial")
            n = len(data[0]["alpha"])
        poly = cls.zero(n)
        for item in data:
            mask = 0
            for k in item.get("spinor", []):
                mask |= 1 << (k - 1)
            poly = poly + cls.monomial(
                n, item["alpha"], item["beta"], mask,
                ExtendedScalar.from_json(item["coeff"]))
        return poly


# -------------------------------------------------------------- enumeration

def exponent_tuples(n, degree):
    """All exponent tuples of length n with entries summing to `degree`,
    in ascending tuple order."""
    out = set()
    for combo in combinations_with_replacement(range(n), degree):
        t = [0] * n
        for i in combo:
            t[i] += 1
        out.add(tuple(t))
    return sorted(out)


def monomial_keys(p, a, b):
    """(alpha, beta) pairs of P_{a,b}, canonical order."""
    n = 2 * p
    return [(alpha, beta) for alpha in exponent_tuples(n, a)
            for beta in exponent_tuples(n, b)]


def poly_dim(p, a, b):
    """dim P_{a,b} over 2p complex variables."""
    n = 2 * p
    return comb(a + n - 1, n - 1) * comb(b + n - 1, n - 1)


def value_basis(p, value_space):
    """Basis of a value space inside S, as SpinorElements.

    value_space is one of ("scalar",), ("full",), ("grade", r), ("cell", r, s).
    """
    from .witt import cell_basis
    n = 2 * p
    kind = value_space[0]
    if kind == "scalar":
        return [SpinorElement.basis_vector(n, 0)]
    if kind == "full":
        return [SpinorElement.basis_vector(n, m)
                for r in range(n + 1) for m in grade_masks(n, r)]
    if kind == "grade":
        return [SpinorElement.basis_vector(n, m)
                for m in grade_masks(n, value_space[1])]
    if kind == "cell":
        return list(cell_basis(p, value_space[1], value_space[2]))
    raise ValueError(f"unknown value space {value_space!r}")


def space_basis(p, a, b, value_space=("full",)):
    """Ordered basis of P_{a,b} tensor the value space, monomial-major."""
    n = 2 * p
    values = value_basis(p, value_space)
    out = []
    for alpha, beta in monomial_keys(p, a, b):
        for v in values:
            out.append(SpinorPolynomial.from_value(n, v, alpha, beta))
    return out
