"""Exact scalar arithmetic in the field Q(i, sqrt2).

Every coefficient in this package is an ExtendedScalar

    (ar + ai*i) + (br + bi*i)*sqrt2

with the four components kept as exact rationals in lowest terms.  Plain
Gaussian rationals (br = bi = 0) cover almost everything; the sqrt2 part only
shows up in spin group elements.

The rational type is selected at import: gmpy2.mpq (a compiled GMP core) when
available, stdlib fractions.Fraction otherwise.  Set QUATCLIFF_RATIONAL_BACKEND
to "gmpy2" or "fraction" to force one; "fraction" is the portable fallback and
the two give identical results everywhere (benchmarks/bench_backends.py times
them against each other).
"""

import os
from fractions import Fraction

BACKEND_ENV = "QUATCLIFF_RATIONAL_BACKEND"


def _pick_backend():
    choice = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if choice not in ("auto", "gmpy2", "fraction"):
        raise ValueError(
            f"{BACKEND_ENV} must be 'gmpy2', 'fraction' or 'auto', got {choice!r}")
    if choice in ("auto", "gmpy2"):
        try:
            from gmpy2 import mpq
            return "gmpy2", mpq
        except ImportError:
            if choice == "gmpy2":
                raise
    return "fraction", Fraction


BACKEND_NAME, Rat = _pick_backend()

RAT_ZERO = Rat(0)
RAT_ONE = Rat(1)


def to_rat(x):
    """Coerce an int, Fraction, mpq or 'num/den' string to the active backend type."""
    if isinstance(x, (int, Fraction)):
        return Rat(x)
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return Rat(int(num), int(den)) if den else Rat(int(num))
    return Rat(x) if not isinstance(x, type(RAT_ZERO)) else x


def rat_str(q):
    """Canonical 'num/den' form, denominator always present and positive."""
    return f"{q.numerator}/{q.denominator}"


class ExtendedScalar:
    """An element of Q(i, sqrt2), stored as four exact rationals."""

    __slots__ = ("ar", "ai", "br", "bi")

    def __init__(self, ar=0, ai=0, br=0, bi=0):
        self.ar = to_rat(ar)
        self.ai = to_rat(ai)
        self.br = to_rat(br)
        self.bi = to_rat(bi)

    @classmethod
    def _raw(cls, ar, ai, br, bi):
        # bypasses coercion; callers guarantee backend rationals
        self = object.__new__(cls)
        self.ar = ar
        self.ai = ai
        self.br = br
        self.bi = bi
        return self

    @classmethod
    def from_rational(cls, q):
        return cls._raw(to_rat(q), RAT_ZERO, RAT_ZERO, RAT_ZERO)

    def is_zero(self):
        return not (self.ar or self.ai or self.br or self.bi)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not (self.ai or self.br or self.bi)

    def __add__(self, other):
        if not isinstance(other, ExtendedScalar):
            return NotImplemented
        return ExtendedScalar._raw(self.ar + other.ar, self.ai + other.ai,
                                   self.br + other.br, self.bi + other.bi)

    def __sub__(self, other):
        if not isinstance(other, ExtendedScalar):
            return NotImplemented
        return ExtendedScalar._raw(self.ar - other.ar, self.ai - other.ai,
                                   self.br - other.br, self.bi - other.bi)

    def __neg__(self):
        return ExtendedScalar._raw(-self.ar, -self.ai, -self.br, -self.bi)

    def __mul__(self, other):
        if isinstance(other, ExtendedScalar):
            ar, ai, br, bi = self.ar, self.ai, self.br, self.bi
            cr, ci, dr, di = other.ar, other.ai, other.br, other.bi
            if not (br or bi or dr or di):
                # plain Gaussian rationals, the common case
                return ExtendedScalar._raw(ar * cr - ai * ci, ar * ci + ai * cr,
                                           RAT_ZERO, RAT_ZERO)
            # (a + b s)(c + d s) = (ac + 2bd) + (ad + bc) s   with s*s = 2
            er = ar * cr - ai * ci + 2 * (br * dr - bi * di)
            ei = ar * ci + ai * cr + 2 * (br * di + bi * dr)
            fr = ar * dr - ai * di + br * cr - bi * ci
            fi = ar * di + ai * dr + br * ci + bi * cr
            return ExtendedScalar._raw(er, ei, fr, fi)
        if isinstance(other, (int, Fraction, type(RAT_ZERO))):
            q = to_rat(other)
            return ExtendedScalar._raw(self.ar * q, self.ai * q,
                                       self.br * q, self.bi * q)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        """Exact inverse.  x = a + b*sqrt2 with a, b Gaussian rational;
        x * (a - b*sqrt2) = a^2 - 2 b^2 lands in Q(i), which inverts by the
        usual conjugate trick."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero ExtendedScalar")
        ar, ai, br, bi = self.ar, self.ai, self.br, self.bi
        # g = a^2 - 2 b^2  (Gaussian rational)
        gr = ar * ar - ai * ai - 2 * (br * br - bi * bi)
        gi = 2 * (ar * ai - 2 * br * bi)
        norm = gr * gr + gi * gi
        if not norm:
            raise ZeroDivisionError("inverse hit a zero norm; input not in the field?")
        hr, hi = gr / norm, -gi / norm  # h = 1/g
        # 1/x = (a - b*sqrt2) * h
        return ExtendedScalar._raw(ar * hr - ai * hi, ar * hi + ai * hr,
                                   -(br * hr - bi * hi), -(br * hi + bi * hr))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, type(RAT_ZERO))):
            q = to_rat(other)
            return ExtendedScalar._raw(self.ar / q, self.ai / q,
                                       self.br / q, self.bi / q)
        if isinstance(other, ExtendedScalar):
            return self * other.inverse()
        return NotImplemented

    def conjugate(self):
        """Complex conjugation: i -> -i, sqrt2 fixed."""
        return ExtendedScalar._raw(self.ar, -self.ai, self.br, -self.bi)

    def __eq__(self, other):
        if not isinstance(other, ExtendedScalar):
            return NotImplemented
        return (self.ar == other.ar and self.ai == other.ai
                and self.br == other.br and self.bi == other.bi)

    def __hash__(self):
        return hash((self.ar, self.ai, self.br, self.bi))

    def __reduce__(self):
        # string round-trip keeps pickles portable across rational backends
        return (_unpickle_scalar, (rat_str(self.ar), rat_str(self.ai),
                                   rat_str(self.br), rat_str(self.bi)))

    def __str__(self):
        parts = []
        for q, tag in ((self.ar, ""), (self.ai, "i"), (self.br, "s2"), (self.bi, "i*s2")):
            if not q:
                continue
            body = str(Fraction(q.numerator, q.denominator))
            if tag:
                body = tag if body == "1" else ("-" + tag if body == "-1" else f"{body}*{tag}")
            parts.append(body)
        if not parts:
            return "0"
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __repr__(self):
        return f"ExtendedScalar({self})"

    def to_json(self):
        return {"a_re": rat_str(self.ar), "a_im": rat_str(self.ai),
                "b_re": rat_str(self.br), "b_im": rat_str(self.bi)}

    @classmethod
    def from_json(cls, obj):
        return cls(to_rat(obj["a_re"]), to_rat(obj["a_im"]),
                   to_rat(obj["b_re"]), to_rat(obj["b_im"]))


def _unpickle_scalar(ar, ai, br, bi):
    return ExtendedScalar(to_rat(ar), to_rat(ai), to_rat(br), to_rat(bi))


XS_ZERO = ExtendedScalar._raw(RAT_ZERO, RAT_ZERO, RAT_ZERO, RAT_ZERO)
XS_ONE = ExtendedScalar._raw(RAT_ONE, RAT_ZERO, RAT_ZERO, RAT_ZERO)
XS_I = ExtendedScalar._raw(RAT_ZERO, RAT_ONE, RAT_ZERO, RAT_ZERO)
XS_SQRT2 = ExtendedScalar._raw(RAT_ZERO, RAT_ZERO, RAT_ONE, RAT_ZERO)


def xs(ar=0, ai=0, br=0, bi=0):
    """Shorthand constructor; accepts ints, Fractions, backend rationals, 'n/d' strings."""
    return ExtendedScalar(ar, ai, br, bi)
