"""Bracket structure of the operator algebra, verified rule by rule.

The operators split into graded families

    g0  = {h_total, h_diff, h_spin, curlyE, curlyE_dag, P, Q}
    g1  = {dz, dz_dag, dzJ, dz_dagJ}      g-1 = {mul_z, mul_z_dag, mul_zJ, mul_z_dagJ}
    g2  = {laplace}                       g-2 = {mul_r2}

and every (anti)commutation relation between them is stored below as one
table entry.  Blocks that simply commute get explicit zero right-hand
sides, so the rule set can be audited for coverage entry by entry.  A rule
is checked as an exact matrix identity on a monomial basis of the
bihomogeneous spinor-valued polynomials; a failure carries the first
offending basis monomial as a witness.

Right-hand sides are lists of (c0, c1, name) meaning (c0 + c1*p) * name,
so one rule set serves every p.  The anticommutator is used exactly when
both operands are odd.

Two smaller systems are verified the same way: the Euclidean five-grading
around (mul_X, dirac, laplace, mul_r2) on R^(4p), and the hermitian system
around (mul_z, mul_z_dag, dz, dz_dag) with the spin counter beta.  For the
hermitian Cartan element there are two sign variants in circulation; the
verifier asserts the one that gives the odd generators weight +-1 and only
reports the weights of the other.
"""

import os
from fractions import Fraction

from . import linalg
from .operators import REGISTRY, apply, apply_cached, apply_expression
from .poly import SpinorPolynomial, space_basis
from .scalars import XS_ZERO, xs

__all__ = [
    "BracketRule", "VerificationReport", "RULES", "RULE_INDEX",
    "EUCLIDEAN_RULES", "HERMITIAN_RULES", "WEIGHT_LABELS", "CARTAN_ORDER",
    "verify_bracket", "verify_table", "verify_sl2_triples",
    "verify_osp12_and_sl12", "verify_qmonogenic_stability",
    "verify_qmonogenic_equivalence", "cartan_weight_report",
    "qmonogenic_kernel", "bidegrees_up_to",
]


class BracketRule:
    """One (anti)commutation rule: [left, right] or {left, right} = rhs."""

    __slots__ = ("rule_id", "block", "kind", "left", "right", "rhs")

    def __init__(self, rule_id, block, kind, left, right, rhs):
        self.rule_id = rule_id
        self.block = block
        self.kind = kind          # "comm" | "acomm"
        self.left = left
        self.right = right
        self.rhs = tuple(rhs)     # ((c0, c1, name), ...)

    def __repr__(self):
        sym = "{}" if self.kind == "acomm" else "[]"
        return f"BracketRule({self.rule_id!r}, {sym[0]}{self.left}, {self.right}{sym[1]})"

    def rendered(self):
        lhs = ("{%s, %s}" if self.kind == "acomm" else "[%s, %s]") % (self.left, self.right)
        if not self.rhs:
            return lhs + " = 0"
        parts = []
        for c0, c1, name in self.rhs:
            if c1:
                coeff = f"({c0:+}{c1:+}p)" if c0 else (f"{c1:+}p" if abs(c1) != 1 else ("+p" if c1 > 0 else "-p"))
            else:
                coeff = f"{Fraction(c0):+}" if abs(Fraction(c0)) != 1 else ("+" if c0 > 0 else "-")
            parts.append(f"{coeff}{name if name != 'id' else '1'}")
        return lhs + " = " + " ".join(parts)


class VerificationReport:
    """Outcome of checking one rule over one or more bidegrees."""

    __slots__ = ("rule_id", "p", "bidegrees", "passed", "witness")

    def __init__(self, rule_id, p, bidegrees, passed, witness=None):
        self.rule_id = rule_id
        self.p = p
        self.bidegrees = list(bidegrees)
        self.passed = passed
        self.witness = witness

    def __repr__(self):
        state = "pass" if self.passed else "FAIL"
        return f"VerificationReport({self.rule_id!r}, p={self.p}, {state})"

    def to_json(self):
        out = {
            "rule": self.rule_id,
            "p": self.p,
            "bidegrees": [list(ab) for ab in self.bidegrees],
            "passed": self.passed,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _r(block, kind, left, right, *rhs):
    return BracketRule(f"{block}:{left},{right}", block, kind, left, right, rhs)


_DERIVS = ("dz", "dz_dag", "dzJ", "dz_dagJ")
_MULTS = ("mul_z", "mul_z_dag", "mul_zJ", "mul_z_dagJ")
_CARTANS = ("h_total", "h_diff", "h_spin")


def _build_rules():
    rules = []

    # within g0
    g0 = "within-g0"
    rules += [
        _r(g0, "comm", "h_total", "curlyE"),
        _r(g0, "comm", "h_total", "curlyE_dag"),
        _r(g0, "comm", "h_diff", "curlyE", (2, 0, "curlyE")),
        _r(g0, "comm", "h_diff", "curlyE_dag", (-2, 0, "curlyE_dag")),
        _r(g0, "comm", "h_spin", "P", (2, 0, "P")),
        _r(g0, "comm", "h_spin", "Q", (-2, 0, "Q")),
        _r(g0, "comm", "curlyE", "curlyE_dag", (1, 0, "h_diff")),
        _r(g0, "comm", "P", "Q", (1, 0, "h_spin")),
        # the remaining pairs inside g0 commute
        _r(g0, "comm", "h_total", "h_diff"),
        _r(g0, "comm", "h_total", "h_spin"),
        _r(g0, "comm", "h_diff", "h_spin"),
        _r(g0, "comm", "h_total", "P"),
        _r(g0, "comm", "h_total", "Q"),
        _r(g0, "comm", "h_diff", "P"),
        _r(g0, "comm", "h_diff", "Q"),
        _r(g0, "comm", "h_spin", "curlyE"),
        _r(g0, "comm", "h_spin", "curlyE_dag"),
        _r(g0, "comm", "curlyE", "P"),
        _r(g0, "comm", "curlyE", "Q"),
        _r(g0, "comm", "curlyE_dag", "P"),
        _r(g0, "comm", "curlyE_dag", "Q"),
    ]

    # between g0 and g1: one signed copy of the same derivative, or a swap
    g01 = "g0-g1"
    rows = {
        "h_total": (-1, -1, -1, -1),
        "h_diff": (-1, 1, -1, 1),
        "h_spin": (-1, 1, 1, -1),
    }
    for h, signs in rows.items():
        for d, sgn in zip(_DERIVS, signs):
            rules.append(_r(g01, "comm", h, d, (sgn, 0, d)))
    swaps = {
        "curlyE": ((-1, "dz_dagJ"), None, (1, "dz_dag"), None),
        "curlyE_dag": (None, (1, "dzJ"), None, (-1, "dz")),
        "P": ((-1, "dzJ"), None, None, (1, "dz_dag")),
        "Q": (None, (1, "dz_dagJ"), (-1, "dz"), None),
    }
    for h, row in swaps.items():
        for d, entry in zip(_DERIVS, row):
            if entry is None:
                rules.append(_r(g01, "comm", h, d))
            else:
                sgn, name = entry
                rules.append(_r(g01, "comm", h, d, (sgn, 0, name)))

    # between g0 and g-1
    g0m1 = "g0-g-1"
    rows = {
        "h_total": (1, 1, 1, 1),
        "h_diff": (1, -1, 1, -1),
        "h_spin": (1, -1, -1, 1),
    }
    for h, signs in rows.items():
        for v, sgn in zip(_MULTS, signs):
            rules.append(_r(g0m1, "comm", h, v, (sgn, 0, v)))
    swaps = {
        "curlyE": (None, (-1, "mul_zJ"), None, (1, "mul_z")),
        "curlyE_dag": ((1, "mul_z_dagJ"), None, (-1, "mul_z_dag"), None),
        "P": (None, (-1, "mul_z_dagJ"), (1, "mul_z"), None),
        "Q": ((1, "mul_zJ"), None, None, (-1, "mul_z_dag")),
    }
    for h, row in swaps.items():
        for v, entry in zip(_MULTS, row):
            if entry is None:
                rules.append(_r(g0m1, "comm", h, v))
            else:
                sgn, name = entry
                rules.append(_r(g0m1, "comm", h, v, (sgn, 0, name)))

    # between g0 and g+-2
    g02 = "g0-g2"
    rules += [
        _r(g02, "comm", "h_total", "laplace", (-2, 0, "laplace")),
        _r(g02, "comm", "h_total", "mul_r2", (2, 0, "mul_r2")),
        _r(g02, "comm", "h_diff", "laplace"),
        _r(g02, "comm", "h_diff", "mul_r2"),
        _r(g02, "comm", "curlyE", "laplace"),
        _r(g02, "comm", "curlyE_dag", "laplace"),
        _r(g02, "comm", "curlyE", "mul_r2"),
        _r(g02, "comm", "curlyE_dag", "mul_r2"),
        _r(g02, "comm", "h_spin", "laplace"),
        _r(g02, "comm", "P", "laplace"),
        _r(g02, "comm", "Q", "laplace"),
        _r(g02, "comm", "h_spin", "mul_r2"),
        _r(g02, "comm", "P", "mul_r2"),
        _r(g02, "comm", "Q", "mul_r2"),
    ]

    # within g1
    g1 = "within-g1"
    quarter = Fraction(1, 4)
    rules += [
        _r(g1, "acomm", "dz", "dz_dag", (quarter, 0, "laplace")),
        _r(g1, "acomm", "dzJ", "dz_dagJ", (quarter, 0, "laplace")),
        _r(g1, "acomm", "dz", "dzJ"),
        _r(g1, "acomm", "dz", "dz_dagJ"),
        _r(g1, "acomm", "dz_dag", "dzJ"),
        _r(g1, "acomm", "dz_dag", "dz_dagJ"),
        _r(g1, "acomm", "dz", "dz"),
        _r(g1, "acomm", "dz_dag", "dz_dag"),
        _r(g1, "acomm", "dzJ", "dzJ"),
        _r(g1, "acomm", "dz_dagJ", "dz_dagJ"),
    ]

    # between g1 and g-1: all sixteen anticommutators
    g1m1 = "g1-g-1"
    table = {
        ("dz", "mul_z"): ((1, 0, "E_z"), (1, 0, "beta")),
        ("dz", "mul_z_dag"): (),
        ("dz", "mul_zJ"): ((-2, 0, "Q"),),
        ("dz", "mul_z_dagJ"): ((1, 0, "curlyE_dag"),),
        ("dz_dag", "mul_z"): (),
        ("dz_dag", "mul_z_dag"): ((1, 0, "E_z_dag"), (0, 2, "id"), (-1, 0, "beta")),
        ("dz_dag", "mul_zJ"): ((-1, 0, "curlyE"),),
        ("dz_dag", "mul_z_dagJ"): ((2, 0, "P"),),
        ("dzJ", "mul_z"): ((-2, 0, "P"),),
        ("dzJ", "mul_z_dag"): ((-1, 0, "curlyE_dag"),),
        ("dzJ", "mul_zJ"): ((1, 0, "E_z"), (0, 2, "id"), (-1, 0, "beta")),
        ("dzJ", "mul_z_dagJ"): (),
        ("dz_dagJ", "mul_z"): ((1, 0, "curlyE"),),
        ("dz_dagJ", "mul_z_dag"): ((2, 0, "Q"),),
        ("dz_dagJ", "mul_zJ"): (),
        ("dz_dagJ", "mul_z_dagJ"): ((1, 0, "E_z_dag"), (1, 0, "beta")),
    }
    for d in _DERIVS:
        for v in _MULTS:
            rules.append(_r(g1m1, "acomm", d, v, *table[(d, v)]))

    # g1 and g2 commute
    for d in _DERIVS:
        rules.append(_r("g1-g2", "comm", d, "laplace"))

    # between g1 and g-2
    g1m2 = "g1-g-2"
    rules += [
        _r(g1m2, "comm", "dz", "mul_r2", (1, 0, "mul_z_dag")),
        _r(g1m2, "comm", "dzJ", "mul_r2", (1, 0, "mul_z_dagJ")),
        _r(g1m2, "comm", "dz_dag", "mul_r2", (1, 0, "mul_z")),
        _r(g1m2, "comm", "dz_dagJ", "mul_r2", (1, 0, "mul_zJ")),
    ]

    # within g-1
    gm1 = "within-g-1"
    rules += [
        _r(gm1, "acomm", "mul_z", "mul_z_dag", (1, 0, "mul_r2")),
        _r(gm1, "acomm", "mul_zJ", "mul_z_dagJ", (1, 0, "mul_r2")),
        _r(gm1, "acomm", "mul_z", "mul_zJ"),
        _r(gm1, "acomm", "mul_z", "mul_z_dagJ"),
        _r(gm1, "acomm", "mul_z_dag", "mul_zJ"),
        _r(gm1, "acomm", "mul_z_dag", "mul_z_dagJ"),
        _r(gm1, "acomm", "mul_z", "mul_z"),
        _r(gm1, "acomm", "mul_z_dag", "mul_z_dag"),
        _r(gm1, "acomm", "mul_zJ", "mul_zJ"),
        _r(gm1, "acomm", "mul_z_dagJ", "mul_z_dagJ"),
    ]

    # between g-1 and g2
    gm12 = "g-1-g2"
    rules += [
        _r(gm12, "comm", "mul_z", "laplace", (-4, 0, "dz_dag")),
        _r(gm12, "comm", "mul_zJ", "laplace", (-4, 0, "dz_dagJ")),
        _r(gm12, "comm", "mul_z_dag", "laplace", (-4, 0, "dz")),
        _r(gm12, "comm", "mul_z_dagJ", "laplace", (-4, 0, "dzJ")),
    ]

    # g-1 and g-2 commute
    for v in _MULTS:
        rules.append(_r("g-1-g-2", "comm", v, "mul_r2"))

    # g2 against g-2
    rules.append(_r("g2-g-2", "comm", "laplace", "mul_r2", (4, 0, "h_total")))

    return rules


RULES = _build_rules()
RULE_INDEX = {}
for _rule in RULES:
    if _rule.rule_id in RULE_INDEX:
        raise AssertionError(f"duplicate rule id {_rule.rule_id}")
    RULE_INDEX[_rule.rule_id] = _rule


# Weight of each odd generator under (h_total, h_diff, h_spin), as a
# commutator eigenvalue: [h, O] = w * O.
CARTAN_ORDER = _CARTANS
WEIGHT_LABELS = {
    "mul_z": (1, 1, 1),
    "mul_z_dag": (1, -1, -1),
    "dz": (-1, -1, -1),
    "dz_dag": (-1, 1, 1),
    "mul_zJ": (1, 1, -1),
    "mul_z_dagJ": (1, -1, 1),
    "dzJ": (-1, -1, 1),
    "dz_dagJ": (-1, 1, -1),
}


# The Euclidean five-grading on R^(4p): mul_X and dirac are the odd
# generators, laplace and mul_r2 span the ends, h_total = Euler + 2p.
EUCLIDEAN_RULES = [
    _r("osp12", "acomm", "mul_X", "mul_X", (-2, 0, "mul_r2")),
    _r("osp12", "acomm", "dirac", "dirac", (-2, 0, "laplace")),
    _r("osp12", "acomm", "mul_X", "dirac",
       (-2, 0, "E_z"), (-2, 0, "E_z_dag"), (0, -4, "id")),
    _r("osp12", "comm", "h_total", "mul_X", (1, 0, "mul_X")),
    _r("osp12", "comm", "h_total", "dirac", (-1, 0, "dirac")),
    _r("osp12", "comm", "dirac", "mul_r2", (2, 0, "mul_X")),
    _r("osp12", "comm", "laplace", "mul_X", (2, 0, "dirac")),
    _r("osp12", "comm", "mul_X", "mul_r2"),
    _r("osp12", "comm", "dirac", "laplace"),
    _r("osp12", "comm", "laplace", "mul_r2", (4, 0, "h_total")),
]

# The hermitian system on the same space read with n = 2p complex
# variables; beta is the spin counter and h_herm the Cartan element that
# gives mul_z, mul_z_dag, dz, dz_dag weights +1, -1, -1, +1.
HERMITIAN_RULES = [
    _r("sl12", "comm", "beta", "mul_z", (-1, 0, "mul_z")),
    _r("sl12", "comm", "beta", "mul_z_dag", (1, 0, "mul_z_dag")),
    _r("sl12", "comm", "beta", "dz", (1, 0, "dz")),
    _r("sl12", "comm", "beta", "dz_dag", (-1, 0, "dz_dag")),
    _r("sl12", "acomm", "dz", "mul_z", (1, 0, "E_z"), (1, 0, "beta")),
    _r("sl12", "acomm", "dz_dag", "mul_z_dag",
       (1, 0, "E_z_dag"), (0, 2, "id"), (-1, 0, "beta")),
    _r("sl12", "acomm", "dz", "mul_z_dag"),
    _r("sl12", "acomm", "dz_dag", "mul_z"),
    _r("sl12", "acomm", "mul_z", "mul_z_dag", (1, 0, "mul_r2")),
    _r("sl12", "acomm", "dz", "dz_dag", (Fraction(1, 4), 0, "laplace")),
    _r("sl12", "acomm", "mul_z", "mul_z"),
    _r("sl12", "acomm", "mul_z_dag", "mul_z_dag"),
    _r("sl12", "acomm", "dz", "dz"),
    _r("sl12", "acomm", "dz_dag", "dz_dag"),
    _r("sl12", "comm", "h_herm", "mul_z", (1, 0, "mul_z")),
    _r("sl12", "comm", "h_herm", "mul_z_dag", (-1, 0, "mul_z_dag")),
    _r("sl12", "comm", "h_herm", "dz", (-1, 0, "dz")),
    _r("sl12", "comm", "h_herm", "dz_dag", (1, 0, "dz_dag")),
    _r("sl12", "comm", "h_herm", "mul_r2"),
    _r("sl12", "comm", "h_herm", "laplace"),
    _r("sl12", "comm", "h_total", "mul_r2", (2, 0, "mul_r2")),
    _r("sl12", "comm", "h_total", "laplace", (-2, 0, "laplace")),
    _r("sl12", "comm", "h_herm", "h_total"),
]


def rules_parity_consistent(rules=None):
    """Ids of rules whose comm/acomm kind disagrees with operand parity."""
    bad = []
    for rule in (RULES if rules is None else rules):
        both_odd = (REGISTRY[rule.left].parity == "odd"
                    and REGISTRY[rule.right].parity == "odd")
        if (rule.kind == "acomm") != both_odd:
            bad.append(rule.rule_id)
    return bad


# ------------------------------------------------------------ verification

def bracket_image(rule, F, cache=None):
    """Apply [left, right] (or {left, right}) to F."""
    if cache is None:
        cache = {}
    LR = apply_cached(rule.left, apply_cached(rule.right, F, cache), cache)
    RL = apply_cached(rule.right, apply_cached(rule.left, F, cache), cache)
    return LR + RL if rule.kind == "acomm" else LR - RL


def verify_bracket(rule, p, a, b, cache=None, basis=None):
    """Check one rule exactly on all of P_{a,b} tensor the full spinor space."""
    if isinstance(rule, str):
        rule = RULE_INDEX[rule]
    if basis is None:
        basis = space_basis(p, a, b)
    if cache is None:
        cache = {}
    for F in basis:
        diff = bracket_image(rule, F, cache) - apply_expression(rule.rhs, F)
        if diff.terms:
            witness = {
                "a": a, "b": b,
                "basis": str(F),
                "difference": str(diff),
                "rule": rule.rendered(),
            }
            return VerificationReport(rule.rule_id, p, [(a, b)], False, witness)
    return VerificationReport(rule.rule_id, p, [(a, b)], True)


def bidegrees_up_to(max_total_degree):
    return [(a, d - a) for d in range(max_total_degree + 1)
            for a in range(d, -1, -1)]


def _check_block(p, a, b, rules):
    """All rules at one bidegree, sharing one term-image cache.

    Returns {rule_id: (passed, witness-or-None)} with plain values only, so
    the result can cross a process boundary.
    """
    basis = space_basis(p, a, b)
    cache = {}
    out = {}
    for rule in rules:
        rep = verify_bracket(rule, p, a, b, cache=cache, basis=basis)
        out[rule.rule_id] = (rep.passed, rep.witness)
    return out


def _table_block_job(args):
    p, a, b = args
    return a, b, _check_block(p, a, b, RULES)


def _worker_count(workers):
    if workers is None:
        try:
            workers = int(os.environ.get("QUATCLIFF_WORKERS", "1"))
        except ValueError:
            workers = 1
    return max(1, workers)


def verify_table(p, max_total_degree, workers=None):
    """Every rule on every bidegree with a+b <= max_total_degree.

    Returns one VerificationReport per rule, in table order, each listing
    all bidegrees it was checked on and the first witness if it ever
    failed.  Bidegrees are verified independently (in parallel when
    QUATCLIFF_WORKERS or `workers` asks for it) and merged in a fixed
    order, so the outcome does not depend on scheduling.
    """
    grid = bidegrees_up_to(max_total_degree)
    workers = _worker_count(workers)
    if workers > 1 and len(grid) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=min(workers, len(grid))) as pool:
            blocks = list(pool.map(_table_block_job, [(p, a, b) for a, b in grid]))
    else:
        blocks = [_table_block_job((p, a, b)) for a, b in grid]

    reports = []
    for rule in RULES:
        passed = True
        witness = None
        for a, b, block in blocks:
            ok, wit = block[rule.rule_id]
            if not ok and passed:
                passed = False
                witness = wit
        reports.append(VerificationReport(rule.rule_id, p, grid, passed, witness))
    return reports


# ---------------------------------------------------- sl(2) triple checks

# (h, e, f) with optional rational scalings on e and f.
SL2_TRIPLES = {
    "radial": (("h_total", 1), ("mul_r2", Fraction(1, 2)), ("laplace", Fraction(-1, 2))),
    "cell": (("h_spin", 1), ("P", 1), ("Q", 1)),
    "twist": (("h_diff", 1), ("curlyE", 1), ("curlyE_dag", 1)),
}


def _apply_scaled(pair, F, cache):
    name, c = pair
    img = apply_cached(name, F, cache)
    return img if c == 1 else img.scale(xs(Fraction(c)))


def verify_sl2_triples(p, a, b):
    """The three commuting sl(2) triples, checked exactly on P_{a,b} x S.

    Per triple: [e, f] = h, [h, e] = 2e, [h, f] = -2f.  Across triples:
    every generator of one commutes with every generator of another.
    """
    basis = space_basis(p, a, b)
    cache = {}
    triples = {}
    for tname, (hp, ep, fp) in SL2_TRIPLES.items():
        checks = {"[e,f]=h": True, "[h,e]=2e": True, "[h,f]=-2f": True}
        for F in basis:
            eF = _apply_scaled(ep, F, cache)
            fF = _apply_scaled(fp, F, cache)
            hF = _apply_scaled(hp, F, cache)
            ef = _apply_scaled(ep, fF, cache) - _apply_scaled(fp, eF, cache)
            if (ef - hF).terms:
                checks["[e,f]=h"] = False
            he = _apply_scaled(hp, eF, cache) - _apply_scaled(ep, hF, cache)
            if (he - eF.scale(xs(2))).terms:
                checks["[h,e]=2e"] = False
            hf = _apply_scaled(hp, fF, cache) - _apply_scaled(fp, hF, cache)
            if (hf + fF.scale(xs(2))).terms:
                checks["[h,f]=-2f"] = False
        triples[tname] = checks

    names = sorted(SL2_TRIPLES)
    cross = {}
    for i, t1 in enumerate(names):
        for t2 in names[i + 1:]:
            ok = True
            gens1 = [pair[0] for pair in SL2_TRIPLES[t1]]
            gens2 = [pair[0] for pair in SL2_TRIPLES[t2]]
            for x in gens1:
                for y in gens2:
                    for F in basis:
                        xy = apply_cached(x, apply_cached(y, F, cache), cache)
                        yx = apply_cached(y, apply_cached(x, F, cache), cache)
                        if (xy - yx).terms:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            cross[f"{t1}|{t2}"] = ok

    passed = all(all(c.values()) for c in triples.values()) and all(cross.values())
    return {"p": p, "a": a, "b": b, "triples": triples, "cross": cross,
            "passed": passed}


# ------------------------------------------- weight labels of odd generators

def _proportionality(cols_num, cols_den):
    """Scalar c with cols_num = c * cols_den, if one exists.

    Returns (status, value): status is "ok" (value a scalar), "zero" (both
    sides vanish, c undetermined) or "none" (no such scalar).
    """
    c = None
    for num, den in zip(cols_num, cols_den):
        for k in sorted(set(num) | set(den)):
            cn, cd = num.get(k), den.get(k)
            if cd is None:
                if cn is not None:
                    return "none", None
                continue
            if cn is None:
                if c is None:
                    c = XS_ZERO
                elif c != XS_ZERO:
                    return "none", None
                continue
            ratio = cn / cd
            if c is None:
                c = ratio
            elif c != ratio:
                return "none", None
    if c is None:
        return "zero", None
    return "ok", c


def cartan_weight_report(p, a, b):
    """Recompute the weight triple of each odd generator from the Cartan
    action: [h, O] = w * O for h in (h_total, h_diff, h_spin).

    Reports the empirically found triples next to the expected table and
    whether they agree; a weight is None when the bidegree is too small to
    pin it down (both sides vanish identically).
    """
    basis = space_basis(p, a, b)
    cache = {}
    found = {}
    consistent = True
    for gen, expected in WEIGHT_LABELS.items():
        gen_cols = [apply_cached(gen, F, cache).terms for F in basis]
        triple = []
        for h, want in zip(CARTAN_ORDER, expected):
            brk = []
            for F in basis:
                hg = apply_cached(h, apply_cached(gen, F, cache), cache)
                gh = apply_cached(gen, apply_cached(h, F, cache), cache)
                brk.append((hg - gh).terms)
            status, val = _proportionality(brk, gen_cols)
            if status == "ok":
                triple.append(str(val))
                if val != xs(want):
                    consistent = False
            elif status == "zero":
                triple.append(None)
            else:
                triple.append("not proportional")
                consistent = False
        found[gen] = triple
    return {"p": p, "a": a, "b": b, "cartan_order": list(CARTAN_ORDER),
            "found": found,
            "expected": {k: list(v) for k, v in WEIGHT_LABELS.items()},
            "consistent": consistent}


# ------------------------------------------ Euclidean and hermitian systems

def _h_alt(F):
    # The other sign variant of the hermitian Cartan element; kept out of
    # the asserted rule set because it gives the odd generators weight +-3.
    return apply_expression(((1, 0, "E_z"), (-1, 0, "E_z_dag"),
                             (0, 2, "id"), (-2, 0, "beta")), F)


def verify_osp12_and_sl12(p, a, b):
    """Grading relations of the Euclidean system (m = 4p) and the hermitian
    system (n = 2p) on P_{a,b} x S, plus a weight report for the alternate
    hermitian Cartan variant."""
    basis = space_basis(p, a, b)
    cache = {}
    euclidean = [verify_bracket(r, p, a, b, cache=cache, basis=basis)
                 for r in EUCLIDEAN_RULES]
    hermitian = [verify_bracket(r, p, a, b, cache=cache, basis=basis)
                 for r in HERMITIAN_RULES]

    alt = {}
    for gen in ("mul_z", "mul_z_dag", "dz", "dz_dag"):
        gen_cols = [apply_cached(gen, F, cache).terms for F in basis]
        brk = []
        for F in basis:
            hg = _h_alt(apply_cached(gen, F, cache))
            gh = apply_cached(gen, _h_alt(F), cache)
            brk.append((hg - gh).terms)
        status, val = _proportionality(brk, gen_cols)
        if status == "ok":
            alt[gen] = str(val)
        else:
            alt[gen] = None if status == "zero" else "not proportional"

    passed = all(r.passed for r in euclidean) and all(r.passed for r in hermitian)
    return {"p": p, "a": a, "b": b,
            "euclidean": [r.to_json() for r in euclidean],
            "hermitian": [r.to_json() for r in hermitian],
            "alternate_cartan_weights": alt,
            "passed": passed}


# ----------------------------------------------------- q-monogenic kernels

_QMONO_CACHE = {}


def qmonogenic_kernel(p, a, b):
    """Canonical basis of Ker(dz, dz_dag, dzJ, dz_dagJ) inside P_{a,b} x S."""
    key = (p, a, b)
    got = _QMONO_CACHE.get(key)
    if got is not None:
        return got
    basis = space_basis(p, a, b)
    images = []
    for F in basis:
        stacked = {}
        for i, name in enumerate(_DERIVS):
            for k, c in apply(name, F).terms.items():
                stacked[(i, k)] = c
        images.append(stacked)
    combos = linalg.nullspace(images)
    vecs = []
    for combo in combos:
        acc = SpinorPolynomial.zero(2 * p)
        for j, c in combo.items():
            acc = acc + basis[j].scale(c)
        vecs.append(acc)
    _QMONO_CACHE[key] = vecs
    return vecs


def verify_qmonogenic_stability(p, a, b):
    """Images of the joint kernel under curlyE, curlyE_dag, P, Q stay in
    the joint kernel (at the shifted bidegree for the first two)."""
    kernel = qmonogenic_kernel(p, a, b)
    moves = {"curlyE": (a + 1, b - 1), "curlyE_dag": (a - 1, b + 1),
             "P": (a, b), "Q": (a, b)}
    ops = {}
    passed = True
    for name, (ta, tb) in moves.items():
        violations = []
        target = None
        if ta >= 0 and tb >= 0:
            target = [v.terms for v in qmonogenic_kernel(p, ta, tb)]
        for v in kernel:
            img = apply(name, v)
            if not img.terms:
                continue
            if target is None or linalg.solve_in_span(target, img.terms) is None:
                violations.append({"basis": str(v)})
                break
        ok = not violations
        passed = passed and ok
        ops[name] = {"ok": ok, "violations": violations,
                     "target_bidegree": [ta, tb]}
    return {"p": p, "a": a, "b": b, "kernel_dim": len(kernel),
            "operators": ops, "passed": passed}


def verify_qmonogenic_equivalence(p, a, b):
    """The joint kernel of the four rotated Dirac operators equals the
    joint kernel of the four complex derivative operators, as subspaces."""
    basis = space_basis(p, a, b)

    def joint_nullspace(names):
        images = []
        for F in basis:
            stacked = {}
            for i, name in enumerate(names):
                for k, c in apply(name, F).terms.items():
                    stacked[(i, k)] = c
            images.append(stacked)
        return linalg.nullspace(images)

    dirac_combos = joint_nullspace(("dirac", "dirac_I", "dirac_J", "dirac_K"))
    deriv_combos = joint_nullspace(_DERIVS)
    same = dirac_combos == deriv_combos
    return {"p": p, "a": a, "b": b, "dim": len(deriv_combos),
            "passed": same}
