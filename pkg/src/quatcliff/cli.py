"""Command line front end: run configurations, JSON reports, exit codes.

Check names are short stable tokens (they double as CLI flag values and
report keys):

* ``relations``   the full bracket rule table on polynomial spaces
* ``cells``       the spinor cell triangle and its ladder scalars
* ``thm5``        tiling of scalar harmonics by twisted raising powers
* ``prop8``       tiling of the q-monogenic cell spaces
* ``prop9``       the sixteen-piece tiling of cell-valued symplectic
                  harmonics, with exclusion witnesses
* ``thm10``       the graded tiling of the whole polynomial space
* ``euclidean``   monogenic dimension ladder on R^(4p)
* ``hermitian``   per-grade hermitian ladder of even words
* ``example13``   the pinned p=2 decomposition of z2 fd{1}I

Check jobs are independent; with more than one worker they dispatch to
a process pool and report assembly stays single threaded.  Emitted JSON
is canonical (sorted keys), so identical configurations produce
identical bytes apart from the timing block.
"""

import argparse
import json
import os
import sys
import time
from math import comb

from . import fischer, relations
from .poly import SpinorPolynomial, poly_dim
from .witt import cell_dim, cell_labels, pq_scalars

SCHEMA_VERSION = 1

CHECK_NAMES = ("relations", "cells", "thm5", "prop8", "prop9", "thm10",
               "euclidean", "hermitian", "example13")

DEFAULT_DIM_CAP = 10 ** 5


def _env_int(name, default):
    raw = os.environ.get(name)
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


class RunConfig:
    """What to run: quaternionic rank p, degree range, selected checks.

    `dim_cap` bounds the spinor-valued polynomial spaces a check may
    touch; labels over the cap are reported as skipped, never attempted.
    `workers` defaults to the QUATCLIFF_WORKERS environment variable.
    `label_filter` narrows the degree grid to one (a, b[, r]) label; the
    `fischer` subcommand uses it, programmatic callers may too.
    """

    __slots__ = ("p", "max_total_degree", "checks", "output", "workers",
                 "dim_cap", "label_filter")

    def __init__(self, p=1, max_total_degree=3, checks=(), output=None,
                 workers=None, dim_cap=None, label_filter=None):
        self.p = p
        self.max_total_degree = max_total_degree
        self.checks = tuple(checks)
        self.output = output
        self.workers = (_env_int("QUATCLIFF_WORKERS", 1)
                        if workers is None else workers)
        self.dim_cap = (_env_int("QUATCLIFF_DIM_CAP", DEFAULT_DIM_CAP)
                        if dim_cap is None else dim_cap)
        self.label_filter = label_filter

    def validate(self):
        if not isinstance(self.p, int) or not 1 <= self.p <= 3:
            raise ValueError(f"p must be an integer in 1..3, got {self.p!r}")
        if (not isinstance(self.max_total_degree, int)
                or not 0 <= self.max_total_degree <= 6):
            raise ValueError("max_total_degree must be an integer in 0..6, "
                             f"got {self.max_total_degree!r}")
        unknown = [c for c in self.checks if c not in CHECK_NAMES]
        if unknown:
            raise ValueError(f"unknown checks {unknown}; "
                             f"valid names: {', '.join(CHECK_NAMES)}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, "
                             f"got {self.workers!r}")
        if not isinstance(self.dim_cap, int) or self.dim_cap < 1:
            raise ValueError(f"dim_cap must be a positive integer, "
                             f"got {self.dim_cap!r}")
        if self.label_filter is not None:
            a = self.label_filter.get("a")
            b = self.label_filter.get("b")
            r = self.label_filter.get("r")
            if not (isinstance(a, int) and a >= 0
                    and isinstance(b, int) and b >= 0):
                raise ValueError("label_filter needs integer a >= 0, b >= 0")
            if r is not None and not (isinstance(r, int)
                                      and 0 <= r <= self.p):
                raise ValueError(f"label_filter r must be in 0..{self.p}")
        return self

    def to_json(self):
        out = {"p": self.p, "max_total_degree": self.max_total_degree,
               "checks": list(self.checks), "output": self.output,
               "workers": self.workers, "dim_cap": self.dim_cap}
        if self.label_filter is not None:
            out["label_filter"] = dict(self.label_filter)
        return out


class ReportBundle:
    """Per-check reports plus the configuration that produced them.

    The bundle passes exactly when every sub-report passes; with no
    checks selected it is empty and passes.
    """

    __slots__ = ("config", "reports", "timing")

    def __init__(self, config, reports, timing):
        self.config = config
        self.reports = reports
        self.timing = timing

    @property
    def passed(self):
        return all(rep["passed"] for rep in self.reports.values())

    def to_json(self, with_timing=True):
        out = {"schema_version": SCHEMA_VERSION,
               "config": self.config.to_json(),
               "checks": {name: self.reports[name] for name in self.reports},
               "passed": self.passed}
        if with_timing:
            out["timing"] = {name: self.timing[name] for name in self.timing}
        return out

    def __repr__(self):
        state = "pass" if self.passed else "FAIL"
        return f"ReportBundle({len(self.reports)} checks, {state})"


# ------------------------------------------------------------- the checks

def _grid(config, need_a_ge_b=False):
    """Bidegree labels to visit, honoring any label filter."""
    if config.label_filter is not None:
        a, b = config.label_filter["a"], config.label_filter["b"]
        return [(a, b)] if (a >= b or not need_a_ge_b) else []
    grid = relations.bidegrees_up_to(config.max_total_degree)
    if need_a_ge_b:
        grid = [(a, b) for a, b in grid if a >= b]
    return grid


def _columns(config):
    if config.label_filter is not None:
        r = config.label_filter.get("r")
        if r is not None:
            return [r]
    return list(range(0, config.p + 1))


def _skip(entry, needed, cap):
    entry["skipped"] = "cap"
    entry["needed_dim"] = needed
    entry["dim_cap"] = cap
    return entry


def _run_relations(config):
    p, cap = config.p, config.dim_cap
    spinor = 1 << (2 * p)
    degree = config.max_total_degree
    capped = False
    while degree > 0 and any(
            poly_dim(p, a, b) * spinor > cap
            for a, b in relations.bidegrees_up_to(degree)):
        degree -= 1
        capped = True
    reports = relations.verify_table(p, degree, workers=config.workers)
    out = {"p": p, "max_total_degree": degree,
           "rule_count": len(reports),
           "rules": [rep.to_json() for rep in reports],
           "passed": all(rep.passed for rep in reports)}
    if capped:
        out["capped_at_degree"] = degree
    return out


def _run_cells(config):
    out = fischer.cells_check(config.p)
    triangle = []
    for lab in cell_labels(config.p):
        pq, qp = pq_scalars(config.p, lab.r, lab.s)
        triangle.append({"grade": lab.r, "row": lab.s,
                         "dim": cell_dim(config.p, lab.r, lab.s),
                         "pq": pq, "qp": qp})
    out["triangle"] = triangle
    return out


def _run_thm5(config):
    p, cap = config.p, config.dim_cap
    entries = []
    passed = True
    for a, b in _grid(config):
        entry = {"a": a, "b": b}
        needed = poly_dim(p, a, b)
        if needed > cap:
            entries.append(_skip(entry, needed, cap))
            continue
        rep = fischer.symplectic_harmonic_decomposition(p, a, b)
        entry["tiling"] = rep.to_json()
        entry["passed"] = rep.passed
        if a >= b:
            sl2 = fischer.sl2_module_checks(p, a, b)
            entry["sl2"] = sl2
            entry["passed"] = entry["passed"] and sl2["passed"]
        passed = passed and entry["passed"]
        entries.append(entry)
    return {"p": p, "labels": entries, "passed": passed}


def _run_prop8(config):
    p, cap = config.p, config.dim_cap
    spinor = 1 << (2 * p)
    entries = []
    passed = True
    for a, b in _grid(config):
        needed = poly_dim(p, a, b) * spinor
        for r in _columns(config):
            for k in range(0, p - r + 1):
                entry = {"a": a, "b": b, "r": r, "k": k}
                if needed > cap:
                    entries.append(_skip(entry, needed, cap))
                    continue
                rep = fischer.qmonogenic_decomposition(p, r, k, a, b)
                entry["report"] = rep.to_json()
                entry["passed"] = rep.passed
                passed = passed and rep.passed
                entries.append(entry)
    return {"p": p, "labels": entries, "passed": passed}


def _run_prop9(config):
    p, cap = config.p, config.dim_cap
    spinor = 1 << (2 * p)
    entries = []
    passed = True
    for a, b in _grid(config, need_a_ge_b=True):
        needed = poly_dim(p, a, b) * spinor
        for r in _columns(config):
            entry = {"a": a, "b": b, "r": r}
            if needed > cap:
                entries.append(_skip(entry, needed, cap))
                continue
            rep = fischer.symplectic_harmonics_16_decomposition(p, a, b, r)
            entry["report"] = rep.to_json()
            entry["passed"] = rep.passed
            passed = passed and rep.passed
            entries.append(entry)
    return {"p": p, "labels": entries, "passed": passed}


def _run_thm10(config):
    p, cap = config.p, config.dim_cap
    spinor = 1 << (2 * p)
    if config.label_filter is not None:
        degrees = [config.label_filter["a"] + config.label_filter["b"]]
    else:
        degrees = list(range(0, config.max_total_degree + 1))
    entries = []
    passed = True
    for k in degrees:
        needed = comb(k + 4 * p - 1, 4 * p - 1) * spinor
        if needed > cap:
            entries.append(_skip({"degree": k}, needed, cap))
            continue
        rep = fischer.graded_tiling_check(p, k)
        rep["degree"] = k
        passed = passed and rep["passed"]
        entries.append(rep)
    return {"p": p, "degrees": entries, "passed": passed}


def _run_euclidean(config):
    p, cap = config.p, config.dim_cap
    m = 4 * p
    spinor = 1 << (2 * p)
    entries = []
    passed = True
    for k in range(0, config.max_total_degree + 1):
        needed = comb(k + m - 1, m - 1) * spinor
        if needed > cap:
            entries.append(_skip({"k": k}, needed, cap))
            continue
        rep = fischer.euclidean_fischer_dims(m, k)
        passed = passed and rep["passed"]
        entries.append(rep)
    return {"p": p, "m": m, "degrees": entries, "passed": passed}


def _run_hermitian(config):
    p, cap = config.p, config.dim_cap
    n = 2 * p
    spinor = 1 << (2 * p)
    entries = []
    passed = True
    for a, b in _grid(config):
        needed = poly_dim(p, a, b) * spinor
        if needed > cap:
            entries.append(_skip({"a": a, "b": b}, needed, cap))
            continue
        rep = fischer.hermitian_fischer_dims(n, a, b)
        passed = passed and rep["passed"]
        entries.append(rep)
    return {"p": p, "n": n, "labels": entries, "passed": passed}


def _run_example13(config):
    ex = fischer.example_decomposition()
    out = {"p": 2, "input": ex["input"], "passed": ex["passed"],
           "component_keys": [list(k) for k in ex["component_keys"]],
           "only_expected_components": ex.get("only_expected_components",
                                              False)}
    for name in ("S0", "S1", "S2"):
        if name in ex:
            out[name] = ex[name].to_json()
    if "A" in ex:
        out["A"] = str(ex["A"])
        out["rewrite_exact"] = ex["rewrite_exact"]
    return out


_RUNNERS = {
    "relations": _run_relations,
    "cells": _run_cells,
    "thm5": _run_thm5,
    "prop8": _run_prop8,
    "prop9": _run_prop9,
    "thm10": _run_thm10,
    "euclidean": _run_euclidean,
    "hermitian": _run_hermitian,
    "example13": _run_example13,
}


def _check_job(args):
    """One check in a worker process; inner parallelism pinned off."""
    name, fields = args
    config = RunConfig(**fields)
    config.workers = 1
    t0 = time.perf_counter()
    result = _RUNNERS[name](config)
    return name, result, time.perf_counter() - t0


def run(config):
    """Execute the configured checks and return the report bundle.

    Writes the JSON bundle to `config.output` when set.  Check jobs run
    in a process pool when the config asks for more than one worker.
    """
    config.validate()
    names = [name for name in CHECK_NAMES if name in set(config.checks)]
    reports = {}
    timing = {}
    if config.workers > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor
        fields = {"p": config.p,
                  "max_total_degree": config.max_total_degree,
                  "checks": config.checks, "dim_cap": config.dim_cap,
                  "workers": 1, "label_filter": config.label_filter}
        jobs = [(name, fields) for name in names]
        with ProcessPoolExecutor(
                max_workers=min(config.workers, len(jobs))) as pool:
            for name, result, seconds in pool.map(_check_job, jobs):
                reports[name] = result
                timing[name] = seconds
    else:
        for name in names:
            t0 = time.perf_counter()
            reports[name] = _RUNNERS[name](config)
            timing[name] = time.perf_counter() - t0
    bundle = ReportBundle(config, reports, timing)
    if config.output:
        emit_report(bundle, config.output)
    return bundle


# ---------------------------------------------------------------- JSON I/O

def parse_polynomial(data, n=None):
    """Turn the JSON term list into a SpinorPolynomial.

    Schema: a list of {"alpha": [ints], "beta": [ints],
    "spinor": [1-based indices], "coeff": scalar object}, where the
    scalar object holds "num/den" strings (or integers) under the keys
    a_re, a_im, b_re, b_im.  Violations raise ValueError naming the term
    index and field.  An empty list gives the zero polynomial (of rank
    `n` when provided).
    """
    if not isinstance(data, list):
        raise ValueError("polynomial JSON must be a list of term objects")
    poly = None
    for i, item in enumerate(data):
        where = f"term {i}"
        if not isinstance(item, dict):
            raise ValueError(f"{where}: expected an object")
        for field in ("alpha", "beta"):
            val = item.get(field)
            if (not isinstance(val, list)
                    or not all(isinstance(e, int) and e >= 0 for e in val)):
                raise ValueError(f"{where}, field '{field}': expected a list "
                                 "of nonnegative integers")
        if n is None:
            n = len(item["alpha"])
        if len(item["alpha"]) != n or len(item["beta"]) != n:
            raise ValueError(f"{where}: alpha and beta must both have "
                             f"length {n}")
        spinor = item.get("spinor", [])
        if (not isinstance(spinor, list)
                or not all(isinstance(k, int) and 1 <= k <= n
                           for k in spinor)
                or len(set(spinor)) != len(spinor)):
            raise ValueError(f"{where}, field 'spinor': expected distinct "
                             f"indices in 1..{n}")
        coeff = item.get("coeff")
        if not isinstance(coeff, dict):
            raise ValueError(f"{where}, field 'coeff': expected an object "
                             "with keys a_re, a_im, b_re, b_im")
        for key in ("a_re", "a_im", "b_re", "b_im"):
            if key not in coeff:
                raise ValueError(f"{where}, field 'coeff': missing '{key}'")
            val = coeff[key]
            if not isinstance(val, (str, int)):
                raise ValueError(f"{where}, field 'coeff.{key}': expected a "
                                 "\"num/den\" string or an integer")
        if poly is None:
            poly = SpinorPolynomial.zero(n)
        try:
            term = SpinorPolynomial.from_json([item], n=n)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{where}: {exc}") from None
        poly = poly + term
    if poly is None:
        poly = SpinorPolynomial.zero(0 if n is None else n)
    return poly


def emit_report(bundle, path):
    """Write the bundle as canonical JSON (sorted keys, two-space
    indent, trailing newline) and return the emitted dict."""
    payload = bundle.to_json()
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return payload


def _write_json(payload, path):
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


# ----------------------------------------------------------------- parsing

def build_parser():
    ap = argparse.ArgumentParser(
        prog="quatcliff",
        description="Exact verification of the quaternionic Clifford "
                    "operator algebra and its decompositions.")
    sub = ap.add_subparsers(dest="command", required=True)

    vr = sub.add_parser("verify-relations",
                        help="check every bracket rule on the polynomial "
                             "spaces up to a total degree")
    vr.add_argument("--p", type=int, default=1)
    vr.add_argument("--max-degree", type=int, default=3)
    vr.add_argument("--json", dest="json_path", metavar="OUT")

    ce = sub.add_parser("cells",
                        help="emit the spinor cell triangle: labels, "
                             "dimensions, ladder scalars")
    ce.add_argument("--p", type=int, default=1)
    ce.add_argument("--json", dest="json_path", metavar="OUT")

    fi = sub.add_parser("fischer",
                        help="run one decomposition check at one bidegree")
    fi.add_argument("--p", type=int, required=True)
    fi.add_argument("--a", type=int, required=True)
    fi.add_argument("--b", type=int, required=True)
    fi.add_argument("--r", type=int, default=None)
    fi.add_argument("--check", required=True,
                    choices=("thm5", "prop8", "prop9", "thm10"))
    fi.add_argument("--json", dest="json_path", metavar="OUT")

    de = sub.add_parser("decompose",
                        help="split a JSON polynomial into its tiling "
                             "pieces with zero residual")
    de.add_argument("--p", type=int, required=True)
    de.add_argument("--input", required=True)
    de.add_argument("--output", required=True)

    al = sub.add_parser("all", help="run every check")
    al.add_argument("--p", type=int, default=1)
    al.add_argument("--max-degree", type=int, default=3)
    al.add_argument("--json", dest="json_path", metavar="OUT")
    return ap


def _summarize(bundle, stream):
    for name in CHECK_NAMES:
        if name in bundle.reports:
            state = "pass" if bundle.reports[name]["passed"] else "FAIL"
            print(f"{name}: {state}", file=stream)
    print("overall:", "pass" if bundle.passed else "FAIL", file=stream)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-relations":
            config = RunConfig(p=args.p, max_total_degree=args.max_degree,
                               checks=("relations",), output=args.json_path)
            bundle = run(config)
        elif args.command == "cells":
            config = RunConfig(p=args.p, checks=("cells",),
                               output=args.json_path)
            bundle = run(config)
        elif args.command == "fischer":
            label = {"a": args.a, "b": args.b}
            if args.r is not None:
                label["r"] = args.r
            config = RunConfig(p=args.p, checks=(args.check,),
                               output=args.json_path, label_filter=label)
            bundle = run(config)
        elif args.command == "all":
            config = RunConfig(p=args.p, max_total_degree=args.max_degree,
                               checks=CHECK_NAMES, output=args.json_path)
            bundle = run(config)
        elif args.command == "decompose":
            with open(args.input) as fh:
                data = json.load(fh)
            F = parse_polynomial(data, n=2 * args.p)
            report = fischer.decompose_polynomial(F, args.p)
            payload = report.to_json()
            payload["schema_version"] = SCHEMA_VERSION
            _write_json(payload, args.output)
            print("decompose:", "pass" if report.passed else "FAIL")
            return 0 if report.passed else 1
        else:  # pragma: no cover - argparse enforces the choices
            raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _summarize(bundle, sys.stdout)
    return 0 if bundle.passed else 1


if __name__ == "__main__":
    sys.exit(main())
