"""Exact sparse linear algebra over Q(i, sqrt2).

Vectors are plain dicts mapping hashable, mutually sortable keys to nonzero
ExtendedScalars.  Everything here is small and dense enough (a few hundred
rows) that straightforward Gauss-Jordan with exact field inverses is fine;
no pivoting heuristics are needed because there is no roundoff.
"""

from .scalars import XS_ZERO, XS_ONE


def axpy(dst, src, c):
    """dst += c * src, in place, dropping entries that cancel to zero."""
    if not c:
        return dst
    for k, v in src.items():
        cur = dst.get(k)
        s = c * v if cur is None else cur + c * v
        if s:
            dst[k] = s
        elif cur is not None:
            del dst[k]
    return dst


def vec_scale(vec, c):
    if not c:
        return {}
    return {k: c * v for k, v in vec.items()}


def rref(rows, key_order=None):
    """Reduced row echelon form of the span of `rows`.

    Returns (reduced_rows, pivot_keys), rows ordered by pivot position.  The
    output depends only on the span and the key order, which makes it a
    canonical presentation of a subspace.
    """
    work = [dict(r) for r in rows if r]
    if key_order is None:
        key_order = sorted({k for r in work for k in r})
    pivots = []   # (key, row) fully reduced so far
    for key in key_order:
        hit = None
        for idx, r in enumerate(work):
            if key in r:
                hit = idx
                break
        if hit is None:
            continue
        row = work.pop(hit)
        inv = row[key].inverse()
        row = {k: inv * v for k, v in row.items()}
        for r in work:
            c = r.get(key)
            if c is not None:
                axpy(r, row, -c)
        for _, prow in pivots:
            c = prow.get(key)
            if c is not None:
                axpy(prow, row, -c)
        pivots.append((key, row))
        work = [r for r in work if r]
        if not work:
            break
    return [row for _, row in pivots], [key for key, _ in pivots]


def rank(rows, key_order=None):
    return len(rref(rows, key_order)[0])


def nullspace(images):
    """Canonical basis of {x : sum_j x_j * images[j] = 0}.

    `images` lists the images of the source basis vectors under some linear
    map, as key->coefficient dicts.  The result is a list of coordinate
    vectors {j: coeff}, in reduced echelon form over the source indices.
    """
    n = len(images)
    constraints = {}
    for j, img in enumerate(images):
        for t, c in img.items():
            constraints.setdefault(t, {})[j] = c
    rows = [constraints[t] for t in sorted(constraints)]
    reduced, pivot_cols = rref(rows, key_order=list(range(n)))
    pivot_set = set(pivot_cols)
    kernel = []
    for f in range(n):
        if f in pivot_set:
            continue
        vec = {f: XS_ONE}
        for key, prow in zip(pivot_cols, reduced):
            c = prow.get(f)
            if c is not None:
                vec[key] = -c
        kernel.append(vec)
    canon, _ = rref(kernel, key_order=list(range(n)))
    return canon


def solve_many(basis, targets):
    """Solve sum_j x_j basis[j] = target for each target, exactly.

    Returns a list with one entry per target: a coefficient list (free
    variables set to zero) or None when the target is outside the span.
    One elimination is shared by all targets.
    """
    n = len(basis)
    rows = {}
    for j, vec in enumerate(basis):
        for t, c in vec.items():
            rows.setdefault(t, [{}, {}])[0][j] = c
    for ti, tgt in enumerate(targets):
        for t, c in tgt.items():
            rows.setdefault(t, [{}, {}])[1][ti] = c
    work = [rows[t] for t in sorted(rows)]
    pivots = []   # (col, coeffs, augs)
    for j in range(n):
        hit = None
        for idx, (coeffs, _) in enumerate(work):
            if j in coeffs:
                hit = idx
                break
        if hit is None:
            continue
        coeffs, augs = work.pop(hit)
        inv = coeffs[j].inverse()
        coeffs = {k: inv * v for k, v in coeffs.items()}
        augs = {k: inv * v for k, v in augs.items()}
        for other_coeffs, other_augs in work:
            c = other_coeffs.get(j)
            if c is not None:
                axpy(other_coeffs, coeffs, -c)
                axpy(other_augs, augs, -c)
        for _, pc, pa in pivots:
            c = pc.get(j)
            if c is not None:
                axpy(pc, coeffs, -c)
                axpy(pa, augs, -c)
        pivots.append((j, coeffs, augs))
    bad = set()
    for coeffs, augs in work:
        # every remaining row has no unknowns left; a nonzero rhs is a conflict
        for ti, v in augs.items():
            if v:
                bad.add(ti)
    out = []
    for ti in range(len(targets)):
        if ti in bad:
            out.append(None)
            continue
        x = [XS_ZERO] * n
        for j, _, pa in pivots:
            x[j] = pa.get(ti, XS_ZERO)
        out.append(x)
    return out


def solve_in_span(basis, target):
    return solve_many(basis, [target])[0]
