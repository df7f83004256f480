"""Pure-Python backtracking kernels for nowhere-zero flow search.

Both kernels run over plain arrays prepared by solve.py so the compiled
twin (_kernel.pyx) can share the exact argument layout.  Edge positions
follow the caller's assignment order; per position the arrays give

  typ: 0 ordinary edge, 1 negative loop, 2 positive loop
  va, ca: first affected vertex and its boundary coefficient
  vb, cb: second affected vertex/coefficient (ordinary edges only)

A positive loop never constrains any boundary, so its value is pinned to
the first candidate without branching; trying alternatives could never
repair a failure elsewhere.

Statuses: 0 witness found, 1 search space exhausted (an exactness
claim), 2 node cap hit before either.
"""

from __future__ import annotations

FOUND = 0
EXHAUSTED = 1
CAPPED = 2


def search_integer(m, n, typ, va, ca, vb, cb, k, cap):
    """Nowhere-zero integer flow, values in +-{1..k-1}.

    Prunes a branch when some touched vertex has |partial boundary|
    larger than the largest swing its unassigned edges can still
    produce.  Returns (status, values, nodes)."""
    values = [0] * m
    bnd = [0] * n
    slack = [0] * n
    for i in range(m):
        t = typ[i]
        if t == 0:
            slack[va[i]] += k - 1
            slack[vb[i]] += k - 1
        elif t == 1:
            slack[va[i]] += 2 * (k - 1)
    num_vals = 2 * (k - 1)
    idx = [0] * (m + 1)
    nodes = 0
    pos = 0
    # slack for position pos is released on entry, restored on final backtrack
    if m == 0:
        return FOUND, values, 0
    _release(slack, typ, va, ca, vb, cb, 0, k)
    while True:
        i = idx[pos]
        t = typ[pos]
        limit = 1 if t == 2 else num_vals
        if i >= limit:
            # undo slack release and step back
            _restore(slack, typ, va, ca, vb, cb, pos, k)
            idx[pos] = 0
            pos -= 1
            if pos < 0:
                return EXHAUSTED, values, nodes
            _unapply(bnd, typ, va, ca, vb, cb, pos, values)
            idx[pos] += 1
            continue
        val = 1 if t == 2 else (i // 2 + 1) * (1 if i % 2 == 0 else -1)
        nodes += 1
        if cap and nodes > cap:
            return CAPPED, values, nodes
        values[pos] = val
        ok = True
        if t == 0:
            a, b = va[pos], vb[pos]
            bnd[a] += ca[pos] * val
            bnd[b] += cb[pos] * val
            if abs(bnd[a]) > slack[a] or abs(bnd[b]) > slack[b]:
                ok = False
        elif t == 1:
            a = va[pos]
            bnd[a] += ca[pos] * val
            if abs(bnd[a]) > slack[a]:
                ok = False
        if ok:
            pos += 1
            if pos == m:
                return FOUND, values, nodes
            _release(slack, typ, va, ca, vb, cb, pos, k)
        else:
            _unapply(bnd, typ, va, ca, vb, cb, pos, values)
            idx[pos] += 1


def _release(slack, typ, va, ca, vb, cb, pos, k):
    t = typ[pos]
    if t == 0:
        slack[va[pos]] -= k - 1
        slack[vb[pos]] -= k - 1
    elif t == 1:
        slack[va[pos]] -= 2 * (k - 1)


def _restore(slack, typ, va, ca, vb, cb, pos, k):
    t = typ[pos]
    if t == 0:
        slack[va[pos]] += k - 1
        slack[vb[pos]] += k - 1
    elif t == 1:
        slack[va[pos]] += 2 * (k - 1)


def _unapply(bnd, typ, va, ca, vb, cb, pos, values):
    t = typ[pos]
    val = values[pos]
    if t == 0:
        bnd[va[pos]] -= ca[pos] * val
        bnd[vb[pos]] -= cb[pos] * val
    elif t == 1:
        bnd[va[pos]] -= ca[pos] * val


def search_modulo(m, n, typ, va, ca, vb, cb, k, cap):
    """Nowhere-zero modulo-k flow, values in {1..k-1}.

    Pruning: a vertex with no unassigned slots must be 0 mod k; with one
    slot left, an ordinary half-edge can contribute any nonzero residue
    and a negative loop any nonzero residue for odd k (any even residue,
    zero included, for even k)."""
    values = [0] * m
    bnd = [0] * n
    rem_ord = [0] * n
    rem_neg = [0] * n
    for i in range(m):
        t = typ[i]
        if t == 0:
            rem_ord[va[i]] += 1
            rem_ord[vb[i]] += 1
        elif t == 1:
            rem_neg[va[i]] += 1
    if m == 0:
        return FOUND, values, 0
    idx = [0] * (m + 1)
    nodes = 0
    pos = 0
    _rel_mod(rem_ord, rem_neg, typ, va, vb, 0)
    while True:
        i = idx[pos]
        t = typ[pos]
        limit = 1 if t == 2 else k - 1
        if i >= limit:
            _res_mod(rem_ord, rem_neg, typ, va, vb, pos)
            idx[pos] = 0
            pos -= 1
            if pos < 0:
                return EXHAUSTED, values, nodes
            _unapply(bnd, typ, va, ca, vb, cb, pos, values)
            idx[pos] += 1
            continue
        val = 1 if t == 2 else i + 1
        nodes += 1
        if cap and nodes > cap:
            return CAPPED, values, nodes
        values[pos] = val
        ok = True
        if t == 0:
            bnd[va[pos]] += ca[pos] * val
            bnd[vb[pos]] += cb[pos] * val
            ok = _mod_vertex_ok(bnd, rem_ord, rem_neg, va[pos], k) and _mod_vertex_ok(
                bnd, rem_ord, rem_neg, vb[pos], k
            )
        elif t == 1:
            bnd[va[pos]] += ca[pos] * val
            ok = _mod_vertex_ok(bnd, rem_ord, rem_neg, va[pos], k)
        if ok:
            pos += 1
            if pos == m:
                return FOUND, values, nodes
            _rel_mod(rem_ord, rem_neg, typ, va, vb, pos)
        else:
            _unapply(bnd, typ, va, ca, vb, cb, pos, values)
            idx[pos] += 1


def _rel_mod(rem_ord, rem_neg, typ, va, vb, pos):
    t = typ[pos]
    if t == 0:
        rem_ord[va[pos]] -= 1
        rem_ord[vb[pos]] -= 1
    elif t == 1:
        rem_neg[va[pos]] -= 1


def _res_mod(rem_ord, rem_neg, typ, va, vb, pos):
    t = typ[pos]
    if t == 0:
        rem_ord[va[pos]] += 1
        rem_ord[vb[pos]] += 1
    elif t == 1:
        rem_neg[va[pos]] += 1


def _mod_vertex_ok(bnd, rem_ord, rem_neg, v, k):
    total = rem_ord[v] + rem_neg[v]
    if total == 0:
        return bnd[v] % k == 0
    if total == 1:
        if bnd[v] % k == 0:
            # the last slot must contribute a nonzero residue, except a
            # negative loop under even k, which can also contribute zero
            return rem_neg[v] == 1 and k % 2 == 0
        if rem_neg[v] == 1 and k % 2 == 0 and bnd[v] % 2 != 0:
            return False
    return True
