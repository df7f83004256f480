# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the _solver_py search kernels.

Argument layout, candidate ordering, pruning, and node accounting are
copied from the pure-Python versions line for line, so both backends
return identical (status, values, nodes) triples -- the compiled path
is only faster, never different.  See _solver_py for the semantics.
"""

from libc.stdlib cimport calloc, free

FOUND = 0
EXHAUSTED = 1
CAPPED = 2


cdef inline void _release_int(long long *slack, int *typ, int *va, int *vb,
                              int pos, int k) noexcept:
    cdef int t = typ[pos]
    if t == 0:
        slack[va[pos]] -= k - 1
        slack[vb[pos]] -= k - 1
    elif t == 1:
        slack[va[pos]] -= 2 * (k - 1)


cdef inline void _restore_int(long long *slack, int *typ, int *va, int *vb,
                              int pos, int k) noexcept:
    cdef int t = typ[pos]
    if t == 0:
        slack[va[pos]] += k - 1
        slack[vb[pos]] += k - 1
    elif t == 1:
        slack[va[pos]] += 2 * (k - 1)


cdef inline void _unapply(long long *bnd, int *typ, int *va, int *ca,
                          int *vb, int *cb, int pos, long long *vals) noexcept:
    cdef int t = typ[pos]
    cdef long long val = vals[pos]
    if t == 0:
        bnd[va[pos]] -= ca[pos] * val
        bnd[vb[pos]] -= cb[pos] * val
    elif t == 1:
        bnd[va[pos]] -= ca[pos] * val


cdef inline bint _mod_vertex_ok(long long *bnd, int *rem_ord, int *rem_neg,
                                int v, int k) noexcept:
    # divisibility / parity tests only, so C remainder semantics on
    # negative boundaries agree with the Python kernel
    cdef int total = rem_ord[v] + rem_neg[v]
    if total == 0:
        return bnd[v] % k == 0
    if total == 1:
        if bnd[v] % k == 0:
            return rem_neg[v] == 1 and k % 2 == 0
        if rem_neg[v] == 1 and k % 2 == 0 and bnd[v] % 2 != 0:
            return False
    return True


cdef int _copy_arrays(int m, object typ, object va, object ca, object vb,
                      object cb, int *ct, int *cva, int *cca, int *cvb,
                      int *ccb) except -1:
    cdef int i
    for i in range(m):
        ct[i] = typ[i]
        cva[i] = va[i]
        cca[i] = ca[i]
        cvb[i] = vb[i]
        ccb[i] = cb[i]
    return 0


def search_integer(int m, int n, typ, va, ca, vb, cb, int k, long long cap):
    """Nowhere-zero integer flow search; twin of _solver_py.search_integer."""
    if m == 0:
        return FOUND, [], 0
    cdef int *ct = <int *> calloc(m, sizeof(int))
    cdef int *cva = <int *> calloc(m, sizeof(int))
    cdef int *cca = <int *> calloc(m, sizeof(int))
    cdef int *cvb = <int *> calloc(m, sizeof(int))
    cdef int *ccb = <int *> calloc(m, sizeof(int))
    cdef int *idx = <int *> calloc(m + 1, sizeof(int))
    cdef long long *vals = <long long *> calloc(m, sizeof(long long))
    cdef long long *bnd = <long long *> calloc(n, sizeof(long long))
    cdef long long *slack = <long long *> calloc(n, sizeof(long long))
    if not (ct and cva and cca and cvb and ccb and idx and vals and bnd and slack):
        free(ct); free(cva); free(cca); free(cvb); free(ccb)
        free(idx); free(vals); free(bnd); free(slack)
        raise MemoryError()
    cdef int pos, i, t, limit, a, b
    cdef int num_vals = 2 * (k - 1)
    cdef long long nodes = 0, val
    cdef bint ok
    cdef int status = EXHAUSTED
    try:
        _copy_arrays(m, typ, va, ca, vb, cb, ct, cva, cca, cvb, ccb)
        for i in range(m):
            t = ct[i]
            if t == 0:
                slack[cva[i]] += k - 1
                slack[cvb[i]] += k - 1
            elif t == 1:
                slack[cva[i]] += 2 * (k - 1)
        pos = 0
        _release_int(slack, ct, cva, cvb, 0, k)
        while True:
            i = idx[pos]
            t = ct[pos]
            limit = 1 if t == 2 else num_vals
            if i >= limit:
                _restore_int(slack, ct, cva, cvb, pos, k)
                idx[pos] = 0
                pos -= 1
                if pos < 0:
                    status = EXHAUSTED
                    break
                _unapply(bnd, ct, cva, cca, cvb, ccb, pos, vals)
                idx[pos] += 1
                continue
            val = 1 if t == 2 else (i // 2 + 1) * (1 if i % 2 == 0 else -1)
            nodes += 1
            if cap != 0 and nodes > cap:
                status = CAPPED
                break
            vals[pos] = val
            ok = True
            if t == 0:
                a = cva[pos]
                b = cvb[pos]
                bnd[a] += cca[pos] * val
                bnd[b] += ccb[pos] * val
                if (bnd[a] if bnd[a] >= 0 else -bnd[a]) > slack[a] or \
                   (bnd[b] if bnd[b] >= 0 else -bnd[b]) > slack[b]:
                    ok = False
            elif t == 1:
                a = cva[pos]
                bnd[a] += cca[pos] * val
                if (bnd[a] if bnd[a] >= 0 else -bnd[a]) > slack[a]:
                    ok = False
            if ok:
                pos += 1
                if pos == m:
                    status = FOUND
                    break
                _release_int(slack, ct, cva, cvb, pos, k)
            else:
                _unapply(bnd, ct, cva, cca, cvb, ccb, pos, vals)
                idx[pos] += 1
        out = [vals[i] for i in range(m)]
        return status, out, nodes
    finally:
        free(ct); free(cva); free(cca); free(cvb); free(ccb)
        free(idx); free(vals); free(bnd); free(slack)


def search_modulo(int m, int n, typ, va, ca, vb, cb, int k, long long cap):
    """Nowhere-zero modulo-k flow search; twin of _solver_py.search_modulo."""
    if m == 0:
        return FOUND, [], 0
    cdef int *ct = <int *> calloc(m, sizeof(int))
    cdef int *cva = <int *> calloc(m, sizeof(int))
    cdef int *cca = <int *> calloc(m, sizeof(int))
    cdef int *cvb = <int *> calloc(m, sizeof(int))
    cdef int *ccb = <int *> calloc(m, sizeof(int))
    cdef int *idx = <int *> calloc(m + 1, sizeof(int))
    cdef int *rem_ord = <int *> calloc(n, sizeof(int))
    cdef int *rem_neg = <int *> calloc(n, sizeof(int))
    cdef long long *vals = <long long *> calloc(m, sizeof(long long))
    cdef long long *bnd = <long long *> calloc(n, sizeof(long long))
    if not (ct and cva and cca and cvb and ccb and idx and rem_ord and
            rem_neg and vals and bnd):
        free(ct); free(cva); free(cca); free(cvb); free(ccb)
        free(idx); free(rem_ord); free(rem_neg); free(vals); free(bnd)
        raise MemoryError()
    cdef int pos, i, t, limit
    cdef long long nodes = 0, val
    cdef bint ok
    cdef int status = EXHAUSTED
    try:
        _copy_arrays(m, typ, va, ca, vb, cb, ct, cva, cca, cvb, ccb)
        for i in range(m):
            t = ct[i]
            if t == 0:
                rem_ord[cva[i]] += 1
                rem_ord[cvb[i]] += 1
            elif t == 1:
                rem_neg[cva[i]] += 1
        pos = 0
        t = ct[0]
        if t == 0:
            rem_ord[cva[0]] -= 1
            rem_ord[cvb[0]] -= 1
        elif t == 1:
            rem_neg[cva[0]] -= 1
        while True:
            i = idx[pos]
            t = ct[pos]
            limit = 1 if t == 2 else k - 1
            if i >= limit:
                if t == 0:
                    rem_ord[cva[pos]] += 1
                    rem_ord[cvb[pos]] += 1
                elif t == 1:
                    rem_neg[cva[pos]] += 1
                idx[pos] = 0
                pos -= 1
                if pos < 0:
                    status = EXHAUSTED
                    break
                _unapply(bnd, ct, cva, cca, cvb, ccb, pos, vals)
                idx[pos] += 1
                continue
            val = 1 if t == 2 else i + 1
            nodes += 1
            if cap != 0 and nodes > cap:
                status = CAPPED
                break
            vals[pos] = val
            ok = True
            if t == 0:
                bnd[cva[pos]] += cca[pos] * val
                bnd[cvb[pos]] += ccb[pos] * val
                ok = _mod_vertex_ok(bnd, rem_ord, rem_neg, cva[pos], k) and \
                    _mod_vertex_ok(bnd, rem_ord, rem_neg, cvb[pos], k)
            elif t == 1:
                bnd[cva[pos]] += cca[pos] * val
                ok = _mod_vertex_ok(bnd, rem_ord, rem_neg, cva[pos], k)
            if ok:
                pos += 1
                if pos == m:
                    status = FOUND
                    break
                t = ct[pos]
                if t == 0:
                    rem_ord[cva[pos]] -= 1
                    rem_ord[cvb[pos]] -= 1
                elif t == 1:
                    rem_neg[cva[pos]] -= 1
            else:
                _unapply(bnd, ct, cva, cca, cvb, ccb, pos, vals)
                idx[pos] += 1
        out = [vals[i] for i in range(m)]
        return status, out, nodes
    finally:
        free(ct); free(cva); free(cca); free(cvb); free(ccb)
        free(idx); free(rem_ord); free(rem_neg); free(vals); free(bnd)
