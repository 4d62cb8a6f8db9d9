# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels on int64 with overflow detection.

Same signatures as ``_kernel_py``; any intermediate that leaves int64 raises
OverflowError so the caller can retry with Python integers.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64
ctypedef unsigned long long u64


cdef extern from *:
    """
    static int g_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static int g_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static int g_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    static int g_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    """
    int g_mul(i64 a, i64 b, i64 *r) nogil
    int g_add(i64 a, i64 b, i64 *r) nogil
    int g_sub(i64 a, i64 b, i64 *r) nogil
    int g_popcount(u64 x) nogil


cdef inline i64 mul(i64 a, i64 b) except? -1:
    cdef i64 r
    if g_mul(a, b, &r):
        raise OverflowError("int64 overflow")
    return r


cdef inline i64 add(i64 a, i64 b) except? -1:
    cdef i64 r
    if g_add(a, b, &r):
        raise OverflowError("int64 overflow")
    return r


cdef inline i64 sub(i64 a, i64 b) except? -1:
    cdef i64 r
    if g_sub(a, b, &r):
        raise OverflowError("int64 overflow")
    return r


cdef inline i64 igcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef i64* to_matrix(rows, int nr, int nc) except NULL:
    cdef i64* m = <i64*> malloc(max(1, nr * nc) * sizeof(i64))
    if m == NULL:
        raise MemoryError()
    cdef int i, j
    try:
        for i in range(nr):
            r = rows[i]
            for j in range(nc):
                m[i * nc + j] = r[j]
    except OverflowError:
        free(m)
        raise
    return m


def bareiss_rank(rows):
    cdef int nr = len(rows)
    if nr == 0:
        return 0
    cdef int nc = len(rows[0])
    cdef i64* m = to_matrix(rows, nr, nc)
    cdef int rk = 0, c, i, j, piv
    cdef i64 prev = 1, p, mic, t
    try:
        for c in range(nc):
            piv = -1
            for i in range(rk, nr):
                if m[i * nc + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rk:
                for j in range(nc):
                    t = m[rk * nc + j]
                    m[rk * nc + j] = m[piv * nc + j]
                    m[piv * nc + j] = t
            p = m[rk * nc + c]
            for i in range(rk + 1, nr):
                mic = m[i * nc + c]
                for j in range(c + 1, nc):
                    m[i * nc + j] = sub(mul(p, m[i * nc + j]), mul(mic, m[rk * nc + j])) // prev
                m[i * nc + c] = 0
            prev = p
            rk += 1
            if rk == nr:
                break
        return rk
    finally:
        free(m)


def bareiss_det(rows):
    cdef int n = len(rows)
    if n == 0:
        return 1
    cdef i64* m = to_matrix(rows, n, n)
    cdef int k, i, j, sw
    cdef i64 prev = 1, p, t, sign = 1
    try:
        for k in range(n - 1):
            if m[k * n + k] == 0:
                sw = -1
                for i in range(k + 1, n):
                    if m[i * n + k] != 0:
                        sw = i
                        break
                if sw < 0:
                    return 0
                for j in range(n):
                    t = m[k * n + j]
                    m[k * n + j] = m[sw * n + j]
                    m[sw * n + j] = t
                sign = -sign
            p = m[k * n + k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i * n + j] = sub(mul(m[i * n + j], p), mul(m[i * n + k], m[k * n + j])) // prev
            prev = p
        return sign * m[(n - 1) * n + (n - 1)]
    finally:
        free(m)


def dd_sweep(constraints, rays, zero_sets, order, int k):
    """Double description sweep; see ``_kernel_py.dd_sweep``."""
    cdef int need = k - 2
    cdef list R = [list(r) for r in rays]
    cdef list Z = [int(z) for z in zero_sets]
    cdef int i, j, t, nr
    cdef i64 v, vi, vj, acc, g
    cdef u64 bit, common
    for ci in order:
        a = constraints[ci]
        bit = (<u64> 1) << (<int> ci)
        nr = len(R)
        vals = []
        for i in range(nr):
            acc = 0
            r = R[i]
            for j in range(k):
                acc = add(acc, mul(a[j], r[j]))
            vals.append(acc)
        pos = [i for i in range(nr) if vals[i] > 0]
        neg = [i for i in range(nr) if vals[i] < 0]
        if not neg:
            for i in range(nr):
                if vals[i] == 0:
                    Z[i] = Z[i] | bit
            continue
        new_rays = []
        new_zs = []
        for i in pos:
            for j in neg:
                common = (<u64> Z[i]) & (<u64> Z[j])
                if g_popcount(common) < need:
                    continue
                adjacent = True
                for t in range(nr):
                    if t != i and t != j and ((<u64> Z[t]) & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vi = vals[i]
                vj = -vals[j]
                ri = R[i]
                rj = R[j]
                new = [add(mul(vi, rj[t]), mul(vj, ri[t])) for t in range(k)]
                g = 0
                for t in range(k):
                    g = igcd(g, new[t])
                if g > 1:
                    new = [x // g for x in new]
                new_rays.append(new)
                new_zs.append(int(common | bit))
        keep_r = []
        keep_z = []
        for i in range(nr):
            if vals[i] > 0:
                keep_r.append(R[i])
                keep_z.append(Z[i])
            elif vals[i] == 0:
                keep_r.append(R[i])
                keep_z.append(int((<u64> Z[i]) | bit))
        R = keep_r + new_rays
        Z = keep_z + new_zs
    return R, Z
