# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Smith normal form kernel on int64 buffers.

Mirrors ``_snf_py.snf_lists`` operation for operation.  Every arithmetic
step is overflow-checked; on overflow the call raises OverflowError and the
caller falls back to the arbitrary-precision kernel.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    #include <stdint.h>
    static inline int sk_mul(int64_t a, int64_t b, int64_t *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int sk_sub(int64_t a, int64_t b, int64_t *r) { return __builtin_sub_overflow(a, b, r); }
    static inline int sk_add(int64_t a, int64_t b, int64_t *r) { return __builtin_add_overflow(a, b, r); }
    #define SK_LIMIT 1152921504606846976LL  /* 2**60 keeps 2x+p and abs() in range */
    """
    long long SK_LIMIT
    int sk_mul(long long a, long long b, long long *r) nogil
    int sk_sub(long long a, long long b, long long *r) nogil
    int sk_add(long long a, long long b, long long *r) nogil



cdef inline int axpy(long long *dst, long long *src, long long q, Py_ssize_t count, Py_ssize_t stride) noexcept nogil:
    # dst[k*stride] -= q * src[k*stride]; returns 1 on overflow
    cdef Py_ssize_t k
    cdef long long prod, res
    for k in range(count):
        if sk_mul(q, src[k * stride], &prod):
            return 1
        if sk_sub(dst[k * stride], prod, &res):
            return 1
        if res >= SK_LIMIT or res <= -SK_LIMIT:
            return 1
        dst[k * stride] = res
    return 0


cdef inline int addto(long long *dst, long long *src, Py_ssize_t count) noexcept nogil:
    cdef Py_ssize_t k
    cdef long long res
    for k in range(count):
        if sk_add(dst[k], src[k], &res):
            return 1
        if res >= SK_LIMIT or res <= -SK_LIMIT:
            return 1
        dst[k] = res
    return 0


cdef inline long long floordiv(long long x, long long p) noexcept nogil:
    cdef long long q = x / p
    if (x % p != 0) and ((x < 0) != (p < 0)):
        q -= 1
    return q


cdef inline long long floormod(long long x, long long p) noexcept nogil:
    cdef long long r = x % p
    if r != 0 and ((r < 0) != (p < 0)):
        r += p
    return r


cdef inline long long iabs(long long x) noexcept nogil:
    return -x if x < 0 else x


cdef void swap_rows(long long *a, Py_ssize_t width, Py_ssize_t r1, Py_ssize_t r2) noexcept nogil:
    cdef Py_ssize_t k
    cdef long long tmp
    if r1 == r2:
        return
    for k in range(width):
        tmp = a[r1 * width + k]
        a[r1 * width + k] = a[r2 * width + k]
        a[r2 * width + k] = tmp


cdef void swap_cols(long long *a, Py_ssize_t height, Py_ssize_t width, Py_ssize_t c1, Py_ssize_t c2) noexcept nogil:
    cdef Py_ssize_t k
    cdef long long tmp
    if c1 == c2:
        return
    for k in range(height):
        tmp = a[k * width + c1]
        a[k * width + c1] = a[k * width + c2]
        a[k * width + c2] = tmp


cdef int run(long long *d, long long *u, long long *v, Py_ssize_t m, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t t = 0, i, j, bi, bj, bad
    cdef long long best, x, ax, p, q
    cdef bint dirty
    while t < m and t < n:
        best = 0
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                x = d[i * n + j]
                if x != 0:
                    ax = iabs(x)
                    if best == 0 or ax < best:
                        best = ax
                        bi = i
                        bj = j
                        if ax == 1:
                            break
            if best == 1:
                break
        if best == 0:
            break
        swap_rows(d, n, t, bi)
        swap_rows(u, m, t, bi)
        swap_cols(d, m, n, t, bj)
        swap_cols(v, n, n, t, bj)

        while True:
            p = d[t * n + t]
            dirty = False
            for i in range(t + 1, m):
                x = d[i * n + t]
                if x != 0:
                    q = floordiv(2 * x + p, 2 * p)
                    if q != 0:
                        if axpy(d + i * n + t, d + t * n + t, q, n - t, 1):
                            return 1
                        if axpy(u + i * m, u + t * m, q, m, 1):
                            return 1
                    if d[i * n + t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                x = d[t * n + j]
                if x != 0:
                    q = floordiv(2 * x + p, 2 * p)
                    if q != 0:
                        if axpy(d + t * n + j, d + t * n + t, q, m - t, n):
                            return 1
                        if axpy(v + j, v + t, q, n, n):
                            return 1
                    if d[t * n + j] != 0:
                        dirty = True
            if dirty:
                best = iabs(p)
                bi = t
                bj = t
                for i in range(t + 1, m):
                    x = d[i * n + t]
                    if x != 0 and iabs(x) < best:
                        best = iabs(x)
                        bi = i
                        bj = t
                for j in range(t + 1, n):
                    x = d[t * n + j]
                    if x != 0 and iabs(x) < best:
                        best = iabs(x)
                        bi = t
                        bj = j
                if bi != t:
                    swap_rows(d, n, t, bi)
                    swap_rows(u, m, t, bi)
                else:
                    swap_cols(d, m, n, t, bj)
                    swap_cols(v, n, n, t, bj)
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if floormod(d[i * n + j], p) != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            if addto(d + t * n + t, d + bad * n + t, n - t):
                return 1
            if addto(u + t * m, u + bad * m, m):
                return 1
        if d[t * n + t] < 0:
            for j in range(n):
                d[t * n + j] = -d[t * n + j]
            for j in range(m):
                u[t * m + j] = -u[t * m + j]
        t += 1
    return 0


def snf_lists(a, Py_ssize_t m, Py_ssize_t n):
    """int64 Smith normal form; raises OverflowError when 60 bits do not suffice."""
    cdef long long *d = <long long *> malloc(max(m * n, 1) * sizeof(long long))
    cdef long long *u = <long long *> malloc(max(m * m, 1) * sizeof(long long))
    cdef long long *v = <long long *> malloc(max(n * n, 1) * sizeof(long long))
    cdef Py_ssize_t i, j
    cdef int status
    if d == NULL or u == NULL or v == NULL:
        free(d)
        free(u)
        free(v)
        raise MemoryError()
    try:
        for i in range(m):
            row = a[i]
            for j in range(n):
                x = row[j]
                if x >= SK_LIMIT or x <= -SK_LIMIT:
                    raise OverflowError("entry exceeds the int64 kernel range")
                d[i * n + j] = x
        for i in range(m):
            for j in range(m):
                u[i * m + j] = 1 if i == j else 0
        for i in range(n):
            for j in range(n):
                v[i * n + j] = 1 if i == j else 0
        with nogil:
            status = run(d, u, v, m, n)
        if status:
            raise OverflowError("int64 overflow during elimination")
        return (
            [[u[i * m + j] for j in range(m)] for i in range(m)],
            [[d[i * n + j] for j in range(n)] for i in range(m)],
            [[v[i * n + j] for j in range(n)] for i in range(n)],
        )
    finally:
        free(d)
        free(u)
        free(v)
