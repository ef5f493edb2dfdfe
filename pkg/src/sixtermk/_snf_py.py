"""Reference Smith normal form kernel on plain lists of Python ints.

The compiled kernel in ``_snf_c.pyx`` follows this routine step for step,
so both return identical transforms for any input that fits in 64 bits.
"""


def snf_lists(a, m, n):
    """Return (u, d, v) as lists of rows with u * a * v = d.

    Pivot rule: the smallest nonzero absolute value in the remaining block.
    Quotients round to nearest so remainders are balanced, which roughly
    halves the digit growth of the transforms compared to floor division.
    """
    d = [list(r) for r in a]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    t = 0
    while t < m and t < n:
        best, bi, bj = 0, -1, -1
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    ax = -x if x < 0 else x
                    if best == 0 or ax < best:
                        best, bi, bj = ax, i, j
                        if ax == 1:
                            break
            if best == 1:
                break
        if best == 0:
            break
        _swap_rows(d, u, t, bi)
        _swap_cols(d, v, t, bj, m, n)

        while True:
            p = d[t][t]
            dirty = False
            rt = d[t]
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    q = (2 * x + p) // (2 * p)
                    if q:
                        ri = d[i]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                        ui, ut = u[i], u[t]
                        for j in range(m):
                            ui[j] -= q * ut[j]
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = rt[j]
                if x:
                    q = (2 * x + p) // (2 * p)
                    if q:
                        for i in range(t, m):
                            d[i][j] -= q * d[i][t]
                        for i in range(n):
                            v[i][j] -= q * v[i][t]
                    if rt[j]:
                        dirty = True
            if dirty:
                best = p if p > 0 else -p
                bi, bj = t, t
                for i in range(t + 1, m):
                    x = d[i][t]
                    if x and abs(x) < best:
                        best, bi, bj = abs(x), i, t
                for j in range(t + 1, n):
                    x = rt[j]
                    if x and abs(x) < best:
                        best, bi, bj = abs(x), t, j
                if bi != t:
                    _swap_rows(d, u, t, bi)
                else:
                    _swap_cols(d, v, t, bj, m, n)
                continue
            # row and column are clear; enforce divisibility of the rest
            bad = -1
            for i in range(t + 1, m):
                ri = d[i]
                for j in range(t + 1, n):
                    if ri[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            rb, ub, ut = d[bad], u[bad], u[t]
            for j in range(t, n):
                rt[j] += rb[j]
            for j in range(m):
                ut[j] += ub[j]
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def _swap_rows(d, u, a, b):
    if a != b:
        d[a], d[b] = d[b], d[a]
        u[a], u[b] = u[b], u[a]


def _swap_cols(d, v, a, b, m, n):
    if a != b:
        for r in d:
            r[a], r[b] = r[b], r[a]
        for r in v:
            r[a], r[b] = r[b], r[a]
