"""Shared checks used by several test modules."""

from sixtermk import IntMatrix
from sixtermk.coefficients import beta_map, k_with_coefficients, rho_map, times_n
from sixtermk.fgab import is_exact_pair


def bockstein_column(a, b, n):
    """a -> a(Z/n) -> b -> b -> b(Z/n) -> a -> a  (rho, beta, x n, ...)."""
    ga, gb = k_with_coefficients(a, b, n), k_with_coefficients(b, a, n)
    return [rho_map(a, ga), beta_map(ga, b), times_n(b, n), rho_map(b, gb), beta_map(gb, a), times_n(a, n)]


def column_exact(a, b, n):
    maps = bockstein_column(a, b, n)
    return all(is_exact_pair(maps[i - 1], maps[i]) for i in range(6))


def check_snf(m, u, d, v):
    assert u @ m @ v == d
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    assert d.is_diagonal()
    diag = [d[i, i] for i in range(min(d.shape))]
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz, "zeros must trail"
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


def random_matrix(rng, big=False):
    rows, cols = rng.randint(0, 6), rng.randint(0, 6)
    hi = 10**12 if big else rng.choice([3, 10, 100])
    return IntMatrix([[rng.randint(-hi, hi) for _ in range(cols)] for _ in range(rows)], rows, cols)
