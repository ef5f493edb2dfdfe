import random
from math import gcd

import pytest

from sixtermk import IntMatrix, smith_normal_form
from sixtermk._kernel import compiled_available
from sixtermk.fgab import cokernel_presentation

from helpers import check_snf, random_matrix

BACKENDS = ["python"] + (["compiled"] if compiled_available() else [])


@pytest.mark.parametrize("backend", BACKENDS)
def test_spec_examples(backend):
    m = IntMatrix([[2, 4], [6, 8]])
    u, d, v = smith_normal_form(m, backend)
    assert d.tolist() == [[2, 0], [0, 4]]
    check_snf(m, u, d, v)
    u, d, v = smith_normal_form(IntMatrix.identity(2), backend)
    assert d == IntMatrix.identity(2)
    u, d, v = smith_normal_form(IntMatrix.zeros(0, 0), backend)
    assert u.shape == d.shape == v.shape == (0, 0)


@pytest.mark.parametrize("backend", BACKENDS)
def test_random_round_trip(backend):
    rng = random.Random(20240611)
    for _ in range(1000):
        m = random_matrix(rng)
        check_snf(m, *smith_normal_form(m, backend))


@pytest.mark.skipif(not compiled_available(), reason="compiled kernel not built")
def test_backends_agree_exactly():
    rng = random.Random(7)
    for _ in range(300):
        m = random_matrix(rng)
        assert smith_normal_form(m, "python") == smith_normal_form(m, "compiled")


@pytest.mark.skipif(not compiled_available(), reason="compiled kernel not built")
def test_overflow_falls_back_to_python():
    rng = random.Random(3)
    for _ in range(30):
        m = random_matrix(rng, big=True)
        got = smith_normal_form(m, "compiled")
        check_snf(m, *got)
        assert got == smith_normal_form(m, "python")


def test_cokernel_examples():
    assert str(cokernel_presentation(IntMatrix([[6]]))) == "Z/6"
    assert str(cokernel_presentation(IntMatrix([[2, 0], [0, 3]]))) == "Z/6"
    assert str(cokernel_presentation(IntMatrix.zeros(2, 0))) == "Z^2"


def test_diagonal_matches_gcd_of_minors():
    # d1 = gcd of entries, d1 * d2 = |det| for 2x2
    rng = random.Random(11)
    for _ in range(200):
        m = IntMatrix([[rng.randint(-30, 30) for _ in range(2)] for _ in range(2)])
        _, d, _ = smith_normal_form(m)
        g = gcd(*[abs(x) for r in m for x in r])
        assert d[0, 0] == g
        assert d[0, 0] * d[1, 1] == abs(m.det())
