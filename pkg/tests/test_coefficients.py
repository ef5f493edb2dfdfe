import warnings
from math import gcd

import pytest

from sixtermk import FinAbGroup, GroupHom, SixTermSeq, build, catalog_descriptors
from sixtermk.coefficients import (
    CONNECTING_SIGNS,
    TILDE,
    CoefficientExactnessWarning,
    beta_map,
    coefficient_layer,
    coefficient_sequence,
    k_with_coefficients,
    rho_map,
    times_n,
)
from sixtermk.sixterm import validate_exactness

from helpers import column_exact

Z, O = FinAbGroup.free(1), FinAbGroup.zero()
C = FinAbGroup.cyclic


class TestGroups:
    @pytest.mark.parametrize("n,k", [(2, 3), (4, 6), (6, 4), (12, 8), (5, 5)])
    def test_examples(self, n, k):
        assert k_with_coefficients(O, C(n), k).total == C(gcd(n, k))
        assert k_with_coefficients(Z, O, k).total == C(k)
        assert k_with_coefficients(O, Z, k).total.is_zero()

    def test_mixed(self):
        g = k_with_coefficients(FinAbGroup.parse("Z + Z/4"), FinAbGroup.parse("Z/6"), 2)
        assert str(g) == "Z/2 + Z/2 + Z/2"
        assert str(g.tensor_block) == "Z/2 + Z/2" and str(g.tor_block) == "Z/2"

    def test_modulus_checked(self):
        with pytest.raises(ValueError):
            k_with_coefficients(Z, Z, 1)


class TestNamedMaps:
    def test_rho(self):
        assert rho_map(Z, k_with_coefficients(Z, O, 6)).matrix.tolist() == [[1]]
        r = rho_map(C(4), k_with_coefficients(C(4), O, 6))
        assert (str(r.source), str(r.target), r.matrix.tolist()) == ("Z/4", "Z/2", [[1]])
        assert rho_map(O, k_with_coefficients(O, C(3), 3)).is_zero()
        with pytest.raises(ValueError):
            rho_map(Z, k_with_coefficients(C(2), O, 2))

    def test_beta(self):
        n, k = 6, 4
        b = beta_map(k_with_coefficients(O, C(n), k), C(n))
        assert str(b.source) == "Z/2" and b.target == C(n)
        assert b.matrix.tolist() == [[3]]
        assert b.is_injective()
        assert beta_map(k_with_coefficients(Z, Z, 3), Z).is_zero()
        assert beta_map(k_with_coefficients(C(5), O, 5), O).is_zero()

    def test_times(self):
        assert times_n(Z, 6).matrix.tolist() == [[6]]
        assert times_n(C(6), 6).is_zero()
        assert times_n(C(4), 6) == GroupHom.scalar(C(4), 2)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_small_columns(self, n):
        for a in [O, Z, C(2), C(4), C(6), FinAbGroup.parse("Z + Z/3")]:
            for b in [O, Z, C(3), C(8), FinAbGroup.parse("Z/2 + Z/2")]:
                assert column_exact(a, b, n), (a, b, n)


class TestSequences:
    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    @pytest.mark.parametrize("k", [2, 3, 4, 6, 12])
    def test_table_columns(self, n, k):
        g = gcd(n, k)
        first = [str(x) for x in coefficient_sequence(build(f"E:{n}:0"), k).groups]
        assert first == [str(C(x)) for x in (1, g, k, k, g, 1)]
        second = [str(x) for x in coefficient_sequence(build(f"E:{n}:1"), k).groups]
        assert second == [str(C(x)) for x in (1, 1, g, k, k, g)]

    def test_zero(self):
        s = coefficient_sequence(SixTermSeq.zero(), 5)
        assert all(x.is_zero() for x in s.groups)

    @pytest.mark.parametrize("desc", catalog_descriptors(6), ids=str)
    @pytest.mark.parametrize("k", [2, 4, 6])
    def test_rows_exact(self, desc, k):
        layer = coefficient_layer(build(desc), k)
        assert layer.exact
        assert validate_exactness(layer.seq).ok

    def test_corners_needed(self):
        # zero corners leave the row inexact once n and k share a factor
        layer = coefficient_layer(build("E:2:1"), 2, limit=0)
        assert not layer.exact
        assert coefficient_layer(build("E:2:1"), 2).exact

    def test_constant_connecting_sign_still_exact(self):
        for sign in (1, -1):
            assert coefficient_layer(build("E:4:2"), 2, connecting_sign=sign).exact

    def test_connecting_sign_validation(self):
        with pytest.raises(ValueError):
            coefficient_layer(build("E:2:0"), 2, connecting_sign=(1, 1))
        with pytest.raises(ValueError):
            coefficient_layer(build("E:2:0"), 2, connecting_sign=0)
        assert CONNECTING_SIGNS == (1, -1, 1, -1, 1, -1)

    def test_warning_on_inexact_input(self):
        # x2 on Z is not exact at p1 and becomes the zero map mod 2
        bad = SixTermSeq.from_maps((Z, Z, O, O, O, O), [[[2]], [], [], [], [], []])
        with pytest.warns(CoefficientExactnessWarning):
            coefficient_sequence(bad, 2)

    def test_no_warning_on_exact_input(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            coefficient_sequence(build("E:6:3"), 4)

    def test_ftilde(self):
        layer = coefficient_layer(build("E:4:0"), 2)
        for i in range(6):
            assert layer.ftilde(i) == TILDE[i] * layer.f(i)
            assert layer.times(i) == GroupHom.scalar(layer.seq.groups[i], 2)


@pytest.mark.parametrize("desc", catalog_descriptors(4), ids=str)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_bockstein_squares_direct(desc, n):
    s = build(desc)
    layer = coefficient_layer(s, n)
    for i in range(6):
        f1 = TILDE[i] * s.maps[i]
        fn = layer.ftilde(i)
        assert layer.rho[(i + 1) % 6] @ f1 == fn @ layer.rho[i]
        f1_shift = TILDE[(i + 3) % 6] * s.maps[(i + 3) % 6]
        assert layer.beta[(i + 1) % 6] @ fn == -(f1_shift @ layer.beta[i])
