import pytest

from sixtermk import SixTermHom, SixTermSeq, build, catalog_descriptors, rotate3
from sixtermk.functors import (
    TILDE,
    SignPattern,
    lambda_transform,
    mc_data,
    mc_iter,
    mc_sign_table,
    sign_twist,
    x_e_iso,
)
from sixtermk.sixterm import hom_six, validate_exactness


@pytest.mark.parametrize("n", [2, 3, 7])
def test_cone_of_e(n):
    c = mc_data(build(f"E:{n}:0"))
    assert [str(g) for g in c.groups] == ["0", "0", "0", "Z", "Z", f"Z/{n}"]
    assert c.maps[3].matrix.tolist() == [[n]]
    assert c.maps[4].matrix.tolist() == [[1]]
    assert c == build(f"E:{n}:1")


def test_cone_of_zero_and_identity_extension():
    assert mc_data(SixTermSeq.zero()) == SixTermSeq.zero()
    c = mc_data(build("F1:0"))
    assert [str(g) for g in c.groups] == ["0", "Z", "Z", "0", "0", "0"]
    assert c.maps[1].matrix.tolist() == [[1]]


def test_iteration_basics():
    s = build("E:4:0")
    assert mc_iter(s, 0) == s
    assert mc_iter(s, 6) == s
    with pytest.raises(ValueError):
        mc_iter(s, -1)


@pytest.mark.parametrize("n", range(2, 13))
def test_cube_versus_shift(n):
    s = build(f"E:{n}:0")
    m3, r = mc_iter(s, 3), rotate3(s)
    assert m3.groups == r.groups
    for a, b, want in zip(m3.maps, r.maps, (-1, -1, 1, -1, -1, 1)):
        assert a == want * b


def test_sign_table_matches_data():
    for k in range(7):
        table = mc_sign_table(k)
        s = build("E:5:0")
        t = mc_iter(s, k)
        for i, (sign, j) in enumerate(table):
            assert t.maps[i] == sign * s.maps[j]
    assert mc_sign_table(6) == [(1, i) for i in range(6)]


@pytest.mark.parametrize("desc", catalog_descriptors(5), ids=str)
def test_x_e_iso_commutes(desc):
    s = build(desc)
    iso = x_e_iso(s)
    assert iso.defects() == []
    assert iso.is_iso()


def test_x_e_iso_zero():
    iso = x_e_iso(SixTermSeq.zero())
    assert all(c.is_zero() for c in iso.components)


def test_x_e_iso_matches_third_column():
    s = build("E:6:0")
    assert x_e_iso(s).target.groups == build("E:6:3").groups


class TestLambda:
    def test_identity(self):
        s = build("E:3:2")
        assert lambda_transform(SixTermHom.identity(s)) == SixTermHom.identity(mc_data(s))

    def test_zero(self):
        s, t = build("F1:0"), build("E:2:0")
        assert lambda_transform(SixTermHom.zero(s, t)) == SixTermHom.zero(mc_data(s), mc_data(t))

    def test_six_times(self):
        s = build("E:4:0")
        _, basis = hom_six(s, s)
        for a in basis:
            b = a
            for _ in range(6):
                b = lambda_transform(b)
            assert b == a

    def test_additive(self):
        s = build("E:4:1")
        _, basis = hom_six(s, s)
        a, b = basis[0], basis[-1]
        assert lambda_transform(a + b) == lambda_transform(a) + lambda_transform(b)


class TestSignTwist:
    def test_tilde_twice(self):
        s = build("E:5:0")
        assert sign_twist(sign_twist(s, TILDE), TILDE) == s

    def test_tilde_negates_zero_and_three(self):
        s = build("E:5:1")
        t = sign_twist(s, TILDE)
        for i in range(6):
            assert t.maps[i] == (-s.maps[i] if i in (0, 3) else s.maps[i])

    @pytest.mark.parametrize("desc", ["E:6:0", "F:4:2", "F1:5"])
    def test_exactness_invariant(self, desc):
        s = build(desc)
        for bits in range(64):
            pattern = [(-1) ** ((bits >> k) & 1) for k in range(6)]
            assert validate_exactness(sign_twist(s, pattern)).ok

    def test_pattern_validation(self):
        with pytest.raises(ValueError):
            SignPattern((1, 1, 1))
        with pytest.raises(ValueError):
            SignPattern((1, 2, 1, 1, 1, 1))
        assert str(TILDE) == "(-,+,+,-,+,+)"
        assert (TILDE * TILDE).signs == (1,) * 6
