import itertools
from math import gcd

import pytest

from sixtermk import (
    FinAbGroup,
    GroupHom,
    ext_group,
    hom_algebra,
    hom_group,
    image_and_cokernel,
    is_exact_pair,
    kernel,
    tensor_mod,
    tor_mod,
)
from sixtermk.fgab import ShapeError, WellDefinednessError, direct_sum, parse_presented, solve_preimage

import oracles

Z = FinAbGroup.free(1)
G = FinAbGroup.parse
SMALL = oracles.abelian_groups(36)


def hom(a, b, m):
    return GroupHom(G(a), G(b), m)


class TestGroups:
    def test_canonical_form(self):
        assert str(G("Z/2 + Z/3 + Z")) == "Z + Z/6"
        assert str(G("Z/4 + Z/6")) == "Z/2 + Z/12"
        assert str(G("Z^2 + Z_1")) == "Z^2"
        assert str(G("0")) == "0"
        assert G("Z/6 + Z/2") == G("Z/2 + Z/6")

    def test_literals(self):
        assert parse_presented("Z^2 + Z/4 + Z_6") == [0, 0, 4, 6]
        with pytest.raises(ValueError):
            G("Q")
        with pytest.raises(ValueError):
            FinAbGroup(0, (4, 6))

    def test_cyclic_edge_cases(self):
        assert FinAbGroup.cyclic(0) == Z
        assert FinAbGroup.cyclic(1).is_zero()
        assert FinAbGroup.cyclic(-5) == G("Z/5")

    def test_order_and_exponent(self):
        g = G("Z/2 + Z/6")
        assert g.order == 12 and g.exponent == 6
        assert G("Z + Z/2").order is None
        assert len(list(g.elements())) == 12


class TestHoms:
    def test_well_definedness(self):
        with pytest.raises(WellDefinednessError):
            hom("Z/4", "Z/6", [[1]])
        with pytest.raises(WellDefinednessError):
            hom("Z/2", "Z", [[1]])
        assert hom("Z/4", "Z/6", [[3]])((1,)) == (3,)

    def test_shapes(self):
        with pytest.raises(ValueError):
            hom("Z", "Z", [[1, 2]])
        f = hom("Z", "Z/6", [[1]])
        with pytest.raises(ShapeError):
            f @ f

    def test_algebra_examples(self):
        red = hom("Z", "Z/6", [[1]])
        six = GroupHom.scalar(Z, 6)
        assert hom_algebra(six, red, "compose").is_zero()
        assert hom_algebra(red, hom_algebra(red, op="negate"), "add").is_zero()
        two = GroupHom.scalar(G("Z/4"), 2)
        assert hom_algebra(two, two, "compose").is_zero()

    def test_entries_reduced(self):
        assert hom("Z", "Z/6", [[7]]) == hom("Z", "Z/6", [[1]])


class TestKernelsImages:
    def test_kernel_examples(self):
        k, _ = kernel(GroupHom.scalar(Z, 3))
        assert k.is_zero()
        k, incl = kernel(hom("Z", "Z/6", [[1]]))
        assert k == Z and incl.matrix.tolist() == [[6]]
        k, incl = kernel(GroupHom.scalar(G("Z/4"), 2))
        assert str(k) == "Z/2" and incl.matrix.tolist() == [[2]]

    def test_image_cokernel_examples(self):
        im, co, _ = image_and_cokernel(GroupHom.scalar(Z, 6))
        assert (str(im), str(co)) == ("Z", "Z/6")
        im, co, _ = image_and_cokernel(GroupHom.zero(G("Z/4"), G("Z/9")))
        assert (str(im), str(co)) == ("0", "Z/9")
        im, co, _ = image_and_cokernel(GroupHom(G("Z^2"), G("Z^2"), [[2, 0], [0, 3]]))
        assert str(co) == "Z/6"

    def test_exact_pair_examples(self):
        assert is_exact_pair(GroupHom.scalar(Z, 5), hom("Z", "Z/5", [[1]]))
        assert is_exact_pair(GroupHom.zero(Z, Z), GroupHom.identity(Z))
        two = GroupHom.scalar(G("Z/4"), 2)
        assert is_exact_pair(two, two)
        assert not is_exact_pair(GroupHom.scalar(Z, 2), hom("Z", "Z/4", [[1]]))

    def test_preimage(self):
        f = GroupHom(G("Z^2"), G("Z/6"), [[2, 3]])
        for y in range(6):
            x = solve_preimage(f, (y,))
            assert f(x) == (y,)
        assert solve_preimage(GroupHom.scalar(Z, 2), (1,)) is None

    @pytest.mark.parametrize("a", [g for g in SMALL if 0 < (g.order or 0) <= 24])
    def test_kernel_and_image_by_enumeration(self, a):
        # endomorphism x -> 2x plus a coordinate mix
        m = [[2 if i == j else (1 if j == i + 1 else 0) for j in range(a.ngens)] for i in range(a.ngens)]
        try:
            f = GroupHom(a, a, m)
        except WellDefinednessError:
            f = GroupHom.scalar(a, 2)
        elts = oracles.elements(a.orders)
        ker = [x for x in elts if not any(f(x))]
        img = {f(x) for x in elts}
        k, incl = kernel(f)
        assert k.order == len(ker)
        assert {incl(y) for y in k.elements()} == set(ker)
        im, co, _ = image_and_cokernel(f)
        assert im.order == len(img)
        assert co.order * len(img) == a.order


class TestFunctorsOfGroups:
    def test_hom_examples(self):
        assert str(hom_group(G("Z/4"), G("Z/6"))[0]) == "Z/2"
        g, basis = hom_group(Z, Z)
        assert g == Z and basis == [GroupHom.identity(Z)]
        assert str(hom_group(G("Z + Z/4"), G("Z/6"))[0]) == "Z/2 + Z/6"

    def test_ext_examples(self):
        assert str(ext_group(G("Z/4"), Z)) == "Z/4"
        assert ext_group(Z, G("Z/7 + Z")).is_zero()
        assert str(ext_group(G("Z/4"), G("Z/6"))) == "Z/2"

    def test_tensor_examples(self):
        g, red = tensor_mod(Z, 6)
        assert str(g) == "Z/6" and red.matrix.tolist() == [[1]]
        assert str(tensor_mod(G("Z/4"), 6)[0]) == "Z/2"
        assert tensor_mod(FinAbGroup.zero(), 5)[0].is_zero()

    def test_tor_examples(self):
        for n, k in itertools.product(range(2, 9), repeat=2):
            assert tor_mod(FinAbGroup.cyclic(n), k)[0] == FinAbGroup.cyclic(gcd(n, k))
        assert tor_mod(Z, 4)[0].is_zero()
        g, incl = tor_mod(G("Z/4"), 6)
        assert str(g) == "Z/2" and incl.matrix.tolist() == [[2]]

    def test_modulus_checked(self):
        with pytest.raises(ValueError):
            tensor_mod(Z, 1)
        with pytest.raises(ValueError):
            tor_mod(Z, 0)

    def test_direct_sum_maps(self):
        total, inj, proj = direct_sum([G("Z/2"), G("Z/3"), Z])
        assert str(total) == "Z + Z/6"
        for k in range(3):
            assert proj[k] @ inj[k] == GroupHom.identity(inj[k].source)
            for j in range(3):
                if j != k:
                    assert (proj[j] @ inj[k]).is_zero()


# -- brute-force oracle sweeps over all groups of order <= 36 ----------------


def test_hom_oracle_all_pairs():
    for a in SMALL:
        for b in SMALL:
            g, basis = hom_group(a, b)
            assert oracles.profile_of(g) == oracles.hom_profile(a, b), (a, b)
            assert len(basis) == g.ngens


def test_hom_basis_spans_every_hom():
    for a in SMALL:
        for b in SMALL:
            if len(oracles.all_homs(a, b)) > 400:
                continue
            g, basis = hom_group(a, b)
            spanned = set()
            for coeffs in g.elements():
                acc = GroupHom.zero(a, b)
                for c, h in zip(coeffs, basis):
                    acc = acc + c * h
                spanned.add(tuple(acc.column(j) for j in range(a.ngens)))
            brute = {tuple(imgs) for imgs in oracles.all_homs(a, b)}
            assert spanned == brute, (a, b)


def test_ext_oracle_all_pairs():
    for a in SMALL:
        for b in SMALL:
            assert oracles.profile_of(ext_group(a, b)) == oracles.ext_profile(a, b), (a, b)


@pytest.mark.parametrize("n", range(2, 13))
def test_tensor_and_tor_oracle(n):
    for a in SMALL:
        t, red = tensor_mod(a, n)
        assert oracles.profile_of(t) == oracles.tensor_profile(a, n), (a, n)
        nA = oracles.multiples(a.orders, n)
        for x in oracles.elements(a.orders):
            assert (not any(red(x))) == (x in nA)
        r, incl = tor_mod(a, n)
        assert oracles.profile_of(r) == oracles.tor_profile(a, n), (a, n)
        assert {incl(y) for y in r.elements()} == set(oracles.tor_elements(a, n))
