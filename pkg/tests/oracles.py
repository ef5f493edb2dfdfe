"""Brute-force reference computations on small finite abelian groups.

Nothing here calls the library's Smith normal form or Hom/Ext/Tor code.
Groups are compared through their torsion profile d -> |G[d]|, which
determines a finite abelian group up to isomorphism.
"""

import itertools
from math import gcd

from sixtermk import FinAbGroup


def invariant_chains(order):
    """All chains d1 | d2 | ... | dt with product ``order`` and each di >= 2."""
    out = []

    def rec(rest, prev, acc):
        if rest == 1:
            out.append(tuple(acc))
            return
        for d in range(2, rest + 1):
            if rest % d == 0 and (prev is None or d % prev == 0):
                rec(rest // d, d, acc + [d])

    rec(order, None, [])
    return out


def abelian_groups(max_order):
    groups = [FinAbGroup.zero()]
    for order in range(2, max_order + 1):
        groups.extend(FinAbGroup(0, c) for c in invariant_chains(order))
    return groups


def elements(orders):
    return list(itertools.product(*(range(o) for o in orders)))


def add(x, y, orders):
    return tuple((a + b) % o for a, b, o in zip(x, y, orders))


def scale(k, x, orders):
    return tuple((k * a) % o for a, o in zip(x, orders))


def profile_of(group: FinAbGroup, up_to=36):
    """|G[d]| for d = 1..up_to from the invariant factors."""
    out = []
    for d in range(1, up_to + 1):
        c = 1
        for t in group.torsion:
            c *= gcd(d, t)
        out.append(c)
    return tuple(out)


def subgroup_profile(elts, orders, up_to=36):
    """Torsion profile of a finite set of elements closed under addition."""
    out = []
    for d in range(1, up_to + 1):
        out.append(sum(1 for x in elts if not any(scale(d, x, orders))))
    return tuple(out)


def quotient_profile(orders, sub, up_to=36):
    """Torsion profile of G / sub by counting cosets."""
    elts = elements(orders)
    sub = set(sub)
    out = []
    for d in range(1, up_to + 1):
        hits = sum(1 for x in elts if scale(d, x, orders) in sub)
        out.append(hits // len(sub))
    return tuple(out)


def multiples(orders, n):
    return {scale(n, x, orders) for x in elements(orders)}


def hom_profile(a: FinAbGroup, b: FinAbGroup, up_to=36):
    """|Hom(a, b)[d]| by counting images of each generator.

    A hom out of ``Z/o1 + ... + Z/ot`` is any choice of images with
    ``oi * y = 0``; it is killed by d iff every image is.
    """
    belts = elements(b.orders)
    out = []
    for d in range(1, up_to + 1):
        c = 1
        for o in a.torsion:
            c *= sum(1 for y in belts if not any(scale(o, y, b.orders)) and not any(scale(d, y, b.orders)))
        out.append(c)
    return tuple(out)


def all_homs(a: FinAbGroup, b: FinAbGroup):
    """Every hom a -> b as a tuple of generator images."""
    belts = elements(b.orders)
    choices = [[y for y in belts if not any(scale(o, y, b.orders))] for o in a.torsion]
    return list(itertools.product(*choices))


def ext_profile(a: FinAbGroup, b: FinAbGroup, up_to=36):
    """Ext(a, b) = sum over summands Z/o of a of b / o b, profile by coset counting."""
    prof = [1] * up_to
    for o in a.torsion:
        q = quotient_profile(b.orders, multiples(b.orders, o), up_to)
        prof = [x * y for x, y in zip(prof, q)]
    return tuple(prof)


def tensor_profile(a: FinAbGroup, n, up_to=36):
    return quotient_profile(a.orders, multiples(a.orders, n), up_to)


def tor_elements(a: FinAbGroup, n):
    return [x for x in elements(a.orders) if not any(scale(n, x, a.orders))]


def tor_profile(a: FinAbGroup, n, up_to=36):
    return subgroup_profile(tor_elements(a, n), a.orders, up_to)


def hom_image(images, a: FinAbGroup, orders):
    """Image of the hom sending the generators of a to ``images``."""
    out = set()
    for coeffs in elements(a.orders):
        acc = tuple(0 for _ in orders)
        for c, y in zip(coeffs, images):
            acc = add(acc, scale(c, y, orders), orders)
        out.add(acc)
    return out


def extension_middles(a: FinAbGroup, b: FinAbGroup, pool):
    """Groups X in ``pool`` holding a copy of a with quotient b."""
    want = profile_of(b)
    out = []
    for x in pool:
        if x.order != a.order * b.order:
            continue
        for images in all_homs(a, x):
            img = hom_image(images, a, x.orders)
            if len(img) == a.order and quotient_profile(x.orders, img) == want:
                out.append(x)
                break
    return out
