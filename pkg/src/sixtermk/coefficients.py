"""Mod-n K-groups, the Bockstein maps, and six-term sequences with coefficients.

``K_j(A; Z/n)`` is modelled as ``T + R`` with ``T = K_j(A) (x) Z/n`` and
``R = Tor(K_{j+1}(A), Z/n)`` (the n-torsion of ``K_{j+1}(A)``).  Position i
of a six-term sequence pairs ``p_i`` (tensor part) with ``p_{i+3}`` (torsion
part).

With respect to such a splitting the coefficient sequence map at position i
is upper triangular::

    [ m_i (x) 1     c_i           ]
    [ 0             Tor(m_{i+3})  ]

The diagonal blocks are forced by naturality.  The corner ``c_i`` is not:
with ``c = 0`` the row is usually not exact (already for the mapping cone
of C -> M_n when gcd(n, k) > 1).  ``c`` is chosen by a deterministic search
so that it induces the connecting map on homology computed by the usual
zig-zag (lift, multiply by n, lift again) and the whole row is exact.  The
Bockstein maps only see the diagonal blocks, so they do not depend on c.

The zig-zag class enters with sign ``(-1)**i`` at position i, the same
alternation the Bockstein maps carry.  With a constant sign the rows are
still exact, but for half of the mapping-cone shifts no h-maps exist that
make the diagram suite commute.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

from .fgab import (
    FinAbGroup,
    GroupHom,
    HomSpace,
    direct_sum,
    exactness_witness,
    in_image,
    kernel,
    solve_preimage,
    tensor_mod,
    tor_mod,
)
from .functors import TILDE, SignPattern, sign_twist
from .sixterm import SixTermSeq, validate_exactness

__all__ = [
    "ModNKGroup",
    "CoefficientLayer",
    "CoefficientExactnessWarning",
    "k_with_coefficients",
    "rho_map",
    "beta_map",
    "times_n",
    "coefficient_layer",
    "coefficient_sequence",
    "sign_twist",
    "SignPattern",
    "TILDE",
]


class CoefficientExactnessWarning(UserWarning):
    """No exact coefficient row was found for a sequence."""


def _check_modulus(n):
    if int(n) != n or n < 2:
        raise ValueError(f"modulus must be an integer >= 2, got {n!r}")


@dataclass(frozen=True)
class ModNKGroup:
    n: int
    base: FinAbGroup
    companion: FinAbGroup
    tensor_block: FinAbGroup
    tor_block: FinAbGroup
    total: FinAbGroup
    reduce: GroupHom  # base -> tensor_block
    tor_incl: GroupHom  # tor_block -> companion
    inj_tensor: GroupHom
    inj_tor: GroupHom
    proj_tensor: GroupHom
    proj_tor: GroupHom

    def __str__(self):
        return str(self.total)


def k_with_coefficients(kj: FinAbGroup, kj1: FinAbGroup, n: int) -> ModNKGroup:
    """``kj (x) Z/n  +  Tor(kj1, Z/n)`` with its block maps.

    >>> str(k_with_coefficients(FinAbGroup.zero(), FinAbGroup.cyclic(4), 6))
    'Z/2'
    """
    _check_modulus(n)
    t, red = tensor_mod(kj, n)
    r, incl = tor_mod(kj1, n)
    total, inj, proj = direct_sum([t, r])
    return ModNKGroup(n, kj, kj1, t, r, total, red, incl, inj[0], inj[1], proj[0], proj[1])


def rho_map(kj: FinAbGroup, target: ModNKGroup) -> GroupHom:
    """Reduction mod n into the tensor block."""
    if kj != target.base:
        raise ValueError(f"{kj} is not the tensor source {target.base} of this coefficient group")
    return target.inj_tensor @ target.reduce


def beta_map(source: ModNKGroup, kj1: FinAbGroup) -> GroupHom:
    """Projection to the torsion block followed by the n-torsion inclusion."""
    if kj1 != source.companion:
        raise ValueError(f"{kj1} is not the torsion source {source.companion} of this coefficient group")
    return source.tor_incl @ source.proj_tor


def times_n(g: FinAbGroup, n: int) -> GroupHom:
    return GroupHom.scalar(g, n)


# ---------------------------------------------------------------------------
# Coefficient sequences


def _tensor_block_map(m: GroupHom, src: ModNKGroup, tgt: ModNKGroup) -> GroupHom:
    """``m (x) 1`` between tensor blocks."""
    cols = []
    for k in range(src.tensor_block.ngens):
        x = solve_preimage(src.reduce, src.tensor_block.generator(k))
        cols.append(tgt.reduce(m(x)))
    return _from_columns(src.tensor_block, tgt.tensor_block, cols)


def _tor_block_map(m: GroupHom, src: ModNKGroup, tgt: ModNKGroup) -> GroupHom:
    """``Tor(m, Z/n)`` between torsion blocks (m acts on the companions)."""
    cols = []
    for k in range(src.tor_block.ngens):
        y = m(src.tor_incl.column(k))
        x = solve_preimage(tgt.tor_incl, y)
        cols.append(x)
    return _from_columns(src.tor_block, tgt.tor_block, cols)


def _from_columns(a: FinAbGroup, b: FinAbGroup, cols) -> GroupHom:
    m = [[c[i] for c in cols] for i in range(b.ngens)]
    return GroupHom(a, b, m)


def _assemble(src: ModNKGroup, tgt: ModNKGroup, diag_t: GroupHom, corner: GroupHom, diag_r: GroupHom) -> GroupHom:
    top = diag_t @ src.proj_tensor + corner @ src.proj_tor
    return tgt.inj_tensor @ top + tgt.inj_tor @ (diag_r @ src.proj_tor)


def _zigzag(s: SixTermSeq, i: int, groups, x) -> tuple | None:
    """Connecting class of a cycle x of the torsion block at position i.

    x sits in ``p_{i+3}`` with ``m_{i+3}(x) = 0``.  Lift along ``m_{i+2}``,
    multiply by n, lift along ``m_{i+1}`` and reduce into the tensor block
    at position i+1.  Returns None if a lift fails (input not exact).
    """
    n = groups[i].n
    y = solve_preimage(s.maps[(i + 2) % 6], x)
    if y is None:
        return None
    ny = s.groups[(i + 2) % 6].reduce(tuple(n * a for a in y))
    z = solve_preimage(s.maps[(i + 1) % 6], ny)
    if z is None:
        return None
    return groups[(i + 1) % 6].reduce(z)


@dataclass(frozen=True)
class CoefficientLayer:
    """Six-term sequence with Z/n coefficients plus its Bockstein maps.

    ``seq.maps`` are the plain maps f_{n,i}; ``ftilde(i)`` applies the sign
    convention that negates positions 0 and 3.  ``beta[i]`` carries the sign
    ``(-1)**i`` relative to the natural Bockstein; with it both Bockstein
    squares commute.
    """

    n: int
    base: SixTermSeq
    groups: tuple
    seq: SixTermSeq
    rho: tuple
    beta: tuple
    corrections: tuple
    exact: bool
    searched: int

    def f(self, i) -> GroupHom:
        return self.seq.maps[i % 6]

    def ftilde(self, i) -> GroupHom:
        return TILDE[i % 6] * self.seq.maps[i % 6]

    def times(self, i) -> GroupHom:
        g = self.seq.groups[i % 6]
        return GroupHom.scalar(g, self.n)


CONNECTING_SIGNS = (1, -1, 1, -1, 1, -1)


def coefficient_layer(s: SixTermSeq, n: int, connecting_sign=CONNECTING_SIGNS, limit: int = 200_000) -> CoefficientLayer:
    """Coefficient row of s with corner corrections, Bocksteins and the exactness verdict.

    ``connecting_sign`` is one sign or six (one per position) for the zig-zag
    class each corner must induce.
    """
    _check_modulus(n)
    signs = tuple(connecting_sign) if isinstance(connecting_sign, (tuple, list)) else (connecting_sign,) * 6
    if len(signs) != 6 or any(x not in (1, -1) for x in signs):
        raise ValueError("connecting_sign must be +1, -1 or six such signs")
    groups = tuple(k_with_coefficients(s.groups[i], s.groups[(i + 3) % 6], n) for i in range(6))
    diag_t = [_tensor_block_map(s.maps[i], groups[i], groups[(i + 1) % 6]) for i in range(6)]
    diag_r = [_tor_block_map(s.maps[(i + 3) % 6], groups[i], groups[(i + 1) % 6]) for i in range(6)]

    # candidate corners, filtered by the connecting-map condition on cycles
    candidates = []
    for i in range(6):
        src, tgt = groups[i], groups[(i + 1) % 6]
        space = HomSpace(src.tor_block, tgt.tensor_block)
        cyc, cyc_incl = kernel(diag_r[i])
        conds = []
        for k in range(cyc.ngens):
            x_r = cyc_incl.column(k)
            x = src.tor_incl(x_r)
            z = _zigzag(s, i, groups, x)
            conds.append((x_r, z))
        opts = []
        for coords in itertools.product(*(range(o) for o in space.orders)):
            c = space.hom(coords)
            ok = True
            for x_r, z in conds:
                if z is None:
                    continue
                val = c(x_r)
                diff = tgt.tensor_block.reduce(tuple(a - signs[i] * b for a, b in zip(val, z)))
                if not in_image(diag_t[i], diff):
                    ok = False
                    break
            if ok:
                opts.append(c)
        candidates.append(opts)

    maps = [None] * 6
    searched = 0

    def build_map(i, c):
        return _assemble(groups[i], groups[(i + 1) % 6], diag_t[i], c, diag_r[i])

    def dfs(i):
        nonlocal searched
        if i == 6:
            return exactness_witness(maps[5], maps[0]) is None and (maps[0] @ maps[5]).is_zero()
        for c in candidates[i]:
            searched += 1
            if searched > limit:
                return False
            maps[i] = build_map(i, c)
            if i >= 1:
                if not (maps[i] @ maps[i - 1]).is_zero():
                    continue
                if exactness_witness(maps[i - 1], maps[i]) is not None:
                    continue
            if dfs(i + 1):
                return True
        maps[i] = None
        return False

    found = all(candidates) and dfs(0)
    if not found:
        corners = [GroupHom.zero(groups[i].tor_block, groups[(i + 1) % 6].tensor_block) for i in range(6)]
        maps = [build_map(i, corners[i]) for i in range(6)]
    seq = SixTermSeq(tuple(g.total for g in groups), tuple(maps))
    exact = validate_exactness(seq).ok
    if exact:
        seq = SixTermSeq(seq.groups, seq.maps, exact=True)
    corners = tuple(
        groups[(i + 1) % 6].proj_tensor @ maps[i] @ groups[i].inj_tor for i in range(6)
    )
    rho = tuple(rho_map(s.groups[i], groups[i]) for i in range(6))
    beta = tuple((-1) ** i * beta_map(groups[i], s.groups[(i + 3) % 6]) for i in range(6))
    return CoefficientLayer(n, s, groups, seq, rho, beta, corners, exact, searched)


def coefficient_sequence(s: SixTermSeq, n: int) -> SixTermSeq:
    """The mod-n six-term sequence of s (plain maps, no sign convention).

    The returned sequence is flagged exact only if the check passed; a
    failed check also raises a :class:`CoefficientExactnessWarning`.
    """
    layer = coefficient_layer(s, n)
    if not layer.exact:
        warnings.warn(
            f"no exact coefficient row found for modulus {n}", CoefficientExactnessWarning, stacklevel=2
        )
    return layer.seq
