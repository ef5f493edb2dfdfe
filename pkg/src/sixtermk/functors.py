"""Mapping cone, suspension and the induced transform on chain maps.

At the level of K-data the mapping cone rotates the sequence one step
forward and negates two maps::

    groups (p5, p0, p1, p2, p3, p4)
    maps   (-m5, m0, -m1, m2, m3, m4)

Six applications return the original data exactly; three agree with the
degree shift ``rotate3`` up to the signed identity (+1, -1, +1, +1, -1, +1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fgab import GroupHom
from .sixterm import SixTermHom, SixTermSeq, rotate3

CONE_SIGNS = (-1, 1, -1, 1, 1, 1)  # applied after rotating the maps
SUSPENSION_SIGNS = (1, -1, 1, 1, -1, 1)


@dataclass(frozen=True)
class SignPattern:
    signs: tuple

    def __post_init__(self):
        signs = tuple(int(x) for x in self.signs)
        if len(signs) != 6 or any(x not in (1, -1) for x in signs):
            raise ValueError(f"sign pattern must be six entries of +1/-1, got {self.signs!r}")
        object.__setattr__(self, "signs", signs)

    def __getitem__(self, i):
        return self.signs[i]

    def __mul__(self, other: "SignPattern") -> "SignPattern":
        return SignPattern(tuple(a * b for a, b in zip(self.signs, other.signs)))

    def __str__(self):
        return "(" + ",".join("+" if x > 0 else "-" for x in self.signs) + ")"


TILDE = SignPattern((-1, 1, 1, -1, 1, 1))


def mc_data(s: SixTermSeq) -> SixTermSeq:
    """K-data of the mapping cone extension."""
    groups = tuple(s.groups[(i - 1) % 6] for i in range(6))
    maps = tuple(CONE_SIGNS[i] * s.maps[(i - 1) % 6] for i in range(6))
    return SixTermSeq(groups, maps, exact=s.exact)


def mc_iter(s: SixTermSeq, k: int) -> SixTermSeq:
    if k < 0:
        raise ValueError("number of cone iterations must be >= 0")
    for _ in range(k):
        s = mc_data(s)
    return s


def mc_sign_table(k: int):
    """Symbolic form of ``mc_iter``: entry i is ``(sign, j)`` meaning n_i = sign * m_j."""
    table = [(1, i) for i in range(6)]
    for _ in range(k):
        table = [(CONE_SIGNS[i] * table[(i - 1) % 6][0], table[(i - 1) % 6][1]) for i in range(6)]
    return table


def x_e_iso(s: SixTermSeq) -> SixTermHom:
    """The signed identity from ``rotate3(s)`` to ``mc_iter(s, 3)``."""
    src, tgt = rotate3(s), mc_iter(s, 3)
    comps = tuple(e * GroupHom.identity(g) for e, g in zip(SUSPENSION_SIGNS, src.groups))
    return SixTermHom(src, tgt, comps)


def lambda_transform(a: SixTermHom) -> SixTermHom:
    """Chain map between mapping cones induced by a chain map."""
    bad = a.defects()
    if bad:
        raise ValueError(f"input does not commute at positions {bad}")
    comps = tuple(a.components[(i - 1) % 6] for i in range(6))
    return SixTermHom(mc_data(a.source), mc_data(a.target), comps)


def sign_twist(s: SixTermSeq, pattern: SignPattern) -> SixTermSeq:
    """Multiply map i by ``pattern[i]``; exactness is unaffected."""
    if not isinstance(pattern, SignPattern):
        pattern = SignPattern(pattern)
    return SixTermSeq(s.groups, tuple(e * m for e, m in zip(pattern.signs, s.maps)), exact=s.exact)
