"""Cyclic six-term exact sequences and their homomorphisms.

Positions are fixed::

    p0 = K0(ideal)   p1 = K0(middle)   p2 = K0(quotient)
    p3 = K1(ideal)   p4 = K1(middle)   p5 = K1(quotient)

with ``m_i : p_i -> p_{i+1}`` (indices mod 6); ``m2`` is the exponential
map and ``m5`` the index map.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .fgab import (
    FinAbGroup,
    GroupHom,
    HomSpace,
    IntMatrix,
    ShapeError,
    exactness_witness,
    kernel_presented,
    normalize_presented,
    parse_presented,
)

LABELS = ("K0(ideal)", "K0(middle)", "K0(quotient)", "K1(ideal)", "K1(middle)", "K1(quotient)")
MAP_LABELS = ("K0(incl)", "K0(quot)", "exp", "K1(incl)", "K1(quot)", "index")


class NotExactError(ValueError):
    pass


@dataclass(frozen=True)
class SixTermSeq:
    groups: tuple
    maps: tuple
    exact: bool = field(default=False, compare=False)

    def __post_init__(self):
        groups, maps = tuple(self.groups), tuple(self.maps)
        if len(groups) != 6 or len(maps) != 6:
            raise ShapeError("a six-term sequence needs six groups and six maps")
        for i, m in enumerate(maps):
            if m.source != groups[i] or m.target != groups[(i + 1) % 6]:
                raise ShapeError(f"m{i} runs {m.source} -> {m.target}, expected {groups[i]} -> {groups[(i + 1) % 6]}")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "maps", maps)

    @classmethod
    def zero(cls) -> "SixTermSeq":
        z = FinAbGroup.zero()
        return cls((z,) * 6, (GroupHom.zero(z, z),) * 6, exact=True)

    @classmethod
    def from_maps(cls, groups, matrices) -> "SixTermSeq":
        groups = tuple(groups)
        maps = tuple(GroupHom(groups[i], groups[(i + 1) % 6], matrices[i]) for i in range(6))
        return cls(groups, maps)

    def with_maps(self, maps) -> "SixTermSeq":
        return SixTermSeq(self.groups, tuple(maps))

    def verified(self) -> "SixTermSeq":
        """This sequence flagged exact; raises NotExactError if it is not."""
        report = validate_exactness(self)
        if not report.ok:
            raise NotExactError(f"not exact at positions {report.failures()}")
        return SixTermSeq(self.groups, self.maps, exact=True)

    def __str__(self):
        return describe_text(self)


@dataclass(frozen=True)
class ExactnessReport:
    passed: tuple
    witnesses: tuple

    @property
    def ok(self) -> bool:
        return all(self.passed)

    def failures(self):
        return [i for i, p in enumerate(self.passed) if not p]


def validate_exactness(s: SixTermSeq) -> ExactnessReport:
    """Check exactness at every position; position i pairs m_{i-1} with m_i."""
    passed, witnesses = [], []
    for i in range(6):
        w = exactness_witness(s.maps[(i - 1) % 6], s.maps[i])
        passed.append(w is None)
        witnesses.append(w)
    return ExactnessReport(tuple(passed), tuple(witnesses))


def rotate3(s: SixTermSeq) -> SixTermSeq:
    """Shift every index by three (degree shift)."""
    return SixTermSeq(
        tuple(s.groups[(i + 3) % 6] for i in range(6)),
        tuple(s.maps[(i + 3) % 6] for i in range(6)),
        exact=s.exact,
    )


# ---------------------------------------------------------------------------
# Homomorphisms of sequences


@dataclass(frozen=True)
class SixTermHom:
    source: SixTermSeq
    target: SixTermSeq
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != 6:
            raise ShapeError("need six components")
        for i, a in enumerate(comps):
            if a.source != self.source.groups[i] or a.target != self.target.groups[i]:
                raise ShapeError(f"component {i} has the wrong source or target")
        object.__setattr__(self, "components", comps)
        bad = self.defects()
        if bad:
            raise ValueError(f"tuple does not commute with the sequence maps at positions {bad}")

    def defects(self):
        s, t, a = self.source, self.target, self.components
        return [i for i in range(6) if t.maps[i] @ a[i] != a[(i + 1) % 6] @ s.maps[i]]

    @classmethod
    def identity(cls, s: SixTermSeq) -> "SixTermHom":
        return cls(s, s, tuple(GroupHom.identity(g) for g in s.groups))

    @classmethod
    def zero(cls, s: SixTermSeq, t: SixTermSeq) -> "SixTermHom":
        return cls(s, t, tuple(GroupHom.zero(a, b) for a, b in zip(s.groups, t.groups)))

    def __add__(self, other):
        return SixTermHom(self.source, self.target, tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return SixTermHom(self.source, self.target, tuple(-a for a in self.components))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return SixTermHom(self.source, self.target, tuple(k * a for a in self.components))

    def __matmul__(self, other: "SixTermHom") -> "SixTermHom":
        """Componentwise composite (self after other)."""
        return SixTermHom(other.source, self.target, tuple(a @ b for a, b in zip(self.components, other.components)))

    def is_iso(self) -> bool:
        return all(a.is_iso() for a in self.components)


def commuting_tuples(pairs, constraints):
    """Group of hom tuples commuting with given maps.

    ``pairs[k] = (S_k, T_k)`` declares an unknown ``alpha_k : S_k -> T_k``.
    Each constraint ``(x, y, s_map, t_map)`` with ``s_map : S_x -> S_y`` and
    ``t_map : T_x -> T_y`` asks for ``t_map @ alpha_x == alpha_y @ s_map``.

    Returns ``(group, basis)`` where each basis entry is a list of homs, one
    per slot, realising a canonical generator.
    """
    spaces = [HomSpace(a, b) for a, b in pairs]
    offsets = list(itertools.accumulate([0] + [len(sp) for sp in spaces]))
    src_orders = [o for sp in spaces for o in sp.orders]
    n = len(src_orders)

    rows, tgt_orders = [], []
    for x, y, s_map, t_map in constraints:
        space = HomSpace(pairs[x][0], pairs[y][1])
        if not len(space):
            continue
        block = [[0] * n for _ in range(len(space))]
        for c in range(len(spaces[x])):
            unit = [int(k == c) for k in range(len(spaces[x]))]
            val = space.coords_matrix(t_map @ spaces[x].hom(unit))
            for r, v in enumerate(val):
                block[r][offsets[x] + c] += v
        for c in range(len(spaces[y])):
            unit = [int(k == c) for k in range(len(spaces[y]))]
            val = space.coords_matrix(spaces[y].hom(unit) @ s_map)
            for r, v in enumerate(val):
                block[r][offsets[y] + c] -= v
        rows.extend(block)
        tgt_orders.extend(space.orders)
    m = IntMatrix(rows, len(rows), n) if rows else IntMatrix.zeros(0, n)
    group, incl = kernel_presented(m, src_orders, tgt_orders)
    basis = []
    for col in incl.columns():
        basis.append([sp.hom(col[offsets[k]:offsets[k + 1]]) for k, sp in enumerate(spaces)])
    return group, basis


def hom_six(s: SixTermSeq, t: SixTermSeq):
    """Group of commuting 6-tuples from s to t, with generator tuples.

    Exactness of s or t is not required.
    """
    pairs = list(zip(s.groups, t.groups))
    constraints = [(i, (i + 1) % 6, s.maps[i], t.maps[i]) for i in range(6)]
    group, basis = commuting_tuples(pairs, constraints)
    return group, [SixTermHom(s, t, tuple(b)) for b in basis]


def diagonal_sign_isos(s: SixTermSeq, t: SixTermSeq):
    """All sign patterns e with (e_i * id) a chain map s -> t (same groups needed)."""
    if s.groups != t.groups:
        return []
    found = []
    for signs in itertools.product((1, -1), repeat=6):
        ok = all(signs[i] * t.maps[i] == signs[(i + 1) % 6] * s.maps[i] for i in range(6))
        if ok:
            found.append(signs)
    return found


def _coefficient_order(bound):
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


def signed_iso_search(s: SixTermSeq, t: SixTermSeq, bound: int = 1, limit: int = 200_000):
    """First isomorphism found among small combinations, or None.

    Signed identities are tried first, then integer combinations of the
    hom_six generators with coefficients in [-bound, bound], in
    lexicographic order of the coefficient vector.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if any(a != b for a, b in zip(s.groups, t.groups)):
        return None
    for signs in diagonal_sign_isos(s, t):
        return SixTermHom(s, t, tuple(e * GroupHom.identity(g) for e, g in zip(signs, s.groups)))
    _, basis = hom_six(s, t)
    coeffs = list(_coefficient_order(bound))
    for count, combo in enumerate(itertools.product(coeffs, repeat=len(basis))):
        if count >= limit:
            break
        comps = []
        for k in range(6):
            acc = GroupHom.zero(s.groups[k], t.groups[k])
            for c, b in zip(combo, basis):
                if c:
                    acc = acc + c * b.components[k]
            comps.append(acc)
        if all(a.is_iso() for a in comps):
            return SixTermHom(s, t, tuple(comps))
    return None


# ---------------------------------------------------------------------------
# Text and JSON


def _fmt_matrix(h: GroupHom) -> str:
    if h.matrix.rows == 0 or h.matrix.cols == 0:
        return "0"
    return "[" + "; ".join(" ".join(str(x) for x in r) for r in h.matrix) + "]"


def describe_text(s: SixTermSeq) -> str:
    rows = [("pos", "slot", "group", "map", "matrix")]
    for i in range(6):
        rows.append((f"p{i}", LABELS[i], str(s.groups[i]), f"m{i}: p{i}->p{(i + 1) % 6}", _fmt_matrix(s.maps[i])))
    widths = [max(len(r[k]) for r in rows) for k in range(5)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def seq_to_json(s: SixTermSeq) -> dict:
    return {
        "groups": [str(g) for g in s.groups],
        "maps": [m.matrix.tolist() for m in s.maps],
    }


def presented_hom(src_literal: str, tgt_literal: str, matrix) -> GroupHom:
    """Hom given against written (possibly non-canonical) literals, normalised."""
    s_orders, t_orders = parse_presented(src_literal), parse_presented(tgt_literal)
    src, _, s_from = normalize_presented(s_orders)
    tgt, t_to, _ = normalize_presented(t_orders)
    rows, cols = len(t_orders), len(s_orders)
    m = IntMatrix(matrix, rows, cols) if rows and cols else IntMatrix.zeros(rows, cols)
    return GroupHom(src, tgt, t_to @ m @ s_from)


def seq_from_json(doc) -> SixTermSeq:
    if isinstance(doc, str):
        doc = json.loads(doc)
    lits = doc["groups"]
    mats = doc["maps"]
    if len(lits) != 6 or len(mats) != 6:
        raise ShapeError("sequence files need six groups and six maps")
    maps = [presented_hom(lits[i], lits[(i + 1) % 6], mats[i]) for i in range(6)]
    return SixTermSeq(tuple(m.source for m in maps), tuple(maps))
