"""K-data of the generating extensions and simple constructions on them.

Base cases (i = 0); higher i come from ``mc_iter``:

* ``E(n)``: SM_n -> I_n -> C with K-data (0, 0, Z, Z, Z/n, 0), the
  exponential map is multiplication by n and the next map reduces mod n.
* ``F1``: the identity extension of C, (Z, Z, 0, 0, 0, 0).
* ``F(n)``: I_n = I_n -> 0, (0, 0, 0, Z/n, Z/n, 0).

Descriptors: ``E:n:i``, ``F:n:i``, ``F1:i``, ``file:PATH`` (``file:-`` for
stdin), and ``ideal:DESC`` / ``quotient:DESC`` for the extensions with
trivial quotient or trivial ideal built from another descriptor.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

from .fgab import FinAbGroup, GroupHom
from .functors import mc_iter
from .sixterm import SixTermSeq, seq_from_json


class DescriptorError(ValueError):
    pass


@dataclass(frozen=True)
class ExtensionDescriptor:
    kind: str  # "E", "F", "F1", "ideal", "quotient", "file"
    n: int = 0
    i: int = 0
    inner: "ExtensionDescriptor | None" = None
    path: str = ""

    def __post_init__(self):
        if self.kind not in ("E", "F", "F1", "ideal", "quotient", "file"):
            raise DescriptorError(f"unknown extension family {self.kind!r}")
        object.__setattr__(self, "i", self.i % 6)
        if self.kind in ("E", "F") and self.n < 2:
            raise DescriptorError(f"{self.kind} needs n >= 2, got {self.n}")
        if self.kind in ("ideal", "quotient") and self.inner is None:
            raise DescriptorError(f"{self.kind} needs an inner descriptor")

    def __str__(self):
        if self.kind in ("E", "F"):
            return f"{self.kind}:{self.n}:{self.i}"
        if self.kind == "F1":
            return f"F1:{self.i}"
        if self.kind == "file":
            return f"file:{self.path}"
        return f"{self.kind}:{self.inner}"


def E(n: int, i: int = 0) -> ExtensionDescriptor:
    return ExtensionDescriptor("E", n, i)


def F(n: int, i: int = 0) -> ExtensionDescriptor:
    return ExtensionDescriptor("F", n, i)


def F1(i: int = 0) -> ExtensionDescriptor:
    return ExtensionDescriptor("F1", 0, i)


def trivial_ideal(d: ExtensionDescriptor) -> ExtensionDescriptor:
    return ExtensionDescriptor("ideal", inner=d)


def trivial_quotient(d: ExtensionDescriptor) -> ExtensionDescriptor:
    return ExtensionDescriptor("quotient", inner=d)


def parse_descriptor(text: str) -> ExtensionDescriptor:
    text = text.strip()
    head, _, rest = text.partition(":")
    try:
        if head == "file":
            if not rest:
                raise DescriptorError("file: needs a path")
            return ExtensionDescriptor("file", path=rest)
        if head in ("ideal", "quotient"):
            return ExtensionDescriptor(head, inner=parse_descriptor(rest))
        parts = text.split(":")
        if parts[0] in ("E", "F") and len(parts) == 3:
            return ExtensionDescriptor(parts[0], int(parts[1]), int(parts[2]))
        if parts[0] == "F1" and len(parts) == 2:
            return ExtensionDescriptor("F1", 0, int(parts[1]))
    except ValueError as exc:
        if isinstance(exc, DescriptorError):
            raise
        raise DescriptorError(f"malformed descriptor {text!r}: {exc}") from None
    raise DescriptorError(f"malformed descriptor {text!r}")


def _base(groups, nonzero):
    """Sequence with the given groups; ``nonzero`` maps index -> matrix, rest zero."""
    maps = []
    for i in range(6):
        a, b = groups[i], groups[(i + 1) % 6]
        maps.append(GroupHom(a, b, nonzero[i]) if i in nonzero else GroupHom.zero(a, b))
    return SixTermSeq(tuple(groups), tuple(maps), exact=True)


def e_base(n: int) -> SixTermSeq:
    z, zn, o = FinAbGroup.free(1), FinAbGroup.cyclic(n), FinAbGroup.zero()
    return _base((o, o, z, z, zn, o), {2: [[n]], 3: [[1]]})


def f1_base() -> SixTermSeq:
    z, o = FinAbGroup.free(1), FinAbGroup.zero()
    return _base((z, z, o, o, o, o), {0: [[1]]})


def f_base(n: int) -> SixTermSeq:
    zn, o = FinAbGroup.cyclic(n), FinAbGroup.zero()
    return _base((o, o, o, zn, zn, o), {3: [[1]]})


def ideal_of(s: SixTermSeq) -> SixTermSeq:
    """K-data of ``ideal -> ideal -> 0``."""
    o = FinAbGroup.zero()
    g0, g3 = s.groups[0], s.groups[3]
    groups = (g0, g0, o, g3, g3, o)
    maps = [GroupHom.zero(groups[i], groups[(i + 1) % 6]) for i in range(6)]
    maps[0] = GroupHom.identity(g0)
    maps[3] = GroupHom.identity(g3)
    return SixTermSeq(groups, tuple(maps), exact=True)


def quotient_of(s: SixTermSeq) -> SixTermSeq:
    """K-data of ``0 -> quotient -> quotient``."""
    o = FinAbGroup.zero()
    g2, g5 = s.groups[2], s.groups[5]
    groups = (o, g2, g2, o, g5, g5)
    maps = [GroupHom.zero(groups[i], groups[(i + 1) % 6]) for i in range(6)]
    maps[1] = GroupHom.identity(g2)
    maps[4] = GroupHom.identity(g5)
    return SixTermSeq(groups, tuple(maps), exact=True)


def load_sequence(path: str) -> SixTermSeq:
    if path == "-":
        doc = json.load(sys.stdin)
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    return seq_from_json(doc)


def build(desc) -> SixTermSeq:
    """K-data (a six-term sequence) of a described extension."""
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    if desc.kind == "E":
        return mc_iter(e_base(desc.n), desc.i)
    if desc.kind == "F":
        return mc_iter(f_base(desc.n), desc.i)
    if desc.kind == "F1":
        return mc_iter(f1_base(), desc.i)
    if desc.kind == "ideal":
        return ideal_of(build(desc.inner))
    if desc.kind == "quotient":
        return quotient_of(build(desc.inner))
    return load_sequence(desc.path)


def k_groups_of(desc):
    """``((K0, K1) of ideal, of middle, of quotient)``."""
    s = build(desc)
    g = s.groups
    return ((g[0], g[3]), (g[1], g[4]), (g[2], g[5]))


def catalog_descriptors(max_n: int = 12):
    """The built-in families used by the test sweeps."""
    out = [F1(i) for i in range(6)]
    for n in range(2, max_n + 1):
        out.extend(E(n, i) for i in range(6))
        out.extend(F(n, i) for i in range(6))
    return out
