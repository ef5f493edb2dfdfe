"""Finitely generated abelian groups and their homomorphisms.

Every group is stored in invariant-factor form ``Z^r + Z/d1 + ... + Z/dt``
with ``d1 | d2 | ... | dt`` and each ``di >= 2``.  Generators are ordered
free summands first, then the torsion summands in divisibility order, so a
group is fully described by its tuple of generator orders (0 for a free
generator).

A :class:`GroupHom` is an integer matrix whose columns are the images of
the source generators, written in the target's generators.  Rows belonging
to a torsion summand of the target are kept reduced modulo its order, so
two homs are equal exactly when their stored matrices are.

Kernels, images, cokernels and membership tests all go through the Smith
normal form; nothing here uses floating point.

>>> G = FinAbGroup.parse("Z/2 + Z/3 + Z")
>>> str(G)
'Z + Z/6'
>>> str(hom_group(FinAbGroup.parse("Z/4"), FinAbGroup.parse("Z/6"))[0])
'Z/2'
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import gcd, prod

from . import _kernel
from .intmatrix import IntMatrix

__all__ = [
    "FinAbGroup",
    "GroupHom",
    "ShapeError",
    "WellDefinednessError",
    "smith_normal_form",
    "cokernel_presentation",
    "cokernel_data",
    "kernel",
    "image",
    "image_and_cokernel",
    "in_image",
    "solve_preimage",
    "hom_group",
    "HomSpace",
    "ext_group",
    "tensor_mod",
    "tor_mod",
    "is_exact_pair",
    "exactness_witness",
    "hom_algebra",
    "direct_sum",
    "normalize_presented",
    "parse_presented",
    "lattice_kernel",
    "kernel_presented",
]


class ShapeError(ValueError):
    """Maps whose sources and targets do not line up."""


class WellDefinednessError(ValueError):
    """A matrix that does not respect the torsion of its source."""


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: IntMatrix, backend: str | None = None):
    """Return ``(u, d, v)`` with ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular, ``d`` is diagonal with nonnegative
    entries and each diagonal entry divides the next.

    >>> u, d, v = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    >>> d.tolist()
    [[2, 0], [0, 4]]
    >>> u @ IntMatrix([[2, 4], [6, 8]]) @ v == d
    True
    """
    rows, cols = m.shape
    u, d, v = _kernel.snf_lists(m.tolist(), rows, cols, backend)
    return IntMatrix(u, rows, rows), IntMatrix(d, rows, cols), IntMatrix(v, cols, cols)


def _diag(d: IntMatrix):
    return [d[i, i] for i in range(min(d.shape))]


# ---------------------------------------------------------------------------
# Groups

_TERM = re.compile(r"^Z(?:\^(\d+))?$|^Z[/_](\d+)$|^0$")


@dataclass(frozen=True)
class FinAbGroup:
    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} is not >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {a}, {b} break the divisibility chain")

    # -- construction -----------------------------------------------------
    @classmethod
    def free(cls, r: int = 1) -> "FinAbGroup":
        return cls(r, ())

    @classmethod
    def cyclic(cls, d: int) -> "FinAbGroup":
        """Z/d in canonical form (Z/0 = Z, Z/1 = 0)."""
        d = abs(d)
        if d == 0:
            return cls(1, ())
        if d == 1:
            return cls(0, ())
        return cls(0, (d,))

    @classmethod
    def zero(cls) -> "FinAbGroup":
        return cls(0, ())

    @classmethod
    def from_orders(cls, orders) -> "FinAbGroup":
        """Canonical form of the direct sum of cyclic groups of the given orders."""
        return normalize_presented(orders)[0]

    @classmethod
    def parse(cls, text: str) -> "FinAbGroup":
        return normalize_presented(parse_presented(text))[0]

    # -- structure --------------------------------------------------------
    @property
    def orders(self) -> tuple:
        return (0,) * self.rank + self.torsion

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def order(self):
        """Cardinality, or None for an infinite group."""
        return None if self.rank else prod(self.torsion)

    def is_zero(self) -> bool:
        return self.ngens == 0

    def is_finite(self) -> bool:
        return self.rank == 0

    def is_free(self) -> bool:
        return not self.torsion

    @property
    def exponent(self) -> int:
        """Exponent of the torsion part (1 for torsion-free groups)."""
        return self.torsion[-1] if self.torsion else 1

    def relation_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(self.orders)

    def reduce(self, vec) -> tuple:
        vec = tuple(vec)
        if len(vec) != self.ngens:
            raise ShapeError(f"element of length {len(vec)} in a group with {self.ngens} generators")
        return tuple(x % o if o else x for x, o in zip(vec, self.orders))

    def generator(self, j: int) -> tuple:
        return tuple(int(i == j) for i in range(self.ngens))

    def elements(self):
        """Iterate over all elements of a finite group."""
        if self.rank:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.torsion))

    def element_order(self, vec):
        vec = self.reduce(vec)
        if any(x for x, o in zip(vec, self.orders) if o == 0):
            return 0
        k = 1
        for x, o in zip(vec, self.orders):
            if x:
                k = k * (o // gcd(o, x)) // gcd(k, o // gcd(o, x))
        return k

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FinAbGroup({str(self)!r})"


def parse_presented(text: str) -> list:
    """Orders of the summands of a group literal, in the order written.

    >>> parse_presented("Z^2 + Z/4 + Z_6")
    [0, 0, 4, 6]
    """
    text = "".join(str(text).split())
    if text == "":
        raise ValueError("empty group literal")
    orders = []
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"bad group literal term {term!r}")
        if term == "0":
            continue
        if m.group(2) is not None:
            orders.append(int(m.group(2)))
        else:
            orders.extend([0] * int(m.group(1) or 1))
    return orders


def normalize_presented(orders):
    """Canonical form of ``Z/o1 + Z/o2 + ...`` (order 0 meaning Z).

    Returns ``(group, to_canon, from_canon)``: ``to_canon`` maps presented
    coordinates to canonical ones, ``from_canon`` lifts canonical generators
    back to presented coordinates.
    """
    orders = [abs(int(o)) for o in orders]
    free = orders.count(0)
    tors = orders[free:]
    already = all(o == 0 for o in orders[:free]) and all(o >= 2 for o in tors)
    if already and all(b % a == 0 for a, b in zip(tors, tors[1:])):
        ident = IntMatrix.identity(len(orders))
        return FinAbGroup(free, tuple(tors)), ident, ident
    return cokernel_data(IntMatrix.diagonal(orders))


# ---------------------------------------------------------------------------
# Homomorphisms


class GroupHom:
    __slots__ = ("source", "target", "matrix", "_hash")

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix, check: bool = True):
        rows, cols = target.ngens, source.ngens
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix, rows, cols) if rows and cols else IntMatrix.zeros(rows, cols)
        if matrix.shape != (rows, cols):
            raise ShapeError(f"matrix shape {matrix.shape} does not fit {source} -> {target}")
        torders = target.orders
        data = [[x % o for x in r] if o else list(r) for r, o in zip(matrix, torders)]
        matrix = IntMatrix(data, rows, cols)
        if check:
            for j, a in enumerate(source.orders):
                if a == 0:
                    continue
                for i, b in enumerate(torders):
                    x = data[i][j]
                    if (b == 0 and x != 0) or (b and (a * x) % b):
                        raise WellDefinednessError(
                            f"generator {j} of {source} has order {a} but maps to an element of a different order in {target}"
                        )
        self.source = source
        self.target = target
        self.matrix = matrix
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, g: FinAbGroup) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.ngens), check=False)

    @classmethod
    def zero(cls, a: FinAbGroup, b: FinAbGroup) -> "GroupHom":
        return cls(a, b, IntMatrix.zeros(b.ngens, a.ngens), check=False)

    @classmethod
    def scalar(cls, g: FinAbGroup, n: int) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.ngens).scale(n), check=False)

    # -- evaluation -------------------------------------------------------
    def __call__(self, vec) -> tuple:
        return self.target.reduce(self.matrix.apply(tuple(vec)))

    def column(self, j) -> tuple:
        return self.matrix.column(j)

    # -- algebra ----------------------------------------------------------
    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        """``g @ f`` is the composite g after f."""
        if other.target != self.source:
            raise ShapeError(f"cannot compose {other.source}->{other.target} with {self.source}->{self.target}")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        self._same_shape(other)
        return GroupHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        self._same_shape(other)
        return GroupHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.source, self.target, -self.matrix, check=False)

    def __rmul__(self, k: int) -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix.scale(int(k)), check=False)

    def _same_shape(self, other):
        if self.source != other.source or self.target != other.target:
            raise ShapeError("homs have different sources or targets")

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return kernel(self)[0].is_zero()

    def is_surjective(self) -> bool:
        return image_and_cokernel(self)[1].is_zero()

    def is_iso(self) -> bool:
        return self.source == self.target and self.is_injective() and self.is_surjective()

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.matrix))
        return self._hash

    def __repr__(self):
        return f"GroupHom({self.source} -> {self.target}, {self.matrix.tolist()})"


def hom_algebra(f: GroupHom, g: GroupHom | None = None, op: str = "compose") -> GroupHom:
    """Dispatch ``compose`` (g after f), ``add`` or ``negate`` (of f)."""
    if op == "compose":
        return g @ f
    if op == "add":
        return f + g
    if op == "negate":
        return -f
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Cokernels, kernels, images


def cokernel_data(m: IntMatrix):
    """Canonical form of ``Z^rows / image(m)`` with both changes of basis.

    Returns ``(group, to_canon, from_canon)`` where ``to_canon`` (k x rows)
    sends ambient coordinates to canonical ones and ``from_canon``
    (rows x k) lifts each canonical generator.
    """
    rows = m.rows
    if rows == 0:
        return FinAbGroup.zero(), IntMatrix.zeros(0, 0), IntMatrix.zeros(0, 0)
    u, d, _ = smith_normal_form(m)
    group, free, tors = _cokernel_group(rows, d)
    keep = free + tors
    to_canon = u.submatrix(keep, range(rows))
    if not keep:
        return group, IntMatrix.zeros(0, rows), IntMatrix.zeros(rows, 0)
    uinv = u.inverse_unimodular()
    from_canon = uinv.submatrix(range(rows), keep)
    return group, to_canon, from_canon


def _cokernel_group(rows, d):
    diag = _diag(d)
    factors = [diag[i] if i < len(diag) else 0 for i in range(rows)]
    free = [i for i, e in enumerate(factors) if e == 0]
    tors = [i for i, e in enumerate(factors) if e > 1]
    return FinAbGroup(len(free), tuple(factors[i] for i in tors)), free, tors


def cokernel_presentation(m: IntMatrix) -> FinAbGroup:
    """Canonical form of ``Z^rows / image(m)``.

    >>> str(cokernel_presentation(IntMatrix([[2, 0], [0, 3]])))
    'Z/6'
    >>> str(cokernel_presentation(IntMatrix.zeros(2, 0)))
    'Z^2'
    """
    if m.rows == 0:
        return FinAbGroup.zero()
    return _cokernel_group(m.rows, smith_normal_form(m)[1])[0]


def _relations(orders) -> IntMatrix:
    """Columns spanning the relation lattice of ``Z/o1 + Z/o2 + ...``."""
    n = len(orders)
    cols = [[o if k == i else 0 for k in range(n)] for i, o in enumerate(orders) if o]
    return IntMatrix.from_columns(cols, n)


def _target_relations(g: FinAbGroup) -> IntMatrix:
    return _relations(g.orders)


def _echelon(vectors, dim):
    """Integer row echelon basis of the lattice spanned by ``vectors``.

    Returns ``(basis, pivots)``; basis rows are independent and each has a
    positive leading entry at its pivot column.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis, pivots = [], []
    col = 0
    while rows and col < dim:
        active = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                (nxt if r[col] else rest).append(r)
            active = nxt
        p = active[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append(p)
        pivots.append(col)
        rows = [r for r in rest if any(r)]
        col += 1
    return basis, pivots


def _echelon_coords(basis, pivots, vec):
    """Coordinates of ``vec`` in an echelon basis, or None if not in the lattice."""
    vec = list(vec)
    coords = []
    for b, p in zip(basis, pivots):
        if vec[p] % b[p]:
            return None
        c = vec[p] // b[p]
        coords.append(c)
        if c:
            vec = [x - c * y for x, y in zip(vec, b)]
    if any(vec):
        return None
    return coords


def lattice_kernel(m: IntMatrix) -> IntMatrix:
    """Columns forming a basis of the integer null space of ``m``."""
    _, d, v = smith_normal_form(m)
    r = sum(1 for x in _diag(d) if x)
    return v.submatrix(range(m.cols), range(r, m.cols))


def kernel_presented(m: IntMatrix, src_orders, tgt_orders):
    """Kernel of the map ``Z^n/src -> Z^k/tgt`` given by m (assumed well defined).

    Returns ``(group, incl)`` with ``incl`` an n x g matrix whose columns
    are the canonical kernel generators in source coordinates.
    """
    src_orders, tgt_orders = list(src_orders), list(tgt_orders)
    na = len(src_orders)
    if na == 0:
        return FinAbGroup.zero(), IntMatrix.zeros(0, 0)
    big = m.hstack(_relations(tgt_orders)) if tgt_orders else IntMatrix.zeros(0, na)
    null = lattice_kernel(big)
    gens = [col[:na] for col in null.columns()]
    basis, pivots = _echelon(gens, na)
    r = len(basis)
    rels = []
    for j, o in enumerate(src_orders):
        if o:
            vec = [o if k == j else 0 for k in range(na)]
            c = _echelon_coords(basis, pivots, vec)
            if c is None:
                raise WellDefinednessError("source relation outside the kernel lattice")
            rels.append(c)
    relm = IntMatrix.from_columns(rels, r) if rels else IntMatrix.zeros(r, 0)
    k, _, from_c = cokernel_data(relm)
    if k.is_zero():
        return k, IntMatrix.zeros(na, 0)
    lb = IntMatrix.from_columns(basis, na)
    return k, lb @ from_c


def kernel(f: GroupHom):
    """Kernel of f as ``(group, inclusion)``.

    >>> z4 = FinAbGroup.cyclic(4)
    >>> k, incl = kernel(GroupHom.scalar(z4, 2))
    >>> str(k), incl.matrix.tolist()
    ('Z/2', [[2]])
    """
    k, incl = kernel_presented(f.matrix, f.source.orders, f.target.orders)
    return k, GroupHom(k, f.source, incl, check=False)


def image_and_cokernel(f: GroupHom):
    """``(im, coker, proj)`` for f; ``proj`` is the quotient map onto coker.

    >>> im, co, proj = image_and_cokernel(GroupHom.scalar(FinAbGroup.free(1), 6))
    >>> str(im), str(co)
    ('Z', 'Z/6')
    """
    b = f.target
    if b.ngens == 0:
        z = FinAbGroup.zero()
        return z, z, GroupHom.zero(b, z)
    pres = f.matrix.hstack(_target_relations(b))
    co, to_c, _ = cokernel_data(pres)
    proj = GroupHom(b, co, to_c, check=False)
    im = kernel(proj)[0]
    return im, co, proj


def image(f: GroupHom):
    """Image of f as ``(group, inclusion into f.target)``."""
    _, _, proj = image_and_cokernel(f)
    return kernel(proj)


def solve_preimage(f: GroupHom, y):
    """Some x with ``f(x) == y``, or None when y is not in the image."""
    b = f.target
    y = b.reduce(y)
    na = f.source.ngens
    if b.ngens == 0:
        return (0,) * na
    big = f.matrix.hstack(_target_relations(b))
    u, d, v = smith_normal_form(big)
    w = u.apply(y)
    diag = _diag(d)
    z = [0] * big.cols
    for i, wi in enumerate(w):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if wi:
                return None
        else:
            if wi % di:
                return None
            z[i] = wi // di
    x = v.apply(z)[:na]
    return f.source.reduce(x)


def in_image(f: GroupHom, y) -> bool:
    return solve_preimage(f, y) is not None


def exactness_witness(f: GroupHom, g: GroupHom):
    """None when ``image(f) == kernel(g)``; otherwise a failure witness.

    The witness is ``("composite", x)`` with x a source generator of f such
    that g(f(x)) != 0, or ``("kernel", y)`` with y a kernel generator of g
    outside image(f).  The smallest-index generator is reported.
    """
    if f.target != g.source:
        raise ShapeError(f"exactness pair does not chain: {f.target} vs {g.source}")
    comp = g @ f
    for j in range(f.source.ngens):
        if any(comp.column(j)):
            return ("composite", f.source.generator(j))
    k, incl = kernel(g)
    if k.is_zero():
        return None
    for j in range(k.ngens):
        y = incl.column(j)
        if not in_image(f, y):
            return ("kernel", g.source.reduce(y))
    return None


def is_exact_pair(f: GroupHom, g: GroupHom) -> bool:
    """True iff ``image(f) == kernel(g)``.

    >>> z = FinAbGroup.free(1)
    >>> red = GroupHom(z, FinAbGroup.cyclic(5), [[1]])
    >>> is_exact_pair(GroupHom.scalar(z, 5), red)
    True
    """
    return exactness_witness(f, g) is None


# ---------------------------------------------------------------------------
# Hom, Ext, tensor, Tor


class HomSpace:
    """Coordinates on Hom(a, b).

    Each matrix entry (i, j) that is not forced to vanish is a coordinate:
    the entry equals ``step * c`` with c in Z (order 0) or Z/order.
    """

    def __init__(self, a: FinAbGroup, b: FinAbGroup):
        self.source, self.target = a, b
        slots = []
        for i, bo in enumerate(b.orders):
            for j, ao in enumerate(a.orders):
                if bo == 0:
                    if ao == 0:
                        slots.append((i, j, 1, 0))
                elif ao == 0:
                    slots.append((i, j, 1, bo))
                else:
                    g = gcd(ao, bo)
                    if g > 1:
                        slots.append((i, j, bo // g, g))
        self.slots = slots

    @property
    def orders(self):
        return [s[3] for s in self.slots]

    def __len__(self):
        return len(self.slots)

    def hom(self, coords) -> GroupHom:
        m = [[0] * self.source.ngens for _ in range(self.target.ngens)]
        for (i, j, step, _), c in zip(self.slots, coords):
            m[i][j] = step * c
        return GroupHom(self.source, self.target, m, check=False)

    def coords(self, f: GroupHom) -> list:
        out = []
        for i, j, step, order in self.slots:
            c = f.matrix[i, j] // step
            out.append(c % order if order else c)
        return out

    def coords_matrix(self, f: GroupHom) -> list:
        """Coordinates without reduction (for building constraint maps)."""
        return [f.matrix[i, j] // step for i, j, step, _ in self.slots]

    def group(self):
        return normalize_presented(self.orders)


def hom_group(a: FinAbGroup, b: FinAbGroup):
    """``Hom(a, b)`` as a canonical group plus one hom per generator.

    >>> g, basis = hom_group(FinAbGroup.parse("Z + Z/4"), FinAbGroup.cyclic(6))
    >>> str(g)
    'Z/2 + Z/6'
    """
    space = HomSpace(a, b)
    g, _, from_c = space.group()
    basis = [space.hom(from_c.column(k)) for k in range(g.ngens)]
    return g, basis


def ext_group(a: FinAbGroup, b: FinAbGroup) -> FinAbGroup:
    """``Ext^1(a, b)``; only the torsion of a contributes.

    >>> str(ext_group(FinAbGroup.cyclic(4), FinAbGroup.free(1)))
    'Z/4'
    """
    orders = []
    for d in a.torsion:
        for e in b.orders:
            orders.append(d if e == 0 else gcd(d, e))
    return FinAbGroup.from_orders(orders)


def _check_modulus(n):
    if int(n) != n or n < 2:
        raise ValueError(f"modulus must be an integer >= 2, got {n!r}")


def tensor_mod(a: FinAbGroup, n: int):
    """``a (x) Z/n`` with the natural reduction map from a."""
    _check_modulus(n)
    pres = a.relation_matrix().hstack(IntMatrix.identity(a.ngens).scale(n)) if a.ngens else IntMatrix.zeros(0, 0)
    g, to_c, _ = cokernel_data(pres)
    return g, GroupHom(a, g, to_c if a.ngens else IntMatrix.zeros(g.ngens, 0), check=False)


def tor_mod(a: FinAbGroup, n: int):
    """``Tor(a, Z/n)`` realised as the n-torsion of a, with its inclusion."""
    _check_modulus(n)
    return kernel(GroupHom.scalar(a, n))


def direct_sum(groups):
    """Canonical direct sum with injections and projections."""
    groups = list(groups)
    orders = [o for g in groups for o in g.orders]
    total, to_c, from_c = normalize_presented(orders)
    inj, proj = [], []
    offset = 0
    for g in groups:
        cols = range(offset, offset + g.ngens)
        inj.append(GroupHom(g, total, to_c.submatrix(range(total.ngens), cols), check=False))
        proj.append(GroupHom(total, g, from_c.submatrix(cols, range(total.ngens)), check=False))
        offset += g.ngens
    return total, inj, proj
