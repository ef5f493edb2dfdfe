"""Deduce unknown groups in exact sequences, and search for h-maps.

For an unknown X at position j of an exact chain::

    N_{j-2} --f--> N_{j-1} --> X --> N_{j+1} --k--> N_{j+2}

exactness at j-1, j, j+1 gives ``0 -> coker f -> X -> ker k -> 0``.  The
rules applied to that datum (A, B) = (coker f, ker k):

* R1  both neighbours are zero, so X = 0
* R2  A = 0 gives X = B, and B = 0 gives X = A (also identity edges)
* R3  computing the datum itself (recorded with the deciding rule)
* R4  B free, so the sequence splits and X = A + B
* R5  otherwise enumerate all extensions of B by A up to isomorphism

Several constraints may mention the same named slot; a work-list runs them
to a fixed point, intersecting candidate sets and flagging conflicts.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import gcd

from .catalog import E
from .fgab import (
    FinAbGroup,
    GroupHom,
    HomSpace,
    IntMatrix,
    cokernel_presentation,
    exactness_witness,
    image_and_cokernel,
    kernel,
    normalize_presented,
    parse_presented,
)
from .invariant import (
    IdealKInvariant,
    compute_invariant,
    h_endpoints,
    seq1,
    seq2,
    seq3,
    tri1,
    tri2,
    tri3,
)
from .sixterm import presented_hom

DEFAULT_MAX_ORDER = 10**6

UNIQUE = "UNIQUE"
CANDIDATES = "CANDIDATES"
UNKNOWN = "UNKNOWN"


class ContradictionError(ValueError):
    """No group satisfies the constraints."""


@dataclass(frozen=True)
class SequenceConstraint:
    """A chain of groups and maps with exactness at chosen positions.

    ``nodes[j]`` is a FinAbGroup, a slot name (str) or None for an
    anonymous unknown.  ``edges[k]`` runs from node k to node k+1 and is a
    GroupHom, None (unknown), ``("times", n)``, ``"zero"`` or
    ``"identity"``.  Linear chains have one edge fewer than nodes and are
    padded with zero groups beyond both ends.
    """

    nodes: tuple
    edges: tuple
    cyclic: bool = True
    exact_at: tuple | None = None
    name: str = ""

    def __post_init__(self):
        nodes, edges = tuple(self.nodes), tuple(self.edges)
        want = len(nodes) if self.cyclic else max(len(nodes) - 1, 0)
        if len(edges) != want:
            raise ValueError(f"{len(nodes)} nodes need {want} edges, got {len(edges)}")
        if self.exact_at is None:
            exact = tuple(range(len(nodes))) if self.cyclic else tuple(range(1, len(nodes) - 1))
        else:
            exact = tuple(sorted({int(p) % len(nodes) if self.cyclic else int(p) for p in self.exact_at}))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "exact_at", exact)
        for k, e in enumerate(edges):
            if isinstance(e, GroupHom):
                a, b = nodes[k], nodes[(k + 1) % len(nodes)]
                if isinstance(a, FinAbGroup) and e.source != a or isinstance(b, FinAbGroup) and e.target != b:
                    raise ValueError(f"edge {k} does not match the groups at its endpoints")

    def slot_name(self, j):
        node = self.nodes[j]
        if isinstance(node, str):
            return node
        prefix = f"{self.name}:" if self.name else ""
        return f"{prefix}p{j}"


@dataclass(frozen=True)
class SlotResolution:
    status: str
    value: FinAbGroup | None = None
    candidates: tuple = ()

    def __str__(self):
        if self.status == UNIQUE:
            return str(self.value)
        if self.status == CANDIDATES:
            return "{" + " | ".join(str(g) for g in self.candidates) + "}"
        return "?"


@dataclass(frozen=True)
class Resolution:
    slots: dict
    trace: tuple

    def __getitem__(self, name) -> SlotResolution:
        return self.slots[name]

    def used_rules(self):
        return sorted({step["rule"] for step in self.trace})

    def to_json(self) -> dict:
        return {
            "slots": {
                k: {"status": v.status, "value": None if v.value is None else str(v.value),
                    "candidates": [str(g) for g in v.candidates]}
                for k, v in self.slots.items()
            },
            "trace": list(self.trace),
        }


# ---------------------------------------------------------------------------
# Extension enumeration


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _p_part(d, p):
    q = 1
    while d % p == 0:
        d //= p
        q *= p
    return q


def extension_candidates(a: FinAbGroup, b: FinAbGroup, max_order: int = DEFAULT_MAX_ORDER):
    """All X (up to iso) in some ``0 -> a -> X -> b -> 0``, sorted, or None over the cap.

    The free part of b splits off and the torsion part splits over primes:
    the p-part of the class only sees ``Z^r + a_p``, so X is Z^r plus the
    torsion of one such p-local extension per prime, in every combination.

    >>> [str(g) for g in extension_candidates(FinAbGroup.cyclic(2), FinAbGroup.cyclic(2))]
    ['Z/4', 'Z/2 + Z/2']
    """
    if a.is_finite() and b.is_finite() and a.order * b.order > max_order:
        return None
    primes = _prime_factors(b.torsion[-1]) if b.torsion else []
    if len(primes) <= 1:
        return _extensions_direct(a, b, max_order)
    r = a.rank
    # torsion of a at primes that b does not see passes through unchanged
    rest = [d for d in (_strip(d, primes) for d in a.torsion) if d > 1]
    per_prime = []
    for p in primes:
        ap = FinAbGroup.from_orders([0] * r + [_p_part(d, p) for d in a.torsion])
        bp = FinAbGroup.from_orders([_p_part(d, p) for d in b.torsion])
        cands = _extensions_direct(ap, bp, max_order)
        if cands is None:
            return None
        per_prime.append([g.torsion for g in cands])
    found = set()
    for combo in itertools.product(*per_prime):
        tors = rest + [d for t in combo for d in t]
        found.add(FinAbGroup.from_orders([0] * (r + b.rank) + tors))
    return sorted(found, key=lambda g: (g.rank, len(g.torsion), g.torsion))


def _strip(d, primes):
    for p in primes:
        d //= _p_part(d, p)
    return d


def _extensions_direct(a: FinAbGroup, b: FinAbGroup, max_order: int):
    """Enumerate classes: per torsion summand Z/d of b a class in ``a / d a``.

    X is ``(a + Z^t) / <(-c_j, d_j e_j)>`` plus the free part of b.
    """
    tors = b.torsion
    choices = []
    for d in tors:
        per = [range(d if o == 0 else gcd(d, o)) for o in a.orders]
        # classes of a / d a: free coordinate mod d, torsion coordinate mod gcd(d, o)
        choices.append(list(itertools.product(*per)))
    total = 1
    for c in choices:
        total *= len(c)
    if total > max_order:
        return None
    na, t = a.ngens, len(tors)
    found = set()
    for combo in itertools.product(*choices):
        cols = []
        for j, o in enumerate(a.orders):
            if o:
                cols.append([o if r == j else 0 for r in range(na + t)])
        for j, (d, cls) in enumerate(zip(tors, combo)):
            col = [-x for x in cls] + [d if r == j else 0 for r in range(t)]
            cols.append(col)
        m = IntMatrix.from_columns(cols, na + t) if cols else IntMatrix.zeros(na + t, 0)
        g = cokernel_presentation(m)
        found.add(FinAbGroup(g.rank + b.rank, g.torsion))
    return sorted(found, key=lambda g: (g.rank, len(g.torsion), g.torsion))


def direct_sum_group(a: FinAbGroup, b: FinAbGroup) -> FinAbGroup:
    return FinAbGroup.from_orders(a.orders + b.orders)


# ---------------------------------------------------------------------------
# Deduction


class _System:
    def __init__(self, constraints, known, max_order):
        self.constraints = list(constraints)
        self.max_order = max_order
        self.state = {}
        self.trace = []
        for c in self.constraints:
            for j, node in enumerate(c.nodes):
                if not isinstance(node, FinAbGroup):
                    self.state.setdefault(c.slot_name(j), SlotResolution(UNKNOWN))
        for name, g in (known or {}).items():
            self.state[name] = SlotResolution(UNIQUE, g)

    def group(self, c, j):
        if not c.cyclic and not 0 <= j < len(c.nodes):
            return FinAbGroup.zero()
        j %= len(c.nodes)
        node = c.nodes[j]
        if isinstance(node, FinAbGroup):
            return node
        st = self.state[c.slot_name(j)]
        return st.value if st.status == UNIQUE else None

    def edge(self, c, k):
        """(kind, hom) for the edge leaving node k; kind is "zero", "map", "identity" or None."""
        if not c.cyclic and not 0 <= k < len(c.edges):
            return "zero", None
        k %= len(c.nodes)
        e = c.edges[k]
        a, b = self.group(c, k), self.group(c, k + 1)
        if e == "zero" or (a is not None and a.is_zero()) or (b is not None and b.is_zero()):
            return "zero", None
        if e == "identity":
            return "identity", None
        if isinstance(e, GroupHom):
            return "map", e
        if isinstance(e, tuple) and e and e[0] == "times":
            if a is not None and a == b:
                return "map", GroupHom.scalar(a, int(e[1]))
            return None, None
        return None, None

    def exact(self, c, j):
        if c.cyclic:
            return j % len(c.nodes) in c.exact_at
        return j in c.exact_at

    def coker_in(self, c, j):
        """coker of the edge into node j-1 (the A of the datum for node j)."""
        prev = self.group(c, j - 1)
        if prev is None:
            return None
        if prev.is_zero():
            return prev
        if not self.exact(c, j - 1):
            return None
        kind, f = self.edge(c, j - 2)
        if kind == "zero":
            return prev
        if kind == "identity":
            return FinAbGroup.zero()
        if kind == "map":
            return image_and_cokernel(f)[1]
        return None

    def ker_out(self, c, j):
        nxt = self.group(c, j + 1)
        if nxt is None:
            return None
        if nxt.is_zero():
            return nxt
        if not self.exact(c, j + 1):
            return None
        kind, g = self.edge(c, j + 1)
        if kind == "zero":
            return nxt
        if kind == "identity":
            return FinAbGroup.zero()
        if kind == "map":
            return kernel(g)[0]
        return None

    def infer(self, c, j):
        """(rule, inputs, UNIQUE group | candidate list) or None."""
        n = len(c.nodes)
        for k, other in ((j - 1, j - 1), (j, j + 1)):
            if self.edge(c, k)[0] == "identity" and (c.cyclic or 0 <= other < n):
                g = self.group(c, other)
                if g is not None:
                    return "R2", {"identity_edge": k % n, "neighbour": str(g)}, g
        if not self.exact(c, j):
            return None
        left, right = self.group(c, j - 1), self.group(c, j + 1)
        if left is not None and right is not None and left.is_zero() and right.is_zero():
            return "R1", {"left": "0", "right": "0"}, FinAbGroup.zero()
        a, b = self.coker_in(c, j), self.ker_out(c, j)
        if a is None or b is None:
            return None
        inputs = {"A": str(a), "B": str(b), "datum": "R3"}
        if a.is_zero():
            return "R2", inputs, b
        if b.is_zero():
            return "R2", inputs, a
        if b.is_free():
            return "R4", inputs, direct_sum_group(a, b)
        cands = extension_candidates(a, b, self.max_order)
        if cands is None:
            return None
        if len(cands) == 1:
            return "R5", inputs, cands[0]
        return "R5", inputs, cands

    def merge(self, name, rule, inputs, result, where):
        cur = self.state[name]
        if isinstance(result, FinAbGroup):
            if cur.status == UNIQUE:
                if cur.value != result:
                    raise ContradictionError(f"{name}: {rule} gives {result}, already {cur.value} ({where})")
                return False
            if cur.status == CANDIDATES and result not in cur.candidates:
                raise ContradictionError(f"{name}: {rule} gives {result}, not among {[str(g) for g in cur.candidates]}")
            new = SlotResolution(UNIQUE, result)
        else:
            cands = tuple(result)
            if cur.status == UNIQUE:
                if cur.value not in cands:
                    raise ContradictionError(f"{name}: {cur.value} is not among {rule} candidates ({where})")
                return False
            if cur.status == CANDIDATES:
                cands = tuple(g for g in cur.candidates if g in cands)
                if not cands:
                    raise ContradictionError(f"{name}: candidate sets do not intersect ({where})")
                if cands == cur.candidates:
                    return False
            new = SlotResolution(UNIQUE, cands[0]) if len(cands) == 1 else SlotResolution(CANDIDATES, None, cands)
        self.state[name] = new
        self.trace.append({
            "slot": name,
            "rule": rule,
            "constraint": where,
            "inputs": inputs,
            "result": str(new),
        })
        return True

    def run(self):
        # slots already fixed are still re-derived once, so a conflicting
        # known value or an earlier constraint's answer raises
        settled = set()
        changed = True
        while changed:
            changed = False
            for ci, c in enumerate(self.constraints):
                for j, node in enumerate(c.nodes):
                    if isinstance(node, FinAbGroup) or (ci, j) in settled:
                        continue
                    name = c.slot_name(j)
                    got = self.infer(c, j)
                    if got is None:
                        continue
                    rule, inputs, result = got
                    where = f"{c.name or ci}@{j}"
                    if self.merge(name, rule, inputs, result, where):
                        changed = True
                    if self.state[name].status == UNIQUE:
                        settled.add((ci, j))
        self.check_known()
        return Resolution(dict(self.state), tuple(self.trace))

    def hom(self, c, k):
        """The edge leaving node k as a GroupHom, or None while anything is unknown."""
        kind, f = self.edge(c, k)
        if kind == "map":
            return f
        a, b = self.group(c, k), self.group(c, k + 1)
        if a is None or b is None:
            return None
        if kind == "zero":
            return GroupHom.zero(a, b)
        if kind == "identity" and a == b:
            return GroupHom.identity(a)
        return None

    def check_known(self):
        """Known maps between known groups must be exact where exactness is asked."""
        for c in self.constraints:
            for j in c.exact_at:
                f, g = self.hom(c, j - 1), self.hom(c, j)
                if f is not None and g is not None and exactness_witness(f, g) is not None:
                    raise ContradictionError(f"{c.name or 'constraint'}: known maps not exact at {j}")


def solve_system(constraints, known=None, max_order: int = DEFAULT_MAX_ORDER) -> Resolution:
    return _System(constraints, known, max_order).run()


def deduce(c: SequenceConstraint, max_order: int = DEFAULT_MAX_ORDER) -> Resolution:
    """Resolve the unknown nodes of one constraint.

    >>> z, o = FinAbGroup.free(1), FinAbGroup.zero()
    >>> c = SequenceConstraint((o, FinAbGroup.cyclic(2), None, z, o), (None,) * 4, cyclic=False)
    >>> str(deduce(c)["p2"])
    'Z + Z/2'
    """
    return solve_system([c], max_order=max_order)


# ---------------------------------------------------------------------------
# H layers


def _slot(n, j):
    return f"H[{n},{j % 6}]"


def constraint_from_template(inv: IdealKInvariant, n: int, t) -> SequenceConstraint:
    """A cyclic sequence template as a constraint; H nodes become named slots, h edges unknown."""
    names = [f"p{k}" for k in range(6)]
    nodes = []
    for name in names:
        term = t.nodes[name]
        nodes.append(_slot(n, term[1]) if term[0] == "H" else inv.node(n, term))
    edges = []
    for k in range(6):
        _, _, term = t.edges[f"e{k}"]
        if term[0] == "h":
            edges.append(None)
        else:
            src = nodes[k] if isinstance(nodes[k], FinAbGroup) else None
            tgt = nodes[(k + 1) % 6] if isinstance(nodes[(k + 1) % 6], FinAbGroup) else None
            edges.append(inv.map(n, term, src, tgt))
    return SequenceConstraint(tuple(nodes), tuple(edges), cyclic=True, name=f"{t.identifier}[i={t.index},n={n}]")


def layer_constraints(inv: IdealKInvariant, n: int):
    out = []
    for build in (seq1, seq2, seq3):
        for i in range(3):
            out.append(constraint_from_template(inv, n, build(i)))
    return out


def solve_H_layer(inv: IdealKInvariant, max_order: int = DEFAULT_MAX_ORDER):
    """Resolve H slots of every layer; returns (invariant, {n: Resolution}).

    UNIQUE slots are filled in; CANDIDATES and UNKNOWN slots stay None in
    the invariant and are described by the resolution.
    """
    resolutions = {}
    for n in inv.moduli:
        lay = inv.layer(n)
        known = {_slot(n, j): g for j, g in enumerate(lay.H) if g is not None}
        res = solve_system(layer_constraints(inv, n), known, max_order)
        groups = [res[_slot(n, j)].value if res[_slot(n, j)].status == UNIQUE else None for j in range(6)]
        inv = inv.with_layer(lay.with_H(groups, res.trace))
        resolutions[n] = res
    return inv, resolutions


# ---------------------------------------------------------------------------
# Witness search for h-maps


def _coord_values(order, bound):
    if order:
        return list(range(order))
    vals = [0]
    for k in range(1, bound + 1):
        vals += [k, -k]
    return vals


def default_bound(inv: IdealKInvariant, n: int) -> int:
    lay = inv.layer(n)
    big = [d for g in tuple(inv.base.groups) + tuple(lay.F) + tuple(g for g in lay.H if g is not None) for d in g.torsion]
    return max([12] + big)


def _local_cells(inv, n, i):
    """Cells of the TRI and SEQ templates that only involve index-i h-maps.

    Each entry is (kinds used, checker(assign)).
    """
    tmpls = [tri1(i), tri2(i), tri3(i)]
    for build in (seq1, seq2, seq3):
        tmpls += [build(i), build((i + 3) % 6)]
    cells = []
    for t in tmpls:
        groups = {name: inv.node(n, term) for name, term in t.nodes.items()}
        edges = {}
        for name, (a, b, term) in t.edges.items():
            if term[0] == "h":
                edges[name] = ("h", term[1], term[2])
            else:
                edges[name] = ("known", inv.map(n, term, groups[a], groups[b]))
        for cell in t.cells:
            names = cell.edges if cell.kind == "exact" else cell.edges[0] + cell.edges[1]
            hs = [edges[e] for e in names if edges[e][0] == "h"]
            if any(h[2] != i for h in hs):
                continue
            if any(edges[e][0] == "known" and edges[e][1] is None for e in names):
                continue
            kinds = frozenset(h[1] for h in hs)
            cells.append((kinds, _checker(cell, edges)))
    return cells


def _checker(cell, edges):
    def get(e, assign):
        tag = edges[e]
        return tag[1] if tag[0] == "known" else assign[tag[1]]

    if cell.kind == "exact":
        def check(assign):
            return exactness_witness(get(cell.edges[0], assign), get(cell.edges[1], assign)) is None
    else:
        sign = 1 if cell.kind == "commute" else -1

        def check(assign):
            def comp(path):
                acc = None
                for e in path:
                    m = get(e, assign)
                    acc = m if acc is None else m @ acc
                return acc
            return comp(cell.edges[0]) == sign * comp(cell.edges[1])
    return check


SEARCH_ORDER = ("11out", "11in", "n1in", "n1out", "1nin", "1nout")


def witness_search(inv: IdealKInvariant, n: int, i: int, bound: int | None = None, limit: int = 2_000_000):
    """h-maps at (n, i) satisfying every local TRI/SEQ cell, or None.

    Candidates for each map enumerate Hom coordinates lexicographically:
    torsion coordinates over 0..order-1, free ones over 0, 1, -1, ..., +-bound.
    """
    lay = inv.layer(n)
    i %= 6
    if lay.H[i] is None or lay.H[(i + 3) % 6] is None:
        return None
    if bound is None:
        bound = default_bound(inv, n)
    cells = _local_cells(inv, n, i)
    spaces = {}
    for kind in SEARCH_ORDER:
        a, b = h_endpoints(kind, i)
        spaces[kind] = HomSpace(inv.node(n, a), inv.node(n, b))

    candidates = {}
    for kind in SEARCH_ORDER:
        sp = spaces[kind]
        solo = [chk for kinds, chk in cells if kinds == {kind}]
        opts = []
        for coords in itertools.product(*(_coord_values(o, bound) for o in sp.orders)):
            h = sp.hom(coords)
            if all(chk({kind: h}) for chk in solo):
                opts.append(h)
        if not opts:
            return None
        candidates[kind] = opts

    multi = [(kinds, chk) for kinds, chk in cells if len(kinds) > 1]
    assign = {}
    steps = 0

    def ready(pos):
        done = set(SEARCH_ORDER[: pos + 1])
        return [chk for kinds, chk in multi if kinds <= done and SEARCH_ORDER[pos] in kinds]

    checks = [ready(p) for p in range(len(SEARCH_ORDER))]

    def dfs(pos):
        nonlocal steps
        if pos == len(SEARCH_ORDER):
            return True
        kind = SEARCH_ORDER[pos]
        for h in candidates[kind]:
            steps += 1
            if steps > limit:
                return False
            assign[kind] = h
            if all(chk(assign) for chk in checks[pos]) and dfs(pos + 1):
                return True
        assign.pop(kind, None)
        return False

    if dfs(0):
        return dict(assign)
    return None


def populate_h_maps(inv: IdealKInvariant, bound: int | None = None):
    """Fill h-maps by witness search wherever H groups are known.

    Returns (invariant, list of (n, i) where no witness was found).
    """
    missing = []
    for n in inv.moduli:
        for i in range(6):
            found = witness_search(inv, n, i, bound)
            if found is None:
                missing.append((n, i))
                continue
            lay = inv.layer(n)
            for kind, h in found.items():
                lay = lay.with_h(kind, i, h)
            inv = inv.with_layer(lay)
    return inv, missing


def full_invariant(e, moduli, bound=None, max_order=DEFAULT_MAX_ORDER):
    """compute_invariant, then solve H layers, then search h-maps."""
    inv = compute_invariant(e, moduli)
    inv, res = solve_H_layer(inv, max_order)
    inv, missing = populate_h_maps(inv, bound)
    return inv, res, missing


# ---------------------------------------------------------------------------
# Table


def table_rows(n: int, k: int, max_order: int = DEFAULT_MAX_ORDER):
    """Rows F_{1,i}, F_{k,i}, H_{k,i} (i = 0..5) for columns e_n^0..e_n^5.

    Each entry is a SlotResolution-like string: a group, a candidate set or "?".
    """
    labels = [f"F1,{i}" for i in range(6)] + [f"F{k},{i}" for i in range(6)] + [f"H{k},{i}" for i in range(6)]
    cols = []
    for j in range(6):
        inv = compute_invariant(E(n, j), [k])
        inv, res = solve_H_layer(inv, max_order)
        lay = inv.layer(k)
        col = [str(g) for g in inv.base.groups] + [str(g) for g in lay.F]
        col += [str(res[k][_slot(k, i)]) for i in range(6)]
        cols.append(col)
    return labels, cols


# ---------------------------------------------------------------------------
# Constraint JSON


def _node_from_json(x):
    if x == "?" or x is None:
        return None
    if isinstance(x, str) and x.startswith("$"):
        return x[1:]
    return normalize_presented(parse_presented(x))[0]


def constraint_from_json(doc) -> SequenceConstraint:
    """``{"cyclic", "nodes", "edges", "exact_at"}``; nodes are literals or "?".

    Edges are matrices (against the written literals), "?", "zero",
    "identity" or ``{"times": n}``.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    lits = doc["nodes"]
    nodes = tuple(_node_from_json(x) for x in lits)
    cyclic = bool(doc.get("cyclic", False))
    edges = []
    for k, e in enumerate(doc["edges"]):
        if e == "?" or e is None:
            edges.append(None)
        elif e in ("zero", "identity"):
            edges.append(e)
        elif isinstance(e, dict) and "times" in e:
            edges.append(("times", int(e["times"])))
        elif isinstance(e, list):
            a, b = lits[k], lits[(k + 1) % len(lits)]
            if a == "?" or b == "?":
                raise ValueError(f"edge {k}: a matrix needs known groups at both ends")
            edges.append(presented_hom(a, b, e))
        else:
            raise ValueError(f"edge {k}: unrecognised entry {e!r}")
    return SequenceConstraint(nodes, tuple(edges), cyclic, doc.get("exact_at"), doc.get("name", ""))
