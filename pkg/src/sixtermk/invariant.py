"""The ideal-related invariant with coefficients and its diagram suite.

An invariant holds the integral layer ``F1_i`` (the K-data itself) and, for
each modulus n in a finite configured set, a layer with the mod-n groups
``Fn_i``, the plain maps ``f_{n,i}``, the Bockstein maps, six ``H`` slots and
the six families of h-maps.  H groups and h-maps start out unknown (None).

Diagrams are templates over a small term language for maps, so one
evaluator handles every template.  Map terms::

    ("f1", j)  ("fn", j)        tilde-signed sequence maps
    ("f1p", j) ("fnp", j)       plain sequence maps
    ("rho", j) ("beta", j)      Bockstein maps
    ("x1", j) ("xn", j)         multiplication by n on F1_j / Fn_j
    ("h", kind, j)              h-map of the given kind
    ("id",) ("zero",)           endpoints taken from the edge's nodes
    ("neg", t) ("scale", k, t) ("nmul", t) ("comp", outer, inner)

``nmul`` multiplies by the modulus of the layer being evaluated.

Node terms are ("F1", j), ("Fn", j), ("H", j) and ("0",).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .catalog import build
from .coefficients import coefficient_layer
from .fgab import FinAbGroup, GroupHom, ShapeError, exactness_witness, normalize_presented, parse_presented
from .functors import TILDE
from .sixterm import SixTermSeq, commuting_tuples, presented_hom, seq_from_json, seq_to_json

H_KINDS = ("11in", "11out", "n1in", "n1out", "1nin", "1nout")
TEMPLATE_IDS = (
    "SEQ1", "SEQ2", "SEQ3", "SEQ4", "TRI1", "TRI2", "TRI3", "COR-SQ",
    "D0", "D1", "D1*", "D2", "D2*", "D3", "D3*",
)


def h_endpoints(kind: str, i: int):
    """Node terms (source, target) of the h-map of a kind at index i."""
    i %= 6
    ends = {
        "11in": (("F1", i + 1), ("H", i)),
        "11out": (("H", i), ("F1", i + 3)),
        "n1in": (("Fn", i), ("H", i)),
        "n1out": (("H", i), ("F1", i + 2)),
        "1nin": (("F1", i + 2), ("H", i)),
        "1nout": (("H", i), ("Fn", i + 1)),
    }
    if kind not in ends:
        raise KeyError(f"unknown h-map kind {kind!r}")
    return tuple((t[0], t[1] % 6) if len(t) == 2 else t for t in ends[kind])


@dataclass(frozen=True)
class ModulusLayer:
    n: int
    F: tuple
    f: tuple  # plain maps f_{n,i}
    rho: tuple
    beta: tuple
    H: tuple = (None,) * 6
    h: dict = field(default_factory=lambda: {k: (None,) * 6 for k in H_KINDS})
    exact: bool = True
    provenance: tuple = ()

    def with_H(self, groups, provenance=()) -> "ModulusLayer":
        groups = tuple(groups)
        h = dict(self.h)
        for k in H_KINDS:
            h[k] = tuple(
                m if (m is not None and groups[i] == self.H[i]) else None for i, m in enumerate(h[k])
            )
        return replace(self, H=groups, h=h, provenance=tuple(provenance))

    def with_h(self, kind, i, hom) -> "ModulusLayer":
        h = dict(self.h)
        row = list(h[kind])
        row[i % 6] = hom
        h[kind] = tuple(row)
        return replace(self, h=h)

    @property
    def complete(self) -> bool:
        return all(g is not None for g in self.H) and all(m is not None for k in H_KINDS for m in self.h[k])


@dataclass(frozen=True)
class IdealKInvariant:
    base: SixTermSeq
    layers: dict
    label: str = ""

    @property
    def moduli(self) -> tuple:
        return tuple(sorted(self.layers))

    def layer(self, n) -> ModulusLayer:
        try:
            return self.layers[n]
        except KeyError:
            raise KeyError(f"modulus {n} is not part of this invariant (moduli {list(self.moduli)})") from None

    def with_layer(self, layer: ModulusLayer) -> "IdealKInvariant":
        layers = dict(self.layers)
        layers[layer.n] = layer
        return replace(self, layers=layers)

    @property
    def complete(self) -> bool:
        return all(lay.complete for lay in self.layers.values())

    # slot access used by templates and the solver
    def node(self, n, term):
        kind = term[0]
        if kind == "0":
            return FinAbGroup.zero()
        j = term[1] % 6
        if kind == "F1":
            return self.base.groups[j]
        lay = self.layer(n)
        if kind == "Fn":
            return lay.F[j]
        if kind == "H":
            return lay.H[j]
        raise KeyError(f"unknown node term {term!r}")

    def map(self, n, term, src=None, tgt=None):
        """Evaluate a map term; None if it involves an unknown slot."""
        kind = term[0]
        if kind == "id":
            if src is None:
                return None
            return GroupHom.identity(src)
        if kind == "zero":
            if src is None or tgt is None:
                return None
            return GroupHom.zero(src, tgt)
        if kind == "neg":
            m = self.map(n, term[1], src, tgt)
            return None if m is None else -m
        if kind == "scale":
            m = self.map(n, term[2], src, tgt)
            return None if m is None else term[1] * m
        if kind == "nmul":
            m = self.map(n, term[1], src, tgt)
            return None if m is None else n * m
        if kind == "comp":
            inner = self.map(n, term[2])
            outer = self.map(n, term[1])
            if inner is None or outer is None:
                return None
            return outer @ inner
        j = term[-1] % 6
        if kind == "f1":
            return TILDE[j] * self.base.maps[j]
        if kind == "f1p":
            return self.base.maps[j]
        if kind == "x1":
            return GroupHom.scalar(self.base.groups[j], n)
        lay = self.layer(n)
        if kind == "fn":
            return TILDE[j] * lay.f[j]
        if kind == "fnp":
            return lay.f[j]
        if kind == "rho":
            return lay.rho[j]
        if kind == "beta":
            return lay.beta[j]
        if kind == "xn":
            return GroupHom.scalar(lay.F[j], n)
        if kind == "h":
            return lay.h[term[1]][j]
        raise KeyError(f"unknown map term {term!r}")


def _normalize_moduli(moduli):
    out = sorted({int(n) for n in moduli})
    bad = [n for n in out if n < 2]
    if bad:
        raise ValueError(f"moduli must be >= 2, got {bad}")
    return out


def layer_from_sequence(s: SixTermSeq, n: int) -> ModulusLayer:
    c = coefficient_layer(s, n)
    return ModulusLayer(n, c.seq.groups, c.seq.maps, c.rho, c.beta, exact=c.exact)


def compute_invariant(e, moduli=()) -> IdealKInvariant:
    """Integral layer plus one coefficient layer per modulus; H slots unknown.

    ``e`` is a descriptor (string or object) or a SixTermSeq.
    """
    moduli = _normalize_moduli(moduli)
    if isinstance(e, SixTermSeq):
        s, label = e, ""
    else:
        s, label = build(e), str(e)
    layers = {n: layer_from_sequence(s, n) for n in moduli}
    return IdealKInvariant(s, layers, label)


# ---------------------------------------------------------------------------
# Templates


@dataclass(frozen=True)
class Cell:
    kind: str  # "exact" | "commute" | "anticommute"
    edges: tuple  # exact: (in, out); (anti)commute: (path_a, path_b)
    label: str


@dataclass(frozen=True)
class DiagramTemplate:
    identifier: str
    index: int
    nodes: dict  # name -> node term
    edges: dict  # name -> (src name, tgt name, map term)
    cells: tuple

    def __post_init__(self):
        for name, (a, b, _) in self.edges.items():
            if a not in self.nodes or b not in self.nodes:
                raise ShapeError(f"{self.identifier}: edge {name} has an undeclared endpoint")
        for cell in self.cells:
            names = cell.edges if cell.kind == "exact" else cell.edges[0] + cell.edges[1]
            for e in names:
                if e not in self.edges:
                    raise ShapeError(f"{self.identifier}: cell {cell.label} uses unknown edge {e}")
            if cell.kind != "exact":
                a, b = cell.edges
                if self.edges[a[0]][0] != self.edges[b[0]][0] or self.edges[a[-1]][1] != self.edges[b[-1]][1]:
                    raise ShapeError(f"{self.identifier}: paths of {cell.label} do not share endpoints")

    def h_terms(self):
        """The h-map terms occurring on edges, in first-seen order."""
        seen = []

        def walk(t):
            if t[0] == "h" and t not in seen:
                seen.append(t)
            elif t[0] in ("neg", "nmul"):
                walk(t[1])
            elif t[0] == "scale":
                walk(t[2])
            elif t[0] == "comp":
                walk(t[1])
                walk(t[2])

        for _, _, t in self.edges.values():
            walk(t)
        return seen


def _cyclic(identifier, i, nodes, terms):
    names = [f"p{k}" for k in range(6)]
    edges = {f"e{k}": (names[k], names[(k + 1) % 6], terms[k]) for k in range(6)}
    cells = tuple(Cell("exact", (f"e{(k - 1) % 6}", f"e{k}"), f"exact@{k}") for k in range(6))
    return DiagramTemplate(identifier, i, dict(zip(names, nodes)), edges, cells)


def _F1(j):
    return ("F1", j % 6)


def _Fn(j):
    return ("Fn", j % 6)


def _H(j):
    return ("H", j % 6)


_ZERO_NODE = ("0",)
_ID = ("id",)
_ZERO = ("zero",)


def _t(kind, j):
    return (kind, j % 6)


def _h(kind, i):
    return ("h", kind, i % 6)


def _comp(outer, inner):
    return ("comp", outer, inner)


def _neg(t):
    return ("neg", t)


def seq1(i):
    """``F1 -> H -> F1 -(n f)-> F1 -> H -> F1 -(n f)->`` around index i."""
    return _cyclic("SEQ1", i,
        [_F1(i + 1), _H(i), _F1(i + 3), _F1(i + 4), _H(i + 3), _F1(i)],
        [_h("11in", i), _h("11out", i), ("nmul", _t("f1p", i + 3)),
         _h("11in", i + 3), _h("11out", i + 3), ("nmul", _t("f1p", i))])


def seq2(i):
    return _cyclic("SEQ2", i,
        [_Fn(i), _H(i), _F1(i + 2), _Fn(i + 3), _H(i + 3), _F1(i + 5)],
        [_h("n1in", i), _h("n1out", i), _comp(_t("fnp", i + 2), _t("rho", i + 2)),
         _h("n1in", i + 3), _h("n1out", i + 3), _comp(_t("fnp", i + 5), _t("rho", i + 5))])


def seq3(i):
    return _cyclic("SEQ3", i,
        [_F1(i + 2), _H(i), _Fn(i + 1), _F1(i + 5), _H(i + 3), _Fn(i + 4)],
        [_h("1nin", i), _h("1nout", i), _comp(_t("beta", i + 2), _t("fnp", i + 1)),
         _h("1nin", i + 3), _h("1nout", i + 3), _comp(_t("beta", i + 5), _t("fnp", i + 4))])


def seq4(i):
    """The Bockstein sequence ``F1 -rho-> Fn -beta-> F1 -(x n)-> ...``."""
    return _cyclic("SEQ4", i,
        [_F1(i), _Fn(i), _F1(i + 3), _F1(i + 3), _Fn(i + 3), _F1(i)],
        [_t("rho", i), _t("beta", i), _t("x1", i + 3), _t("rho", i + 3), _t("beta", i + 3), _t("x1", i)])


def _relations(identifier, i, nodes, edges, cells):
    return DiagramTemplate(identifier, i, nodes, edges, tuple(Cell(*c) for c in cells))


def tri1(i):
    nodes = {"a": _F1(i), "b": _F1(i + 1), "c": _Fn(i), "d": _H(i), "e": _F1(i + 2),
             "g": _F1(i + 3), "g2": _F1(i + 3)}
    edges = {
        "f0": ("a", "b", _t("f1", i)), "rho": ("a", "c", _t("rho", i)),
        "in11": ("b", "d", _h("11in", i)), "f1": ("b", "e", _t("f1", i + 1)),
        "inn1": ("c", "d", _h("n1in", i)), "beta": ("c", "g", _t("beta", i)),
        "outn1": ("d", "e", _h("n1out", i)), "out11": ("d", "g", _h("11out", i)),
        "f2": ("e", "g2", _t("f1", i + 2)), "xn": ("g", "g2", _t("x1", i + 3)),
    }
    return _relations("TRI1", i, nodes, edges, [
        ("commute", (("f0", "in11"), ("rho", "inn1")), "square-top"),
        ("commute", (("in11", "outn1"), ("f1",)), "triangle-right"),
        ("commute", (("inn1", "out11"), ("beta",)), "triangle-left"),
        ("commute", (("outn1", "f2"), ("out11", "xn")), "square-bottom"),
    ])


def tri2(i):
    nodes = {"a": _F1(i + 1), "b": _F1(i + 1), "c": _F1(i + 2), "d": _H(i), "e": _Fn(i + 1),
             "g": _F1(i + 3), "g2": _F1(i + 4)}
    edges = {
        "xn": ("a", "b", _t("x1", i + 1)), "f1": ("a", "c", _t("f1", i + 1)),
        "in11": ("b", "d", _h("11in", i)), "rho": ("b", "e", _t("rho", i + 1)),
        "in1n": ("c", "d", _h("1nin", i)), "f2": ("c", "g", _t("f1", i + 2)),
        "out1n": ("d", "e", _h("1nout", i)), "out11": ("d", "g", _h("11out", i)),
        "nbeta": ("e", "g2", _neg(_t("beta", i + 1))), "f3": ("g", "g2", _t("f1", i + 3)),
    }
    return _relations("TRI2", i, nodes, edges, [
        ("commute", (("xn", "in11"), ("f1", "in1n")), "square-top"),
        ("commute", (("in11", "out1n"), ("rho",)), "triangle-right"),
        ("commute", (("in1n", "out11"), ("f2",)), "triangle-left"),
        ("commute", (("out1n", "nbeta"), ("out11", "f3")), "square-bottom"),
    ])


def tri3(i):
    nodes = {"a": _Fn(i + 5), "b": _Fn(i), "c": _F1(i + 2), "d": _H(i), "e": _Fn(i + 1),
             "g": _F1(i + 2), "g2": _Fn(i + 2)}
    edges = {
        "f5": ("a", "b", _t("fn", i + 5)), "nbeta": ("a", "c", _neg(_t("beta", i + 5))),
        "inn1": ("b", "d", _h("n1in", i)), "f0": ("b", "e", _t("fn", i)),
        "in1n": ("c", "d", _h("1nin", i)), "xn": ("c", "g", _t("x1", i + 2)),
        "out1n": ("d", "e", _h("1nout", i)), "outn1": ("d", "g", _h("n1out", i)),
        "f1": ("e", "g2", _t("fn", i + 1)), "rho": ("g", "g2", _t("rho", i + 2)),
    }
    return _relations("TRI3", i, nodes, edges, [
        ("commute", (("f5", "inn1"), ("nbeta", "in1n")), "square-top"),
        ("commute", (("inn1", "out1n"), ("f0",)), "triangle-right"),
        ("commute", (("in1n", "outn1"), ("xn",)), "triangle-left"),
        ("commute", (("out1n", "f1"), ("outn1", "rho")), "square-bottom"),
    ])


def cor_squares(i):
    nodes = {"a": _F1(i), "b": _F1(i + 1), "c": _Fn(i), "d": _Fn(i + 1), "g": _F1(i + 3), "g2": _F1(i + 4)}
    edges = {
        "f1": ("a", "b", _t("f1", i)), "rho0": ("a", "c", _t("rho", i)), "rho1": ("b", "d", _t("rho", i + 1)),
        "fn": ("c", "d", _t("fn", i)), "beta0": ("c", "g", _t("beta", i)), "beta1": ("d", "g2", _t("beta", i + 1)),
        "f13": ("g", "g2", _t("f1", i + 3)),
    }
    return _relations("COR-SQ", i, nodes, edges, [
        ("commute", (("f1", "rho1"), ("rho0", "fn")), "rho-square"),
        ("anticommute", (("fn", "beta1"), ("beta0", "f13")), "beta-square"),
    ])


def grid(identifier, i, nodes, horiz, v01, v12, top):
    """A 3 x 6 diagram, cyclic in both directions.

    ``nodes[r][c]``; ``horiz[r][c]`` runs (r, c) -> (r, c+1); ``v01[c]`` and
    ``v12[c]`` run down column c; ``top[c]`` runs (2, c+3) -> (0, c), so each
    pair of columns c, c+3 forms one vertical six-term cycle.
    """
    node_map = {f"r{r}c{c}": nodes[r][c] for r in range(3) for c in range(6)}
    edges = {}
    for r in range(3):
        for c in range(6):
            edges[f"h{r}{c}"] = (f"r{r}c{c}", f"r{r}c{(c + 1) % 6}", horiz[r][c])
    for c in range(6):
        edges[f"a{c}"] = (f"r0c{c}", f"r1c{c}", v01[c])
        edges[f"b{c}"] = (f"r1c{c}", f"r2c{c}", v12[c])
        edges[f"t{c}"] = (f"r2c{(c + 3) % 6}", f"r0c{c}", top[c])
    cells = []
    for r in range(3):
        for c in range(6):
            cells.append(Cell("exact", (f"h{r}{(c - 1) % 6}", f"h{r}{c}"), f"row{r}@{c}"))
    for c in range(3):
        cyc = [f"a{c}", f"b{c}", f"t{c + 3}", f"a{c + 3}", f"b{c + 3}", f"t{c}"]
        for k in range(6):
            cells.append(Cell("exact", (cyc[k - 1], cyc[k]), f"col{c}@{k}"))
    for c in range(6):
        d = (c + 1) % 6
        cells.append(Cell("commute", ((f"h0{c}", f"a{d}"), (f"a{c}", f"h1{c}")), f"sq01@{c}"))
        cells.append(Cell("commute", ((f"h1{c}", f"b{d}"), (f"b{c}", f"h2{c}")), f"sq12@{c}"))
        cells.append(Cell("commute", ((f"h2{(c + 3) % 6}", f"t{d}"), (f"t{c}", f"h0{c}")), f"sq20@{c}"))
    return DiagramTemplate(identifier, i, node_map, edges, tuple(cells))


def _six(fn):
    return [fn(c) for c in range(6)]


def d0():
    return grid("D0", 0,
        [_six(lambda c: _F1(c)), _six(lambda c: _Fn(c)), _six(lambda c: _F1(c + 3))],
        [_six(lambda c: _t("f1", c)), _six(lambda c: _t("fn", c)), _six(lambda c: _t("f1", c + 3))],
        _six(lambda c: _t("rho", c)),
        _six(lambda c: ("scale", (-1) ** c, _t("beta", c))),
        _six(lambda c: _t("x1", c)))


def d1(i):
    def middle(j):
        return [_Fn(j), _H(j), _F1(j + 2)], [_h("n1in", j), _h("n1out", j), _comp(_t("rho", j + 3), _t("f1", j + 2))]

    m0, e0 = middle(i)
    m3, e3 = middle(i + 3)
    return grid("D1", i,
        [_six(lambda c: _F1(i + c)), m0 + m3,
         [_F1(i + 3), _F1(i + 3), _ZERO_NODE, _F1(i), _F1(i), _ZERO_NODE]],
        [_six(lambda c: _t("f1", i + c)), e0 + e3, [_ID, _ZERO, _ZERO] * 2],
        [_t("rho", i), _h("11in", i), _ID, _t("rho", i + 3), _h("11in", i + 3), _ID],
        [_t("beta", i), _h("11out", i), _ZERO, _t("beta", i + 3), _h("11out", i + 3), _ZERO],
        [_t("x1", i), ("nmul", _t("f1", i)), _ZERO, _t("x1", i + 3), ("nmul", _t("f1", i + 3)), _ZERO])


def d1_star(i):
    def middle(j):
        return [_Fn(j), _H(j), _F1(j + 2)], [_h("n1in", j), _h("n1out", j), _comp(_t("rho", j + 3), _t("f1", j + 2))]

    m0, e0 = middle(i)
    m3, e3 = middle(i + 3)
    return grid("D1*", i,
        [[_ZERO_NODE, _F1(i + 1), _F1(i + 1), _ZERO_NODE, _F1(i + 4), _F1(i + 4)], m0 + m3,
         [_Fn(i), _F1(i + 3), _F1(i + 3), _Fn(i + 3), _F1(i), _F1(i)]],
        [[_ZERO, _ID, _ZERO] * 2, e0 + e3,
         [_t("beta", i), _t("x1", i + 3), _t("rho", i + 3), _t("beta", i + 3), _t("x1", i), _t("rho", i)]],
        [_ZERO, _h("11in", i), _t("f1", i + 1), _ZERO, _h("11in", i + 3), _t("f1", i + 4)],
        [_ID, _h("11out", i), _t("f1", i + 2), _ID, _h("11out", i + 3), _t("f1", i + 5)],
        [_ZERO, ("nmul", _t("f1", i)), _t("f1", i), _ZERO, ("nmul", _t("f1", i + 3)), _t("f1", i + 3)])


def _d2_middle(j, sign):
    link = _comp(_t("f1", j + 4), _t("beta", j + 1))
    if sign < 0:
        link = _neg(link)
    return [_F1(j + 2), _H(j), _Fn(j + 1)], [_h("1nin", j), _h("1nout", j), link]


def d2(i):
    m0, e0 = _d2_middle(i, 1)
    m3, e3 = _d2_middle(i + 3, 1)
    return grid("D2", i,
        [[_F1(i + 1), _F1(i + 1), _Fn(i + 1), _F1(i + 4), _F1(i + 4), _Fn(i + 4)], m0 + m3,
         [_F1(i + 3), _F1(i + 3), _ZERO_NODE, _F1(i), _F1(i), _ZERO_NODE]],
        [[_t("x1", i + 1), _t("rho", i + 1), _t("beta", i + 1), _t("x1", i + 4), _t("rho", i + 4), _t("beta", i + 4)],
         e0 + e3, [_ID, _ZERO, _ZERO] * 2],
        [_t("f1", i + 1), _h("11in", i), _ID, _t("f1", i + 4), _h("11in", i + 3), _ID],
        [_t("f1", i + 2), _h("11out", i), _ZERO, _t("f1", i + 5), _h("11out", i + 3), _ZERO],
        [_t("f1", i), ("nmul", _t("f1", i)), _ZERO, _t("f1", i + 3), ("nmul", _t("f1", i + 3)), _ZERO])


def d2_star(i):
    m0, e0 = _d2_middle(i, -1)
    m3, e3 = _d2_middle(i + 3, -1)
    return grid("D2*", i,
        [[_ZERO_NODE, _F1(i + 1), _F1(i + 1), _ZERO_NODE, _F1(i + 4), _F1(i + 4)], m0 + m3,
         _six(lambda c: _F1(i + 2 + c))],
        [[_ZERO, _ID, _ZERO] * 2, e0 + e3, _six(lambda c: _t("f1", i + 2 + c))],
        [_ZERO, _h("11in", i), _t("rho", i + 1), _ZERO, _h("11in", i + 3), _t("rho", i + 4)],
        [_ID, _h("11out", i), _neg(_t("beta", i + 1)), _ID, _h("11out", i + 3), _neg(_t("beta", i + 4))],
        [_ZERO, ("nmul", _t("f1", i)), _t("x1", i + 1), _ZERO, ("nmul", _t("f1", i + 3)), _t("x1", i + 4)])


def _d3_middle(j, sign):
    link = _comp(_t("beta", j + 2), _t("fn", j + 1))
    if sign < 0:
        link = _neg(link)
    return [_F1(j + 2), _H(j), _Fn(j + 1)], [_h("1nin", j), _h("1nout", j), link]


def d3(i):
    m0, e0 = _d3_middle(i, -1)
    m3, e3 = _d3_middle(i + 3, -1)
    return grid("D3", i,
        [_six(lambda c: _Fn(i + 5 + c)), m0 + m3,
         [_F1(i + 2), _F1(i + 2), _ZERO_NODE, _F1(i + 5), _F1(i + 5), _ZERO_NODE]],
        [_six(lambda c: _t("fn", i + 5 + c)), e0 + e3, [_ID, _ZERO, _ZERO] * 2],
        [_neg(_t("beta", i + 5)), _h("n1in", i), _ID, _neg(_t("beta", i + 2)), _h("n1in", i + 3), _ID],
        [_t("x1", i + 2), _h("n1out", i), _ZERO, _t("x1", i + 5), _h("n1out", i + 3), _ZERO],
        [_t("rho", i + 5), _comp(_t("fn", i + 5), _t("rho", i + 5)), _ZERO,
         _t("rho", i + 2), _comp(_t("fn", i + 2), _t("rho", i + 2)), _ZERO])


def d3_star(i):
    m0, e0 = _d3_middle(i, 1)
    m3, e3 = _d3_middle(i + 3, 1)
    return grid("D3*", i,
        [[_ZERO_NODE, _Fn(i), _Fn(i), _ZERO_NODE, _Fn(i + 3), _Fn(i + 3)], m0 + m3,
         [_F1(i + 2), _F1(i + 2), _Fn(i + 2), _F1(i + 5), _F1(i + 5), _Fn(i + 5)]],
        [[_ZERO, _ID, _ZERO] * 2, e0 + e3,
         [_t("x1", i + 2), _t("rho", i + 2), _t("beta", i + 2), _t("x1", i + 5), _t("rho", i + 5), _t("beta", i + 5)]],
        [_ZERO, _h("n1in", i), _t("fn", i), _ZERO, _h("n1in", i + 3), _t("fn", i + 3)],
        [_ID, _h("n1out", i), _t("fn", i + 1), _ID, _h("n1out", i + 3), _t("fn", i + 4)],
        [_ZERO, _comp(_t("fn", i + 5), _t("rho", i + 5)), _t("fn", i + 5),
         _ZERO, _comp(_t("fn", i + 2), _t("rho", i + 2)), _t("fn", i + 2)])


_BUILDERS = {
    "SEQ1": (seq1, range(6)), "SEQ2": (seq2, range(6)), "SEQ3": (seq3, range(6)), "SEQ4": (seq4, range(6)),
    "TRI1": (tri1, range(6)), "TRI2": (tri2, range(6)), "TRI3": (tri3, range(6)),
    "COR-SQ": (cor_squares, range(6)),
    "D0": (lambda i: d0(), range(1)),
    "D1": (d1, range(3)), "D1*": (d1_star, range(3)), "D2": (d2, range(3)), "D2*": (d2_star, range(3)),
    "D3": (d3, range(3)), "D3*": (d3_star, range(3)),
}


def templates(identifier: str):
    """All instances of a template family (indices 0..5, 0..2 for the grids)."""
    key = identifier.strip().upper()
    if key not in _BUILDERS:
        raise KeyError(f"unknown diagram {identifier!r}; known: {', '.join(TEMPLATE_IDS)}")
    fn, idx = _BUILDERS[key]
    return [fn(i) for i in idx]


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class CellResult:
    template: str
    index: int
    n: int
    label: str
    kind: str
    verdict: str  # "pass" | "fail" | "skip"
    detail: str = ""


@dataclass(frozen=True)
class DiagramReport:
    results: tuple
    moduli: tuple

    @property
    def failures(self):
        return [r for r in self.results if r.verdict == "fail"]

    @property
    def skipped(self):
        return [r for r in self.results if r.verdict == "skip"]

    @property
    def ok(self) -> bool:
        """No failed cell (skipped cells allowed)."""
        return not self.failures

    @property
    def passed(self) -> bool:
        """Every cell checked and passed."""
        return not self.failures and not self.skipped

    def status(self):
        """Per template family: "pass", "fail" or "incomplete" (some cell skipped)."""
        out = {}
        for r in self.results:
            cur = out.get(r.template, "pass")
            if r.verdict == "fail":
                cur = "fail"
            elif r.verdict == "skip" and cur == "pass":
                cur = "incomplete"
            out[r.template] = cur
        return out


def _edge_maps(inv, n, t: DiagramTemplate):
    groups = {name: inv.node(n, term) for name, term in t.nodes.items()}
    maps = {}
    for name, (a, b, term) in t.edges.items():
        src, tgt = groups[a], groups[b]
        if src is None or tgt is None:
            maps[name] = None
            continue
        m = inv.map(n, term, src, tgt)
        if m is not None and (m.source != src or m.target != tgt):
            raise ShapeError(
                f"{t.identifier}[{t.index}] edge {name}: map {m.source} -> {m.target} "
                f"does not fit slots {src} -> {tgt}"
            )
        maps[name] = m
    return maps


def _compose(maps, path):
    acc = None
    for e in path:
        acc = maps[e] if acc is None else maps[e] @ acc
    return acc


def evaluate_template(inv: IdealKInvariant, n: int, t: DiagramTemplate):
    maps = _edge_maps(inv, n, t)
    out = []
    for cell in t.cells:
        names = cell.edges if cell.kind == "exact" else cell.edges[0] + cell.edges[1]
        if any(maps[e] is None for e in names):
            out.append(CellResult(t.identifier, t.index, n, cell.label, cell.kind, "skip", "unknown slot"))
            continue
        if cell.kind == "exact":
            w = exactness_witness(maps[cell.edges[0]], maps[cell.edges[1]])
            ok, detail = w is None, "" if w is None else f"{w[0]} witness {list(w[1])}"
        else:
            a, b = _compose(maps, cell.edges[0]), _compose(maps, cell.edges[1])
            ok = a == (b if cell.kind == "commute" else -b)
            detail = "" if ok else f"{a.matrix.tolist()} vs {b.matrix.tolist()}"
        out.append(CellResult(t.identifier, t.index, n, cell.label, cell.kind, "pass" if ok else "fail", detail))
    return out


def template_holds(inv: IdealKInvariant, n: int, t: DiagramTemplate) -> bool:
    return all(r.verdict == "pass" for r in evaluate_template(inv, n, t))


def verify_diagrams(inv: IdealKInvariant, which=TEMPLATE_IDS, moduli=None) -> DiagramReport:
    """Per-cell verdicts for the chosen template families over the moduli.

    Cells touching an unknown H group or h-map are reported as skipped.
    """
    moduli = inv.moduli if moduli is None else tuple(moduli)
    results = []
    for n in moduli:
        for ident in which:
            for t in templates(ident):
                results.extend(evaluate_template(inv, n, t))
    return DiagramReport(tuple(results), tuple(moduli))


# ---------------------------------------------------------------------------
# Hom between invariants


def _structure(inv: IdealKInvariant):
    """Slots and structure maps as (slot keys, [(x, y, map)])."""
    slots = [("F1", j) for j in range(6)]
    rels = [(("F1", j), ("F1", (j + 1) % 6), inv.base.maps[j]) for j in range(6)]
    for n in inv.moduli:
        lay = inv.layer(n)
        slots += [("Fn", n, j) for j in range(6)] + [("H", n, j) for j in range(6)]
        for j in range(6):
            rels.append((("Fn", n, j), ("Fn", n, (j + 1) % 6), lay.f[j]))
            rels.append((("F1", j), ("Fn", n, j), lay.rho[j]))
            rels.append((("Fn", n, j), ("F1", (j + 3) % 6), lay.beta[j]))
            for kind in H_KINDS:
                a, b = h_endpoints(kind, j)
                key = lambda t: ("F1", t[1]) if t[0] == "F1" else (t[0], n, t[1])
                rels.append((key(a), key(b), lay.h[kind][j]))
    return slots, rels


def _slot_group(inv, key):
    if key[0] == "F1":
        return inv.base.groups[key[1]]
    lay = inv.layer(key[1])
    return lay.F[key[2]] if key[0] == "Fn" else lay.H[key[2]]


def hom_lambda(a: IdealKInvariant, b: IdealKInvariant):
    """Group of slotwise hom tuples commuting with every structure map.

    Multiplication by n commutes with any group hom and adds no constraint.
    Returns ``(group, basis)``; each basis entry maps slot keys to homs.
    """
    if a.moduli != b.moduli:
        raise ValueError(f"moduli differ: {list(a.moduli)} vs {list(b.moduli)}")
    for inv, name in ((a, "source"), (b, "target")):
        if not inv.complete:
            raise ValueError(f"{name} invariant has unknown H groups or h-maps")
    slots, rels_a = _structure(a)
    _, rels_b = _structure(b)
    index = {k: pos for pos, k in enumerate(slots)}
    pairs = [(_slot_group(a, k), _slot_group(b, k)) for k in slots]
    constraints = [(index[x], index[y], sa, tb) for (x, y, sa), (_, _, tb) in zip(rels_a, rels_b)]
    group, basis = commuting_tuples(pairs, constraints)
    return group, [dict(zip(slots, tup)) for tup in basis]


# ---------------------------------------------------------------------------
# JSON


def _mat(h):
    return None if h is None else h.matrix.tolist()


def invariant_to_json(inv: IdealKInvariant) -> dict:
    layers = {}
    for n in inv.moduli:
        lay = inv.layer(n)
        layers[str(n)] = {
            "F": [str(g) for g in lay.F],
            "f": [_mat(m) for m in lay.f],
            "rho": [_mat(m) for m in lay.rho],
            "beta": [_mat(m) for m in lay.beta],
            "H": [None if g is None else str(g) for g in lay.H],
            "h": {k: [_mat(m) for m in lay.h[k]] for k in H_KINDS},
            "exact": lay.exact,
        }
    return {"label": inv.label, "base": seq_to_json(inv.base), "moduli": list(inv.moduli), "layers": layers}


def invariant_from_json(doc) -> IdealKInvariant:
    """Read an invariant document; maps are normalised against the written literals."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    base = seq_from_json(doc["base"])
    base_lits = doc["base"]["groups"]
    layers = {}
    for key, ld in doc.get("layers", {}).items():
        n = int(key)
        F = ld["F"]
        f = tuple(presented_hom(F[j], F[(j + 1) % 6], ld["f"][j]) for j in range(6))
        rho = tuple(presented_hom(base_lits[j], F[j], ld["rho"][j]) for j in range(6))
        beta = tuple(presented_hom(F[j], base_lits[(j + 3) % 6], ld["beta"][j]) for j in range(6))
        Hl = ld.get("H") or [None] * 6

        def lit(term):
            if term[0] == "F1":
                return base_lits[term[1]]
            if term[0] == "Fn":
                return F[term[1]]
            return Hl[term[1]]

        layer = ModulusLayer(n, tuple(m.source for m in f), f, rho, beta, exact=bool(ld.get("exact", True)))
        layer = layer.with_H([None if g is None else normalize_presented(parse_presented(g))[0] for g in Hl])
        for kind in H_KINDS:
            mats = (ld.get("h") or {}).get(kind) or [None] * 6
            for j in range(6):
                if mats[j] is None or Hl[j] is None:
                    continue
                a, b = h_endpoints(kind, j)
                layer = layer.with_h(kind, j, presented_hom(lit(a), lit(b), mats[j]))
        layers[n] = layer
    return IdealKInvariant(base, layers, doc.get("label", ""))

