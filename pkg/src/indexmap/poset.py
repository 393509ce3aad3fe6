"""Finite posets with basepoints and framings, and the generators B[k], A[n], T[n].

Elements are arbitrary hashable labels; the order is stored as bitsets of
up-sets over an internal index.  Everything here is exhaustive and meant
for a few dozen elements at most.
"""
from __future__ import annotations

import itertools
import random
from functools import cached_property

import networkx as nx

from .errors import InvalidMorphism, NotAPoset, ParseError


class Poset:
    """Finite poset given by any generating set of strict relations."""

    def __init__(self, elements, relations=()):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise NotAPoset("duplicate elements")
        self._pos = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        up = [1 << i for i in range(n)]
        for a, b in relations:
            up[self._pos[a]] |= 1 << self._pos[b]
        # transitive closure, Warshall style on bitsets
        for k in range(n):
            bit = 1 << k
            for i in range(n):
                if up[i] & bit:
                    up[i] |= up[k]
        for i in range(n):
            for j in range(i + 1, n):
                if up[i] >> j & 1 and up[j] >> i & 1:
                    raise NotAPoset(f"cycle through {self.elements[i]!r} and {self.elements[j]!r}")
        self._up = tuple(up)

    # basic queries
    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._pos

    def index(self, x) -> int:
        return self._pos[x]

    def leq(self, a, b) -> bool:
        return bool(self._up[self._pos[a]] >> self._pos[b] & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def up_set(self, a):
        u = self._up[self._pos[a]]
        return [x for i, x in enumerate(self.elements) if u >> i & 1]

    def down_set(self, a):
        return [x for x in self.elements if self.leq(x, a)]

    @cached_property
    def strict_pairs(self):
        return tuple((a, b) for a in self.elements for b in self.elements if self.lt(a, b))

    @cached_property
    def covers(self):
        out = []
        for a, b in self.strict_pairs:
            if not any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                out.append((a, b))
        return tuple(out)

    def minimal(self):
        return [x for x in self.elements if not any(self.lt(y, x) for y in self.elements)]

    def maximal(self):
        return [x for x in self.elements if not any(self.lt(x, y) for y in self.elements)]

    def final_element(self):
        for x in self.elements:
            if all(self.leq(y, x) for y in self.elements):
                return x
        return None

    def is_monotone(self, f, other: "Poset") -> bool:
        return all(other.leq(f[a], f[b]) for a, b in self.covers)

    def subposet(self, keep) -> "Poset":
        keep = [x for x in self.elements if x in set(keep)]
        return Poset(keep, [(a, b) for a, b in self.strict_pairs if a in keep and b in keep])

    def maximal_chains_between(self, a, b):
        """All saturated chains ``a = c0 < c1 < ... < b`` along covers."""
        if a == b:
            return [[a]]
        out = []
        for x, y in self.covers:
            if x == a and self.leq(y, b):
                out.extend([a] + rest for rest in self.maximal_chains_between(y, b))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and set(self.elements) == set(other.elements)
            and set(self.strict_pairs) == set(other.strict_pairs)
        )

    def __hash__(self):
        return hash((frozenset(self.elements), frozenset(self.strict_pairs)))

    def __repr__(self):
        return f"Poset({len(self)} elements, covers={list(self.covers)})"

    def to_text(self) -> str:
        rel = ", ".join(f"{self._pos[a]}<{self._pos[b]}" for a, b in self.covers)
        return f"{len(self)}; {rel}"


def chain(n: int) -> Poset:
    """The ordinal [n] = {0 < 1 < ... < n}."""
    return Poset(range(n + 1), [(i, i + 1) for i in range(n)])


def graph_of(I: Poset) -> nx.DiGraph:
    """Gamma(I): one edge a -> b for every strict pair a < b."""
    G = nx.DiGraph()
    G.add_nodes_from(I.elements)
    G.add_edges_from(I.strict_pairs)
    return G


def is_admissible_tree(I: Poset, edges) -> bool:
    """Spanning tree of Gamma(I) in which any two vertices reach a common vertex."""
    edges = list(edges)
    if any(not I.lt(a, b) for a, b in edges):
        return False
    T = nx.DiGraph()
    T.add_nodes_from(I.elements)
    T.add_edges_from(edges)
    if len(edges) != len(I) - 1 or not nx.is_tree(T.to_undirected(as_view=True)):
        return False
    reach = {x: nx.descendants(T, x) | {x} for x in I.elements}
    return all(reach[x] & reach[y] for x, y in itertools.combinations(I.elements, 2))


def star_edges(I: Poset):
    m = I.final_element()
    if m is None:
        raise NotAPoset("no final element")
    return tuple((x, m) for x in I.elements if x != m)


def spanning_trees(I: Poset):
    """Every spanning tree of the underlying graph of Gamma(I), edges oriented upward."""
    U = nx.Graph()
    U.add_nodes_from(I.elements)
    U.add_edges_from(I.strict_pairs)
    if len(I) == 1:
        yield ()
        return
    for tree in nx.SpanningTreeIterator(U):
        yield tuple((a, b) if I.lt(a, b) else (b, a) for a, b in tree.edges())


def admissible_trees(I: Poset):
    return [T for T in spanning_trees(I) if is_admissible_tree(I, T)]


class BasedPoset:
    """Finite poset with a final element and a tuple of basepoints.

    With ``require_minimal=False`` the basepoints need not be minimal, which
    is the looser setting used for the contraction lemma and for A[n].
    """

    def __init__(self, poset: Poset, basepoints, require_minimal: bool = True):
        self.poset = poset
        self.basepoints = tuple(basepoints)
        self.require_minimal = require_minimal
        if not self.basepoints:
            raise NotAPoset("at least one basepoint is needed")
        m = poset.final_element()
        if m is None:
            raise NotAPoset("no final element")
        self.final = m
        mins = set(poset.minimal())
        for x in self.basepoints:
            if x not in poset:
                raise NotAPoset(f"basepoint {x!r} is not an element")
            if require_minimal and x not in mins:
                raise NotAPoset(f"basepoint {x!r} is not minimal")

    @property
    def k(self) -> int:
        return len(self.basepoints) - 1

    @property
    def elements(self):
        return self.poset.elements

    def __len__(self):
        return len(self.poset)

    def __eq__(self, other):
        return isinstance(other, BasedPoset) and self.poset == other.poset and self.basepoints == other.basepoints

    def __hash__(self):
        return hash((self.poset, self.basepoints))

    def __repr__(self):
        return f"BasedPoset({self.poset!r}, base={self.basepoints!r})"

    def to_text(self) -> str:
        pos = self.poset.index
        return self.poset.to_text() + "\nbase: " + ",".join(str(pos(x)) for x in self.basepoints)


class FramedPoset:
    def __init__(self, based: BasedPoset, tree_edges):
        edges = tuple(tree_edges)
        if not is_admissible_tree(based.poset, edges):
            raise NotAPoset("tree is not an admissible spanning tree")
        self.based = based
        self.tree = edges


def star_tree(I) -> FramedPoset:
    based = I if isinstance(I, BasedPoset) else BasedPoset(I, [I.minimal()[0]])
    return FramedPoset(based, star_edges(based.poset))


class BasedMorphism:
    """``(f, sigma)`` with ``f`` monotone and ``f(x_i) = y_sigma(i)``.

    ``sigma`` runs from the source's basepoint indices to the target's and
    is monotone.
    """

    def __init__(self, source: BasedPoset, target: BasedPoset, f: dict, sigma):
        self.source, self.target = source, target
        self.f = dict(f)
        self.sigma = tuple(sigma)
        if set(self.f) != set(source.elements):
            raise InvalidMorphism("element map must be defined on the whole source")
        if any(v not in target.poset for v in self.f.values()):
            raise InvalidMorphism("element map leaves the target")
        if not source.poset.is_monotone(self.f, target.poset):
            raise InvalidMorphism("element map is not monotone")
        if len(self.sigma) != len(source.basepoints):
            raise InvalidMorphism("sigma must be defined on every source basepoint index")
        if any(not 0 <= s <= target.k for s in self.sigma):
            raise InvalidMorphism("sigma leaves the target's basepoint indices")
        if any(a > b for a, b in zip(self.sigma, self.sigma[1:])):
            raise InvalidMorphism("sigma is not monotone")
        for i, x in enumerate(source.basepoints):
            if self.f[x] != target.basepoints[self.sigma[i]]:
                raise InvalidMorphism(f"basepoint {i} is not sent to basepoint {self.sigma[i]}")

    def __call__(self, x):
        return self.f[x]

    def then(self, other: "BasedMorphism") -> "BasedMorphism":
        """``other o self``."""
        return BasedMorphism(
            self.source,
            other.target,
            {x: other.f[y] for x, y in self.f.items()},
            [other.sigma[s] for s in self.sigma],
        )

    def is_injective(self) -> bool:
        return len(set(self.f.values())) == len(self.f)

    def is_basepoint_bijective(self) -> bool:
        return self.source.k == self.target.k and self.sigma == tuple(range(self.source.k + 1))

    def __eq__(self, other):
        return (
            isinstance(other, BasedMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.f == other.f
            and self.sigma == other.sigma
        )

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.f.items()), self.sigma))


# ---------------------------------------------------------------------------
# generators


def b_poset(k: int) -> BasedPoset:
    """Non-empty intervals of [k] under inclusion; basepoints the singletons."""
    elems = [(i, j) for i in range(k + 1) for j in range(i, k + 1)]
    rel = [(a, b) for a in elems for b in elems if a != b and b[0] <= a[0] and a[1] <= b[1]]
    return BasedPoset(Poset(elems, rel), [(i, i) for i in range(k + 1)])


def b_map(theta, k_src: int, k_tgt: int) -> BasedMorphism:
    """B[theta]: B[k_src] -> B[k_tgt] for a monotone theta: [k_src] -> [k_tgt]."""
    theta = tuple(theta)
    if len(theta) != k_src + 1 or any(a > b for a, b in zip(theta, theta[1:])):
        raise InvalidMorphism("theta must be a monotone map of ordinals")
    src, tgt = b_poset(k_src), b_poset(k_tgt)
    f = {(i, j): (theta[i], theta[j]) for (i, j) in src.elements}
    return BasedMorphism(src, tgt, f, theta)


def coface(k: int, i: int):
    """delta^i: [k-1] -> [k], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(k))


def codegeneracy(k: int, i: int):
    """s^i: [k+1] -> [k], hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(k + 2))


def a_poset(n: int) -> BasedPoset:
    """Pairs (x, y) with y <= x in [n], lexicographic order.

    The order is total, so the basepoints ``(i, 0)`` are not minimal; the
    diagonal ``(i, i)`` carries the copy of [n] used for gluing.
    """
    elems = sorted((x, y) for x in range(n + 1) for y in range(x + 1))
    rel = list(zip(elems, elems[1:]))
    return BasedPoset(Poset(elems, rel), [(i, 0) for i in range(n + 1)], require_minimal=False)


def t_poset(n: int) -> BasedPoset:
    """n+1 pairwise incomparable basepoints under one maximum."""
    elems = [("x", i) for i in range(n + 1)] + ["m"]
    return BasedPoset(Poset(elems, [(("x", i), "m") for i in range(n + 1)]), elems[:-1])


def t_to_b(n: int) -> BasedMorphism:
    T, B = t_poset(n), b_poset(n)
    f = {("x", i): (i, i) for i in range(n + 1)}
    f["m"] = (0, n)
    return BasedMorphism(T, B, f, range(n + 1))


def t_to_a(n: int) -> BasedMorphism:
    T, A = t_poset(n), a_poset(n)
    f = {("x", i): (i, 0) for i in range(n + 1)}
    f["m"] = (n, n)
    return BasedMorphism(T, A, f, range(n + 1))


def collapse_basepoints(I: BasedPoset):
    """I^Delta: all basepoints fused into ``x_0``.  Returns (based poset, quotient map)."""
    x0 = I.basepoints[0]
    fused = set(I.basepoints)
    q = {x: (x0 if x in fused else x) for x in I.elements}
    elems = [x for x in I.elements if q[x] == x]
    rel = [(q[a], q[b]) for a, b in I.poset.strict_pairs if q[a] != q[b]]
    try:
        P = Poset(elems, rel)
    except NotAPoset as exc:  # impossible when basepoints are minimal
        raise NotAPoset(f"fusing basepoints created a cycle: {exc}") from exc
    based = BasedPoset(P, [x0] * len(I.basepoints), require_minimal=I.require_minimal)
    return based, q


def glue_b(I: BasedPoset):
    """I^B: glue B[k] onto I along the basepoints, new elements below I minus basepoints.

    Returns ``(I^B, inclusion of I, inclusion of B[k])``.
    """
    k = I.k
    B = b_poset(k)
    # the size tag keeps labels distinct when gluing repeatedly
    tag = lambda i, j: ("B", len(I), i, j)
    bmap = {(i, j): (I.basepoints[i] if i == j else tag(i, j)) for (i, j) in B.elements}
    new = [tag(i, j) for (i, j) in B.elements if i != j]
    rel = list(I.poset.strict_pairs)
    rel += [(bmap[a], bmap[b]) for a, b in B.poset.strict_pairs if bmap[a] != bmap[b]]
    upper = [y for y in I.elements if y not in set(I.basepoints)]
    rel += [(x, y) for x in new for y in upper]
    glued = BasedPoset(Poset(list(I.elements) + new, rel), I.basepoints, require_minimal=I.require_minimal)
    ident = range(k + 1)
    inc_i = BasedMorphism(I, glued, {x: x for x in I.elements}, ident)
    inc_b = BasedMorphism(B, glued, bmap, ident)
    return glued, inc_i, inc_b


# ---------------------------------------------------------------------------
# text format & enumeration


def parse_poset(text: str, require_minimal: bool = True) -> BasedPoset | Poset:
    """``n; i<j, i<k`` optionally followed by a line ``base: 0,2,2``."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty poset text")
    head, _, rels = lines[0].partition(";")
    try:
        n = int(head)
        pairs = []
        for tok in rels.split(","):
            tok = tok.strip()
            if tok:
                a, b = tok.split("<")
                pairs.append((int(a), int(b)))
    except ValueError as exc:
        raise ParseError(f"bad poset line {lines[0]!r}") from exc
    if any(not (0 <= a < n and 0 <= b < n) for a, b in pairs):
        raise ParseError("relation mentions an element out of range")
    P = Poset(range(n), pairs)
    for ln in lines[1:]:
        if ln.startswith("base:"):
            try:
                base = [int(x) for x in ln[5:].split(",")]
            except ValueError as exc:
                raise ParseError(f"bad basepoint line {ln!r}") from exc
            return BasedPoset(P, base, require_minimal=require_minimal)
    return P


def naturally_labelled_posets(n: int):
    """One poset per isomorphism class (with repeats) on {0..n-1}: a < b only if a < b as ints."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    for mask in range(1 << len(pairs)):
        chosen = {p for i, p in enumerate(pairs) if mask >> i & 1}
        closed = all(
            (a, c) in chosen for (a, b) in chosen for (b2, c) in chosen if b == b2
        )
        if closed:
            yield Poset(range(n), chosen)


def filtered_posets(size: int):
    """Posets with ``size`` elements having a final element ``size - 1``."""
    if size == 1:
        yield Poset([0])
        return
    top = size - 1
    for P in naturally_labelled_posets(size - 1):
        yield Poset(range(size), list(P.strict_pairs) + [(x, top) for x in range(top)])


def random_based_poset(rng: random.Random, size: int = 5, nbase: int = 2, density: float = 0.4) -> BasedPoset:
    """Random filtered poset with ``nbase`` distinct minimal basepoints."""
    size = max(size, nbase + 1)
    top = size - 1
    rel = [(a, b) for a in range(nbase, top) for b in range(a + 1, top) if rng.random() < density]
    for x in range(nbase):
        for y in range(nbase, top):
            if rng.random() < density:
                rel.append((x, y))
    rel += [(x, top) for x in range(top)]
    P = Poset(range(size), rel)
    mins = P.minimal()
    base = list(range(nbase))
    assert all(b in mins for b in base)
    return BasedPoset(P, base)
