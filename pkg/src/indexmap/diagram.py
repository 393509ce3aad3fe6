"""Admissible diagrams over based posets and their K_0 invariants.

Two flavours share one interface: torsion-valued diagrams, given by module
presentations and maps on cover relations, and lattice-valued diagrams,
given by one lattice per element.  Random torsion diagrams are produced
from lattice families ``y -> L_y / L_base``, which makes functoriality
automatic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import networkx as nx

from .dvr import RingConfig
from .errors import ConditionViolated, NotAdmissible, NotContained, TreeNotCollapsible
from .lattice import Lattice, leq, quotient, random_lattice, rel_index, standard_lattice, sup, transition
from .linalg import Matrix
from .poset import BasedMorphism, BasedPoset, Poset, collapse_basepoints, glue_b, is_admissible_tree
from .torsion import ModuleMap, TorsionModule, is_admissible_monic


@dataclass(frozen=True)
class SplitClass:
    """Class of ``F(x_0)`` plus one class per tree edge."""

    base: int
    edges: dict = field(default_factory=dict)


class Diagram:
    """Common evaluation code; subclasses supply ``class_of`` and ``coker``."""

    flavor = "abstract"

    def __init__(self, based: BasedPoset):
        self.based = based

    @property
    def poset(self) -> Poset:
        return self.based.poset

    def class_of(self, x) -> int:
        raise NotImplementedError

    def coker(self, a, b) -> TorsionModule:
        raise NotImplementedError

    def coker_length(self, a, b) -> int:
        return self.coker(a, b).length

    def validate(self):
        raise NotImplementedError

    def over(self, based: BasedPoset) -> "Diagram":
        """Same values, different basepoints on the same poset."""
        raise NotImplementedError


class TorsionDiagram(Diagram):
    flavor = "torsion"

    def __init__(self, based: BasedPoset, modules: dict, arrows: dict):
        super().__init__(based)
        self.modules = dict(modules)
        self.arrows = dict(arrows)
        missing = [e for e in based.poset.covers if e not in self.arrows]
        if missing or set(self.modules) != set(based.elements):
            raise NotAdmissible("diagram must give a module per element and a map per cover", missing[:1] or None)
        self._composites = {}
        # (lattices, base) when built as x -> L_x / base
        self.origin = None

    def over(self, based):
        return TorsionDiagram(based, self.modules, self.arrows)

    def composite(self, a, b) -> ModuleMap:
        """The map F(a) -> F(b) along the first saturated chain."""
        key = (a, b)
        if key not in self._composites:
            path = self.poset.maximal_chains_between(a, b)
            if not path:
                raise NotContained(f"{a!r} is not below {b!r}")
            self._composites[key] = self._along(path[0])
        return self._composites[key]

    def _along(self, path) -> ModuleMap:
        if len(path) == 1:
            M = self.modules[path[0]]
            return ModuleMap(M, M, Matrix.identity(M.presentation.ring, M.rank))
        f = self.arrows[(path[0], path[1])]
        for x, y in zip(path[1:], path[2:]):
            f = self.arrows[(x, y)].compose(f)
        return f

    def class_of(self, x) -> int:
        return self.modules[x].length

    def coker(self, a, b) -> TorsionModule:
        if a == b:
            return TorsionModule.zero(self.modules[a].presentation.ring)
        key = ("coker", a, b)
        if key not in self._composites:
            self._composites[key] = self.composite(a, b).cokernel()
        return self._composites[key]

    def validate(self):
        for e in self.poset.covers:
            ok, _ = is_admissible_monic(self.arrows[e])
            if not ok:
                raise NotAdmissible(f"arrow {e[0]!r} -> {e[1]!r} is not injective", e)
        for a, b in self.poset.strict_pairs:
            invariants = {self._along(p).cokernel().exponents for p in self.poset.maximal_chains_between(a, b)}
            if len(invariants) > 1:
                raise NotAdmissible(f"paths {a!r} -> {b!r} disagree: {sorted(invariants)}", (a, b))
        return True


class LatticeDiagram(Diagram):
    """Tautological diagram ``x -> L_x``; classes measured against O^n."""

    flavor = "lattice"

    def __init__(self, based: BasedPoset, lattices: dict):
        super().__init__(based)
        self.lattices = dict(lattices)
        if set(self.lattices) != set(based.elements):
            raise NotAdmissible("diagram must give a lattice per element")
        L = next(iter(self.lattices.values()))
        self._std = standard_lattice(L.ring, L.n)

    def over(self, based):
        return LatticeDiagram(based, self.lattices)

    def class_of(self, x) -> int:
        return rel_index(self._std, self.lattices[x])

    def coker(self, a, b) -> TorsionModule:
        return quotient(self.lattices[a], self.lattices[b])

    def coker_length(self, a, b) -> int:
        return rel_index(self.lattices[a], self.lattices[b])

    def validate(self):
        for a, b in self.poset.covers:
            if not leq(self.lattices[a], self.lattices[b]):
                raise NotAdmissible(f"L({a!r}) is not contained in L({b!r})", (a, b))
        return True

    def to_torsion(self, base: Lattice) -> TorsionDiagram:
        """``x -> L_x / base``; needs ``base <= L_x`` everywhere."""
        mods = {x: quotient(base, L) for x, L in self.lattices.items()}
        arrows = {
            (a, b): ModuleMap(mods[a], mods[b], transition(self.lattices[a], self.lattices[b]))
            for a, b in self.poset.covers
        }
        F = TorsionDiagram(self.based, mods, arrows)
        F.origin = (dict(self.lattices), base)
        return F


def constant_diagram(based: BasedPoset, M: TorsionModule) -> TorsionDiagram:
    ring = M.presentation.ring
    ident = Matrix.identity(ring, M.rank)
    return TorsionDiagram(
        based, {x: M for x in based.elements}, {e: ModuleMap(M, M, ident) for e in based.poset.covers}
    )


def _block(ring, A: Matrix, B: Matrix) -> Matrix:
    z = ring.zero
    rows = [list(r) + [z] * B.ncols for r in A.rows] + [[z] * A.ncols + list(r) for r in B.rows]
    return Matrix._raw(ring, rows)


def direct_sum(F: TorsionDiagram, G: TorsionDiagram) -> TorsionDiagram:
    ring = next(iter(F.modules.values())).presentation.ring
    mods = {
        x: TorsionModule.from_presentation(_block(ring, F.modules[x].presentation, G.modules[x].presentation))
        for x in F.based.elements
    }
    arrows = {
        e: ModuleMap(mods[e[0]], mods[e[1]], _block(ring, F.arrows[e].matrix, G.arrows[e].matrix))
        for e in F.poset.covers
    }
    return TorsionDiagram(F.based, mods, arrows)


# ---------------------------------------------------------------------------
# text format
#
#   4; 0<2, 1<2, 2<3
#   base: 0,1
#   lattice 2: 1, 0; 0, t^-1        one line per element (lattice form), or
#   module 2: t, 0; 0, t^2          presentation per element plus
#   map 0<2: 1, 0; 0, t             one matrix per cover (torsion form)
#   quotient: t, 0; 0, t            optional, turns the lattice form into L_x / quotient


def format_diagram(F: Diagram, quotient_by: Lattice | None = None) -> str:
    pos = F.poset.index
    lines = [F.based.to_text()]
    if isinstance(F, LatticeDiagram):
        for x in F.poset.elements:
            lines.append(f"lattice {pos(x)}: {F.lattices[x].basis.to_text()}")
        if quotient_by is not None:
            lines.append(f"quotient: {quotient_by.basis.to_text()}")
    else:
        for x in F.poset.elements:
            lines.append(f"module {pos(x)}: {F.modules[x].presentation.to_text()}")
        for a, b in F.poset.covers:
            lines.append(f"map {pos(a)}<{pos(b)}: {F.arrows[(a, b)].matrix.to_text()}")
    return "\n".join(lines)


def parse_diagram(text: str, ring: RingConfig) -> Diagram:
    from .errors import ParseError
    from .poset import parse_poset

    head, body = [], []
    for ln in text.strip().splitlines():
        ln = ln.strip()
        if not ln:
            continue
        (body if ln.split(" ", 1)[0] in ("lattice", "module", "map", "quotient:") else head).append(ln)
    based = parse_poset("\n".join(head), require_minimal=False)
    if not isinstance(based, BasedPoset):
        raise ParseError("diagram text needs a 'base:' line")
    lattices, presentations, maps, quot = {}, {}, {}, None
    try:
        for ln in body:
            key, _, mat = ln.partition(":")
            kind, _, label = key.partition(" ")
            M = Matrix.parse(ring, mat)
            if kind == "lattice":
                lattices[int(label)] = Lattice(M)
            elif kind == "module":
                presentations[int(label)] = M
            elif kind == "map":
                a, b = label.split("<")
                maps[(int(a), int(b))] = M
            else:
                quot = Lattice(M)
    except ValueError as exc:
        raise ParseError(f"bad diagram line: {exc}") from exc
    if lattices and presentations:
        raise ParseError("mix of lattice and module lines")
    if lattices:
        F = LatticeDiagram(based, lattices)
        F.validate()
        return F.to_torsion(quot) if quot is not None else F
    mods = {x: TorsionModule.from_presentation(P) for x, P in presentations.items()}
    if set(mods) != set(based.elements):
        raise ParseError("every element needs a module line")
    missing = [e for e in based.poset.covers if e not in maps]
    if missing:
        raise ParseError(f"missing map line for cover {missing[0][0]}<{missing[0][1]}")
    F = TorsionDiagram(based, mods, {e: ModuleMap(mods[e[0]], mods[e[1]], maps[e]) for e in based.poset.covers})
    F.validate()
    return F


# ---------------------------------------------------------------------------
# invariants


def phi_t(F: Diagram, tree) -> SplitClass:
    if not is_admissible_tree(F.poset, tree):
        raise NotAdmissible("tree is not admissible")
    x0 = F.based.basepoints[0]
    return SplitClass(F.class_of(x0), {e: F.coker_length(*e) for e in tree})


def pre_index(F: Diagram) -> tuple:
    """``(F(m)/F(x_{i-1}) - F(m)/F(x_i))_i`` at K_0."""
    m = F.based.final
    c = [F.coker_length(x, m) for x in F.based.basepoints]
    return tuple(c[i - 1] - c[i] for i in range(1, len(c)))


def pre_index_by_objects(F: Diagram) -> tuple:
    """``(F(x_i) - F(x_{i-1}))_i``; only meaningful when both lie in the same K_0."""
    c = [F.class_of(x) for x in F.based.basepoints]
    return tuple(c[i] - c[i - 1] for i in range(1, len(c)))


def beta(vec) -> tuple:
    return tuple(vec[i] - vec[i + 1] for i in range(len(vec) - 1))


def collapsed_tree(F_or_based, tree):
    """Image of a tree in I^Delta, or TreeNotCollapsible."""
    based = F_or_based.based if isinstance(F_or_based, Diagram) else F_or_based
    collapsed, q = collapse_basepoints(based)
    image = {(q[a], q[b]) for a, b in tree if q[a] != q[b]}
    if not is_admissible_tree(collapsed.poset, image):
        raise TreeNotCollapsible("image of the tree in I^Delta is not an admissible tree")
    return collapsed, image


def idx_via_splitting(F: Diagram, tree) -> tuple:
    """Pre-index recovered from the tree splitting and beta.

    The class of ``F(m)/F(x_i)`` is the signed sum of edge classes on the
    tree path from ``x_i`` up to ``m``.
    """
    split = phi_t(F, tree)
    collapsed_tree(F, tree)
    U = nx.Graph()
    U.add_nodes_from(F.based.elements)
    U.add_edges_from(tree)
    m = F.based.final
    vec = []
    for x in F.based.basepoints:
        path = nx.shortest_path(U, x, m)
        total = 0
        for a, b in zip(path, path[1:]):
            total += split.edges[(a, b)] if (a, b) in split.edges else -split.edges[(b, a)]
        vec.append(total)
    return beta(vec)


def face_component(F: Diagram, i: int, j: int, top) -> int:
    """``F(top)/F(x_i) - F(top)/F(x_j)``."""
    xi, xj = F.based.basepoints[i], F.based.basepoints[j]
    return F.coker_length(xi, top) - F.coker_length(xj, top)


def telescoping_holds(F: Diagram) -> bool:
    """The K_0 identity relating the three edges of a B[2]-diagram."""
    lhs = face_component(F, 0, 1, (0, 1)) + face_component(F, 1, 2, (1, 2))
    return lhs == face_component(F, 0, 2, (0, 2))


def rigidity_check(F: Diagram, emb: BasedMorphism, G: Diagram) -> bool:
    """Compare pre-indices of F and of an extension G along ``emb``."""
    if not (emb.is_injective() and emb.is_basepoint_bijective()):
        raise ValueError("embedding must be injective and bijective on basepoints")
    for a, b in F.poset.covers:
        if F.coker(a, b).exponents != G.coker(emb(a), emb(b)).exponents:
            raise ValueError(f"extension does not restrict to F on {a!r} -> {b!r}")
    for x in F.based.elements:
        if F.class_of(x) != G.class_of(emb(x)):
            raise ValueError(f"extension does not restrict to F at {x!r}")
    return pre_index(F) == pre_index(G)


# ---------------------------------------------------------------------------
# random lattice families


def random_lattice_family(
    based: BasedPoset,
    ring: RingConfig,
    rng: random.Random,
    n: int = 2,
    bound: int = 1,
    cover_basepoints: bool = True,
):
    """Monotone lattices ``x -> L_x`` all containing a common ``base``.

    With ``cover_basepoints`` every non-basepoint lattice also contains all
    basepoint lattices, which is what the B-gluing extension needs.
    """
    P = based.poset
    base = random_lattice(ring, n, rng, bound)
    order = sorted(P.elements, key=lambda x: len(P.down_set(x)))
    raw = {x: sup(base, random_lattice(ring, n, rng, bound)) for x in P.elements}
    lattices = {}
    for x in order:
        below = [lattices[y] for y in P.down_set(x) if y != x]
        lattices[x] = sup(raw[x], *below)
    if cover_basepoints:
        bps = set(based.basepoints)
        top_of_base = sup(*(lattices[x] for x in bps))
        for x in order:
            if x not in bps:
                below = [lattices[y] for y in P.down_set(x) if y != x]
                lattices[x] = sup(lattices[x], top_of_base, *below)
    return lattices, base


def random_torsion_diagram(based, ring, rng, n=2, bound=1, cover_basepoints=True):
    lattices, base = random_lattice_family(based, ring, rng, n, bound, cover_basepoints)
    return LatticeDiagram(based, lattices).to_torsion(base), lattices, base


def extend_to_glued(based: BasedPoset, lattices: dict, base: Lattice, spread: str = "interval"):
    """Extend along I -> I^B.

    With ``spread="interval"`` the interval [i, j] goes to the sup of
    ``L_{x_i..x_j}``; with ``"all"`` every interval goes to the sup of all
    basepoint lattices, which keeps a second gluing possible.
    """
    glued, inc_i, _ = glue_b(based)
    ext = dict(lattices)
    everything = sup(*(lattices[x] for x in based.basepoints))
    for x in glued.elements:
        if x not in ext:
            i, j = x[-2], x[-1]
            if spread == "all":
                ext[x] = everything
            else:
                ext[x] = sup(*(lattices[based.basepoints[l]] for l in range(i, j + 1)))
    return glued, inc_i, LatticeDiagram(glued, ext).to_torsion(base), ext


def extend_with_new_top(based: BasedPoset, lattices: dict, base: Lattice, extra: Lattice):
    """Adjoin a new maximum above the old one, valued ``L_m + extra``."""
    P = based.poset
    top = ("top", len(P))
    new_poset = Poset(list(P.elements) + [top], list(P.strict_pairs) + [(based.final, top)])
    new_based = BasedPoset(new_poset, based.basepoints, require_minimal=based.require_minimal)
    ext = dict(lattices)
    ext[top] = sup(lattices[based.final], extra)
    inc = BasedMorphism(based, new_based, {x: x for x in P.elements}, range(based.k + 1))
    return new_based, inc, LatticeDiagram(new_based, ext).to_torsion(base), ext


# ---------------------------------------------------------------------------
# contraction lemma


@dataclass
class ContractionInstance:
    S: BasedPoset
    S_prime: Poset
    phi: dict


def check_contraction_conditions(inst: ContractionInstance):
    """Raise ConditionViolated for the first of (a)-(d) that fails.

    (c) asks for an upper bound of the basepoints outside the basepoints
    themselves; a bound among them would make the condition vacuous.
    """
    S, Sp, phi = inst.S.poset, inst.S_prime, inst.phi
    xs = inst.S.basepoints
    if any(not S.leq(a, b) for a, b in zip(xs, xs[1:])):
        raise ConditionViolated("a", "basepoints are not increasing")
    for i, xi in enumerate(xs):
        for s in S.elements:
            if S.leq(s, xi) and s not in xs[: i + 1]:
                raise ConditionViolated("b", f"{s!r} lies below basepoint {i} but is not an earlier basepoint")
    if not any(y not in xs and all(S.leq(x, y) for x in xs) for y in S.elements):
        raise ConditionViolated("c", "no element outside the basepoints bounds them all")
    if set(phi) != set(S.elements) or any(v not in Sp for v in phi.values()):
        raise ConditionViolated("d", "phi is not a map S -> S'")
    if set(phi.values()) != set(Sp.elements):
        raise ConditionViolated("d", "phi is not surjective")
    images = {phi[x] for x in xs}
    if len(images) != 1:
        raise ConditionViolated("d", "phi does not contract the basepoints to one point")
    (x,) = images
    rest = [s for s in S.elements if s not in xs]
    if len({phi[s] for s in rest}) != len(rest) or x in {phi[s] for s in rest}:
        raise ConditionViolated("d", "phi is not bijective away from the basepoints")
    if not S.is_monotone(phi, Sp):
        raise ConditionViolated("d", "phi is not monotone")
    if any(S.leq(a, b) != Sp.leq(phi[a], phi[b]) for a in rest for b in rest):
        raise ConditionViolated("d", "phi is not an order equivalence away from the basepoints")
    return x


def section(inst: ContractionInstance) -> dict:
    """The section S' -> S sending the contracted point to ``x_0``."""
    x = check_contraction_conditions(inst)
    inv = {v: k for k, v in inst.phi.items() if k not in inst.S.basepoints}
    inv[x] = inst.S.basepoints[0]
    if not inst.S_prime.is_monotone(inv, inst.S.poset):
        raise ConditionViolated("d", "the section is not monotone")
    return inv


def section_contraction_check(inst: ContractionInstance, diagrams_s, diagrams_sp) -> dict:
    """Verify the counit ``phi* s* X -> X`` and ``s* phi* Y = Y`` object-wise."""
    s = section(inst)
    phi = inst.phi
    S = inst.S.poset
    report = {"monic_checks": 0, "iso_checks": 0}
    for X in diagrams_s:
        X.validate()
        for a in S.elements:
            src = s[phi[a]]
            if not S.leq(src, a):
                raise ConditionViolated("d", f"s(phi({a!r})) is not below {a!r}")
            if src != a:
                if isinstance(X, TorsionDiagram):
                    ok, _ = is_admissible_monic(X.composite(src, a))
                else:
                    ok = leq(X.lattices[src], X.lattices[a])
                if not ok:
                    raise NotAdmissible(f"counit at {a!r} is not an admissible monic", (src, a))
            report["monic_checks"] += 1
    for Y in diagrams_sp:
        for b in inst.S_prime.elements:
            if phi[s[b]] != b:
                raise ConditionViolated("d", "phi o s is not the identity")
            report["iso_checks"] += 1
    return report


def _quotient_poset(S: Poset, xs):
    x = xs[0]
    q = {e: (x if e in set(xs) else e) for e in S.elements}
    elems = [e for e in S.elements if q[e] == e]
    rel = [(q[a], q[b]) for a, b in S.strict_pairs if q[a] != q[b]]
    return Poset(elems, rel), q


def contraction_instance(S: BasedPoset) -> ContractionInstance:
    """The instance contracting all basepoints of S to ``x_0``."""
    Sp, q = _quotient_poset(S.poset, list(S.basepoints))
    return ContractionInstance(S, Sp, q)


def random_contraction_instance(rng: random.Random, n: int = 2, extra: int = 3) -> ContractionInstance:
    """Basepoints form a chain x_0 < ... < x_n; extra elements sit above some x_i."""
    xs = [("x", i) for i in range(n + 1)]
    others = [("e", j) for j in range(extra)]
    rel = [(a, b) for a, b in zip(xs, xs[1:])]
    for j, e in enumerate(others):
        rel.append((xs[rng.randint(0, n)], e))
        for f in others[j + 1:]:
            if rng.random() < 0.4:
                rel.append((e, f))
    top = "m"
    rel += [(e, top) for e in xs + others]
    S = BasedPoset(Poset(xs + others + [top], rel), xs, require_minimal=False)
    Sp, q = _quotient_poset(S.poset, xs)
    return ContractionInstance(S, Sp, q)


def designed_violation(condition: str) -> ContractionInstance:
    """A small instance failing exactly the named condition."""
    if condition == "a":
        S = BasedPoset(Poset(["x0", "x1", "m"], [("x0", "m"), ("x1", "m")]), ["x0", "x1"])
    elif condition == "b":
        S = BasedPoset(
            Poset(["x0", "x1", "z", "m"], [("x0", "x1"), ("z", "x1"), ("x1", "m")]),
            ["x0", "x1"],
            require_minimal=False,
        )
    elif condition == "c":
        S = BasedPoset(Poset(["x0", "x1"], [("x0", "x1")]), ["x0", "x1"], require_minimal=False)
    elif condition == "d":
        S = BasedPoset(Poset(["x0", "x1", "m"], [("x0", "x1"), ("x1", "m")]), ["x0", "x1"], require_minimal=False)
        Sp = Poset(["x0", "m", "extra"], [("x0", "m"), ("extra", "m")])
        return ContractionInstance(S, Sp, {"x0": "x0", "x1": "x0", "m": "m"})
    else:
        raise ValueError(f"unknown condition {condition!r}")
    Sp, q = _quotient_poset(S.poset, list(S.basepoints))
    return ContractionInstance(S, Sp, q)
