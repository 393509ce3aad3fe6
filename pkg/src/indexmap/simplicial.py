"""Truncated simplicial and bisimplicial sets at desk scale.

Every simplicial operator is precomposition with a monotone map
``theta: [k] -> [m]``, written as the tuple ``(theta(0), ..., theta(k))``.
Faces and degeneracies are the special cases ``delta_map`` and ``sigma_map``.
Bisimplicial sets are truncated by total degree ``m + n <= D``.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import TooLarge

DEFAULT_BUDGET = 500_000


def delta_map(m: int, i: int) -> tuple:
    """Coface ``[m-1] -> [m]`` skipping ``i``."""
    return tuple(k if k < i else k + 1 for k in range(m))


def sigma_map(m: int, i: int) -> tuple:
    """Codegeneracy ``[m+1] -> [m]`` hitting ``i`` twice."""
    return tuple(k if k <= i else k - 1 for k in range(m + 2))


@lru_cache(maxsize=None)
def _pairs(m: int) -> tuple:
    return tuple((i, j) for i in range(m + 1) for j in range(i, m + 1))


@lru_cache(maxsize=None)
def _pair_index(m: int) -> dict:
    return {p: k for k, p in enumerate(_pairs(m))}


_DIM_OF_PAIRS = {len(_pairs(m)): m for m in range(64)}


# ---------------------------------------------------------------------------
# finite categories


class FiniteCategory:
    """Objects, morphisms with endpoints, identities and a full composition table."""

    def __init__(self, objects, morphisms: dict, identities: dict, compose, name: str = ""):
        self.objects = tuple(objects)
        self.src = {f: s for f, (s, _) in morphisms.items()}
        self.tgt = {f: t for f, (_, t) in morphisms.items()}
        self.morphisms = tuple(morphisms)
        self.ident = dict(identities)
        self.name = name
        self._hom = {}
        for f in self.morphisms:
            self._hom.setdefault((self.src[f], self.tgt[f]), []).append(f)
        self.comp = {}
        for f in self.morphisms:
            for g in self._hom_from(self.tgt[f]):
                h = compose(g, f)
                if h not in self.src or self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                    raise ValueError(f"composite of {g!r} and {f!r} is not a morphism")
                self.comp[(g, f)] = h
        self.validate()

    def _hom_from(self, a):
        return [g for g in self.morphisms if self.src[g] == a]

    def hom(self, a, b) -> list:
        return list(self._hom.get((a, b), []))

    def compose(self, g, f):
        """``g o f``."""
        return self.comp[(g, f)]

    def inverse(self, f):
        for g in self.hom(self.tgt[f], self.src[f]):
            if self.comp[(g, f)] == self.ident[self.src[f]] and self.comp[(f, g)] == self.ident[self.tgt[f]]:
                return g
        return None

    def is_groupoid(self) -> bool:
        return all(self.inverse(f) is not None for f in self.morphisms)

    def validate(self):
        for a in self.objects:
            e = self.ident[a]
            if self.src[e] != a or self.tgt[e] != a:
                raise ValueError(f"identity at {a!r} has wrong endpoints")
        for f in self.morphisms:
            if self.comp[(self.ident[self.tgt[f]], f)] != f or self.comp[(f, self.ident[self.src[f]])] != f:
                raise ValueError(f"identity law fails at {f!r}")
        for f in self.morphisms:
            for g in self._hom_from(self.tgt[f]):
                for h in self._hom_from(self.tgt[g]):
                    if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                        raise ValueError("composition is not associative")
        return True

    def __repr__(self):
        return f"FiniteCategory({self.name or len(self.objects)})"


class FiniteGroupoid(FiniteCategory):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if not self.is_groupoid():
            raise ValueError("not every morphism is invertible")


def ordinal(n: int) -> FiniteCategory:
    """The poset ``[n] = {0 < 1 < ... < n}``."""
    mors = {(i, j): (i, j) for i in range(n + 1) for j in range(i, n + 1)}
    return FiniteCategory(range(n + 1), mors, {i: (i, i) for i in range(n + 1)}, lambda g, f: (f[0], g[1]), f"[{n}]")


def contractible_groupoid(n: int) -> FiniteGroupoid:
    """One isomorphism between any two of ``n + 1`` objects."""
    mors = {(i, j): (i, j) for i in range(n + 1) for j in range(n + 1)}
    return FiniteGroupoid(range(n + 1), mors, {i: (i, i) for i in range(n + 1)}, lambda g, f: (f[0], g[1]), f"J[{n}]")


def walking_isomorphism() -> FiniteGroupoid:
    G = contractible_groupoid(1)
    G.name = "iso"
    return G


def cyclic_group(k: int) -> FiniteGroupoid:
    return FiniteGroupoid(["*"], {a: ("*", "*") for a in range(k)}, {"*": 0}, lambda g, f: (g + f) % k, f"C{k}")


def discrete(k: int) -> FiniteGroupoid:
    return FiniteGroupoid(range(k), {("id", a): (a, a) for a in range(k)}, {a: ("id", a) for a in range(k)}, lambda g, f: f, f"disc{k}")


def product_category(C: FiniteCategory, D: FiniteCategory) -> FiniteCategory:
    mors = {(f, g): ((C.src[f], D.src[g]), (C.tgt[f], D.tgt[g])) for f in C.morphisms for g in D.morphisms}
    idents = {(a, b): (C.ident[a], D.ident[b]) for a in C.objects for b in D.objects}
    objs = [(a, b) for a in C.objects for b in D.objects]
    return FiniteCategory(objs, mors, idents, lambda h, k: (C.comp[(h[0], k[0])], D.comp[(h[1], k[1])]), f"{C.name}x{D.name}")


def core(C: FiniteCategory) -> FiniteGroupoid:
    isos = {f: (C.src[f], C.tgt[f]) for f in C.morphisms if C.inverse(f) is not None}
    return FiniteGroupoid(C.objects, isos, C.ident, C.compose, f"{C.name}^x")


def _reduce(word) -> tuple:
    out = []
    for step in word:
        if out and out[-1][0] == step[0] and out[-1][1] == -step[1]:
            out.pop()
        else:
            out.append(step)
    return tuple(out)


def free_groupoid(n: int) -> FiniteGroupoid:
    """Groupoid freely generated by the arrows ``k -> k+1`` of ``[n]``.

    A morphism is ``(source, reduced word)``; a step ``(k, +1)`` traverses
    the generator ``k -> k+1`` and ``(k, -1)`` its formal inverse.
    """
    mors = {}

    def walk(start, v, word):
        mors[(start, word)] = (start, v)
        last = word[-1] if word else None
        for k, eps, w in ((v, 1, v + 1), (v - 1, -1, v - 1)):
            if 0 <= k < n and last != (k, -eps):
                walk(start, w, word + ((k, eps),))

    for a in range(n + 1):
        walk(a, a, ())
    return FiniteGroupoid(
        range(n + 1), mors, {a: (a, ()) for a in range(n + 1)}, lambda g, f: (f[0], _reduce(f[1] + g[1])), f"FG[{n}]"
    )


def free_groupoid_functor(theta) -> callable:
    """Morphism map of ``FG[n'] -> FG[n]`` induced by monotone ``theta``."""

    def step_image(k, eps):
        path = tuple((l, 1) for l in range(theta[k], theta[k + 1]))
        return path if eps == 1 else tuple((l, -1) for l, _ in reversed(path))

    def apply(f):
        src, word = f
        out = ()
        for k, eps in word:
            out += step_image(k, eps)
        return (theta[src], _reduce(out))

    return apply


class FiniteFunctor:
    def __init__(self, source: FiniteCategory, target: FiniteCategory, on_objects: dict, on_morphisms: dict):
        self.source, self.target = source, target
        self.obj, self.mor = dict(on_objects), dict(on_morphisms)
        for f in source.morphisms:
            g = self.mor[f]
            if target.src[g] != self.obj[source.src[f]] or target.tgt[g] != self.obj[source.tgt[f]]:
                raise ValueError(f"functor breaks endpoints of {f!r}")
        for (g, f), h in source.comp.items():
            if target.comp[(self.mor[g], self.mor[f])] != self.mor[h]:
                raise ValueError("functor does not preserve composition")

    def __call__(self, f):
        return self.mor[f]


PRESETS = {
    "ordinal1": lambda: ordinal(1),
    "ordinal2": lambda: ordinal(2),
    "c2": lambda: cyclic_group(2),
    "c3": lambda: cyclic_group(3),
    "iso": walking_isomorphism,
    "discrete2": lambda: discrete(2),
}


def preset(name: str) -> FiniteCategory:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown category preset {name!r}; choose from {sorted(PRESETS)}") from None


# ---------------------------------------------------------------------------
# truncated simplicial sets


def _identity_failures(levels: dict, act, label: str = "") -> list:
    """Check closure and the simplicial identities for ``act(theta, x)``."""
    bad = []
    top = max(levels)
    sets = {m: set(v) for m, v in levels.items()}

    def d(m, i, x):
        return act(delta_map(m, i), x)

    def s(m, i, x):
        return act(sigma_map(m, i), x)

    for m, xs in levels.items():
        for x in xs:
            if m >= 1:
                for i in range(m + 1):
                    if d(m, i, x) not in sets[m - 1]:
                        bad.append(f"{label}d_{i} leaves level {m - 1}")
            if m + 1 <= top:
                for i in range(m + 1):
                    if s(m, i, x) not in sets[m + 1]:
                        bad.append(f"{label}s_{i} leaves level {m + 1}")
            if m >= 2:
                for i, j in itertools.combinations(range(m + 1), 2):
                    if d(m - 1, i, d(m, j, x)) != d(m - 1, j - 1, d(m, i, x)):
                        bad.append(f"{label}d_{i}d_{j} != d_{j - 1}d_{i} in degree {m}")
            if m + 2 <= top:
                for i in range(m + 1):
                    for j in range(i, m + 1):
                        if s(m + 1, i, s(m, j, x)) != s(m + 1, j + 1, s(m, i, x)):
                            bad.append(f"{label}s_{i}s_{j} != s_{j + 1}s_{i} in degree {m}")
            if m + 1 <= top:
                for j in range(m + 1):
                    y = s(m, j, x)
                    for i in range(m + 2):
                        lhs = d(m + 1, i, y)
                        if i in (j, j + 1):
                            rhs = x
                        elif i < j:
                            rhs = s(m - 1, j - 1, d(m, i, x))
                        else:
                            rhs = s(m - 1, j, d(m, i - 1, x))
                        if lhs != rhs:
                            bad.append(f"{label}d_{i}s_{j} identity fails in degree {m}")
            if len(bad) > 20:
                return bad
    return bad


class TruncatedSimplicialSet:
    """Levels ``0..D`` and an action ``act(theta, x)`` of monotone maps."""

    def __init__(self, levels: dict, act, name: str = ""):
        self.levels = {m: tuple(levels[m]) for m in sorted(levels)}
        self.D = max(self.levels)
        self._act = act
        self.name = name

    def __getitem__(self, m):
        return self.levels[m]

    def sizes(self) -> list:
        return [len(self.levels[m]) for m in range(self.D + 1)]

    def act(self, theta, x):
        return self._act(tuple(theta), x)

    def face(self, m: int, i: int, x):
        return self._act(delta_map(m, i), x)

    def degeneracy(self, m: int, i: int, x):
        return self._act(sigma_map(m, i), x)

    def vertex(self, x, k: int):
        return self._act((k,), x)

    def audit(self) -> list:
        """List of failed closure or identity checks; empty when all hold."""
        return _identity_failures(self.levels, self._act)

    def __repr__(self):
        return f"TruncatedSimplicialSet({self.name!r}, sizes={self.sizes()})"


def _precompose_pairs(theta, x):
    m = _DIM_OF_PAIRS[len(x)]
    idx = _pair_index(m)
    return tuple(x[idx[(theta[a], theta[b])]] for a, b in _pairs(len(theta) - 1))


def nerve(C: FiniteCategory, D: int = 4, budget: int = DEFAULT_BUDGET) -> TruncatedSimplicialSet:
    """Level m holds functors ``[m] -> C``, stored as morphism tuples over pairs ``i <= j``."""
    levels = {0: [(C.ident[a],) for a in C.objects]}
    chains = [[(a,), ()] for a in C.objects]
    for m in range(1, D + 1):
        new = []
        for objs, mors in chains:
            for f in C.morphisms:
                if C.src[f] == objs[-1]:
                    new.append([objs + (C.tgt[f],), mors + (f,)])
        if len(new) > budget:
            raise TooLarge(f"nerve level {m} exceeds budget {budget}")
        chains = new
        level = []
        for objs, mors in chains:
            table = {}
            for i, j in _pairs(m):
                if i == j:
                    table[(i, j)] = C.ident[objs[i]]
                else:
                    table[(i, j)] = mors[i] if j == i + 1 else C.comp[(mors[j - 1], table[(i, j - 1)])]
            level.append(tuple(table[p] for p in _pairs(m)))
        levels[m] = level
    return TruncatedSimplicialSet(levels, _precompose_pairs, f"N{C.name}")


def _precompose_tuple(theta, x):
    return tuple(x[t] for t in theta)


def standard_simplex(m: int, D: int = 4) -> TruncatedSimplicialSet:
    levels = {k: list(itertools.combinations_with_replacement(range(m + 1), k + 1)) for k in range(D + 1)}
    return TruncatedSimplicialSet(levels, _precompose_tuple, f"Delta^{m}")


def boundary_simplex(m: int, D: int = 4) -> TruncatedSimplicialSet:
    """Non-surjective monotone maps into ``[m]``."""
    levels = {
        k: [x for x in itertools.combinations_with_replacement(range(m + 1), k + 1) if len(set(x)) < m + 1]
        for k in range(D + 1)
    }
    return TruncatedSimplicialSet(levels, _precompose_tuple, f"dDelta^{m}")


def coskeletal_zero(vertices, D: int = 4, name: str = "cosk0") -> TruncatedSimplicialSet:
    vs = list(vertices)
    levels = {k: list(itertools.product(vs, repeat=k + 1)) for k in range(D + 1)}
    return TruncatedSimplicialSet(levels, _precompose_tuple, name)


def gr_tuples(lattices, D: int = 3) -> TruncatedSimplicialSet:
    """Gr restricted to a finite set of lattices: m-simplices are (m+1)-tuples."""
    return coskeletal_zero(list(dict.fromkeys(lattices)), D, "Gr")


def product_sset(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    D = min(X.D, Y.D)
    levels = {m: list(itertools.product(X[m], Y[m])) for m in range(D + 1)}
    return TruncatedSimplicialSet(levels, lambda th, xy: (X.act(th, xy[0]), Y.act(th, xy[1])), f"{X.name}x{Y.name}")


def delta_prime(n: int, D: int = 4) -> TruncatedSimplicialSet:
    X = nerve(free_groupoid(n), D)
    X.name = f"Delta'[{n}]"
    return X


def t_shriek(m: int, n: int, D: int = 2) -> TruncatedSimplicialSet:
    """``t_!`` on the representable ``[m] x [n]``."""
    return product_sset(standard_simplex(m, D), delta_prime(n, D))


# ---------------------------------------------------------------------------
# checkers


def coskeletal_check(X: TruncatedSimplicialSet, k: int, budget: int = DEFAULT_BUDGET) -> bool:
    """True when every ``X_m`` (k < m <= D) is the set of compatible k-face families."""
    for m in range(k + 1, X.D + 1):
        subsets = list(itertools.combinations(range(m + 1), k + 1))
        families = {tuple(X.act(S, x) for S in subsets) for x in X[m]}
        if len(families) != len(X[m]):
            return False
        overlaps = []
        for a, S in enumerate(subsets):
            row = []
            for b in range(a):
                T = sorted(set(S) & set(subsets[b]))
                if T:
                    row.append((b, tuple(S.index(t) for t in T), tuple(subsets[b].index(t) for t in T)))
            overlaps.append(row)
        count = 0
        chosen = [None] * len(subsets)

        def fill(a):
            nonlocal count
            if a == len(subsets):
                count += 1
                if count > budget:
                    raise TooLarge("matching object enumeration exceeds budget")
                return
            for y in X[k]:
                if all(X.act(th_a, y) == X.act(th_b, chosen[b]) for b, th_a, th_b in overlaps[a]):
                    chosen[a] = y
                    fill(a + 1)

        fill(0)
        if count != len(X[m]):
            return False
    return True


def segal_check(X: TruncatedSimplicialSet, up_to: int | None = None) -> dict:
    """Per level n >= 2: is ``X_n -> X_1 x_{X_0} ... x_{X_0} X_1`` a bijection?"""
    up_to = X.D if up_to is None else min(up_to, X.D)
    report = {"reduced": len(X[0]) == 1, "levels": {}}
    edges = X[1]
    src = {e: X.act((0,), e) for e in edges}
    tgt = {e: X.act((1,), e) for e in edges}
    for n in range(2, up_to + 1):
        spines = {tuple(X.act((i, i + 1), x) for i in range(n)) for x in X[n]}
        ways = {e: 1 for e in edges}
        for _ in range(n - 1):
            ways = {f: sum(c for e, c in ways.items() if tgt[e] == src[f]) for f in edges}
        composable = sum(ways.values())
        report["levels"][n] = len(spines) == len(X[n]) == composable
    report["ok"] = all(report["levels"].values())
    return report


# ---------------------------------------------------------------------------
# truncated bisimplicial sets


class TruncatedBisimplicialSet:
    """Levels ``(m, n)`` with ``m + n <= D``; ``act(theta_h, theta_v, x)`` with None meaning identity.

    Simplices carry their bidegree as their first two entries.
    """

    def __init__(self, levels: dict, act, D: int, name: str = ""):
        self.levels = {k: tuple(v) for k, v in levels.items()}
        self.D = D
        self._act = act
        self.name = name

    def __getitem__(self, mn):
        return self.levels[mn]

    def act(self, theta_h, theta_v, x):
        return self._act(None if theta_h is None else tuple(theta_h), None if theta_v is None else tuple(theta_v), x)

    def row(self, n: int) -> dict:
        return {m: self.levels[(m, n)] for m in range(self.D - n + 1)}

    def column(self, m: int) -> dict:
        return {n: self.levels[(m, n)] for n in range(self.D - m + 1)}

    def audit(self) -> list:
        bad = []
        for n in range(self.D + 1):
            row = self.row(n)
            if len(row) > 0:
                bad += _identity_failures(row, lambda th, x: self._act(th, None, x), f"h(n={n}) ")
        for m in range(self.D + 1):
            col = self.column(m)
            if len(col) > 0:
                bad += _identity_failures(col, lambda th, x: self._act(None, th, x), f"v(m={m}) ")
        for (m, n), xs in self.levels.items():
            if m < 1 or n < 1:
                continue
            for x in xs:
                for i in range(m + 1):
                    for j in range(n + 1):
                        a = self._act(None, delta_map(n, j), self._act(delta_map(m, i), None, x))
                        b = self._act(delta_map(m, i), None, self._act(None, delta_map(n, j), x))
                        if a != b:
                            bad.append(f"h-d_{i} and v-d_{j} do not commute at {(m, n)}")
        return bad

    def sizes(self) -> dict:
        return {k: len(v) for k, v in sorted(self.levels.items())}


def iota_star(j: int, Y: TruncatedBisimplicialSet) -> TruncatedSimplicialSet:
    """Restriction to row 0 (j = 1) or column 0 (j = 2)."""
    if j == 1:
        return TruncatedSimplicialSet(Y.row(0), lambda th, x: Y.act(th, None, x), f"i1*{Y.name}")
    if j == 2:
        return TruncatedSimplicialSet(Y.column(0), lambda th, x: Y.act(None, th, x), f"i2*{Y.name}")
    raise ValueError("j must be 1 or 2")


def p_star(j: int, X: TruncatedSimplicialSet) -> TruncatedBisimplicialSet:
    """Pullback along the projection to the first (j = 1) or second (j = 2) factor."""
    D = X.D
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    levels = {}
    for m in range(D + 1):
        for n in range(D - m + 1):
            k = m if j == 1 else n
            levels[(m, n)] = [(m, n, x) for x in X[k]]

    def act(th_h, th_v, x):
        m, n, y = x
        m2 = m if th_h is None else len(th_h) - 1
        n2 = n if th_v is None else len(th_v) - 1
        th = th_h if j == 1 else th_v
        return (m2, n2, y if th is None else X.act(th, y))

    return TruncatedBisimplicialSet(levels, act, D, f"p{j}*{X.name}")


# ---------------------------------------------------------------------------
# t^! N C by enumeration of simplicial maps, and the Rezk model


def hom_into_2coskeletal(K: TruncatedSimplicialSet, X: TruncatedSimplicialSet, budget: int = DEFAULT_BUDGET) -> list:
    """All simplicial maps ``K -> X`` for 2-coskeletal ``X``, as tuples of edge images.

    Vertices and edges are assigned by backtracking; every 2-simplex of K
    must land on a triangle of X once its three edges are known.
    """
    verts, edges, tris = K[0], K[1], K[2]
    ends = {e: (K.act((0,), e), K.act((1,), e)) for e in edges}
    degenerate = {K.act((0, 0), v): v for v in verts}
    x_edges = {}
    for f in X[1]:
        x_edges.setdefault((X.act((0,), f), X.act((1,), f)), []).append(f)
    x_tris = {(X.act((0, 1), z), X.act((1, 2), z), X.act((0, 2), z)) for z in X[2]}
    tri_edges = [(K.act((0, 1), y), K.act((1, 2), y), K.act((0, 2), y)) for y in tris]

    vpos = {v: k for k, v in enumerate(verts)}
    # edges become assignable once both endpoints are placed
    edge_batches = [[] for _ in verts]
    for e in edges:
        a, b = ends[e]
        edge_batches[max(vpos[a], vpos[b])].append(e)
    order = [e for batch in edge_batches for e in batch]
    epos = {e: k for k, e in enumerate(order)}
    check_at = {}
    for t in tri_edges:
        check_at.setdefault(max(epos[e] for e in t), []).append(t)

    vimg, eimg, found = {}, {}, []

    def place_edges(batch, k, after):
        if k == len(batch):
            after()
            return
        e = batch[k]
        a, b = ends[e]
        if e in degenerate:
            cands = [X.act((0, 0), vimg[a])]
        else:
            cands = x_edges.get((vimg[a], vimg[b]), [])
        for f in cands:
            eimg[e] = f
            if all((eimg[t[0]], eimg[t[1]], eimg[t[2]]) in x_tris for t in check_at.get(epos[e], [])):
                place_edges(batch, k + 1, after)
        eimg.pop(e, None)

    def place_vertex(k):
        if k == len(verts):
            found.append(tuple(eimg[e] for e in edges))
            if len(found) > budget:
                raise TooLarge("hom enumeration exceeds budget")
            return
        for y in X[0]:
            vimg[verts[k]] = y
            place_edges(edge_batches[k], 0, lambda: place_vertex(k + 1))
        vimg.pop(verts[k], None)

    place_vertex(0)
    return found


class _TShriekShape:
    """Cached edge data of ``Delta^m x Delta'[n]``."""

    def __init__(self, m: int, n: int):
        self.m, self.n = m, n
        self.K = t_shriek(m, n, 2)
        self.edges = self.K[1]
        self.index = {e: k for k, e in enumerate(self.edges)}
        self.FG = free_groupoid(n)

    def beta(self, j: int, jp: int):
        """The 1-simplex ``j -> j'`` of ``Delta'[n]``."""
        (w,) = self.FG.hom(j, jp)
        return (self.FG.ident[j], w, self.FG.ident[jp])

    def edge(self, a: int, ap: int, j: int, jp: int):
        return ((a, ap), self.beta(j, jp))


@lru_cache(maxsize=None)
def _shape(m: int, n: int) -> _TShriekShape:
    return _TShriekShape(m, n)


def t_pling(C: FiniteCategory, D: int = 4, budget: int = DEFAULT_BUDGET) -> TruncatedBisimplicialSet:
    """``(t^! N C)_{m,n} = hom(Delta^m x Delta'[n], N C)`` for ``m + n <= D``."""
    NC = nerve(C, 2)
    levels = {}
    for m in range(D + 1):
        for n in range(D - m + 1):
            sh = _shape(m, n)
            levels[(m, n)] = [(m, n, imgs) for imgs in hom_into_2coskeletal(sh.K, NC, budget)]

    def act(th_h, th_v, x):
        m, n, imgs = x
        m2 = m if th_h is None else len(th_h) - 1
        n2 = n if th_v is None else len(th_v) - 1
        src, tgt = _shape(m, n), _shape(m2, n2)
        fmap = None if th_v is None else free_groupoid_functor(th_v)
        out = []
        for alpha, beta in tgt.edges:
            a2 = alpha if th_h is None else tuple(th_h[t] for t in alpha)
            b2 = beta if fmap is None else tuple(fmap(f) for f in beta)
            out.append(imgs[src.index[(a2, b2)]])
        return (m2, n2, tuple(out))

    return TruncatedBisimplicialSet(levels, act, D, f"t!N{C.name}")


def rezk(C: FiniteCategory, D: int = 4, budget: int = DEFAULT_BUDGET) -> TruncatedBisimplicialSet:
    """``(m, n) -> N_n Fun([m], C)^x``: chains of n natural isomorphisms."""
    NC = nerve(C, D)
    isos_from = {a: [f for f in C.morphisms if C.src[f] == a and C.inverse(f) is not None] for a in C.objects}

    def conjugate(F, eta, m):
        # G(a -> b) = eta_b o F(a -> b) o eta_a^-1
        return tuple(C.comp[(eta[b], C.comp[(F[k], C.inverse(eta[a]))])] for k, (a, b) in enumerate(_pairs(m)))

    levels = {}
    for m in range(D + 1):
        objs_of = lambda F: [C.src[F[_pair_index(m)[(a, a)]]] for a in range(m + 1)]
        chains = [((F,), ()) for F in NC[m]]
        for n in range(D - m + 1):
            levels[(m, n)] = [(m, n, Fs, etas) for Fs, etas in chains]
            if n == D - m:
                break
            new = []
            for Fs, etas in chains:
                F = Fs[-1]
                for eta in itertools.product(*(isos_from[o] for o in objs_of(F))):
                    new.append((Fs + (conjugate(F, eta, m),), etas + (eta,)))
            if len(new) > budget:
                raise TooLarge("Rezk enumeration exceeds budget")
            chains = new

    def act(th_h, th_v, x):
        m, n, Fs, etas = x
        if th_v is not None:
            newF, newE = [Fs[th_v[0]]], []
            for k in range(1, len(th_v)):
                lo, hi = th_v[k - 1], th_v[k]
                comp = []
                for a in range(m + 1):
                    g = C.ident[C.src[Fs[lo][_pair_index(m)[(a, a)]]]]
                    for j in range(lo, hi):
                        g = C.comp[(etas[j][a], g)]
                    comp.append(g)
                newF.append(Fs[hi])
                newE.append(tuple(comp))
            Fs, etas, n = tuple(newF), tuple(newE), len(th_v) - 1
        if th_h is not None:
            Fs = tuple(_precompose_pairs(th_h, F) for F in Fs)
            etas = tuple(tuple(e[t] for t in th_h) for e in etas)
            m = len(th_h) - 1
        return (m, n, Fs, etas)

    return TruncatedBisimplicialSet(levels, act, D, f"Bcss{C.name}")


def _to_rezk(x):
    """The comparison ``t^! N C -> B^css C``; an edge image ``(id, f, id)`` contributes f."""
    m, n, imgs = x
    sh = _shape(m, n)
    at = lambda a, ap, j, jp: imgs[sh.index[sh.edge(a, ap, j, jp)]][1]
    Fs = tuple(tuple(at(a, ap, j, j) for a, ap in _pairs(m)) for j in range(n + 1))
    etas = tuple(tuple(at(a, a, j - 1, j) for a in range(m + 1)) for j in range(1, n + 1))
    return (m, n, Fs, etas)


def _operators(D: int, m: int, n: int):
    """Faces and degeneracies out of bidegree (m, n) that stay within total degree D."""
    ops = []
    if m >= 1:
        ops += [(delta_map(m, i), None) for i in range(m + 1)]
    if n >= 1:
        ops += [(None, delta_map(n, j)) for j in range(n + 1)]
    if m + n + 1 <= D:
        ops += [(sigma_map(m, i), None) for i in range(m + 1)]
        ops += [(None, sigma_map(n, j)) for j in range(n + 1)]
    return ops


def _bijection_report(levels_a: dict, levels_b: dict, phi, act_a, act_b, ops_for) -> dict:
    report = {"levels": {}, "ok": True}
    for key, xs in levels_a.items():
        image = [phi(x) for x in xs]
        bij = len(set(image)) == len(xs) and set(image) == set(levels_b[key])
        natural = bij and all(phi(act_a(op, x)) == act_b(op, y) for x, y in zip(xs, image) for op in ops_for(key))
        report["levels"][key] = {"size": len(xs), "bijective": bij, "commutes": natural}
        report["ok"] = report["ok"] and bij and natural
    return report


def tpling_rezk_check(C: FiniteCategory, D: int = 4) -> dict:
    """Level-wise bijection ``t^! N C -> B^css C`` commuting with all operators."""
    T, R = t_pling(C, D), rezk(C, D)
    return _bijection_report(
        T.levels,
        R.levels,
        _to_rezk,
        lambda op, x: T.act(op[0], op[1], x),
        lambda op, y: R.act(op[0], op[1], y),
        lambda key: _operators(D, *key),
    )


def lemma_pre_check(C: FiniteCategory, D: int = 4) -> dict:
    """``N C = i1* t^! N C`` and ``N C^x = i2* t^! N C``, level-wise and natural."""
    T = t_pling(C, D)
    NC, NCx = nerve(C, D), nerve(core(C), D)

    def row_map(x):
        return _to_rezk(x)[2][0]

    def col_map(x):
        m, n, imgs = x
        sh = _shape(0, n)
        return tuple(imgs[sh.index[sh.edge(0, 0, j, jp)]][1] for j, jp in _pairs(n))

    def ops(k):
        out = [delta_map(k, i) for i in range(k + 1)] if k >= 1 else []
        if k + 1 <= D:
            out += [sigma_map(k, i) for i in range(k + 1)]
        return out

    rows = _bijection_report(
        {m: T[(m, 0)] for m in range(D + 1)}, NC.levels, row_map,
        lambda th, x: T.act(th, None, x), NC.act, ops,
    )
    cols = _bijection_report(
        {n: T[(0, n)] for n in range(D + 1)}, NCx.levels, col_map,
        lambda th, x: T.act(None, th, x), NCx.act, ops,
    )
    return {"nerve": rows, "core": cols, "ok": rows["ok"] and cols["ok"]}


def functor_naturality_check(F: FiniteFunctor, D: int = 3) -> bool:
    """Post-composition with F commutes with the comparison ``t^! N C -> B^css C``."""
    TC, TD = t_pling(F.source, D), t_pling(F.target, D)
    push = lambda seq: tuple(tuple(F(f) for f in s) for s in seq)
    for key, xs in TC.levels.items():
        targets = set(TD[key])
        for x in xs:
            pushed = (x[0], x[1], push(x[2]))
            if pushed not in targets:
                return False
            m, n, Fs, etas = _to_rezk(x)
            if _to_rezk(pushed) != (m, n, push(Fs), push(etas)):
                return False
    return True


def nerve_product_check(C: FiniteCategory, Dc: FiniteCategory, D: int = 3) -> bool:
    """``N(C x D) -> N C x N D`` is a level-wise bijection commuting with operators."""
    NP = nerve(product_category(C, Dc), D)
    NX = product_sset(nerve(C, D), nerve(Dc, D))
    phi = lambda x: (tuple(f for f, _ in x), tuple(g for _, g in x))

    def ops(k):
        out = [delta_map(k, i) for i in range(k + 1)] if k >= 1 else []
        return out + ([sigma_map(k, i) for i in range(k + 1)] if k + 1 <= D else [])

    return _bijection_report(NP.levels, NX.levels, phi, NP.act, NX.act, ops)["ok"]


# ---------------------------------------------------------------------------
# Grothendieck construction over a finite groupoid


def grothendieck(G: FiniteCategory, values: dict, action, D: int = 2) -> TruncatedSimplicialSet:
    """Total simplicial set of ``c -> values[c]``: pairs (simplex of N G, simplex over its first vertex).

    ``action(g, x)`` transports a simplex along ``g``; faces that drop the
    first vertex transport along the first arrow.
    """
    NG = nerve(G, D)
    idx0 = _pair_index
    base = lambda c: G.src[c[0]]
    levels = {m: [(c, x) for c in NG[m] for x in values[base(c)][m]] for m in range(D + 1)}

    def act(theta, cx):
        c, x = cx
        m = _DIM_OF_PAIRS[len(c)]
        y = values[base(c)].act(theta, x)
        g = c[idx0(m)[(0, theta[0])]]
        return (NG.act(theta, c), action(g, y))

    return TruncatedSimplicialSet(levels, act, f"int {G.name}")
