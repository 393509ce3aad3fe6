"""Lattice chains and tuples, S-chains of torsion modules, and the bar construction.

Index sends a chain ``L_0 <= ... <= L_m`` to ``0 -> L_1/L_0 -> ... -> L_m/L_0``.
The map ``l_map`` sends ``(g_1, ..., g_n)`` to ``(L, g_1 L, g_2 g_1 L, ...)``;
it commutes with every face but d_0, and ``alpha`` measures that defect.
"""
from __future__ import annotations

from .errors import NotContained
from .lattice import (
    Lattice,
    act,
    index_of_automorphism,
    leq,
    quotient,
    rel_index,
    standard_lattice,
    sup,
    transition,
)
from .linalg import Matrix
from .poset import BasedPoset, Poset, a_poset, b_poset, t_to_a, t_to_b
from .torsion import ModuleMap, identity_map, is_admissible_monic


class LatticeTuple:
    """Any finite tuple of lattices in one ambient space."""

    def __init__(self, lattices):
        self.lattices = tuple(lattices)
        if not self.lattices:
            raise ValueError("empty tuple")
        L = self.lattices[0]
        if any(M.ring != L.ring or M.n != L.n for M in self.lattices):
            raise ValueError("lattices live in different ambient spaces")

    @property
    def dim(self) -> int:
        """Simplicial degree: one less than the number of entries."""
        return len(self.lattices) - 1

    def face(self, i: int):
        if not 0 <= i <= self.dim or self.dim == 0:
            raise IndexError(f"no face d_{i} in degree {self.dim}")
        return type(self)(self.lattices[:i] + self.lattices[i + 1:])

    def degeneracy(self, i: int):
        if not 0 <= i <= self.dim:
            raise IndexError(f"no degeneracy s_{i} in degree {self.dim}")
        return type(self)(self.lattices[: i + 1] + self.lattices[i:])

    def __eq__(self, other):
        return type(self) is type(other) and self.lattices == other.lattices

    def __hash__(self):
        return hash(self.lattices)

    def __len__(self):
        return len(self.lattices)

    def __getitem__(self, i):
        return self.lattices[i]

    def __repr__(self):
        return f"{type(self).__name__}({len(self.lattices)} lattices)"


class LatticeChain(LatticeTuple):
    """Nested lattices ``L_0 <= L_1 <= ... <= L_m``."""

    def __init__(self, lattices):
        super().__init__(lattices)
        for a, b in zip(self.lattices, self.lattices[1:]):
            if not leq(a, b):
                raise NotContained("chain is not nested")


class SChainObject:
    """``0 = X_0 -> X_1 -> ... -> X_m`` with admissible monics."""

    def __init__(self, modules, maps):
        self.modules = tuple(modules)
        self.maps = tuple(maps)
        self._cache = {}
        if len(self.maps) != len(self.modules) - 1:
            raise ValueError("need one map between consecutive modules")
        if not self.modules[0].is_zero():
            raise ValueError("an S-chain starts at 0")
        for f in self.maps:
            ok, _ = is_admissible_monic(f)
            if not ok:
                raise NotContained("S-chain maps must be injective")

    @property
    def dim(self) -> int:
        return len(self.modules) - 1

    def composite(self, i: int, j: int) -> ModuleMap:
        key = (i, j)
        if key in self._cache:
            return self._cache[key]
        f = identity_map(self.modules[i])
        for k in range(i, j):
            f = self.maps[k].compose(f)
        self._cache[key] = f
        return f

    def invariants(self) -> dict:
        """Elementary divisors of every subquotient ``X_j / X_i``."""
        if "inv" not in self._cache:
            self._cache["inv"] = {
                (i, j): self.composite(i, j).cokernel().exponents
                for i in range(self.dim + 1)
                for j in range(i + 1, self.dim + 1)
            }
        return dict(self._cache["inv"])

    def class_vector(self) -> tuple:
        return tuple(self.maps[k].cokernel().length for k in range(self.dim))

    def face(self, i: int) -> "SChainObject":
        if not 0 <= i <= self.dim or self.dim == 0:
            raise IndexError(f"no face d_{i} in degree {self.dim}")
        if i == 0:
            return self._quotient_by_first()
        mods = self.modules[:i] + self.modules[i + 1:]
        maps = list(self.maps)
        if i == self.dim:
            maps = maps[:-1]
        else:
            merged = maps[i].compose(maps[i - 1])
            maps = maps[: i - 1] + [merged] + maps[i + 1:]
        return SChainObject(mods, maps)

    def _quotient_by_first(self) -> "SChainObject":
        # X_j / X_1 for j >= 1; the first of these is zero, presented on X_1's generators
        quotients = [self.composite(1, j).cokernel() for j in range(1, self.dim + 1)]
        maps = [
            ModuleMap(quotients[k], quotients[k + 1], self.maps[k + 1].matrix) for k in range(len(quotients) - 1)
        ]
        return SChainObject(quotients, maps)

    def degeneracy(self, i: int) -> "SChainObject":
        M = self.modules[i]
        ident = ModuleMap(M, M, Matrix.identity(M.presentation.ring, M.rank))
        mods = self.modules[: i + 1] + self.modules[i:]
        maps = self.maps[:i] + (ident,) + self.maps[i:]
        return SChainObject(mods, maps)


def index_of_chain(c: LatticeChain) -> SChainObject:
    L0 = c[0]
    mods = [quotient(L0, L) for L in c.lattices]
    maps = [ModuleMap(mods[k], mods[k + 1], transition(c[k], c[k + 1])) for k in range(c.dim)]
    return SChainObject(mods, maps)


# ---------------------------------------------------------------------------
# bar construction of GL(V)


class GroupTuple:
    """An n-simplex ``(g_1, ..., g_n)`` of the bar construction."""

    def __init__(self, matrices, ring=None, n=None):
        self.matrices = tuple(matrices)
        if self.matrices:
            ring, n = self.matrices[0].ring, self.matrices[0].nrows
            for g in self.matrices:
                if g.ring != ring or g.shape != (n, n):
                    raise ValueError("group elements must share ring and rank")
        if ring is None or n is None:
            raise ValueError("the empty tuple needs ring and rank")
        self.ring, self.n = ring, n

    @property
    def dim(self) -> int:
        return len(self.matrices)

    def _new(self, mats):
        return GroupTuple(mats, self.ring, self.n)

    def face(self, i: int) -> "GroupTuple":
        g, m = self.matrices, self.dim
        if not 0 <= i <= m or m == 0:
            raise IndexError(f"no face d_{i} in degree {m}")
        if i == 0:
            return self._new(g[1:])
        if i == m:
            return self._new(g[:-1])
        return self._new(g[: i - 1] + (g[i] @ g[i - 1],) + g[i + 1:])

    def degeneracy(self, i: int) -> "GroupTuple":
        if not 0 <= i <= self.dim:
            raise IndexError(f"no degeneracy s_{i} in degree {self.dim}")
        one = Matrix.identity(self.ring, self.n)
        return self._new(self.matrices[:i] + (one,) + self.matrices[i:])

    def product(self) -> Matrix:
        """``g_m ... g_1``."""
        out = Matrix.identity(self.ring, self.n)
        for g in self.matrices:
            out = g @ out
        return out

    def __eq__(self, other):
        return isinstance(other, GroupTuple) and self.matrices == other.matrices and self.n == other.n

    def __hash__(self):
        return hash(self.matrices)

    def __repr__(self):
        return f"GroupTuple({[g.to_text() for g in self.matrices]})"


def l_map(gs: GroupTuple, L: Lattice) -> LatticeTuple:
    out = [L]
    for g in gs.matrices:
        out.append(act(g, out[-1]))
    return LatticeTuple(out)


def alpha(gs: GroupTuple):
    """Components ``(g_{k+1}...g_2) g_1 (g_{k+1}...g_2)^-1`` for k = 0..n-1.

    Component k carries entry k of ``l_map(d_0 g)`` onto entry k of
    ``d_0 l_map(g)``.
    """
    if gs.dim == 0:
        raise ValueError("alpha needs at least one group element")
    g = gs.matrices
    P = Matrix.identity(gs.ring, gs.n)
    out = [g[0]]
    for k in range(1, gs.dim):
        P = g[k] @ P
        out.append(P @ g[0] @ P.inverse())
    return tuple(out)


def cocycle_check(gs: GroupTuple) -> bool:
    """``(d_0 alpha_g) o alpha_{d_0 g} = alpha_{d_1 g}``, componentwise and exact."""
    if gs.dim < 2:
        raise ValueError("cocycle check needs at least two group elements")
    a, a0, a1 = alpha(gs), alpha(gs.face(0)), alpha(gs.face(1))
    return all(a[k + 1] @ a0[k] == a1[k] for k in range(len(a0)))


def alpha_transport_holds(gs: GroupTuple, L: Lattice) -> bool:
    src = l_map(gs.face(0), L)
    tgt = l_map(gs, L).face(0)
    return all(act(ak, src[k]) == tgt[k] for k, ak in enumerate(alpha(gs)))


# ---------------------------------------------------------------------------
# index of tuples via the tautological diagram


def tuple_diagram(t: LatticeTuple):
    """The tautological diagram on the entries of ``t`` and their sup."""
    from .diagram import LatticeDiagram

    top = sup(*t.lattices)
    elems = list(dict.fromkeys(t.lattices))
    if top not in elems:
        elems.append(top)
    rel = [(a, b) for a in elems for b in elems if a != b and leq(a, b)]
    based = BasedPoset(Poset(elems, rel), t.lattices, require_minimal=False)
    return LatticeDiagram(based, {L: L for L in elems})


def index_of_tuple(t: LatticeTuple) -> tuple:
    """Pre-index of the tautological diagram at the tuple's entries."""
    from .diagram import pre_index

    return pre_index(tuple_diagram(t))


def index_of_tuple_direct(t: LatticeTuple) -> tuple:
    return tuple(rel_index(a, b) for a, b in zip(t.lattices, t.lattices[1:]))


# ---------------------------------------------------------------------------
# A[n] versus the quotient chain


def a_n_comparison(c: LatticeChain) -> bool:
    """Compare the A[n]-diagram ``(x, y) -> L_x`` with ``(x, y) -> L_x / L_0``.

    Also pulls both the A[n] and the B[n] versions back to T[n].
    """
    from .diagram import LatticeDiagram, pre_index

    n = c.dim
    A = a_poset(n)
    lat = LatticeDiagram(A, {(x, y): c[x] for (x, y) in A.elements})
    lat.validate()
    quo = lat.to_torsion(c[0])
    quo.validate()
    if pre_index(lat) != pre_index(quo):
        return False
    offsets = {lat.class_of(x) - quo.class_of(x) for x in A.elements}
    if len(offsets) != 1:
        return False
    B = b_poset(n)
    bdiag = LatticeDiagram(B, {(i, j): c[j] for (i, j) in B.elements}).to_torsion(c[0])
    ta, tb = t_to_a(n), t_to_b(n)
    T = ta.source
    via_a = {x: quo.modules[ta(x)].exponents for x in T.elements}
    via_b = {x: bdiag.modules[tb(x)].exponents for x in T.elements}
    if via_a != via_b:
        return False
    return pre_index(quo) == pre_index(bdiag) == index_of_tuple_direct(c)


def random_chain(ring, n: int, length: int, rng, bound: int = 1) -> LatticeChain:
    from .lattice import random_lattice

    Ls = [random_lattice(ring, n, rng, bound)]
    for _ in range(length):
        Ls.append(sup(Ls[-1], random_lattice(ring, n, rng, bound)))
    return LatticeChain(Ls)


def index_sum_matches(gs: GroupTuple, L: Lattice | None = None) -> bool:
    """Components of ``index_of_tuple(l_map(g))`` sum to minus Index of the product."""
    L = L if L is not None else standard_lattice(gs.ring, gs.n)
    comps = index_of_tuple(l_map(gs, L))
    return sum(comps) == -index_of_automorphism(gs.product()) and all(
        c == -index_of_automorphism(g) for c, g in zip(comps, gs.matrices)
    )
