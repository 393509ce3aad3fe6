import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from indexmap.dvr import RingConfig
from indexmap.errors import NotContained
from indexmap.lattice import Lattice, act, random_gl, random_lattice, standard_lattice
from indexmap.linalg import Matrix
from indexmap.schain import (
    GroupTuple,
    LatticeChain,
    LatticeTuple,
    SChainObject,
    a_n_comparison,
    alpha,
    alpha_transport_holds,
    cocycle_check,
    index_of_chain,
    index_of_tuple,
    index_of_tuple_direct,
    index_sum_matches,
    l_map,
    random_chain,
)
from indexmap.torsion import ModuleMap, TorsionModule


def diag_lattice(ring, exps):
    return Lattice(Matrix.diag(ring, [ring.pi(e) for e in exps]))


def leibniz_valuation(g):
    """v(det g) by a direct permutation expansion."""
    n = g.nrows
    total = g.ring.zero
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = g.ring.from_int(sign)
        for i in range(n):
            term = term * g[i, perm[i]]
        total = total + term
    return total.v


def test_chain_class_and_invariants(r2):
    c = LatticeChain([diag_lattice(r2, [2]), diag_lattice(r2, [1]), diag_lattice(r2, [0])])
    X = index_of_chain(c)
    assert X.class_vector() == (1, 1)
    assert X.invariants() == {(0, 1): (1,), (0, 2): (2,), (1, 2): (1,)}


def test_diagonal_chain_by_hand(r3):
    exps = [[3, 2], [1, 2], [1, 0], [0, 0]]
    c = LatticeChain([diag_lattice(r3, e) for e in exps])
    inv = index_of_chain(c).invariants()
    for i, j in inv:
        expected = tuple(sorted(a - b for a, b in zip(exps[i], exps[j]) if a != b))
        assert inv[(i, j)] == expected


def test_chain_rejects_non_nested(r2):
    with pytest.raises(NotContained):
        LatticeChain([diag_lattice(r2, [0, 1]), diag_lattice(r2, [1, 0])])


def test_schain_rejects_non_injective(r2):
    Z = TorsionModule.zero(r2)
    M = TorsionModule.standard(r2, [1])
    N = TorsionModule.standard(r2, [2])
    first = ModuleMap(Z, M, Matrix.zeros(r2, 1, 1))
    # the zero map [1] -> [2] kills the generator
    bad = ModuleMap(M, N, Matrix.zeros(r2, 1, 1))
    with pytest.raises(NotContained):
        SChainObject([Z, M, N], [first, bad])


@pytest.mark.parametrize("seed", range(6))
def test_faces_commute_with_index(r2, seed):
    rng = random.Random(seed)
    c = random_chain(r2, 2, 3, rng)
    X = index_of_chain(c)
    for i in range(c.dim + 1):
        assert X.face(i).invariants() == index_of_chain(c.face(i)).invariants()
    for i in range(c.dim + 1):
        assert X.degeneracy(i).invariants() == index_of_chain(c.degeneracy(i)).invariants()


@pytest.mark.parametrize("seed", range(4))
def test_class_vector_matches_det_valuations(r3, seed):
    rng = random.Random(100 + seed)
    c = random_chain(r3, 2, 3, rng)
    vals = [leibniz_valuation(L.basis) for L in c.lattices]
    assert index_of_chain(c).class_vector() == tuple(vals[k] - vals[k + 1] for k in range(c.dim))


def test_tuple_faces(r2):
    Ls = [diag_lattice(r2, [i, 0]) for i in range(4)]
    t = LatticeTuple(Ls)
    assert t.face(0).lattices == tuple(Ls[1:])
    assert t.face(2).lattices == (Ls[0], Ls[1], Ls[3])
    assert t.degeneracy(1).lattices == (Ls[0], Ls[1], Ls[1], Ls[2], Ls[3])
    for i, j in itertools.combinations(range(4), 2):
        assert t.face(j).face(i) == t.face(i).face(j - 1)


def permutation_matrices(ring, n):
    out = []
    for perm in itertools.permutations(range(n)):
        rows = [[ring.one if perm[i] == j else ring.zero for j in range(n)] for i in range(n)]
        out.append(Matrix(ring, rows))
    return out


def test_cocycle_all_s3_triples(r2):
    S3 = permutation_matrices(r2, 3)
    count = 0
    for triple in itertools.product(S3, repeat=3):
        assert cocycle_check(GroupTuple(triple))
        count += 1
    assert count == 216


@pytest.mark.parametrize("seed", range(8))
def test_cocycle_random_gl2(r2, seed):
    rng = random.Random(seed)
    gs = GroupTuple([random_gl(r2, 2, rng, bound=2) for _ in range(3)])
    assert cocycle_check(gs)


def test_alpha_low_degree(r2):
    g1 = Matrix.parse(r2, "1, t; 0, 1")
    g2 = Matrix.parse(r2, "t, 0; 0, 1")
    a = alpha(GroupTuple([g1, g2]))
    assert a[0] == g1
    assert a[1] == g2 @ g1 @ g2.inverse()


@pytest.mark.parametrize("seed", range(5))
def test_bar_simplicial_identities(r3, seed):
    rng = random.Random(seed)
    gs = GroupTuple([random_gl(r3, 2, rng, bound=1) for _ in range(4)])
    n = gs.dim
    for i, j in itertools.combinations(range(n + 1), 2):
        assert gs.face(j).face(i) == gs.face(i).face(j - 1)
    for i in range(n + 1):
        assert gs.degeneracy(i).face(i) == gs
        assert gs.degeneracy(i).face(i + 1) == gs


@pytest.mark.parametrize("seed", range(5))
def test_l_map_commutes_with_positive_faces(r2, seed):
    rng = random.Random(seed)
    gs = GroupTuple([random_gl(r2, 2, rng, bound=2) for _ in range(3)])
    L = random_lattice(r2, 2, rng)
    img = l_map(gs, L)
    for i in range(1, gs.dim + 1):
        assert l_map(gs.face(i), L) == img.face(i)
    for i in range(gs.dim + 1):
        assert l_map(gs.degeneracy(i), L) == img.degeneracy(i)
    assert alpha_transport_holds(gs, L)


def test_l_map_fails_at_d0(r2):
    g = Matrix.parse(r2, "t, 0; 0, 1")
    gs = GroupTuple([g, Matrix.identity(r2, 2)])
    L = standard_lattice(r2, 2)
    assert l_map(gs.face(0), L) != l_map(gs, L).face(0)
    assert alpha_transport_holds(gs, L)


def test_index_of_tuple_diag(r2):
    g = Matrix.parse(r2, "t, 0; 0, 1")
    L = standard_lattice(r2, 2)
    t = LatticeTuple([L, act(g, L), act(g @ g, L)])
    assert index_of_tuple(t) == (-1, -1)
    assert index_of_tuple_direct(t) == (-1, -1)


@pytest.mark.parametrize("seed", range(6))
def test_index_of_tuple_matches_det(r2, seed):
    rng = random.Random(seed)
    gs = GroupTuple([random_gl(r2, 2, rng, bound=2) for _ in range(3)])
    L = random_lattice(r2, 2, rng)
    comps = index_of_tuple(l_map(gs, L))
    assert comps == tuple(-leibniz_valuation(g) for g in gs.matrices)
    assert index_sum_matches(gs, L)


def test_nested_tuple_agrees_with_chain(r3):
    rng = random.Random(9)
    c = random_chain(r3, 2, 3, rng)
    assert index_of_tuple(c) == index_of_chain(c).class_vector()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_a_n_comparison(seed, n):
    ring = RingConfig(2, "series", 24)
    c = random_chain(ring, 2, n, random.Random(seed))
    assert a_n_comparison(c)


def test_padic_chain():
    ring = RingConfig(3, "padic", 20)
    c = LatticeChain([diag_lattice(ring, [2, 1]), diag_lattice(ring, [1, 1]), diag_lattice(ring, [0, 0])])
    X = index_of_chain(c)
    assert X.class_vector() == (1, 2)
    assert X.face(0).class_vector() == (2,)
