import random

import pytest

from indexmap.dvr import RingConfig
from indexmap.errors import NotContained
from indexmap.lattice import (
    Lattice,
    Relation,
    act,
    compare,
    index_of_automorphism,
    inf,
    leq,
    quotient,
    random_gl,
    random_lattice,
    rel_index,
    standard_lattice,
    sup,
)
from indexmap.linalg import Matrix


def diag_lattice(ring, exps):
    return Lattice(Matrix.diag(ring, [ring.pi(e) for e in exps]))


def test_standard(r2):
    O1 = standard_lattice(r2, 1)
    assert O1.basis == Matrix.identity(r2, 1)
    O2 = standard_lattice(r2, 2)
    assert act(Matrix.identity(r2, 2), O2) == O2


def test_act_examples(r2):
    O1 = standard_lattice(r2, 1)
    assert act(Matrix.parse(r2, "t"), O1) == diag_lattice(r2, [1])
    g = Matrix.diag(r2, ["t", "t^-1"])
    assert act(g, standard_lattice(r2, 2)) == diag_lattice(r2, [1, -1])
    L = random_lattice(r2, 3, random.Random(1))
    h = random_gl(r2, 3, random.Random(2))
    assert act(h, act(h.inverse(), L)) == L


def test_leq_examples(r2):
    O1 = standard_lattice(r2, 1)
    assert leq(diag_lattice(r2, [1]), O1)
    assert compare(standard_lattice(r2, 2), diag_lattice(r2, [1, -1])) is Relation.INCOMPARABLE
    assert compare(O1, O1) is Relation.EQUAL


def test_sup_inf_examples(r2):
    O1 = standard_lattice(r2, 1)
    big = diag_lattice(r2, [-2])
    assert sup(O1, big) == big and inf(O1, big) == O1
    a, O2 = diag_lattice(r2, [-1, 1]), standard_lattice(r2, 2)
    assert sup(a, O2) == diag_lattice(r2, [-1, 0])
    assert inf(a, O2) == diag_lattice(r2, [0, 1])
    assert sup(a, a) == a


def test_quotient_examples(r2):
    O1, O2 = standard_lattice(r2, 1), standard_lattice(r2, 2)
    q = quotient(diag_lattice(r2, [1]), O1)
    assert q.exponents == (1,) and q.length == 1
    q = quotient(diag_lattice(r2, [2, 1]), O2)
    assert q.exponents == (1, 2) and q.length == 3
    assert quotient(O2, O2).length == 0
    with pytest.raises(NotContained):
        quotient(O1, diag_lattice(r2, [1]))


def test_rel_index_examples(r2):
    O1 = standard_lattice(r2, 1)
    assert rel_index(O1, diag_lattice(r2, [-2])) == 2
    assert rel_index(O1, O1) == 0


def test_index_of_automorphism(r2):
    assert index_of_automorphism(Matrix.parse(r2, "t")) == 1
    assert quotient(act(Matrix.parse(r2, "t"), standard_lattice(r2, 1)), standard_lattice(r2, 1)).length == 1
    assert index_of_automorphism(Matrix.parse(r2, "1 + t")) == 0
    g1, g2 = Matrix.parse(r2, "t^2"), Matrix.parse(r2, "t^-1")
    assert (index_of_automorphism(g1), index_of_automorphism(g2), index_of_automorphism(g1 @ g2)) == (2, -1, 1)


RINGS = [RingConfig(2), RingConfig(3), RingConfig(5, "padic", 16)]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: f"{r.kind}-{r.p}")
def test_canonical_form_is_basis_independent(ring):
    rng = random.Random(11)
    for _ in range(30):
        L = random_lattice(ring, 3, rng)
        G = random_gl(ring, 3, rng, bound=0)  # determinant of valuation 0
        assert Lattice(L.basis @ G) == L


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: f"{r.kind}-{r.p}")
def test_partial_order_laws(ring):
    rng = random.Random(12)
    for _ in range(40):
        A, B, C = (random_lattice(ring, 2, rng) for _ in range(3))
        assert leq(A, A)
        if leq(A, B) and leq(B, A):
            assert A == B
        S = sup(A, B)
        if leq(A, B) and leq(B, S):
            assert leq(A, S)
        T = sup(A, B, C)
        assert leq(A, S) and leq(S, T) and leq(A, T)


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: f"{r.kind}-{r.p}")
def test_common_sub_and_over_lattices(ring):
    rng = random.Random(13)
    for _ in range(40):
        A, B = random_lattice(ring, 3, rng), random_lattice(ring, 3, rng)
        S, I = sup(A, B), inf(A, B)
        for L in (A, B):
            assert leq(I, L) and leq(L, S)
        N = sup(A, B, random_lattice(ring, 3, rng))
        assert leq(S, N)
        m = inf(A, B, random_lattice(ring, 3, rng))
        assert leq(m, I)


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: f"{r.kind}-{r.p}")
def test_rel_index_laws(ring):
    rng = random.Random(14)
    for _ in range(200 if ring.p == 2 else 60):
        A, B, C = (random_lattice(ring, 2, rng) for _ in range(3))
        assert rel_index(A, B) + rel_index(B, C) == rel_index(A, C)
        assert rel_index(A, B) + rel_index(B, C) + rel_index(C, A) == 0
        g = random_gl(ring, 2, rng)
        assert rel_index(act(g, A), act(g, B)) == rel_index(A, B)
        N = sup(A, B)
        assert rel_index(A, B) == quotient(A, N).length - quotient(B, N).length


def test_rel_index_is_length_for_nested_pairs():
    rng = random.Random(15)
    ring = RingConfig(2)
    for _ in range(200):
        L1 = random_lattice(ring, 3, rng)
        L0 = inf(L1, random_lattice(ring, 3, rng))
        assert rel_index(L0, L1) == quotient(L0, L1).length


def test_index_is_multiplicative():
    rng = random.Random(16)
    ring = RingConfig(3)
    for _ in range(50):
        g, h = random_gl(ring, 3, rng), random_gl(ring, 3, rng)
        assert index_of_automorphism(g @ h) == index_of_automorphism(g) + index_of_automorphism(h)
        L = standard_lattice(ring, 3)
        assert rel_index(L, act(g, L)) == -index_of_automorphism(g)
