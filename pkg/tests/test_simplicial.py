import pytest

from indexmap.dvr import RingConfig
from indexmap.errors import TooLarge
from indexmap.lattice import Lattice, act
from indexmap.linalg import Matrix
from indexmap.simplicial import (
    FiniteCategory,
    FiniteFunctor,
    FiniteGroupoid,
    boundary_simplex,
    contractible_groupoid,
    core,
    coskeletal_check,
    coskeletal_zero,
    cyclic_group,
    delta_prime,
    discrete,
    functor_naturality_check,
    gr_tuples,
    grothendieck,
    hom_into_2coskeletal,
    iota_star,
    tpling_rezk_check,
    lemma_pre_check,
    nerve,
    nerve_product_check,
    ordinal,
    p_star,
    product_sset,
    rezk,
    segal_check,
    standard_simplex,
    t_pling,
    t_shriek,
    walking_isomorphism,
)

FOUR = [ordinal(1), ordinal(2), cyclic_group(2), walking_isomorphism()]


def test_category_validation():
    with pytest.raises(ValueError):
        # composite lands outside the morphism set
        FiniteCategory(["*"], {0: ("*", "*"), 1: ("*", "*")}, {"*": 0}, lambda g, f: 2)
    with pytest.raises(ValueError):
        FiniteGroupoid(range(2), {(0, 0): (0, 0), (1, 1): (1, 1), (0, 1): (0, 1)}, {0: (0, 0), 1: (1, 1)},
                       lambda g, f: (f[0], g[1]))


def test_nerve_of_ordinal_one_is_delta_one():
    N = nerve(ordinal(1), 4)
    S = standard_simplex(1, 4)
    assert N.sizes() == S.sizes() == [m + 2 for m in range(5)]
    # a functor [m] -> [1] is its sequence of objects
    for m in range(5):
        objs = {tuple(N.vertex(x, k)[0][0] for k in range(m + 1)) for x in N[m]}
        assert objs == set(S[m])


def test_nerve_of_c2_counts():
    assert nerve(cyclic_group(2), 4).sizes() == [2**m for m in range(5)]


@pytest.mark.parametrize("C", FOUR + [cyclic_group(3), discrete(2)], ids=lambda C: C.name)
def test_nerve_audit(C):
    assert nerve(C, 4).audit() == []


@pytest.mark.parametrize("C", FOUR, ids=lambda C: C.name)
def test_nerve_is_two_coskeletal(C):
    assert coskeletal_check(nerve(C, 4), 2)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_delta_prime_counts_and_coskeleton(n):
    X = delta_prime(n, 3)
    assert X.sizes() == [(n + 1) ** (m + 1) for m in range(4)]
    assert coskeletal_check(X, 0)
    assert X.audit() == []
    # vertex sequences identify it with the 0-coskeletal set on n+1 points
    Y = coskeletal_zero(range(n + 1), 3)
    for m in range(4):
        verts = {tuple(X.vertex(x, k)[0][0] for k in range(m + 1)) for x in X[m]}
        assert verts == set(Y[m])


def test_delta_zero_prime_is_point():
    assert delta_prime(0, 4).sizes() == [1] * 5


def test_delta_one_not_zero_coskeletal():
    assert not coskeletal_check(standard_simplex(1, 3), 0)
    assert coskeletal_check(standard_simplex(1, 3), 1)


def test_hom_from_delta_one_counts_morphisms():
    for C in FOUR:
        maps = hom_into_2coskeletal(standard_simplex(1, 2), nerve(C, 2))
        assert len(maps) == len(C.morphisms)


def test_budget_enforced():
    with pytest.raises(TooLarge):
        hom_into_2coskeletal(t_shriek(1, 1), nerve(cyclic_group(3), 2), budget=3)


def test_t_pling_c2_column():
    T = t_pling(cyclic_group(2), 4)
    assert [len(T[(0, n)]) for n in range(5)] == [2**n for n in range(5)]


@pytest.mark.parametrize("C", FOUR, ids=lambda C: C.name)
def test_t_pling_row_is_nerve(C):
    T = t_pling(C, 4)
    assert [len(T[(m, 0)]) for m in range(5)] == nerve(C, 4).sizes()


def test_t_pling_of_point():
    T = t_pling(discrete(1), 3)
    assert set(T.sizes().values()) == {1}


@pytest.mark.parametrize("C", FOUR, ids=lambda C: C.name)
def test_bisimplicial_audits(C):
    assert t_pling(C, 3).audit() == []
    assert rezk(C, 3).audit() == []


@pytest.mark.parametrize("C", FOUR, ids=lambda C: C.name)
def test_tpling_matches_rezk(C):
    report = tpling_rezk_check(C, 4)
    assert report["ok"], report
    assert len(report["levels"]) == 15


@pytest.mark.parametrize("C", [ordinal(1), ordinal(2), cyclic_group(2), discrete(2)], ids=lambda C: C.name)
def test_lemma_pre(C):
    report = lemma_pre_check(C, 4)
    assert report["ok"], report


def test_lemma_pre_c2_column_sizes():
    report = lemma_pre_check(cyclic_group(2), 4)
    assert [report["core"]["levels"][n]["size"] for n in range(5)] == [2**n for n in range(5)]


@pytest.mark.parametrize("C", [ordinal(2), cyclic_group(2)], ids=lambda C: C.name)
def test_rezk_column_is_core_nerve(C):
    col = iota_star(2, rezk(C, 4))
    Ncore = nerve(core(C), 4)
    for n in range(5):
        chains = {(Fs[0][0], tuple(e[0] for e in etas)) for _, _, Fs, etas in col[n]}
        pairs = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
        spines = {(x[0], tuple(x[pairs.index((j, j + 1))] for j in range(n))) for x in Ncore[n]}
        assert len(chains) == len(col[n])
        assert chains == spines


def test_iota_p_star_roundtrip():
    X = nerve(ordinal(2), 3)
    Y = iota_star(1, p_star(1, X))
    assert Y.sizes() == X.sizes()
    for m in range(4):
        assert [y[2] for y in Y[m]] == list(X[m])
    for y in Y[2]:
        assert Y.face(2, 1, y)[2] == X.face(2, 1, y[2])
    assert p_star(1, X).audit() == []


def test_p_star_of_point():
    P = p_star(2, standard_simplex(0, 3))
    assert set(P.sizes().values()) == {1}


def test_nerve_preserves_products():
    assert nerve_product_check(ordinal(1), ordinal(1), 3)
    assert nerve_product_check(cyclic_group(2), ordinal(1), 3)


def test_product_of_delta_ones_matches_nerve():
    from indexmap.simplicial import product_category

    N = nerve(product_category(ordinal(1), ordinal(1)), 3)
    P = product_sset(standard_simplex(1, 3), standard_simplex(1, 3))
    assert N.sizes() == P.sizes()


def test_functor_naturality():
    src, tgt = ordinal(1), ordinal(2)
    F = FiniteFunctor(src, tgt, {0: 0, 1: 2}, {(0, 0): (0, 0), (0, 1): (0, 2), (1, 1): (2, 2)})
    assert functor_naturality_check(F, 3)
    C2, C1 = cyclic_group(2), cyclic_group(1)
    G = FiniteFunctor(C2, C1, {"*": "*"}, {0: 0, 1: 0})
    assert functor_naturality_check(G, 3)


def test_segal():
    for k in (2, 3):
        report = segal_check(nerve(cyclic_group(k), 4))
        assert report["ok"] and report["reduced"]
    assert segal_check(nerve(ordinal(2), 4))["ok"]
    bad = segal_check(boundary_simplex(2, 3))
    assert not bad["ok"] and bad["levels"][2] is False


def lattices_2d():
    ring = RingConfig(2, "series", 24)
    d = lambda a, b: Lattice(Matrix.diag(ring, [ring.pi(a), ring.pi(b)]))
    return ring, [d(0, 0), d(1, 0), d(0, 1)]


def test_gr_tuples_zero_coskeletal():
    _, Ls = lattices_2d()
    X = gr_tuples(Ls, 3)
    assert X.sizes() == [3 ** (m + 1) for m in range(4)]
    assert coskeletal_check(X, 0)
    assert X.audit() == []


def test_grothendieck_constant_is_product():
    G = cyclic_group(2)
    K = standard_simplex(1, 2)
    total = grothendieck(G, {"*": K}, lambda g, x: x, 2)
    P = product_sset(nerve(G, 2), K)
    assert set(total[2]) == set(P[2])
    assert total.sizes() == P.sizes()
    assert total.audit() == []


def test_grothendieck_contractible_on_lattices():
    ring, Ls = lattices_2d()
    g = Matrix.parse(ring, "0, 1; 1, 0")
    J = contractible_groupoid(1)
    A = Ls[1:]
    B = [act(g, L) for L in A]
    swap = {L: act(g, L) for L in A} | {L: act(g, L) for L in B}
    values = {0: gr_tuples(A, 2), 1: gr_tuples(B, 2)}

    def action(mor, x):
        return x if mor[0] == mor[1] else tuple(swap[L] for L in x)

    total = grothendieck(J, values, action, 2)
    # chains of objects times tuples over the first object
    assert total.sizes() == [2 ** (m + 1) * 2 ** (m + 1) for m in range(3)]
    assert total.audit() == []
    proj = {c for c, _ in total[2]}
    assert proj == set(nerve(J, 2)[2])
