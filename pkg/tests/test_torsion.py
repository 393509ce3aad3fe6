import itertools
import random

import pytest

from indexmap.dvr import RingConfig
from indexmap.errors import IllFormedMap
from indexmap.lattice import random_gl
from indexmap.linalg import Matrix, smith_over_dvr
from indexmap.torsion import (
    ModuleMap,
    TorsionModule,
    identity_map,
    is_admissible_monic,
    length,
    subquotient,
)

R2 = RingConfig(2)


def vec_mod(x, K):
    """Coefficients of an integral series element below t^K."""
    out = [0] * K
    if x.is_zero:
        return out
    for i, c in enumerate(x.digits):
        if x.v + i < K:
            out[x.v + i] = c
    return out


def flatten(col, K):
    return tuple(c for x in col for c in vec_mod(x, K))


def span_mod2(vectors):
    """All F_2 combinations of the vectors, as a set of tuples."""
    out = {tuple([0] * len(vectors[0]))} if vectors else set()
    for v in vectors:
        out |= {tuple((a + b) % 2 for a, b in zip(w, v)) for w in out}
    return out


def image_of_relations(P, K):
    n = P.nrows
    vecs = []
    for col in P.columns():
        for k in range(K):
            vecs.append(flatten([x.shift(k) for x in col], K))
    return span_mod2(vecs)


def brute_length(P, K):
    # |O^n / (P O^n + t^K O^n)| counted by enumeration at p = 2
    rel = image_of_relations(P, K)
    size = 2 ** (P.nrows * K) // len(rel)
    return size.bit_length() - 1


def brute_injective(f, K):
    Ps, Pt, A = f.source.presentation, f.target.presentation, f.matrix
    rel_s, rel_t = image_of_relations(Ps, K), image_of_relations(Pt, K)
    n = Ps.nrows
    for bits in itertools.product((0, 1), repeat=n * K):
        if bits in rel_s:
            continue
        x = [R2.from_coeffs(bits[i * K:(i + 1) * K]) for i in range(n)]
        col = Matrix(R2, [[e] for e in x])
        y = flatten((A @ col).col(0), K)
        if y in rel_t:
            return False
    return True


def test_length_examples():
    assert length(TorsionModule([3])) == 3
    assert length(TorsionModule([])) == 0
    assert length(TorsionModule([1, 2])) == 3
    assert TorsionModule.parse("[2,1]").exponents == (1, 2)


def test_multiplication_by_t_not_monic():
    M = TorsionModule.standard(R2, [3])
    f = ModuleMap(M, M, Matrix.parse(R2, "t"))
    ok, coker = is_admissible_monic(f)
    assert not ok and coker is None
    assert not brute_injective(f, 3)


def test_inclusion_is_monic():
    sub = TorsionModule.standard(R2, [2])  # tO/t^3 is O/t^2
    M = TorsionModule.standard(R2, [3])
    f = ModuleMap(sub, M, Matrix.parse(R2, "t"))
    ok, coker = is_admissible_monic(f)
    assert ok and coker.exponents == (1,)
    assert sub.length + coker.length == M.length == 3
    assert brute_injective(f, 3)


def test_identity_is_monic():
    M = TorsionModule.standard(R2, [1, 2])
    ok, coker = is_admissible_monic(identity_map(M))
    assert ok and coker.length == 0


def test_ill_formed_map():
    M = TorsionModule.standard(R2, [1])
    N = TorsionModule.standard(R2, [3])
    # 1: O/t -> O/t^3 does not kill t
    with pytest.raises(IllFormedMap):
        ModuleMap(M, N, Matrix.parse(R2, "1"))


def test_subquotient_examples():
    zero = TorsionModule.zero(R2)
    mid = TorsionModule.standard(R2, [2])
    top = TorsionModule.standard(R2, [3])
    chain = [ModuleMap(zero, mid, Matrix.parse(R2, "0")), ModuleMap(mid, top, Matrix.parse(R2, "t"))]
    assert subquotient(chain, 0, 2).exponents == (3,)
    assert subquotient(chain, 1, 2).exponents == (1,)
    assert subquotient(chain, 1, 1).length == 0


def test_length_matches_enumeration():
    rng = random.Random(21)
    checked = 0
    while checked < 40:
        n = rng.randint(1, 2)
        P = Matrix(R2, [[R2.random_element(rng, 0, 2, nonzero=False) for _ in range(n)] for _ in range(n)])
        d = P.det()
        if d.is_zero or d.v > 6 or d.v == 0:
            continue
        M = TorsionModule.from_presentation(P)
        assert M.length == brute_length(P, d.v) == d.v
        checked += 1


def test_random_monics_match_enumeration():
    rng = random.Random(22)
    checked = 0
    while checked < 25:
        Pt = Matrix(R2, [[R2.random_element(rng, 0, 2, nonzero=False) for _ in range(2)] for _ in range(2)])
        d = Pt.det()
        if d.is_zero or not 1 <= d.v <= 4:
            continue
        A = Matrix(R2, [[R2.random_element(rng, 0, 2, nonzero=False) for _ in range(2)] for _ in range(2)])
        # source presentation: relations killed by A inside target
        src = TorsionModule.from_presentation(Matrix.diag(R2, [R2.pi(d.v), R2.pi(d.v)]))
        f = ModuleMap(src, TorsionModule.from_presentation(Pt), A)
        ok, coker = is_admissible_monic(f)
        assert ok == brute_injective(f, d.v)
        if ok:
            assert f.source.length + coker.length == f.target.length
        checked += 1


def test_smith_exponents_gl_invariant():
    rng = random.Random(23)
    ring = RingConfig(3)
    for _ in range(30):
        P = Matrix(ring, [[ring.random_element(rng, 0, 2, nonzero=False) for _ in range(3)] for _ in range(3)])
        if P.det().is_zero:
            continue
        g, h = random_gl(ring, 3, rng, bound=0), random_gl(ring, 3, rng, bound=0)
        assert smith_over_dvr(g @ P @ h).exponents == smith_over_dvr(P).exponents
