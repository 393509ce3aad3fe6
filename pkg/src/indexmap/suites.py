"""Seeded property suites and random instance generation.

Every case draws from its own ``random.Random`` seeded by
``"<seed>:<suite>:<case>"``, so a failing case replays on its own.  A case
that runs out of p-adic digits is retried with doubled precision, at most
four times, before it is reported as unresolved.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field

from .diagram import (
    LatticeDiagram,
    check_contraction_conditions,
    designed_violation,
    extend_to_glued,
    format_diagram,
    idx_via_splitting,
    pre_index,
    pre_index_by_objects,
    random_contraction_instance,
    random_lattice_family,
    random_torsion_diagram,
    rigidity_check,
    section_contraction_check,
    telescoping_holds,
)
from .dvr import RingConfig
from .errors import ConditionViolated, PrecisionExhausted, TreeNotCollapsible, UnknownSuite
from .lattice import (
    Lattice,
    index_of_automorphism,
    leq,
    quotient,
    random_gl,
    random_lattice,
    rel_index,
    sup,
    inf,
    transition,
)
from .linalg import Matrix, det, smith_over_dvr
from .poset import BasedPoset, admissible_trees, b_poset, random_based_poset
from .schain import (
    GroupTuple,
    a_n_comparison,
    alpha_transport_holds,
    cocycle_check,
    index_of_chain,
    l_map,
    random_chain,
)
from . import simplicial as simp

PRNG = "python-random-MT19937"
SCHEMA_VERSION = 1
MAX_RETRIES = 4


@dataclass
class RunConfig:
    """Knobs shared by every suite; ``None`` means the suite's own default."""

    p: int | None = None
    ring: str = "series"
    prec: int = 24
    n: int | None = None
    bound: int = 3
    cases: int | None = None
    seed: int = 0
    degree: int = 4

    def __post_init__(self):
        for name in ("prec", "bound", "degree"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.cases is not None and self.cases < 0:
            raise ValueError("cases must be nonnegative")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be positive")

    def ring_config(self, p: int | None = None, prec: int | None = None) -> RingConfig:
        return RingConfig(p or self.p or 2, self.ring, prec or self.prec)


@dataclass
class SuiteReport:
    suite: str
    config: dict
    cases: int = 0
    failures: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)
    elapsed_ms: int = 0
    prng: str = PRNG
    schema: int = SCHEMA_VERSION
    parts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.unresolved

    @property
    def status(self) -> str:
        if self.failures:
            return "failed"
        return "precision" if self.unresolved else "ok"

    def to_json(self) -> dict:
        out = asdict(self)
        out["status"] = self.status
        return out

    def to_text(self) -> str:
        lines = [f"{self.suite}: {self.status} ({self.cases} cases, {len(self.failures)} failures, {self.elapsed_ms} ms)"]
        for part in self.parts:
            lines.append("  " + SuiteReport(**{k: v for k, v in part.items() if k != "status"}).to_text())
        for f in self.failures[:10]:
            lines.append(f"  FAIL case {f.get('case')}: {f.get('reason')}")
        for u in self.unresolved[:10]:
            lines.append(f"  UNRESOLVED case {u.get('case')}: {u.get('reason')}")
        return "\n".join(lines)


def case_rng(seed: int, suite: str, case: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{case}")


def _run_cases(name: str, config: RunConfig, count: int, case_fn, report: SuiteReport):
    """Run ``case_fn(i, rng, prec)``; it returns None on success or a failure dict."""
    for i in range(count):
        prec = config.prec
        for attempt in range(MAX_RETRIES + 1):
            try:
                failure = case_fn(i, case_rng(config.seed, name, i), prec)
                break
            except PrecisionExhausted as exc:
                if attempt == MAX_RETRIES:
                    report.unresolved.append({"case": i, "reason": f"precision exhausted at {prec} digits: {exc}"})
                    failure = None
                    break
                prec *= 2
        report.cases += 1
        if failure:
            failure.setdefault("case", i)
            report.failures.append(failure)


def _count(config: RunConfig, default: int) -> int:
    return default if config.cases is None else config.cases


# ---------------------------------------------------------------------------
# suites


def suite_additivity(config: RunConfig, report: SuiteReport):
    primes = (config.p,) if config.p else (2, 5)
    ranks = (config.n,) if config.n else (1, 2, 3)
    combos = list(itertools.product(primes, ranks))

    def case(i, rng, prec):
        p, n = combos[i % len(combos)]
        ring = config.ring_config(p, prec)
        g1, g2 = random_gl(ring, n, rng, config.bound), random_gl(ring, n, rng, config.bound)
        lhs = index_of_automorphism(g1) + index_of_automorphism(g2)
        rhs = index_of_automorphism(g1 @ g2)
        if lhs != rhs:
            return {"reason": f"Index(g1)+Index(g2)={lhs} but Index(g1 g2)={rhs}",
                    "g1": g1.to_text(), "g2": g2.to_text(), "p": p}
        return None

    _run_cases("additivity", config, _count(config, 500), case, report)


def _min_minor_valuation(M: Matrix, k: int):
    best = None
    for rows in itertools.combinations(range(M.nrows), k):
        for cols in itertools.combinations(range(M.ncols), k):
            d = det(M.submatrix(rows, cols))
            if not d.is_zero and (best is None or d.v < best):
                best = d.v
    return best


def suite_oracle(config: RunConfig, report: SuiteReport):
    n = config.n or 2
    total = _count(config, 500)
    smith_cases = min(total, 200)

    def case(i, rng, prec):
        ring = config.ring_config(None, prec)
        L0, L1 = random_lattice(ring, n, rng, config.bound), random_lattice(ring, n, rng, config.bound)
        N = sup(L0, L1)
        by_det = rel_index(L0, L1)
        by_smith = quotient(L0, N).length - quotient(L1, N).length
        if by_det != by_smith:
            return {"reason": f"det route {by_det} != Smith route {by_smith}",
                    "L0": L0.basis.to_text(), "L1": L1.basis.to_text()}
        if i < smith_cases:
            r, c = rng.randint(1, 4), rng.randint(1, 4)
            A = Matrix(ring, [[ring.random_element(rng, 0, 3, nonzero=False) for _ in range(c)] for _ in range(r)])
            exps = smith_over_dvr(A, require_full_rank=False).exponents
            for k in range(1, min(r, c) + 1):
                want = _min_minor_valuation(A, k)
                got = sum(exps[:k]) if k <= len(exps) else None
                if want != got:
                    return {"reason": f"Smith prefix sum {got} != least {k}-minor valuation {want}",
                            "matrix": A.to_text()}
        return None

    _run_cases("oracle", config, total, case, report)


def _scaled_witness(L: Lattice, s: int) -> Lattice:
    return Lattice(L.basis.shift(s))


def suite_grassmannian(config: RunConfig, report: SuiteReport, witnesses: int = 50):
    n = config.n or 2

    def case(i, rng, prec):
        ring = config.ring_config(None, prec)
        L0, L1 = random_lattice(ring, n, rng, config.bound), random_lattice(ring, n, rng, config.bound)
        S, I = sup(L0, L1), inf(L0, L1)
        if not (leq(I, L0) and leq(I, L1) and leq(L0, S) and leq(L1, S)):
            return {"reason": "inf <= L_i <= sup fails", "L0": L0.basis.to_text(), "L1": L1.basis.to_text()}
        for _ in range(witnesses):
            M = random_lattice(ring, n, rng, config.bound)
            # tightest pi-power rescalings of M above both and below both
            up = min(transition(L0, M).min_valuation(), transition(L1, M).min_valuation())
            W = _scaled_witness(M, up)
            if not (leq(L0, W) and leq(L1, W)):
                return {"reason": "witness construction failed", "witness": W.basis.to_text()}
            if not leq(S, W):
                return {"reason": "sup is not below a common over-lattice", "witness": W.basis.to_text()}
            down = -min(transition(M, L0).min_valuation(), transition(M, L1).min_valuation())
            V = _scaled_witness(M, down)
            if not (leq(V, L0) and leq(V, L1)):
                return {"reason": "witness construction failed", "witness": V.basis.to_text()}
            if not leq(V, I):
                return {"reason": "a common sub-lattice is not below inf", "witness": V.basis.to_text()}
        return None

    _run_cases("grassmannian", config, _count(config, 300), case, report)


def suite_rigidity(config: RunConfig, report: SuiteReport):
    n = config.n or 2

    def case(i, rng, prec):
        ring = config.ring_config(None, prec)
        I = random_based_poset(rng, rng.randint(3, 6), rng.randint(1, 3))
        lattices, base = random_lattice_family(I, ring, rng, n, 1)
        F = LatticeDiagram(I, lattices).to_torsion(base)
        F.validate()
        target = pre_index(F)
        if pre_index_by_objects(F) != target:
            return {"reason": "object formula disagrees with quotient formula", "diagram": format_diagram(F)}
        for tree in admissible_trees(I.poset):
            try:
                value = idx_via_splitting(F, tree)
            except TreeNotCollapsible:
                continue
            if value != target:
                return {"reason": f"tree {sorted(tree)} gives {value}, expected {target}", "diagram": format_diagram(F)}
        G1, inc1, F1, ext1 = extend_to_glued(I, lattices, base, spread="all")
        G2, inc2, F2, _ = extend_to_glued(G1, ext1, base)
        if not (rigidity_check(F, inc1, F1) and rigidity_check(F, inc1.then(inc2), F2)):
            return {"reason": "pre-index changes along I -> I^B -> (I^B)^B", "diagram": format_diagram(F)}
        B, _, _ = random_torsion_diagram(b_poset(2), ring, rng, n, 1)
        if not telescoping_holds(B):
            return {"reason": "telescoping identity fails on B[2]", "diagram": format_diagram(B)}
        return None

    _run_cases("rigidity", config, _count(config, 200), case, report)


def _permutation_matrices(ring: RingConfig, n: int):
    out = []
    for perm in itertools.permutations(range(n)):
        out.append(Matrix(ring, [[ring.one if perm[i] == j else ring.zero for j in range(n)] for i in range(n)]))
    return out


def suite_cocycle(config: RunConfig, report: SuiteReport):
    total = _count(config, 500)
    if total == 0:
        return
    ring = config.ring_config()
    S3 = _permutation_matrices(ring, 3)
    triples = list(itertools.product(S3, repeat=3))

    def exhaustive(i, rng, prec):
        gs = GroupTuple(triples[i])
        if not cocycle_check(gs):
            return {"reason": "cocycle identity fails on S3 triple", "g": [g.to_text() for g in gs.matrices]}
        return None

    _run_cases("cocycle-s3", config, len(triples), exhaustive, report)
    n = config.n or 2

    def random_case(i, rng, prec):
        r = config.ring_config(None, prec)
        gs = GroupTuple([random_gl(r, n, rng, config.bound) for _ in range(3)])
        if not cocycle_check(gs):
            return {"reason": "cocycle identity fails", "g": [g.to_text() for g in gs.matrices]}
        if not alpha_transport_holds(gs, random_lattice(r, n, rng, config.bound)):
            return {"reason": "alpha does not carry l_map(d0 g) onto d0 l_map(g)", "g": [g.to_text() for g in gs.matrices]}
        return None

    _run_cases("cocycle", config, total, random_case, report)


def identity_failures(x, key=lambda y: y) -> list:
    """Simplicial identities around an object with ``dim``, ``face`` and ``degeneracy``."""
    bad = []
    m = x.dim
    if m >= 2:
        for i, j in itertools.combinations(range(m + 1), 2):
            if key(x.face(j).face(i)) != key(x.face(i).face(j - 1)):
                bad.append(f"d{i}d{j}")
    for j in range(m + 1):
        y = x.degeneracy(j)
        for i in range(m + 2):
            if i in (j, j + 1):
                want = x
            elif m == 0:
                continue
            elif i < j:
                want = x.face(i).degeneracy(j - 1)
            else:
                want = x.face(i - 1).degeneracy(j)
            if key(y.face(i)) != key(want):
                bad.append(f"d{i}s{j}")
        for i in range(j + 1):
            if key(y.degeneracy(i)) != key(x.degeneracy(i).degeneracy(j + 1)):
                bad.append(f"s{i}s{j}")
    return bad


def suite_simplicial(config: RunConfig, report: SuiteReport):
    n = config.n or 2

    def case(i, rng, prec):
        ring = config.ring_config(None, prec)
        c = random_chain(ring, n, 4, rng, 1)
        gs = GroupTuple([random_gl(ring, n, rng, config.bound) for _ in range(4)])
        for obj in (c, gs):
            for k in range(obj.dim + 1):
                sub = obj
                for _ in range(k):
                    sub = sub.face(sub.dim)
                bad = identity_failures(sub)
                if bad:
                    return {"reason": f"{type(obj).__name__} identities fail: {bad[:3]}"}
        X = index_of_chain(c)
        for k in range(c.dim + 1):
            if X.face(k).invariants() != index_of_chain(c.face(k)).invariants():
                return {"reason": f"Index does not commute with d{k}", "chain": [L.basis.to_text() for L in c.lattices]}
            if X.degeneracy(k).invariants() != index_of_chain(c.degeneracy(k)).invariants():
                return {"reason": f"Index does not commute with s{k}"}
        bad = identity_failures(X, key=lambda y: y.invariants())
        if bad:
            return {"reason": f"S-chain identities fail: {bad[:3]}"}
        L = random_lattice(ring, n, rng, config.bound)
        img = l_map(gs, L)
        for k in range(1, gs.dim + 1):
            if l_map(gs.face(k), L) != img.face(k):
                return {"reason": f"l_map does not commute with d{k}"}
        # Segal shadow for the bar construction: the spine recovers the simplex
        spine = []
        for k in range(gs.dim):
            e = gs
            for _ in range(gs.dim - k - 1):
                e = e.face(e.dim)
            for _ in range(k):
                e = e.face(0)
            spine.append(e.matrices[0])
        if GroupTuple(spine) != gs:
            return {"reason": "bar construction spine does not recover the simplex"}
        return None

    _run_cases("simplicial", config, _count(config, 100), case, report)


def suite_an_compare(config: RunConfig, report: SuiteReport):
    n = config.n or 2

    def case(i, rng, prec):
        ring = config.ring_config(None, prec)
        c = random_chain(ring, n, 1 + i % 3, rng, 1)
        if not a_n_comparison(c):
            return {"reason": "A[n] and quotient diagrams disagree", "chain": [L.basis.to_text() for L in c.lattices]}
        return None

    _run_cases("an-compare", config, _count(config, 100), case, report)


APPENDIX_PRESETS = ("ordinal1", "ordinal2", "c2", "iso")


def suite_appendix(config: RunConfig, report: SuiteReport):
    if _count(config, 1) == 0:
        return
    D = config.degree
    checks = []
    for name in APPENDIX_PRESETS:
        C = simp.preset(name)
        checks.append((f"t^! vs Rezk on {name}", lambda C=C: simp.tpling_rezk_check(C, D)["ok"]))
        checks.append((f"nerve and core rows on {name}", lambda C=C: simp.lemma_pre_check(C, D)["ok"]))
    for k in (2, 3):
        checks.append((f"Segal for group C{k}", lambda k=k: simp.segal_check(simp.nerve(simp.cyclic_group(k), D))["ok"]))
    checks.append(("Segal rejects the boundary of Delta^2", lambda: not simp.segal_check(simp.boundary_simplex(2, D))["ok"]))
    ring = config.ring_config()
    rng = case_rng(config.seed, "appendix", 0)
    Ls = [random_lattice(ring, config.n or 2, rng, config.bound) for _ in range(3)]
    checks.append(("Gr tuples are 0-coskeletal", lambda: simp.coskeletal_check(simp.gr_tuples(Ls, min(D, 3)), 0)))
    for k in (1, 2):
        checks.append((f"Delta'[{k}] is 0-coskeletal", lambda k=k: simp.coskeletal_check(simp.delta_prime(k, min(D, 3)), 0)))

    def case(i, rng, prec):
        label, fn = checks[i]
        return None if fn() else {"reason": f"{label} failed"}

    _run_cases("appendix", config, len(checks), case, report)


def suite_lemma327(config: RunConfig, report: SuiteReport):
    total = _count(config, 100)
    if total == 0:
        return
    n = config.n or 2

    def violation(i, rng, prec):
        cond = "abcd"[i]
        try:
            check_contraction_conditions(designed_violation(cond))
        except ConditionViolated as exc:
            if exc.condition == cond:
                return None
            return {"reason": f"violation of ({cond}) reported as ({exc.condition})"}
        return {"reason": f"violation of ({cond}) was accepted"}

    _run_cases("lemma327-reject", config, 4, violation, report)

    def case(i, rng, prec):
        ring = config.ring_config(None, prec)
        inst = random_contraction_instance(rng, rng.randint(0, 3), rng.randint(1, 3))
        X, _, _ = random_torsion_diagram(inst.S, ring, rng, n, 1, cover_basepoints=False)
        Sp = BasedPoset(inst.S_prime, [inst.phi[inst.S.basepoints[0]]])
        Y, _, _ = random_torsion_diagram(Sp, ring, rng, n, 1)
        section_contraction_check(inst, [X], [Y])
        return None

    _run_cases("lemma327", config, total, case, report)


SUITES = {
    "additivity": suite_additivity,
    "oracle": suite_oracle,
    "grassmannian": suite_grassmannian,
    "rigidity": suite_rigidity,
    "cocycle": suite_cocycle,
    "simplicial": suite_simplicial,
    "an-compare": suite_an_compare,
    "appendix": suite_appendix,
    "lemma327": suite_lemma327,
}


def run_suite(name: str, config: RunConfig | None = None) -> SuiteReport:
    config = config or RunConfig()
    if name != "all" and name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    start = time.perf_counter()
    report = SuiteReport(name, asdict(config))
    if name == "all":
        for sub in SUITES:
            part = run_suite(sub, config)
            report.parts.append(part.to_json())
            report.cases += part.cases
            report.failures += [dict(f, suite=sub) for f in part.failures]
            report.unresolved += [dict(u, suite=sub) for u in part.unresolved]
    else:
        SUITES[name](config, report)
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report


# ---------------------------------------------------------------------------
# instance generation

GENERATORS = ("lattice", "chain", "group-tuple", "poset", "diagram")


def generate(kind: str, config: RunConfig | None = None) -> str:
    """A reproducible random instance in the owning module's text format."""
    config = config or RunConfig()
    rng = case_rng(config.seed, f"generate-{kind}", 0)
    ring = config.ring_config()
    n = config.n or 2
    if kind == "lattice":
        return random_lattice(ring, n, rng, config.bound).basis.to_text()
    if kind == "chain":
        c = random_chain(ring, n, 3, rng, 1)
        return "\n".join(L.basis.to_text() for L in c.lattices)
    if kind == "group-tuple":
        return "\n".join(random_gl(ring, n, rng, config.bound).to_text() for _ in range(3))
    if kind == "poset":
        return random_based_poset(rng, 5, 2).to_text()
    if kind == "diagram":
        I = random_based_poset(rng, 5, 2)
        lattices, base = random_lattice_family(I, ring, rng, n, 1)
        return format_diagram(LatticeDiagram(I, lattices), quotient_by=base)
    raise ValueError(f"unknown instance kind {kind!r}; choose from {GENERATORS}")
