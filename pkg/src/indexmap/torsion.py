"""Finitely generated torsion O-modules given by square presentations.

A module is ``O^n / P O^n`` for a nonsingular integral ``P``; its class in
K_0 is the length, the sum of the Smith exponents of ``P``.
"""
from __future__ import annotations

from .dvr import RingConfig
from .errors import IllFormedMap, NotContained, ParseError
from .linalg import Matrix, hermite_over_dvr, smith_over_dvr


class TorsionModule:
    """Direct sum of ``O/pi^a`` over ``exponents``, optionally with a presentation."""

    def __init__(self, exponents, presentation: Matrix | None = None):
        exps = tuple(sorted(int(a) for a in exponents if int(a) != 0))
        if any(a < 0 for a in exps):
            raise ValueError("exponents must be nonnegative")
        if presentation is not None:
            if not presentation.is_square() or not presentation.is_integral():
                raise ValueError("presentation must be square with entries in O")
            found = tuple(e for e in smith_over_dvr(presentation).exponents if e)
            if found != exps:
                raise ValueError(f"presentation has exponents {found}, not {exps}")
        self.exponents = exps
        self.presentation = presentation

    @classmethod
    def from_presentation(cls, P: Matrix) -> "TorsionModule":
        exps = smith_over_dvr(P).exponents
        m = object.__new__(cls)
        m.exponents = tuple(e for e in exps if e)
        m.presentation = P
        return m

    @classmethod
    def standard(cls, ring: RingConfig, exponents) -> "TorsionModule":
        """``O/pi^a1 + ... `` presented by a diagonal matrix."""
        exps = [a for a in exponents if a] or [0]
        return cls.from_presentation(Matrix.diag(ring, [ring.pi(a) for a in exps]))

    @classmethod
    def zero(cls, ring: RingConfig) -> "TorsionModule":
        return cls.standard(ring, [])

    @classmethod
    def parse(cls, text: str, ring: RingConfig | None = None) -> "TorsionModule":
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise ParseError(f"expected [a1,a2,...], got {text!r}")
        body = s[1:-1].strip()
        try:
            exps = [int(x) for x in body.split(",")] if body else []
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        if ring is not None:
            return cls.standard(ring, exps)
        return cls(exps)

    @property
    def length(self) -> int:
        return sum(self.exponents)

    @property
    def rank(self) -> int:
        """Number of generators of the presentation."""
        return self.presentation.nrows if self.presentation is not None else len(self.exponents)

    def is_zero(self) -> bool:
        return not self.exponents

    def to_text(self) -> str:
        return "[" + ",".join(str(a) for a in self.exponents) + "]"

    def __eq__(self, other):
        # isomorphism of modules: same elementary divisors
        return isinstance(other, TorsionModule) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"TorsionModule({self.to_text()})"

    __str__ = to_text


def length(M: TorsionModule) -> int:
    return M.length


def _need_presentation(M):
    if M.presentation is None:
        raise IllFormedMap("maps need modules with presentations")
    return M.presentation


class ModuleMap:
    """Map ``O^n/P_s -> O^m/P_t`` induced by an m x n integral matrix."""

    def __init__(self, source: TorsionModule, target: TorsionModule, matrix: Matrix):
        Ps, Pt = _need_presentation(source), _need_presentation(target)
        if matrix.shape != (Pt.nrows, Ps.nrows):
            raise IllFormedMap(f"matrix shape {matrix.shape} does not match {Pt.nrows}x{Ps.nrows}")
        if not matrix.is_integral():
            raise IllFormedMap("map matrix must have entries in O")
        # A P_s must land in P_t O^m, i.e. adj(P_t) A P_s divisible by det P_t
        d = Pt.det().v
        test = Pt.adjugate() @ matrix @ Ps
        if any(x.valuation() < d for row in test.rows for x in row):
            raise IllFormedMap("matrix does not respect the relations")
        self.source = source
        self.target = target
        self.matrix = matrix

    def compose(self, before: "ModuleMap") -> "ModuleMap":
        """``self o before``; composites of well-defined maps need no recheck."""
        if before.target.presentation != self.source.presentation:
            raise IllFormedMap("maps are not composable")
        f = object.__new__(ModuleMap)
        f.source, f.target, f.matrix = before.source, self.target, self.matrix @ before.matrix
        return f

    def cokernel(self) -> TorsionModule:
        Pt = self.target.presentation
        return TorsionModule.from_presentation(hermite_over_dvr(self.matrix.hstack(Pt)))

    def is_injective(self) -> bool:
        return self.source.length == self.target.length - self.cokernel().length

    def __repr__(self):
        return f"ModuleMap({self.source} -> {self.target}: {self.matrix.to_text()})"


def identity_map(M: TorsionModule) -> ModuleMap:
    P = _need_presentation(M)
    f = object.__new__(ModuleMap)
    f.source, f.target, f.matrix = M, M, Matrix.identity(P.ring, P.nrows)
    return f


def is_admissible_monic(f: ModuleMap):
    """Return ``(True, cokernel)`` for an injective map, else ``(False, None)``."""
    coker = f.cokernel()
    if f.source.length == f.target.length - coker.length:
        return True, coker
    return False, None


def subquotient(chain, i: int, j: int) -> TorsionModule:
    """Cokernel of ``X_i -> X_j`` along a chain of maps ``X_0 -> X_1 -> ...``.

    ``chain[k]`` is the map ``X_k -> X_{k+1}``.
    """
    if not 0 <= i <= j <= len(chain):
        raise IndexError(f"bad stages {i}, {j} for a chain of length {len(chain)}")
    X = chain[i].source if i < len(chain) else chain[-1].target
    if i == j:
        return TorsionModule.zero(X.presentation.ring)
    f = chain[i]
    for k in range(i + 1, j):
        f = chain[k].compose(f)
    ok, coker = is_admissible_monic(f)
    if not ok:
        raise NotContained(f"stage {i} does not inject into stage {j}")
    return coker
