"""Lattices in F^n: canonical bases, order, joins and meets, relative index.

A lattice is stored as ``pi**(-shift) * H O^n`` with ``H`` the column
Hermite form of an integral basis.  ``shift`` is minus the least entry
valuation of any basis, which does not depend on the basis chosen, so
equal lattices have identical stored data.
"""
from __future__ import annotations

import enum
import random

from .dvr import RingConfig
from .errors import NotContained, SingularMatrix
from .linalg import Matrix, hermite_over_dvr
from .torsion import TorsionModule


class Relation(enum.Enum):
    EQUAL = "equal"
    LEQ = "leq"
    GEQ = "geq"
    INCOMPARABLE = "incomparable"


class Lattice:
    __slots__ = ("ring", "n", "hermite", "shift", "_basis")

    def __init__(self, basis: Matrix):
        if not basis.is_square():
            raise ValueError("a lattice basis must be square")
        if basis.det().is_zero:
            raise SingularMatrix("lattice basis is singular")
        shift = -basis.min_valuation()
        self.ring = basis.ring
        self.n = basis.nrows
        self.hermite = hermite_over_dvr(basis.shift(shift))
        self.shift = shift
        self._basis = None

    @classmethod
    def span(cls, generators: Matrix) -> "Lattice":
        """Lattice spanned by the columns of an n x m matrix (m >= n)."""
        shift = -generators.min_valuation()
        L = object.__new__(cls)
        L.ring = generators.ring
        L.n = generators.nrows
        L.hermite = hermite_over_dvr(generators.shift(shift))
        L.shift = shift
        L._basis = None
        return L

    @property
    def basis(self) -> Matrix:
        if self._basis is None:
            self._basis = self.hermite.shift(-self.shift)
        return self._basis

    def det_valuation(self) -> int:
        return sum(self.hermite[i, i].v for i in range(self.n)) - self.n * self.shift

    def dual(self) -> "Lattice":
        return Lattice(self.basis.inverse().transpose())

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.ring == other.ring
            and self.shift == other.shift
            and self.hermite == other.hermite
        )

    def __hash__(self):
        return hash((self.ring, self.shift, self.hermite))

    def __repr__(self):
        return f"Lattice({self.basis.to_text()!r})"

    def to_json(self):
        return {"basis": self.basis.to_json(), "shift": self.shift, "det_valuation": self.det_valuation()}


def standard_lattice(ring: RingConfig, n: int) -> Lattice:
    if n < 1:
        raise ValueError("rank must be positive")
    return Lattice(Matrix.identity(ring, n))


def _same_ambient(a: Lattice, b: Lattice):
    if a.ring != b.ring or a.n != b.n:
        raise ValueError("lattices live in different ambient spaces")


def act(g: Matrix, L: Lattice) -> Lattice:
    if g.det().is_zero:
        raise SingularMatrix("cannot act by a singular matrix")
    return Lattice(g @ L.basis)


def transition(L0: Lattice, L1: Lattice) -> Matrix:
    """``M1^-1 M0``: coordinates of L0's basis in L1's basis (exact)."""
    _same_ambient(L0, L1)
    return L1.basis.inverse() @ L0.basis


def leq(L0: Lattice, L1: Lattice) -> bool:
    return transition(L0, L1).is_integral()


def compare(L0: Lattice, L1: Lattice) -> Relation:
    a, b = leq(L0, L1), leq(L1, L0)
    if a and b:
        return Relation.EQUAL
    if a:
        return Relation.LEQ
    if b:
        return Relation.GEQ
    return Relation.INCOMPARABLE


def sup(*lattices: Lattice) -> Lattice:
    first = lattices[0]
    gens = first.basis
    for L in lattices[1:]:
        _same_ambient(first, L)
        gens = gens.hstack(L.basis)
    return Lattice.span(gens)


def inf(*lattices: Lattice) -> Lattice:
    return sup(*(L.dual() for L in lattices)).dual()


def quotient(L0: Lattice, L1: Lattice) -> TorsionModule:
    """``L1 / L0`` for ``L0 <= L1``."""
    T = transition(L0, L1)
    if not T.is_integral():
        raise NotContained("first lattice is not contained in the second")
    return TorsionModule.from_presentation(T)


def rel_index(L0: Lattice, L1: Lattice) -> int:
    """``[N/L0] - [N/L1]`` for any common over-lattice N."""
    _same_ambient(L0, L1)
    return L0.det_valuation() - L1.det_valuation()


def index_of_automorphism(g: Matrix) -> int:
    d = g.det()
    if d.is_zero:
        raise SingularMatrix("singular matrix has no index")
    return d.v


# ---------------------------------------------------------------------------
# random generators


def random_gl(ring: RingConfig, n: int, rng: random.Random, bound: int = 3, steps: int | None = None) -> Matrix:
    """Product of elementary matrices, pi-power diagonals and unit scalings.

    Every factor has a monomial determinant, so the product inverts exactly.
    """
    M = Matrix.identity(ring, n)
    steps = steps if steps is not None else 2 * n + 1
    for _ in range(steps):
        E = [list(r) for r in Matrix.identity(ring, n).rows]
        kind = rng.random()
        if kind < 0.5 and n > 1:
            i, j = rng.sample(range(n), 2)
            E[i][j] = ring.random_element(rng, -bound, bound, terms=2)
        elif kind < 0.85:
            for i in range(n):
                E[i][i] = ring.pi(rng.randint(-bound, bound))
        else:
            i = rng.randrange(n)
            E[i][i] = ring.from_int(rng.randrange(1, ring.p)) if ring.p > 2 else ring.one
        M = M @ Matrix._raw(ring, E)
    return M


def random_lattice(ring: RingConfig, n: int, rng: random.Random, bound: int = 3) -> Lattice:
    return Lattice(random_gl(ring, n, rng, bound))
