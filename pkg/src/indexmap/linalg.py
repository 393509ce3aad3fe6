"""Matrices over F and O: determinants, inverses, Smith and Hermite forms.

Elimination is fraction-free: a pivot ``pi**e * u`` clears an entry ``b``
through ``u*row - (b/pi**e)*pivot_row``.  Both factors are exact whenever
the inputs are, so no truncation enters except when a pivot unit must be
normalized to 1 (Hermite form), and that step is made exact by working
modulo a power of pi that the lattice already contains.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dvr import FieldElement, RingConfig
from .errors import ParseError, PrecisionExhausted, RankDeficient, SingularMatrix


class Matrix:
    """Immutable rectangular matrix of FieldElements sharing one ring."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: RingConfig, rows):
        rows = tuple(tuple(ring.coerce(x) for x in row) for row in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix needs at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        self.ring = ring
        self.rows = rows

    @classmethod
    def _raw(cls, ring, rows):
        m = object.__new__(cls)
        m.ring = ring
        m.rows = tuple(tuple(r) for r in rows)
        return m

    # construction
    @classmethod
    def identity(cls, ring, n):
        one, zero = ring.one, ring.zero
        return cls._raw(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, r, c):
        return cls._raw(ring, [[ring.zero] * c for _ in range(r)])

    @classmethod
    def diag(cls, ring, entries):
        entries = [ring.coerce(x) for x in entries]
        n = len(entries)
        return cls._raw(ring, [[entries[i] if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def parse(cls, ring, text: str) -> "Matrix":
        """Parse ``a, b; c, d`` (rows split by ';', entries by ',')."""
        rows = [r for r in text.strip().split(";")]
        try:
            return cls(ring, [[ring.parse(e) for e in r.split(",")] for r in rows])
        except ValueError as exc:
            raise ParseError(f"bad matrix {text!r}: {exc}") from exc

    @classmethod
    def from_json(cls, ring, data) -> "Matrix":
        return cls(ring, [[ring.parse(str(e)) for e in row] for row in data])

    # shape & access
    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    @classmethod
    def from_columns(cls, ring, cols):
        return cls._raw(ring, list(zip(*cols)))

    def transpose(self):
        return Matrix._raw(self.ring, list(zip(*self.rows)))

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix._raw(self.ring, [a + b for a, b in zip(self.rows, other.rows)])

    def submatrix(self, rows, cols):
        return Matrix._raw(self.ring, [[self.rows[i][j] for j in cols] for i in rows])

    # arithmetic
    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        zero = self.ring.zero
        out = []
        for row in self.rows:
            new = []
            for col in cols:
                s = zero
                for a, b in zip(row, col):
                    if a.v is not None and b.v is not None:
                        s = s + a * b
                new.append(s)
            out.append(new)
        return Matrix._raw(self.ring, out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix._raw(self.ring, [[-a for a in r] for r in self.rows])

    def scale(self, x) -> "Matrix":
        x = self.ring.coerce(x)
        return Matrix._raw(self.ring, [[x * a for a in r] for r in self.rows])

    def shift(self, k: int) -> "Matrix":
        """Multiply every entry by pi**k."""
        return Matrix._raw(self.ring, [[a.shift(k) for a in r] for r in self.rows])

    # valuations
    def min_valuation(self):
        return min(a.valuation() for r in self.rows for a in r)

    def is_integral(self) -> bool:
        return all(a.is_integral() for r in self.rows for a in r)

    def is_exact(self) -> bool:
        return all(a.is_exact for r in self.rows for a in r)

    def is_square(self):
        return self.nrows == self.ncols

    # determinant & inverse
    def det(self) -> FieldElement:
        if not self.is_square():
            raise ValueError("det of a non-square matrix")
        return _det(self.rows, self.ring)

    def adjugate(self) -> "Matrix":
        n = self.nrows
        if n == 1:
            return Matrix.identity(self.ring, 1)
        out = [[None] * n for _ in range(n)]
        idx = range(n)
        for i in idx:
            for j in idx:
                minor = [[self.rows[r][c] for c in idx if c != j] for r in idx if r != i]
                d = _det(minor, self.ring)
                out[j][i] = -d if (i + j) % 2 else d
        return Matrix._raw(self.ring, out)

    def inverse(self) -> "Matrix":
        d = self.det()
        if d.is_zero:
            raise SingularMatrix("determinant is exactly zero")
        dinv = d.inv()
        return Matrix._raw(self.ring, [[dinv * a for a in r] for r in self.adjugate().rows])

    # comparison & display
    def __eq__(self, other):
        return isinstance(other, Matrix) and self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring, self.rows))

    def to_text(self) -> str:
        return "; ".join(", ".join(str(a) for a in r) for r in self.rows)

    def to_json(self):
        return [[str(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.to_text()!r})"

    __str__ = to_text


def _det(rows, ring) -> FieldElement:
    """Laplace expansion memoized over column subsets: O(n 2^n) products."""
    n = len(rows)
    dp = {0: ring.one}
    for r in range(n):
        new = {}
        row = rows[r]
        for mask, sub in dp.items():
            if sub.is_zero:
                continue
            for j in range(n):
                bit = 1 << j
                if mask & bit or row[j].is_zero:
                    continue
                # sign: number of chosen columns to the right of j
                above = bin(mask >> (j + 1)).count("1")
                term = row[j] * sub
                if above % 2:
                    term = -term
                m2 = mask | bit
                new[m2] = new[m2] + term if m2 in new else term
        dp = new
    return dp.get((1 << n) - 1, ring.zero)


def det(M: Matrix) -> FieldElement:
    return M.det()


def inverse(M: Matrix) -> Matrix:
    return M.inverse()


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return A @ B


def products_agree(A: Matrix, B: Matrix, C: Matrix) -> bool:
    """Check ``A @ B`` agrees with ``C`` on all known digits.

    Sums are accumulated on exact lifts so cancellation below the known
    precision is tolerated rather than raised.
    """
    if A.ncols != B.nrows or (A.nrows, B.ncols) != C.shape:
        return False
    for i in range(A.nrows):
        for j in range(B.ncols):
            total = A.ring.zero
            bound = None
            for k in range(A.ncols):
                a, b = A.rows[i][k], B.rows[k][j]
                if a.is_zero or b.is_zero:
                    continue
                prod = a * b
                if prod.abs_prec is not None:
                    bound = prod.abs_prec if bound is None else min(bound, prod.abs_prec)
                total = total + prod.exact_lift()
            target = C.rows[i][j]
            if target.abs_prec is not None:
                bound = target.abs_prec if bound is None else min(bound, target.abs_prec)
            diff = total - target.exact_lift()
            if bound is None:
                if not diff.is_zero:
                    return False
            elif diff.valuation() < bound:
                return False
    return True


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V`` equals ``diag(units[i] * pi**exponents[i])`` exactly.

    The diagonal keeps its unit parts so the identity holds without any
    truncated inverse; exponents are sorted ascending.
    """

    exponents: tuple
    U: Matrix
    V: Matrix
    units: tuple

    @property
    def rank(self):
        return len(self.exponents)


def _pivot_search(A, k, r, c):
    best = None
    for i in range(k, r):
        for j in range(k, c):
            x = A[i][j]
            if x.v is not None:
                key = (x.v, i, j)
                if best is None or key < best:
                    best = key
    return best


def smith_over_dvr(M: Matrix, require_full_rank: bool = True) -> SmithForm:
    """Smith normal form of a matrix with integral entries."""
    if not M.is_integral():
        raise ValueError("smith_over_dvr needs entries in O")
    ring = M.ring
    r, c = M.shape
    A = [list(row) for row in M.rows]
    U = [list(row) for row in Matrix.identity(ring, r).rows]
    V = [list(row) for row in Matrix.identity(ring, c).rows]
    zero = ring.zero
    exps, units = [], []
    for k in range(min(r, c)):
        found = _pivot_search(A, k, r, c)
        if found is None:
            break
        e, i, j = found
        if i != k:
            A[k], A[i] = A[i], A[k]
            U[k], U[i] = U[i], U[k]
        if j != k:
            for row in A:
                row[k], row[j] = row[j], row[k]
            for row in V:
                row[k], row[j] = row[j], row[k]
        u = A[k][k].unit_part()
        for i2 in range(k + 1, r):
            b = A[i2][k]
            if b.is_zero:
                continue
            q = b.shift(-e)
            A[i2] = [u * x - q * y for x, y in zip(A[i2], A[k])]
            A[i2][k] = zero
            U[i2] = [u * x - q * y for x, y in zip(U[i2], U[k])]
        for j2 in range(k + 1, c):
            b = A[k][j2]
            if b.is_zero:
                continue
            q = b.shift(-e)
            for row in A:
                row[j2] = u * row[j2] - q * row[k]
            A[k][j2] = zero
            for row in V:
                row[j2] = u * row[j2] - q * row[k]
        exps.append(e)
        units.append(u)
    if require_full_rank and len(exps) < min(r, c):
        raise RankDeficient(f"rank {len(exps)} < {min(r, c)}")
    return SmithForm(tuple(exps), Matrix._raw(ring, U), Matrix._raw(ring, V), tuple(units))


def elementary_divisors(M: Matrix) -> tuple:
    """Smith exponents of an integral matrix, zeros dropped."""
    return tuple(e for e in smith_over_dvr(M).exponents if e > 0)


def hermite_over_dvr(M: Matrix) -> Matrix:
    """Canonical upper-triangular basis of the O-column span of M.

    M is n x m with integral entries and full row rank.  The result has
    pivots ``pi**e_i`` on the diagonal and every entry above pivot i reduced
    to its canonical residue mod ``pi**e_i``.
    """
    if not M.is_integral():
        raise ValueError("hermite_over_dvr needs entries in O")
    if not M.is_exact():
        raise PrecisionExhausted("hermite_over_dvr needs exact entries")
    ring = M.ring
    n, m = M.shape
    cols = [list(c) for c in M.columns()]
    active = list(range(m))
    pivots = [None] * n
    zero = ring.zero
    for i in reversed(range(n)):
        best = None
        for c in active:
            x = cols[c][i]
            if x.v is not None and (best is None or (x.v, c) < best):
                best = (x.v, c)
        if best is None:
            raise RankDeficient(f"no pivot in row {i}")
        e, cp = best
        pc = cols[cp]
        u = pc[i].unit_part()
        for c in active:
            if c == cp:
                continue
            col = cols[c]
            b = col[i]
            if b.is_zero:
                continue
            q = b.shift(-e)
            for rr in range(i):
                col[rr] = u * col[rr] - q * pc[rr]
            col[i] = zero
        active.remove(cp)
        pivots[i] = (pc, e, u)
    total = sum(e for _, e, _ in pivots)
    H = []
    for i, (pc, e, u) in enumerate(pivots):
        uinv = u.truncated_inverse(total + 1)
        col = [uinv * pc[rr] for rr in range(i)] + [ring.pi(e)] + [zero] * (n - i - 1)
        H.append(col)
    exps = [e for _, e, _ in pivots]
    for j in range(n):
        col = H[j]
        for i in reversed(range(j)):
            x = col[i]
            rres = x.residue(exps[i])
            if x != rres:
                q = (x - rres).shift(-exps[i])
                piv = H[i]
                for rr in range(i):
                    col[rr] = col[rr] - q * piv[rr]
                col[i] = rres
    return Matrix.from_columns(ring, H)
