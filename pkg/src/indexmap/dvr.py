"""Truncated-precision arithmetic in F_p[[t]] / Z_p and their fraction fields.

An element is stored as ``pi**v * u`` where ``u`` is a unit payload:

* series kind: a tuple of coefficients in ``range(p)``, leading one nonzero;
* p-adic kind: a Python int prime to ``p`` (signed when exact).

``prec`` is ``None`` for exact elements (Laurent polynomials, finite p-adic
expansions) and otherwise the number of known unit digits.  Only inversion
of a non-monomial unit introduces truncation.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DivisionByZero, ParseError, PrecisionExhausted

SERIES = "series"
PADIC = "padic"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class _SeriesOps:
    symbol = "t"

    @staticmethod
    def add(a, b, p):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return tuple(out)

    @staticmethod
    def mul(a, b, p):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return tuple(c % p for c in out)

    @staticmethod
    def neg(a, p):
        return tuple((-c) % p for c in a)

    @staticmethod
    def shift(a, k):
        return (0,) * k + tuple(a)

    @staticmethod
    def lead_zeros(a, p):
        for i, c in enumerate(a):
            if c:
                return i
        return None

    @staticmethod
    def drop(a, k, p):
        return tuple(a[k:])

    @staticmethod
    def trunc(a, n, p):
        a = tuple(a[:n])
        return a + (0,) * (n - len(a))

    @staticmethod
    def tidy(a, p):
        n = len(a)
        while n and a[n - 1] == 0:
            n -= 1
        return tuple(a[:n])

    @staticmethod
    def is_monomial(a, p):
        return len(a) == 1

    @staticmethod
    def unit_inverse(a, n, p):
        c0 = pow(a[0], -1, p)
        out = [0] * n
        for k in range(n):
            s = 1 if k == 0 else 0
            for j in range(1, min(k, len(a) - 1) + 1):
                s -= a[j] * out[k - j]
            out[k] = (s * c0) % p
        return tuple(out)

    @staticmethod
    def digits(a, n, p):
        return list(a[:n]) if n is not None else list(a)

    @staticmethod
    def from_int(n, p):
        return (n % p,)


class _PadicOps:
    symbol = "p"

    @staticmethod
    def add(a, b, p):
        return a + b

    @staticmethod
    def mul(a, b, p):
        return a * b

    @staticmethod
    def neg(a, p):
        return -a

    @staticmethod
    def shift(a, k):
        return a  # scaling handled by caller through _pshift

    @staticmethod
    def lead_zeros(a, p):
        if a == 0:
            return None
        z = 0
        while a % p == 0:
            a //= p
            z += 1
        return z

    @staticmethod
    def drop(a, k, p):
        return a // p**k

    @staticmethod
    def trunc(a, n, p):
        return a % p**n

    @staticmethod
    def tidy(a, p):
        return a

    @staticmethod
    def is_monomial(a, p):
        return a in (1, -1)

    @staticmethod
    def unit_inverse(a, n, p):
        return pow(a, -1, p**n)

    @staticmethod
    def digits(a, n, p):
        if n is not None:
            a %= p**n
        out = []
        while a and (n is None or len(out) < n):
            out.append(a % p)
            a //= p
        if n is not None:
            out += [0] * (n - len(out))
        return out

    @staticmethod
    def from_int(n, p):
        return n


@dataclass(frozen=True)
class RingConfig:
    """The DVR ``O`` with uniformizer pi and residue field F_p."""

    p: int = 2
    kind: str = SERIES
    precision: int = 24

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.kind not in (SERIES, PADIC):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")

    @property
    def ops(self):
        return _SeriesOps if self.kind == SERIES else _PadicOps

    @property
    def symbol(self) -> str:
        return self.ops.symbol

    def with_precision(self, precision: int) -> "RingConfig":
        return RingConfig(self.p, self.kind, precision)

    # constructors
    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, None, None, None)

    @property
    def one(self) -> "FieldElement":
        return self.from_int(1)

    def from_int(self, n: int) -> "FieldElement":
        if self.kind == SERIES:
            return _make(self, 0, (n % self.p,), None)
        return _make(self, 0, n, None)

    def pi(self, k: int = 1) -> "FieldElement":
        """The monomial pi**k."""
        return _make(self, k, self.ops.from_int(1, self.p), None)

    def from_coeffs(self, coeffs, v: int = 0, prec: int | None = None) -> "FieldElement":
        """Element sum(c_i * pi**(v+i)); ``prec`` is an absolute precision."""
        if self.kind == SERIES:
            payload = tuple(c % self.p for c in coeffs)
        else:
            payload = sum(c * self.p**i for i, c in enumerate(coeffs))
        return _make(self, v, payload, prec)

    def parse(self, text: str) -> "FieldElement":
        return parse_element(self, text)

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.ring != self:
                raise ValueError("elements from different rings")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def random_element(self, rng, vmin=-2, vmax=3, terms=3, nonzero=True) -> "FieldElement":
        while True:
            v = rng.randint(vmin, vmax)
            coeffs = [rng.randrange(self.p) for _ in range(terms)]
            x = self.from_coeffs(coeffs, v)
            if x or not nonzero:
                return x


def _make(ring: RingConfig, v: int, payload, abs_prec: int | None) -> "FieldElement":
    """Normalize ``pi**v * payload`` known up to ``abs_prec`` (None = exact)."""
    ops, p = ring.ops, ring.p
    if abs_prec is None:
        z = ops.lead_zeros(payload, p)
        if z is None:
            return FieldElement(ring, None, None, None)
        unit = ops.tidy(ops.drop(payload, z, p), p)
        return FieldElement(ring, v + z, unit, None)
    known = abs_prec - v
    if known <= 0:
        raise PrecisionExhausted(f"no digit known below absolute precision {abs_prec}")
    payload = ops.trunc(payload, known, p)
    z = ops.lead_zeros(payload, p)
    if z is None:
        raise PrecisionExhausted(f"all {known} known digits cancel")
    n = known - z
    return FieldElement(ring, v + z, ops.trunc(ops.drop(payload, z, p), n, p), n)


def _scaled(ring, payload, k):
    if k == 0:
        return payload
    if ring.kind == SERIES:
        return _SeriesOps.shift(payload, k)
    return payload * ring.p**k


class FieldElement:
    __slots__ = ("ring", "v", "unit", "prec")

    def __init__(self, ring: RingConfig, v, unit, prec):
        self.ring = ring
        self.v = v
        self.unit = unit
        self.prec = prec

    # basic predicates
    @property
    def is_zero(self) -> bool:
        return self.v is None

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def __bool__(self):
        return self.v is not None

    @property
    def abs_prec(self):
        """Absolute precision, or None when exact."""
        if self.prec is None:
            return None
        return self.v + self.prec

    def valuation(self):
        return math.inf if self.v is None else self.v

    @property
    def digits(self) -> list[int]:
        if self.v is None:
            return []
        n = self.prec
        if n is None and self.ring.kind == PADIC and self.unit < 0:
            n = self.ring.precision
        return self.ring.ops.digits(self.unit, n, self.ring.p)

    def is_integral(self) -> bool:
        return self.v is None or self.v >= 0

    def unit_part(self) -> "FieldElement":
        if self.v is None:
            raise DivisionByZero("zero has no unit part")
        return FieldElement(self.ring, 0, self.unit, self.prec)

    def shift(self, k: int) -> "FieldElement":
        """Multiply by pi**k."""
        if self.v is None or k == 0:
            return self
        return FieldElement(self.ring, self.v + k, self.unit, self.prec)

    def is_monomial_unit(self) -> bool:
        return self.v is not None and self.prec is None and self.ring.ops.is_monomial(self.unit, self.ring.p)

    # arithmetic
    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.ring != self.ring:
                raise ValueError("elements from different rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if other.v is None:
            return self
        if self.v is None:
            return other
        ring = self.ring
        v = min(self.v, other.v)
        a = _scaled(ring, self.unit, self.v - v)
        b = _scaled(ring, other.unit, other.v - v)
        pa, pb = self.abs_prec, other.abs_prec
        if pa is None:
            ap = pb
        elif pb is None:
            ap = pa
        else:
            ap = min(pa, pb)
        return _make(ring, v, ring.ops.add(a, b, ring.p), ap)

    __radd__ = __add__

    def __neg__(self):
        if self.v is None:
            return self
        ring = self.ring
        u = ring.ops.neg(self.unit, ring.p)
        if self.prec is not None:
            u = ring.ops.trunc(u, self.prec, ring.p)
        return FieldElement(ring, self.v, u, self.prec)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.v is None:
            return self
        if other.v is None:
            return other
        ring = self.ring
        if self.prec is None:
            n = other.prec
        elif other.prec is None:
            n = self.prec
        else:
            n = min(self.prec, other.prec)
        v = self.v + other.v
        u = ring.ops.mul(self.unit, other.unit, ring.p)
        return _make(ring, v, u, None if n is None else v + n)

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if self.v is None:
            raise DivisionByZero("inverse of exact zero")
        ring, ops = self.ring, self.ring.ops
        if self.prec is None and ops.is_monomial(self.unit, ring.p):
            if ring.kind == SERIES:
                u = (pow(self.unit[0], -1, ring.p),)
            else:
                u = self.unit
            return FieldElement(ring, -self.v, u, None)
        n = self.prec if self.prec is not None else ring.precision
        return FieldElement(ring, -self.v, ops.unit_inverse(self.unit, n, ring.p), n)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # integral helpers used by the normal-form code
    def residue(self, e: int) -> "FieldElement":
        """Canonical representative of an exact integral element mod pi**e."""
        if self.prec is not None:
            raise PrecisionExhausted("residue of an inexact element")
        if self.v is None or e <= 0 or self.v >= e:
            return self.ring.zero
        if self.v < 0:
            raise ValueError("residue of a non-integral element")
        ring = self.ring
        if ring.kind == SERIES:
            return _make(ring, self.v, self.unit[: e - self.v], None)
        return _make(ring, 0, (self.unit * ring.p**self.v) % ring.p**e, None)

    def truncated_inverse(self, k: int) -> "FieldElement":
        """Exact polynomial agreeing with 1/self modulo pi**k (self a unit)."""
        if self.v != 0:
            raise ValueError("truncated_inverse needs a unit")
        ring = self.ring
        u = ring.ops.unit_inverse(self.unit, max(k, 1), ring.p)
        return _make(ring, 0, u, None)

    def reduce(self) -> int:
        """Image in the residue field F_p (self integral)."""
        if self.v is None or self.v > 0:
            return 0
        if self.v < 0:
            raise ValueError("reduction of a non-integral element")
        if self.ring.kind == SERIES:
            return self.unit[0]
        return self.unit % self.ring.p

    def agrees(self, other) -> bool:
        """True when both agree on every digit known for both."""
        other = self._other(other)
        ap, bp = self.abs_prec, other.abs_prec
        if ap is None and bp is None:
            return self == other
        bound = ap if bp is None else (bp if ap is None else min(ap, bp))
        try:
            diff = self.exact_lift() - other.exact_lift()
        except PrecisionExhausted:
            return True
        return diff.valuation() >= bound

    def exact_lift(self) -> "FieldElement":
        """Forget the precision marker, keeping the stored digits."""
        if self.prec is None:
            return self
        return _make(self.ring, self.v, self.unit, None)

    # comparison & display
    def _key(self):
        return (self.ring, self.v, self.unit, self.prec)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldElement({format_element(self)!r})"

    def __str__(self):
        return format_element(self)


class DvrElement(FieldElement):
    """Element of O, i.e. valuation >= 0."""

    __slots__ = ()

    def __init__(self, ring, v, unit, prec):
        if v is not None and v < 0:
            raise ValueError("DvrElement needs valuation >= 0")
        super().__init__(ring, v, unit, prec)

    @classmethod
    def of(cls, x: FieldElement) -> "DvrElement":
        return cls(x.ring, x.v, x.unit, x.prec)


# ---------------------------------------------------------------------------
# text format


def _term(coeff: int, exp: int, sym: str) -> str:
    if exp == 0:
        return str(coeff)
    mono = sym if exp == 1 else f"{sym}^{exp}"
    return mono if coeff == 1 else f"{coeff}*{mono}"


def format_element(x: FieldElement) -> str:
    ring = x.ring
    sym = ring.symbol
    if x.v is None:
        return "0"
    sign = ""
    unit = x.unit
    if ring.kind == PADIC and x.prec is None and unit < 0:
        sign, unit = "-", -unit
    digits = ring.ops.digits(unit, x.prec, ring.p)
    terms = [_term(c, x.v + i, sym) for i, c in enumerate(digits) if c]
    body = (" - " if sign else " + ").join(terms)
    text = sign + body
    if x.prec is not None:
        text += f" + O({sym}^{x.abs_prec})"
    return text


_O_TERM = re.compile(r"^O\((\w)\^?(-?\d+)?\)$")
_TERM = re.compile(r"^(\d+)?(?:\*?([a-zA-Z])(?:\^(-?\d+))?)?$")


def parse_element(ring: RingConfig, text: str) -> FieldElement:
    """Parse ``3*t^-2 + 1 + 2*t^5`` style text; terms may come in any order."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty element")
    s = s.replace("^-", "^~")
    pieces = re.findall(r"[+-]?[^+-]+", s)
    if "".join(pieces) != s:
        raise ParseError(f"cannot parse {text!r}")
    p = ring.p
    abs_prec = None
    terms: dict[int, int] = {}
    for piece in pieces:
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-").replace("^~", "^-")
        m = _O_TERM.match(body)
        if m:
            if m.group(1) != ring.symbol:
                raise ParseError(f"wrong uniformizer symbol in {body!r}")
            k = int(m.group(2)) if m.group(2) else 1
            abs_prec = k if abs_prec is None else min(abs_prec, k)
            continue
        m = _TERM.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ParseError(f"bad term {body!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        if m.group(2) is not None:
            if m.group(2) != ring.symbol:
                raise ParseError(f"expected uniformizer {ring.symbol!r}, got {m.group(2)!r}")
            exp = int(m.group(3)) if m.group(3) else 1
        else:
            exp = 0
        terms[exp] = terms.get(exp, 0) + sign * coeff
    if not terms:
        if abs_prec is None:
            raise ParseError(f"cannot parse {text!r}")
        raise PrecisionExhausted("element with no known nonzero digit")
    vmin = min(terms)
    if abs_prec is not None:
        vmin = min(vmin, abs_prec)
    if ring.kind == SERIES:
        top = max(terms)
        coeffs = [0] * (top - vmin + 1)
        for e, c in terms.items():
            coeffs[e - vmin] = c % p
        payload = tuple(coeffs)
    else:
        payload = sum(c * p ** (e - vmin) for e, c in terms.items())
    return _make(ring, vmin, payload, abs_prec)


def valuation(x: FieldElement):
    return x.valuation()
