"""Exact coefficient rings and Gamma values at half-integers.

Every ring here is a commutative Q-algebra.  Elements are ordinary Python
objects supporting ``+ - *`` and ``==``; the ring objects carry the
structural predicates (unit, nilpotent) the series code needs.

Half-integers are passed around as doubled integers (``s2 = 2*s``) wherever
they are stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import AdmissibilityError, PoleError, RingMismatchError, TateError

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

#: the exact rational type used for stored coefficients
Rational = Q
NUMBER = (int, Fraction, type(Q(0)))


def to_doubled(s) -> int:
    """Encode the half-integer ``s`` as ``2*s``; reject anything finer."""
    if isinstance(s, int):
        return 2 * s
    if isinstance(s, str):
        s = Fraction(s)
    n, d = int(s.numerator), int(s.denominator)
    if (2 * n) % d:
        raise TateError(f"{s} is not a half-integer")
    return 2 * n // d


def from_doubled(s2: int) -> Fraction:
    return Fraction(s2, 2)


def render_rational(q) -> str:
    return str(Q(q))


def render_half(s2: int) -> str:
    """Exponent text: ``3``, ``(-1)``, ``(1/2)``."""
    s = Q(s2, 2)
    if s.denominator == 1 and s >= 0:
        return str(s.numerator)
    return f"({s})"


def _term(coeff: Fraction, factor: str) -> str:
    """Render ``coeff*factor`` with unit coefficients elided."""
    if not factor:
        return str(coeff)
    if coeff == 1:
        return factor
    if coeff == -1:
        return "-" + factor
    return f"{coeff}*{factor}"


def join_terms(parts: Iterable[str]) -> str:
    out = ""
    for p in parts:
        if not out:
            out = p
        elif p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out or "0"


# ---------------------------------------------------------------------------
# Q[pi^(1/2), pi^(-1/2)]
# ---------------------------------------------------------------------------


class PiHalf:
    """Finite rational combination of half-integer powers of pi.

    ``terms`` maps the doubled pi-exponent to its (nonzero) coefficient.
    pi is treated as a formal transcendental and is never evaluated.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, Q] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = Q(v)
            if v:
                clean[int(k)] = v
        self._terms = clean

    @classmethod
    def rational(cls, q) -> PiHalf:
        return cls({0: q})

    @classmethod
    def pi_power(cls, e2: int, coeff=1) -> PiHalf:
        """``coeff * pi^(e2/2)``."""
        return cls({e2: coeff})

    @property
    def terms(self) -> dict[int, Q]:
        return dict(self._terms)

    def exponents(self) -> list[int]:
        return sorted(self._terms)

    def is_rational(self) -> bool:
        return set(self._terms) <= {0}

    def to_rational(self) -> Q:
        if not self.is_rational():
            raise TateError(f"{self} is not rational")
        return self._terms.get(0, Q(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def inverse(self) -> PiHalf:
        if not self.is_monomial():
            raise AdmissibilityError(f"{self} is not a unit of Q[pi^(1/2), pi^(-1/2)]")
        ((e, c),) = self._terms.items()
        return PiHalf({-e: 1 / c})

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, PiHalf):
            return other
        if isinstance(other, NUMBER):
            return PiHalf({0: other})
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for k, v in o._terms.items():
            out[k] = out.get(k, 0) + v
        return PiHalf(out)

    __radd__ = __add__

    def __neg__(self):
        return PiHalf({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, NUMBER):
            return PiHalf({k: v * other for k, v in self._terms.items()})
        if not isinstance(other, PiHalf):
            return NotImplemented
        out: dict[int, Q] = {}
        for a, x in self._terms.items():
            for b, y in other._terms.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return PiHalf(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, NUMBER):
            return self * (1 / Q(other))
        if isinstance(other, PiHalf):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = PiHalf({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self.is_rational():
            return hash(self._terms.get(0, Q(0)))
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            if e == 0:
                factor = ""
            elif e == 2:
                factor = "pi"
            else:
                factor = "pi^" + render_half(e)
            parts.append(_term(c, factor))
        return join_terms(parts)

    def __repr__(self):
        return f"PiHalf({self})"


# ---------------------------------------------------------------------------
# Q[eps]/(eps^n)
# ---------------------------------------------------------------------------


_ZERO = Q(0)


class Nil:
    """Element of ``Q[eps]/(eps^n)``; ``c[i]`` is the eps^i coefficient."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs: Iterable = ()):
        c = [Q(x) for x in coeffs][:n]
        c += [_ZERO] * (n - len(c))
        self.n = n
        self.c = tuple(c)

    @classmethod
    def _raw(cls, n: int, c: tuple) -> "Nil":
        # trusted: c is a length-n tuple of Q
        out = object.__new__(cls)
        out.n = n
        out.c = c
        return out

    def _lift(self, other):
        if type(other) is Nil:
            if other.n != self.n:
                raise RingMismatchError(f"Q[eps]/eps^{self.n} vs Q[eps]/eps^{other.n}")
            return other
        if isinstance(other, NUMBER):
            return Nil._raw(self.n, (Q(other),) + (_ZERO,) * (self.n - 1))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Nil._raw(self.n, tuple([a + b for a, b in zip(self.c, o.c)]))

    __radd__ = __add__

    def __neg__(self):
        return Nil._raw(self.n, tuple([-a for a in self.c]))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Nil._raw(self.n, tuple([a - b for a, b in zip(self.c, o.c)]))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, NUMBER):
            q = Q(other)
            return Nil._raw(self.n, tuple([a * q for a in self.c]))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = self.n
        a, b = self.c, o.c
        if not any(a[1:]):
            a0 = a[0]
            return Nil._raw(n, tuple([a0 * y for y in b]))
        if not any(b[1:]):
            b0 = b[0]
            return Nil._raw(n, tuple([x * b0 for x in a]))
        out = [_ZERO] * n
        for i in range(n):
            ai = a[i]
            if ai:
                for j in range(n - i):
                    bj = b[j]
                    if bj:
                        out[i + j] += ai * bj
        return Nil._raw(n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return NilpotentRing(self.n).inverse(self) ** (-k)
        out = Nil(self.n, (1,))
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, NUMBER):
            return self * (1 / Q(other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * NilpotentRing(self.n).inverse(o)

    def __eq__(self, other):
        if isinstance(other, NUMBER):
            return self.c[0] == other and not any(self.c[1:])
        if isinstance(other, Nil):
            return self.n == other.n and self.c == other.c
        return NotImplemented

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash((self.n, self.c))

    def __bool__(self):
        return any(self.c)

    def __str__(self):
        parts = []
        for i, a in enumerate(self.c):
            if a:
                factor = "" if i == 0 else ("eps" if i == 1 else f"eps^{i}")
                parts.append(_term(a, factor))
        return join_terms(parts)

    def __repr__(self):
        return f"Nil({self})"


# ---------------------------------------------------------------------------
# Q[x_1, ..., x_k] with named generators
# ---------------------------------------------------------------------------


class Poly:
    """Polynomial with rational coefficients; monomials are exponent tuples."""

    __slots__ = ("names", "terms")

    def __init__(self, names: tuple[str, ...], terms: dict[tuple, Q] | None = None):
        self.names = names
        self.terms = {m: Q(c) for m, c in (terms or {}).items() if c}

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.names != self.names:
                raise RingMismatchError(f"Q{list(self.names)} vs Q{list(other.names)}")
            return other
        if isinstance(other, NUMBER):
            return Poly(self.names, {(0,) * len(self.names): other})
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.names, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, NUMBER):
            return Poly(self.names, {m: c * other for m, c in self.terms.items()})
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict[tuple, Q] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.names, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, NUMBER):
            return self * (1 / Q(other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * PolyRing(self.names).inverse(o)

    def __pow__(self, k: int):
        if k < 0:
            return PolyRing(self.names).inverse(self) ** (-k)
        out = self._lift(1)
        for _ in range(k):
            out = out * self
        return out

    def constant(self) -> Q:
        return self.terms.get((0,) * len(self.names), Q(0))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def __eq__(self, other):
        if isinstance(other, NUMBER):
            return self.is_constant() and self.constant() == other
        if isinstance(other, Poly):
            return self.names == other.names and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant())
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def _key(self, m):
        return (sum(m), tuple(-e for e in m))

    def __str__(self):
        parts = []
        for m in sorted(self.terms, key=self._key):
            factors = []
            for name, e in zip(self.names, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            parts.append(_term(self.terms[m], "*".join(factors)))
        return join_terms(parts)

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------------------
# ring objects
# ---------------------------------------------------------------------------


class Ring:
    """Capability interface for a commutative coefficient ring."""

    name = "ring"
    #: smallest n with (nilradical)^n = 0
    nil_index = 1

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def is_nilpotent(self, a) -> bool:
        return not a

    def inverse(self, a):
        raise NotImplementedError

    def sqrt_unit(self, a):
        """Square root of a unit; only ``1`` and rational squares are supported."""
        q = self._rational_value(a)
        if q is not None and q > 0:
            p, r = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if p * p == q.numerator and r * r == q.denominator:
                return self.coerce(Q(p, r))
        raise AdmissibilityError(f"no square root of {a} available in {self.name}")

    def _rational_value(self, a):
        return None

    def power(self, a, k: int):
        if k < 0:
            a, k = self.inverse(a), -k
        out = self.one()
        for _ in range(k):
            out = out * a
        return out

    def render(self, a) -> str:
        return str(a)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class RationalField(Ring):
    name = "rational"

    def coerce(self, x):
        if isinstance(x, NUMBER):
            return Q(x)
        raise RingMismatchError(f"cannot coerce {x!r} into Q")

    def is_unit(self, a):
        return a != 0

    def inverse(self, a):
        if a == 0:
            raise AdmissibilityError("0 is not invertible")
        return 1 / Q(a)

    def _rational_value(self, a):
        return a


@dataclass(frozen=True)
class PiHalfRing(Ring):
    name = "pihalf"

    def coerce(self, x):
        if isinstance(x, PiHalf):
            return x
        if isinstance(x, NUMBER):
            return PiHalf.rational(x)
        raise RingMismatchError(f"cannot coerce {x!r} into Q[pi^(1/2), pi^(-1/2)]")

    def is_unit(self, a):
        return a.is_monomial()

    def inverse(self, a):
        return a.inverse()

    def _rational_value(self, a):
        return a.to_rational() if a.is_rational() else None


@dataclass(frozen=True)
class NilpotentRing(Ring):
    """``Q[eps]/(eps^n)``."""

    n: int

    @property
    def name(self):
        return f"nil:{self.n}"

    @property
    def nil_index(self):
        return self.n

    def coerce(self, x):
        if isinstance(x, Nil):
            if x.n != self.n:
                raise RingMismatchError(f"eps^{x.n} element in {self.name}")
            return x
        if isinstance(x, NUMBER):
            return Nil(self.n, (x,))
        raise RingMismatchError(f"cannot coerce {x!r} into {self.name}")

    def eps(self, k: int = 1) -> Nil:
        c = [0] * self.n
        if k < self.n:
            c[k] = 1
        return Nil(self.n, c)

    def is_unit(self, a):
        return a.c[0] != 0

    def is_nilpotent(self, a):
        return a.c[0] == 0

    def inverse(self, a):
        a = self.coerce(a)
        if a.c[0] == 0:
            raise AdmissibilityError(f"{a} is nilpotent, not a unit")
        c0 = a.c[0]
        m = a * (1 / c0) - 1
        out, p = self.one(), self.one()
        for _ in range(1, self.n):
            p = p * (-m)
            out = out + p
        return out * (1 / c0)

    def _rational_value(self, a):
        return a.c[0] if not any(a.c[1:]) else None


@dataclass(frozen=True)
class PolyRing(Ring):
    """Polynomial ring over Q in the named generators."""

    names: tuple[str, ...]

    @property
    def name(self):
        return "poly:" + ",".join(self.names)

    @classmethod
    def cobordism(cls, n: int) -> PolyRing:
        """Q[CP_1, ..., CP_{n-1}]."""
        return cls(tuple(f"CP{i}" for i in range(1, n)))

    @classmethod
    def fock(cls, n: int) -> PolyRing:
        """Q[t_0, ..., t_n]."""
        return cls(tuple(f"t{i}" for i in range(n + 1)))

    def coerce(self, x):
        if isinstance(x, Poly):
            if x.names != self.names:
                raise RingMismatchError(f"{x!r} is not in {self.name}")
            return x
        if isinstance(x, NUMBER):
            return Poly(self.names, {(0,) * len(self.names): x})
        raise RingMismatchError(f"cannot coerce {x!r} into {self.name}")

    def gen(self, name: str) -> Poly:
        if name not in self.names:
            raise TateError(f"{name} is not a generator of {self.name}")
        m = tuple(int(n == name) for n in self.names)
        return Poly(self.names, {m: 1})

    def is_unit(self, a):
        return a.is_constant() and a.constant() != 0

    def inverse(self, a):
        if not self.is_unit(a):
            raise AdmissibilityError(f"{a} is not a unit of {self.name}")
        return self.coerce(1 / a.constant())

    def _rational_value(self, a):
        return a.constant() if a.is_constant() else None


RATIONAL = RationalField()
PIHALF = PiHalfRing()


def ring_of(a) -> Ring:
    """Smallest registered ring containing the element ``a``."""
    if isinstance(a, NUMBER):
        return RATIONAL
    if isinstance(a, PiHalf):
        return PIHALF
    if isinstance(a, Nil):
        return NilpotentRing(a.n)
    if isinstance(a, Poly):
        return PolyRing(a.names)
    raise RingMismatchError(f"unsupported coefficient {a!r}")


# ---------------------------------------------------------------------------
# Gamma at half-integers
# ---------------------------------------------------------------------------


def double_factorial(k: int) -> int:
    """``(2k-1)!!`` with ``(-1)!! = 1``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return math.prod(range(1, 2 * k, 2))


def _gamma2(s2: int) -> PiHalf:
    if s2 % 2 == 0:
        s = s2 // 2
        if s <= 0:
            raise PoleError(f"Gamma has a pole at {s}")
        return PiHalf.rational(math.factorial(s - 1))
    # walk from Gamma(1/2) = sqrt(pi) using Gamma(s+1) = s Gamma(s)
    q = Q(1)
    t2 = 1
    while t2 < s2:
        q *= Q(t2, 2)
        t2 += 2
    while t2 > s2:
        t2 -= 2
        q /= Q(t2, 2)
    return PiHalf.pi_power(1, q)


def gamma_value(s) -> PiHalf:
    """Exact Gamma(s) for integer or half-integer ``s``."""
    return _gamma2(to_doubled(s))


def gamma_reciprocal(s) -> PiHalf:
    """``1/Gamma(1+s)``, extended by zero at the poles (negative integer s)."""
    s2 = to_doubled(s)
    if s2 % 2 == 0 and s2 <= -2:
        return PiHalf()
    return _gamma2(s2 + 2).inverse()
