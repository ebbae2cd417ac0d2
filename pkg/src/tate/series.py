"""Truncated formal Laurent series with half-step exponents.

A series stores finitely many coefficients keyed by *doubled* exponent plus a
head ``head2``: every coefficient at doubled exponent ``>= head2`` is unknown
(``O(x^(head2/2))``).  ``head2 = inf`` means the series is known exactly.  The
negative-exponent tail is always stored exactly; only the head is truncated.

Operations propagate the tightest head they can prove; comparisons between
series of different precision go through :meth:`LaurentSeries.agrees`, which
looks only at the common known window.

Operations that must expand something infinite from exact data (inverses,
negative or fractional powers, compositional inverses) take ``prec``: the
number of x-steps of relative precision to produce.  The default comes from
the ``TATE_DEFAULT_HEAD`` environment variable (8 if unset).
"""
from __future__ import annotations

import enum
import math
import os
from fractions import Fraction
from typing import Iterable

from .errors import AdmissibilityError, ParityError, PrecisionError, RingMismatchError
from .scalars import NUMBER, RATIONAL, Nil, NilpotentRing, Q, Ring, join_terms, render_half, ring_of, to_doubled

_QZERO = Q(0)

INF = math.inf


def default_prec() -> int:
    return int(os.environ.get("TATE_DEFAULT_HEAD", "8"))


class ExponentParity(enum.Enum):
    INTEGRAL = "integral"
    ODD_HALF = "odd-half"
    MIXED = "mixed"


class LaurentSeries:
    """Immutable truncated Laurent series over a coefficient ring."""

    __slots__ = ("ring", "_c", "head2")

    def __init__(self, coeffs: dict[int, object] | None = None, head2=INF, ring: Ring = RATIONAL):
        c = {}
        for d, a in (coeffs or {}).items():
            if d < head2:
                a = ring.coerce(a)
                if a:
                    c[int(d)] = a
        self.ring = ring
        self._c = c
        self.head2 = head2

    @classmethod
    def _raw(cls, ring, c, head2):
        # trusted constructor: c already coerced, zero-free and below head2
        s = object.__new__(cls)
        s.ring = ring
        s._c = c
        s.head2 = head2
        return s

    # -- inspection --------------------------------------------------------
    @property
    def head(self):
        """Head as an exponent value (``inf`` when exact)."""
        return self.head2 if self.head2 == INF else Fraction(self.head2, 2)

    @property
    def val2(self):
        """Lowest stored doubled exponent, or the head when nothing is stored."""
        return min(self._c) if self._c else self.head2

    def is_exact(self) -> bool:
        return self.head2 == INF

    def is_zero(self) -> bool:
        """No known nonzero coefficient (the head may still be finite)."""
        return not self._c

    def items2(self) -> list[tuple[int, object]]:
        return sorted(self._c.items())

    def coeffs2(self) -> dict[int, object]:
        return dict(self._c)

    def exponents(self) -> list[Fraction]:
        return [Fraction(d, 2) for d in sorted(self._c)]

    def coefficient(self, exp):
        d = to_doubled(exp)
        if d >= self.head2:
            raise PrecisionError(f"coefficient of x^{exp} is beyond the head O(x^{self.head})")
        return self._c.get(d, self.ring.zero())

    # -- reshaping ---------------------------------------------------------
    def truncate2(self, h2) -> LaurentSeries:
        h2 = min(h2, self.head2)
        return LaurentSeries._raw(self.ring, {d: a for d, a in self._c.items() if d < h2}, h2)

    def truncate(self, head) -> LaurentSeries:
        return self.truncate2(to_doubled(head))

    def shift2(self, k2: int) -> LaurentSeries:
        """Multiply by ``x^(k2/2)``."""
        return LaurentSeries._raw(self.ring, {d + k2: a for d, a in self._c.items()}, self.head2 + k2)

    def scale(self, c) -> LaurentSeries:
        c = self.ring.coerce(c)
        if not c:
            return zero(self.ring)
        out = {}
        for d, a in self._c.items():
            b = a * c
            if b:
                out[d] = b
        return LaurentSeries._raw(self.ring, out, self.head2)

    def change_ring(self, ring: Ring) -> LaurentSeries:
        return LaurentSeries({d: ring.coerce(a) for d, a in self._c.items()}, self.head2, ring)

    def map_exponents2(self, fn, head_fn) -> LaurentSeries:
        return LaurentSeries._raw(self.ring, {fn(d): a for d, a in self._c.items()}, head_fn(self.head2))

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        try:
            ring, f, g = _unify(self, other)
        except RingMismatchError:
            return False
        return f.head2 == g.head2 and f._c == g._c

    __hash__ = None

    def agrees(self, other, upto=None) -> bool:
        """Equal on the common known window (optionally also capped at ``upto``)."""
        if not isinstance(other, LaurentSeries):
            other = constant(other, self.ring)
        _, f, g = _unify(self, other)
        h = min(f.head2, g.head2)
        if upto is not None:
            h = min(h, to_doubled(upto))
        fa = {d: a for d, a in f._c.items() if d < h}
        ga = {d: a for d, a in g._c.items() if d < h}
        return fa == ga

    # -- arithmetic --------------------------------------------------------
    def _coerce_other(self, other):
        if isinstance(other, LaurentSeries):
            return other
        return constant(other, self.ring if _fits(other, self.ring) else ring_of(other))

    def __add__(self, other):
        return add(self, self._coerce_other(other))

    def __radd__(self, other):
        return add(self._coerce_other(other), self)

    def __neg__(self):
        return LaurentSeries._raw(self.ring, {d: -a for d, a in self._c.items()}, self.head2)

    def __sub__(self, other):
        return add(self, -self._coerce_other(other))

    def __rsub__(self, other):
        return add(self._coerce_other(other), -self)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return mul(self, other)
        if _fits(other, self.ring):
            return self.scale(other)
        return mul(self, self._coerce_other(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return mul(self, invert_mul(other))
        if isinstance(other, NUMBER):
            return self.scale(1 / Q(other))
        return self.scale(self.ring.inverse(self.ring.coerce(other)))

    def __pow__(self, r):
        return power(self, r)

    # -- rendering ---------------------------------------------------------
    def render(self, var: str = "x") -> str:
        parts = []
        for d in sorted(self._c):
            parts.append(_render_term(self._c[d], d, var))
        if self.head2 != INF:
            parts.append(f"O({_render_power(self.head2, var) or '1'})")
        return join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LaurentSeries({self.render()}; ring={self.ring})"

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "terms": [[d, str(a)] for d, a in sorted(self._c.items())],
            "head2": None if self.head2 == INF else self.head2,
        }


def _fits(a, ring: Ring) -> bool:
    try:
        ring.coerce(a)
        return True
    except RingMismatchError:
        return False


def _render_power(d2: int, var: str) -> str:
    if d2 == 0:
        return ""
    if d2 == 2:
        return var
    return f"{var}^{render_half(d2)}"


def _render_coeff(a) -> str:
    s = str(a)
    body = s[1:] if s.startswith("-") else s
    if " + " in body or " - " in body:
        return f"({s})"
    return s


def _render_term(a, d2: int, var: str) -> str:
    factor = _render_power(d2, var)
    if not factor:
        return _render_coeff(a)
    if a == 1:
        return factor
    if a == -1:
        return "-" + factor
    return f"{_render_coeff(a)}*{factor}"


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def zero(ring: Ring = RATIONAL, head=INF) -> LaurentSeries:
    h2 = head if head == INF else to_doubled(head)
    return LaurentSeries._raw(ring, {}, h2)


def big_o(exp, ring: Ring = RATIONAL) -> LaurentSeries:
    """``O(x^exp)``: nothing known from ``exp`` on."""
    return zero(ring, exp)


def constant(c, ring: Ring | None = None) -> LaurentSeries:
    ring = ring or ring_of(c)
    return LaurentSeries({0: c}, INF, ring)


def monomial(exp, coeff=1, ring: Ring = RATIONAL) -> LaurentSeries:
    return LaurentSeries({to_doubled(exp): coeff}, INF, ring)


def gen(ring: Ring = RATIONAL) -> LaurentSeries:
    """The series variable ``x`` (the Euler class ``e``)."""
    return monomial(1, 1, ring)


def series(terms: dict, head=INF, ring: Ring = RATIONAL) -> LaurentSeries:
    """Build a series from ``{exponent: coefficient}`` with exponent values."""
    h2 = head if head == INF else to_doubled(head)
    return LaurentSeries({to_doubled(e): c for e, c in terms.items()}, h2, ring)


# ---------------------------------------------------------------------------
# ring plumbing
# ---------------------------------------------------------------------------


def _unify(f: LaurentSeries, g: LaurentSeries):
    if f.ring == g.ring:
        return f.ring, f, g
    if f.ring == RATIONAL:
        return g.ring, f.change_ring(g.ring), g
    if g.ring == RATIONAL:
        return f.ring, f, g.change_ring(f.ring)
    raise RingMismatchError(f"series over {f.ring} and {g.ring}")


# ---------------------------------------------------------------------------
# basic arithmetic
# ---------------------------------------------------------------------------


def add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    ring, f, g = _unify(f, g)
    h = min(f.head2, g.head2)
    out = {d: a for d, a in f._c.items() if d < h}
    for d, b in g._c.items():
        if d < h:
            a = out.get(d)
            if a is None:
                out[d] = b
            else:
                s = a + b
                if s:
                    out[d] = s
                else:
                    del out[d]
    return LaurentSeries._raw(ring, out, h)


def _mul(f: LaurentSeries, g: LaurentSeries, cap2=INF) -> LaurentSeries:
    ring = f.ring
    h = min(f.head2 + g.val2, g.head2 + f.val2, cap2)
    if h != h:  # inf - inf cannot occur, but guard nan anyway
        h = INF
    if isinstance(ring, NilpotentRing):
        return _mul_nil(ring, f, g, h)
    out: dict[int, object] = {}
    gi = list(g._c.items())
    for a, x in f._c.items():
        lim = h - a
        for b, y in gi:
            if b < lim:
                e = a + b
                v = out.get(e)
                out[e] = x * y if v is None else v + x * y
    return LaurentSeries._raw(ring, {d: v for d, v in out.items() if v}, h)


def _flat(f: LaurentSeries) -> list:
    return [(d, [(i, q) for i, q in enumerate(a.c) if q]) for d, a in sorted(f._c.items())]


def _mul_nil(ring, f: LaurentSeries, g: LaurentSeries, h) -> LaurentSeries:
    # convolve in (exponent, eps-degree) over Q, then repack
    n = ring.n
    rows: dict[int, list] = {}
    gi = _flat(g)
    for a, xs in _flat(f):
        lim = h - a
        for b, ys in gi:
            if b >= lim:
                break
            row = rows.get(a + b)
            if row is None:
                row = rows[a + b] = [_QZERO] * n
            for i, x in xs:
                room = n - i
                for j, y in ys:
                    if j < room:
                        row[i + j] += x * y
    out = {d: Nil._raw(n, tuple(r)) for d, r in rows.items() if any(r)}
    return LaurentSeries._raw(ring, out, h)


def _mulc(f: LaurentSeries, g: LaurentSeries, cap2) -> LaurentSeries:
    """Product capped at ``cap2`` unless both factors are exact."""
    return _mul(f, g, INF if f.is_exact() and g.is_exact() else cap2)


def mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    """Cauchy product; head ``min(head_f + val_g, head_g + val_f)``."""
    ring, f, g = _unify(f, g)
    return _mul(f, g)


def derivative(f: LaurentSeries) -> LaurentSeries:
    out = {}
    for d, a in f._c.items():
        if d:
            out[d - 2] = a * Q(d, 2)
    return LaurentSeries._raw(f.ring, out, f.head2 - 2)


def residue(f: LaurentSeries):
    """Coefficient of ``x^-1``."""
    if f.head2 <= -2:
        raise PrecisionError(f"x^-1 coefficient unknown: series is only known below O(x^{f.head})")
    return f._c.get(-2, f.ring.zero())


def galois(f: LaurentSeries) -> LaurentSeries:
    """``sqrt(x) -> -sqrt(x)``: negate odd doubled exponents."""
    return LaurentSeries._raw(f.ring, {d: (-a if d % 2 else a) for d, a in f._c.items()}, f.head2)


def parity(f: LaurentSeries) -> ExponentParity:
    ds = list(f._c)
    if ds and all(d % 2 for d in ds):
        return ExponentParity.ODD_HALF
    if all(d % 2 == 0 for d in ds):
        return ExponentParity.INTEGRAL
    return ExponentParity.MIXED


def truncate_mt(f: LaurentSeries) -> LaurentSeries:
    """Drop every term below ``x^-1`` (the collapse onto CP^inf_{-1})."""
    if parity(f) is not ExponentParity.INTEGRAL:
        raise ParityError("Madsen-Tillmann truncation needs integral exponents")
    return LaurentSeries._raw(f.ring, {d: a for d, a in f._c.items() if d >= -2}, f.head2)


def to_sqrt_variable(f: LaurentSeries) -> LaurentSeries:
    """Rewrite a half-step series in ``y = sqrt(x)`` (integral in y)."""
    return f.map_exponents2(lambda d: 2 * d, lambda h: 2 * h)


def from_sqrt_variable(f: LaurentSeries) -> LaurentSeries:
    if any(d % 2 for d in f._c):
        raise ParityError("series in sqrt(x) has non-integral exponents")
    h = f.head2 if f.head2 == INF else -(-f.head2 // 2)
    return f.map_exponents2(lambda d: d // 2, lambda _: h)


# ---------------------------------------------------------------------------
# powers, inverses, composition
# ---------------------------------------------------------------------------


def _binom(r: Fraction, j: int):
    out = Q(1)
    for i in range(j):
        out = out * (r - i) / (i + 1)
    return out


def _is_natural(r: Fraction) -> bool:
    return r.denominator == 1 and r >= 0


def _split(f: LaurentSeries):
    """Split ``f`` at its lowest unit coefficient.

    Returns ``(p2, lead, h, lower)`` with
    ``f = lead * x^(p2/2) * (1 + h) + lower``, where ``h`` has positive
    exponents and every coefficient of ``lower`` (all below ``p2``) is
    nilpotent.
    """
    ring = f.ring
    for d in sorted(f._c):
        a = f._c[d]
        if ring.is_nilpotent(a):
            continue
        if not ring.is_unit(a):
            raise AdmissibilityError(f"leading coefficient {a} at x^{Fraction(d, 2)} is not a unit")
        inv = ring.inverse(a)
        h = {}
        for e, b in f._c.items():
            if e > d:
                h[e - d] = b * inv
        lower = {e: b for e, b in f._c.items() if e < d}
        return (
            d,
            a,
            LaurentSeries._raw(ring, h, f.head2 - d),
            LaurentSeries._raw(ring, lower, INF),
        )
    if f.head2 != INF:
        raise PrecisionError("no unit coefficient within the known window")
    raise AdmissibilityError("series has no unit coefficient")


def _nil_powers(lower: LaurentSeries) -> list[LaurentSeries]:
    out = [constant(lower.ring.one(), lower.ring)]
    p = lower
    while not p.is_zero():
        if len(out) > lower.ring.nil_index + 1:
            raise AdmissibilityError("nilpotent part failed to vanish")
        out.append(p)
        p = _mul(p, lower)
    return out


class _UnitPowers:
    """Cached powers ``(1 + h)^q`` for integer and half-integer ``q``."""

    def __init__(self, h: LaurentSeries, cap2):
        self.h = h
        self.cap2 = cap2
        one = constant(h.ring.one(), h.ring)
        self.u = add(one, h)
        self.cache = {0: one, 1: self.u}
        self._w = None
        self._s = None

    def _binomial(self, r: Fraction) -> LaurentSeries:
        h = self.h
        if h.is_zero() and h.is_exact():
            return self.cache[0]
        if self.cap2 == INF:
            raise PrecisionError("infinite expansion requested without a precision cap")
        v = h.val2
        out = self.cache[0]
        hp = self.cache[0]
        c = Q(1)
        i = 0
        while True:
            i += 1
            c = c * (r - i + 1) / i
            if not c:
                break
            hp = _mul(hp, h, self.cap2)
            if hp.is_zero() and hp.head2 >= self.cap2:
                break
            out = add(out, hp.scale(c))
            if i * v >= self.cap2:
                break
        return out.truncate2(self.cap2)

    def get(self, q: Fraction) -> LaurentSeries:
        if q.denominator == 2:
            if self._s is None:
                self._s = self._binomial(Fraction(1, 2))
            k = q - Fraction(1, 2)
            return _mulc(self._s, self.get(k), self.cap2)
        k = int(q)
        if k in self.cache:
            return self.cache[k]
        if k > 0:
            out = _mulc(self.get(Fraction(k - 1)), self.u, self.cap2)
        else:
            if self._w is None:
                self._w = self._binomial(Fraction(-1))
                self.cache[-1] = self._w
            out = _mulc(self.get(Fraction(k + 1)), self._w, self.cap2)
        self.cache[k] = out
        return out


def _lead_power(ring: Ring, lead, q: Fraction):
    if q.denominator == 1:
        return ring.power(lead, int(q))
    return ring.power(ring.sqrt_unit(lead), int(2 * q))


def _exact_power(f: LaurentSeries, k: int) -> LaurentSeries:
    out = constant(f.ring.one(), f.ring)
    base = f
    while k:
        if k & 1:
            out = _mul(out, base)
        k >>= 1
        if k:
            base = _mul(base, base)
    return out


def _power_terms(f_split, exps: list[Fraction], target2, ring):
    """``{r: f^r}`` for each ``r`` in ``exps``, all truncated at ``target2``."""
    p2, lead, h, lower = f_split
    nil = _nil_powers(lower)
    needs = []
    plan = []
    for r in exps:
        if (r * p2).denominator != 1:
            raise AdmissibilityError(f"x^({Fraction(p2, 2)})^{r} leaves the half-integer lattice")
        for j, L in enumerate(nil):
            c = _binom(r, j)
            if not c:
                break
            q = r - j
            plan.append((r, j, q, c))
            if not (_is_natural(q) and h.is_exact()):
                needs.append(target2 - L.val2 - int(q * p2))
    cap = max(needs) if needs else INF
    if cap != INF and target2 == INF:
        raise PrecisionError("infinite expansion requested without a precision target")
    units = _UnitPowers(h, cap)
    out: dict[Fraction, LaurentSeries] = {}
    for r, j, q, c in plan:
        u = units.get(q)
        shift = int(q * p2)
        term = _mul(u, nil[j], INF if u.is_exact() else target2 - shift)
        term = term.scale(c * _lead_power(ring, lead, q)).shift2(shift)
        out[r] = add(out[r], term) if r in out else term
    return out


def power(f: LaurentSeries, r, prec: int | None = None) -> LaurentSeries:
    """``f^r`` for integer or half-integer ``r``."""
    r = Fraction(r)
    if r.denominator > 2:
        raise AdmissibilityError(f"power {r} is not a half-integer")
    if _is_natural(r) and f.is_exact():
        return _exact_power(f, int(r))
    prec = default_prec() if prec is None else prec
    split = _split(f)
    rp = r * split[0]
    if rp.denominator != 1:
        raise AdmissibilityError(f"x^({Fraction(split[0], 2)})^{r} leaves the half-integer lattice")
    target = INF if _is_natural(r) else int(rp) + 2 * prec
    return _power_terms(split, [r], target, f.ring)[r]


def invert_mul(f: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Multiplicative inverse; the lowest non-nilpotent coefficient must be a unit."""
    return power(f, -1, prec)


def log_derivative(f: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    return mul(derivative(f), invert_mul(f, prec))


def compose(f: LaurentSeries, g: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """``f(g(x))`` for a nil-Laurent ``g``.

    ``g`` must have a unit coefficient at ``x`` and nilpotent coefficients
    below it.  ``g^m = sum_j C(m, j) g_+^(m-j) g_-^j`` is a finite sum because
    the lower part ``g_-`` is nilpotent.
    """
    ring, f, g = _unify(f, g)
    prec = default_prec() if prec is None else prec
    if f.is_zero() and f.is_exact():
        return f
    split = _split(g)
    if split[0] != 2:
        raise AdmissibilityError("substituted series must start with a unit multiple of x")
    nil = _nil_powers(split[3])

    exps = [Fraction(d, 2) for d in f._c]
    tail = INF
    if not f.is_exact():
        # unknown part of f is O(g^(head)); its j-th binomial piece starts at
        # head - 2j + val(g_-^j)
        tail = min(f.head2 - 2 * j + L.val2 for j, L in enumerate(nil))
    target = INF
    if any(not _is_natural(m) for m in exps) or not g.is_exact():
        target = min(f.val2 + 2 * prec, tail)

    rest = [m for m in exps if not _is_natural(m)]
    nat = sorted(m for m in exps if _is_natural(m))
    if not g.is_exact():
        rest, nat = exps, []
    powers = _power_terms(split, rest, target, ring) if rest else {}
    cap = tail
    if any(not p.is_exact() for p in powers.values()):
        cap = min(cap, target)
    if nat:
        powers.update(_natural_powers(g, split, nil, nat, cap))
    out = LaurentSeries._raw(ring, {}, tail)
    for d, a in f._c.items():
        out = add(out, powers[Fraction(d, 2)].scale(a))
    return out


def _natural_powers(g, split, nil, nat, cap):
    """``{m: g^m}`` for exact ``g``, each known below ``cap``.

    Intermediate powers are truncated with slack for the lowest valuation
    ``g^j`` can still contribute, ``2j - min(j, J) (2 - v)`` where ``J`` is the
    top nonvanishing power of ``g_-`` and ``v`` its valuation.
    """
    ring = g.ring
    top = len(nil) - 1
    v = split[3].val2 if top else 0
    nat = {int(m) for m in nat}
    big = max(nat)
    low = [2 * j - min(j, top) * (2 - v) for j in range(big + 1)]
    slack = [min(low[: big - k + 1]) for k in range(big + 1)]
    out = {}
    cur = constant(ring.one(), ring)
    for k in range(big + 1):
        if k:
            cur = _mul(cur, g)
            if cap != INF:
                cur = LaurentSeries._raw(ring, {d: a for d, a in cur._c.items() if d < cap - slack[k]}, INF)
        if k in nat:
            out[Fraction(k)] = cur if cap == INF else cur.truncate2(cap)
    return out


def _reversion(lead, h: LaurentSeries, ring: Ring, target2) -> LaurentSeries:
    """Compositional inverse of ``lead * x * (1 + h)`` (a power series)."""
    inv = ring.inverse(lead)
    if h.is_zero() and h.is_exact():
        return monomial(1, inv, ring)
    w = _UnitPowers(h, target2 - 2).get(Fraction(-1))
    # Lagrange: [x^n] P = (1/n) [x^(n-1)] (x / g)^n
    out = {}
    wn = constant(ring.one(), ring)
    n = 1
    inv_n = ring.one()
    while 2 * n < target2:
        wn = _mul(wn, w, target2 - 2)
        inv_n = inv_n * inv
        d = 2 * n - 2
        if d >= wn.head2:
            break
        a = wn._c.get(d)
        if a:
            out[2 * n] = a * inv_n * Q(1, n)
        n += 1
    return LaurentSeries._raw(ring, out, min(target2, w.head2 + 2))


def invert_comp(g: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Compositional inverse of a nil-Laurent series with integral exponents.

    Write ``g = (x + delta) o g_+`` with ``delta = g_- o P`` and ``P`` the
    Lagrange reversion of the power-series part ``g_+``.  Every coefficient
    of ``delta`` is nilpotent, so the reversion of ``x + delta``,
    ``x + sum_n (-1)^n / n! * D^(n-1) delta^n``, is a finite sum, and
    ``g^-1 = P o (x + delta)^-1``.
    """
    prec = default_prec() if prec is None else prec
    if parity(g) is not ExponentParity.INTEGRAL:
        raise ParityError("compositional inverse needs integral exponents")
    p2, lead, h, lower = _split(g)
    if p2 != 2:
        raise AdmissibilityError("series must start with a unit multiple of x")
    ring = g.ring
    target = 2 + 2 * prec
    if lower.is_zero():
        return _reversion(lead, h, ring, target)
    extra = 0
    best = None
    for _ in range(8):
        work = prec + extra
        try:
            cur = _nil_inverse(lead, h, lower, ring, work)
        except PrecisionError:
            cur = None
        if cur is not None:
            if cur.head2 >= target:
                return cur.truncate2(target)
            if best is not None and cur.head2 <= best.head2:
                break  # limited by the precision of g itself
            best = cur
        extra += 4 if cur is None else max(2, (target - cur.head2 + 1) // 2)
    if best is None:
        raise PrecisionError("input known too coarsely to invert")
    return best


def _nil_inverse(lead, h, lower, ring, work):
    rev = _reversion(lead, h, ring, 2 + 2 * work)
    delta = compose(lower, rev, work)
    w = gen(ring)
    dn = constant(ring.one(), ring)
    fact = 1
    for n in range(1, ring.nil_index):
        dn = _mul(dn, delta)
        fact *= n
        term = dn
        for _ in range(n - 1):
            term = derivative(term)
        w = add(w, term.scale(Q((-1) ** n, fact)))
    return compose(rev, w, work)
