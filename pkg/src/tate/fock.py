"""Bosonic Fock space Q[t_0, t_1, ...] with half-integer Heisenberg modes.

The generator ``t_k`` has weight ``k + 1/2`` (doubled: ``2k + 1``), so each
weight space is finite-dimensional.  Modes follow the twisted-boson
normalization

    alpha_{-(k+1/2)} = multiplication by t_k,
    alpha_{k+1/2}    = (k + 1/2) d/dt_k,

so that ``[alpha_s, alpha_t] = s * delta_{s+t,0}``.  Operators are stored
exactly, one sparse block per source weight, and are only materialized on
weights whose images stay inside a declared window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import FitError, TateError, WindowError
from .scalars import (
    PIHALF,
    PiHalf,
    PolyRing,
    Q,
    double_factorial,
    from_doubled,
    gamma_reciprocal,
    join_terms,
    render_half,
    to_doubled,
)
from .series import LaurentSeries, constant, mul, parity, ExponentParity

Mono = tuple  # exponent vector (m_0, m_1, ...), trailing zeros trimmed


def _trim(m) -> Mono:
    m = list(m)
    while m and not m[-1]:
        m.pop()
    return tuple(m)


def weight2(m: Mono) -> int:
    return sum(e * (2 * k + 1) for k, e in enumerate(m))


def render_mono(m: Mono) -> str:
    parts = []
    for k, e in enumerate(m):
        if e == 1:
            parts.append(f"t{k}")
        elif e:
            parts.append(f"t{k}^{e}")
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# elements and bases
# ---------------------------------------------------------------------------


class FockElement:
    """Finite rational combination of monomials in the ``t_k``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        for m, c in (terms or {}).items():
            c = Q(c)
            if c:
                m = _trim(m)
                self.terms[m] = self.terms.get(m, 0) + c
        self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def vacuum(cls) -> FockElement:
        return cls({(): 1})

    @classmethod
    def gen(cls, k: int) -> FockElement:
        return cls({(0,) * k + (1,): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return FockElement(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> FockElement:
        return FockElement({m: a * c for m, a in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, FockElement):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is type(Q(0)):
            return self.terms == ({(): Q(other)} if other else {})
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        parts = []
        for m in sorted(self.terms, key=_basis_key):
            c = self.terms[m]
            body = render_mono(m)
            if body == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return join_terms(parts)

    __repr__ = __str__


def _basis_key(m: Mono):
    # graded by degree, then by higher generators first
    return (sum(m), tuple(-e for e in reversed(m)), len(m))


def _partitions(w2: int, maxpart: int) -> Iterable[list[int]]:
    """Partitions of ``w2`` into odd parts ``<= maxpart`` (non-increasing)."""
    if w2 == 0:
        yield []
        return
    p = min(maxpart, w2)
    if p % 2 == 0:
        p -= 1
    while p >= 1:
        for rest in _partitions(w2 - p, p):
            yield [p] + rest
        p -= 2


_BASIS_CACHE: dict[int, tuple[Mono, ...]] = {}


def enumerate_basis2(w2: int) -> tuple[Mono, ...]:
    if w2 < 0:
        return ()
    if w2 not in _BASIS_CACHE:
        monos = []
        for parts in _partitions(w2, w2):
            m = [0] * ((max(parts) + 1) // 2 if parts else 0)
            for p in parts:
                m[(p - 1) // 2] += 1
            monos.append(_trim(m))
        _BASIS_CACHE[w2] = tuple(sorted(monos, key=_basis_key))
    return _BASIS_CACHE[w2]


def enumerate_basis(w) -> list[Mono]:
    """Monomials of weight exactly ``w`` in canonical order."""
    return list(enumerate_basis2(to_doubled(w)))


# ---------------------------------------------------------------------------
# modes
# ---------------------------------------------------------------------------


def _apply_mode2(s2: int, elem: dict) -> dict:
    """Action of ``alpha_{s2/2}`` on ``{mono: coeff}``."""
    if s2 % 2 == 0:
        raise TateError("modes are indexed by half-odd integers")
    out: dict = {}
    if s2 < 0:
        k = (-s2 - 1) // 2
        for m, c in elem.items():
            n = list(m) + [0] * (k + 1 - len(m))
            n[k] += 1
            n = tuple(n)
            out[n] = out.get(n, 0) + c
    else:
        k = (s2 - 1) // 2
        for m, c in elem.items():
            if k < len(m) and m[k]:
                n = list(m)
                n[k] -= 1
                n = _trim(n)
                out[n] = out.get(n, 0) + c * m[k] * Q(s2, 2)
    return {m: c for m, c in out.items() if c}


@dataclass(frozen=True)
class GradedOperator:
    """Exact operator on the window of weights ``<= window2 / 2``.

    ``blocks[w2][mono]`` is the image of ``mono`` (of doubled weight ``w2``)
    as a ``{mono: coeff}`` dict.  ``shifts`` lists the doubled weight shifts
    ``d`` of the homogeneous pieces (image weight ``w - d``); the operator is
    homogeneous when there is exactly one.
    """

    window2: int
    shifts: frozenset
    blocks: dict = field(repr=False)

    @property
    def shift2(self) -> int:
        if len(self.shifts) != 1:
            raise TateError("operator is not homogeneous")
        return next(iter(self.shifts))

    def weights2(self) -> list[int]:
        return sorted(self.blocks)

    def _targets_ok(self, w2: int, other: GradedOperator) -> bool:
        return all(w2 - d < 0 or w2 - d in self.blocks for d in other.shifts)

    def apply(self, elem: FockElement) -> FockElement:
        out: dict = {}
        for m, c in elem.terms.items():
            w2 = weight2(m)
            if w2 not in self.blocks:
                raise WindowError(f"weight {render_half(w2)} is outside the operator window")
            for n, a in self.blocks[w2][m].items():
                out[n] = out.get(n, 0) + a * c
        return FockElement(out)

    def compose(self, other: GradedOperator, weights2: Iterable[int] | None = None) -> GradedOperator:
        """``self o other`` on every source weight where both are materialized."""
        ws = other.weights2() if weights2 is None else weights2
        shifts = frozenset(a + b for a in self.shifts for b in other.shifts)
        blocks = {}
        for w2 in ws:
            if w2 not in other.blocks or not self._targets_ok(w2, other):
                continue
            col = {}
            for m, img in other.blocks[w2].items():
                out: dict = {}
                for n, a in img.items():
                    for p, b in self.blocks[weight2(n)][n].items():
                        out[p] = out.get(p, 0) + a * b
                col[m] = {p: c for p, c in out.items() if c}
            blocks[w2] = col
        return GradedOperator(min(self.window2, other.window2), shifts, blocks)

    def combine(self, other: GradedOperator, a=1, b=1) -> GradedOperator:
        """``a*self + b*other`` on the common weights."""
        blocks = {}
        for w2 in sorted(set(self.blocks) & set(other.blocks)):
            col = {}
            for m in self.blocks[w2]:
                out = {n: c * a for n, c in self.blocks[w2][m].items()}
                for n, c in other.blocks[w2][m].items():
                    out[n] = out.get(n, 0) + c * b
                col[m] = {n: c for n, c in out.items() if c}
            blocks[w2] = col
        return GradedOperator(min(self.window2, other.window2), self.shifts | other.shifts, blocks)

    def scale(self, c) -> GradedOperator:
        blocks = {
            w2: {m: {n: a * c for n, a in img.items() if a * c} for m, img in col.items()}
            for w2, col in self.blocks.items()
        }
        return GradedOperator(self.window2, self.shifts, blocks)

    def restrict(self, weights2: Iterable[int]) -> GradedOperator:
        keep = set(weights2)
        return GradedOperator(self.window2, self.shifts, {w: c for w, c in self.blocks.items() if w in keep})

    def __add__(self, other):
        return self.combine(other)

    def __sub__(self, other):
        return self.combine(other, 1, -1)

    def scalar_on(self, w2: int):
        """The scalar this operator is on weight ``w2``, or ``None``."""
        col = self.blocks[w2]
        value = None
        for m, img in col.items():
            if set(img) - {m}:
                return None
            c = img.get(m, Q(0))
            if value is None:
                value = c
            elif c != value:
                return None
        return Q(0) if value is None else value

    def is_zero(self) -> bool:
        return all(not img for col in self.blocks.values() for img in col.values())

    def agrees(self, other: GradedOperator) -> bool:
        common = set(self.blocks) & set(other.blocks)
        return bool(common) and all(self.blocks[w] == other.blocks[w] for w in common)

    def matrix(self, w2: int, target2: int | None = None):
        """``(rows, cols, entries)`` of the block from weight ``w2``."""
        if w2 not in self.blocks:
            raise WindowError(f"weight {render_half(w2)} is outside the operator window")
        if target2 is None:
            target2 = w2 - self.shift2
        cols = enumerate_basis2(w2)
        rows = enumerate_basis2(target2)
        entries = [[self.blocks[w2][m].get(n, Q(0)) for m in cols] for n in rows]
        return rows, cols, entries

    def to_json(self) -> dict:
        out = []
        for w2 in self.weights2():
            for d in sorted(self.shifts):
                if w2 - d < 0:
                    continue
                rows, cols, entries = self.matrix(w2, w2 - d)
                out.append(
                    {
                        "source_weight": render_half(w2).strip("()"),
                        "target_weight": render_half(w2 - d).strip("()"),
                        "rows": [render_mono(m) for m in rows],
                        "cols": [render_mono(m) for m in cols],
                        "entries": [[str(a) for a in row] for row in entries],
                    }
                )
        return {"shifts": [render_half(d).strip("()") for d in sorted(self.shifts)], "blocks": out}


def _materialize(action: Callable[[Mono], dict], shifts: Iterable[int], window2: int) -> GradedOperator:
    shifts = frozenset(shifts)
    blocks = {}
    for w2 in range(window2 + 1):
        if any(w2 - d > window2 for d in shifts):
            continue
        blocks[w2] = {m: action(m) for m in enumerate_basis2(w2)}
    if not blocks:
        raise WindowError(f"no weight space up to {render_half(window2)} has its image inside the window")
    return GradedOperator(window2, shifts, blocks)


def _window2(window) -> int:
    return to_doubled(window)


def identity(window) -> GradedOperator:
    return _materialize(lambda m: {m: Q(1)}, [0], _window2(window))


def mode(s, window) -> GradedOperator:
    """Heisenberg mode ``alpha_s`` for ``s`` in ``Z + 1/2``."""
    s2 = to_doubled(s)
    if s2 % 2 == 0:
        raise TateError(f"mode index {s} is not a half-odd integer")
    return _materialize(lambda m: _apply_mode2(s2, {m: Q(1)}), [s2], _window2(window))


def commutator(a: GradedOperator, b: GradedOperator, weights2: Iterable[int] | None = None) -> GradedOperator:
    ws = None if weights2 is None else list(weights2)
    ab = a.compose(b, ws)
    ba = b.compose(a, ws)
    if not (set(ab.blocks) & set(ba.blocks)):
        raise WindowError("the windows leave no weight on which both products are defined")
    return ab - ba


# ---------------------------------------------------------------------------
# the Laurent side: rho
# ---------------------------------------------------------------------------


def rho_constant(k: int) -> Fraction:
    """Normalization of ``e^k`` in terms of modes (see :func:`rho`)."""
    if k >= 0:
        return Fraction(1)
    return Fraction((-1) ** (k % 2)) / (Fraction(-k) - Fraction(1, 2))


def rho_mode2(k: int) -> int:
    """Doubled mode index carrying ``e^k``: ``-(k+1/2)`` or ``-k-1/2``."""
    return -(2 * k + 1)


def rho(f: LaurentSeries, window) -> GradedOperator:
    """Heisenberg operator attached to an integral Laurent series over Q.

    ``e^k -> nu_k * alpha_{-(k+1/2)}`` with ``nu_k = 1`` for ``k >= 0`` and
    ``nu_k = (-1)^k / (-k - 1/2)`` for ``k <= -1``; with this table
    ``[rho(u), rho(v)] = symp(u, v)`` for the additive law.
    """
    if not f.is_exact():
        raise TateError("rho needs an exactly known series")
    if parity(f) is not ExponentParity.INTEGRAL:
        raise TateError("rho acts on integral-exponent series")
    w2 = _window2(window)
    terms = [(rho_mode2(d // 2), Q(a) * Q(rho_constant(d // 2))) for d, a in f.items2()]

    def action(m):
        out: dict = {}
        for s2, c in terms:
            for n, a in _apply_mode2(s2, {m: Q(1)}).items():
                out[n] = out.get(n, 0) + a * c
        return {n: a for n, a in out.items() if a}

    return _materialize(action, [s2 for s2, _ in terms] or [0], w2)


# ---------------------------------------------------------------------------
# Virasoro
# ---------------------------------------------------------------------------


def _virasoro_action(n: int, m: Mono) -> dict:
    """``L_n m = 1/2 sum_s :alpha_{n-s} alpha_s: m`` with annihilators applied first."""
    reach = weight2(m) + 2 * abs(n) + 2
    out: dict = {}
    for j in range(-reach, reach + 1):
        s2 = 2 * j + 1
        a2, b2 = 2 * n - s2, s2
        if a2 > 0 > b2:
            a2, b2 = b2, a2
        img = _apply_mode2(a2, _apply_mode2(b2, {m: Q(1)}))
        for p, c in img.items():
            out[p] = out.get(p, 0) + c / 2
    return {p: c for p, c in out.items() if c}


def virasoro(n: int, window) -> GradedOperator:
    """Segal-Sugawara ``L_n`` with zero constant in ``L_0``."""
    return _materialize(lambda m: _virasoro_action(n, m), [2 * n], _window2(window))


def virasoro_mode_compat(n: int, s, window) -> bool:
    """``[L_n, alpha_s] = -s alpha_{s+n}`` on every weight the window allows."""
    s = Fraction(s)
    lhs = commutator(virasoro(n, window), mode(s, window))
    rhs = mode(s + n, window).scale(Q(-s))
    common = set(lhs.blocks) & set(rhs.blocks)
    if not common:
        raise WindowError("window too small for the compatibility check")
    return all(lhs.blocks[x] == rhs.blocks[x] for x in common)


@dataclass(frozen=True)
class CentralFit:
    alpha: Fraction
    beta: Fraction
    defects: dict  # m -> scalar c_m
    weights: dict  # m -> doubled source weights on which the defect was checked

    @property
    def central_charge(self) -> Fraction:
        return 12 * self.alpha

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "central_charge": str(self.central_charge),
            "defects": {str(m): str(c) for m, c in sorted(self.defects.items())},
        }


def virasoro_defect(m: int, window) -> tuple[Fraction, list[int]]:
    """The scalar ``[L_m, L_{-m}] - 2m L_0`` on every weight in the window."""
    lm, lmm, l0 = virasoro(m, window), virasoro(-m, window), virasoro(0, window)
    d = commutator(lm, lmm) - l0.scale(2 * m)
    value = None
    for w2 in d.weights2():
        c = d.scalar_on(w2)
        if c is None:
            raise FitError(f"defect for m={m} is not scalar on weight {render_half(w2)}")
        if value is not None and c != value:
            raise FitError(f"defect for m={m} depends on the weight ({value} vs {c})")
        value = c
    if value is None:
        raise WindowError(f"window too small to evaluate the defect for m={m}")
    return Fraction(value), d.weights2()


def central_charge_fit(mmax: int, window=None) -> CentralFit:
    """Exact fit of the defects ``c_m = alpha m^3 + beta m`` for ``m = 1..mmax``."""
    if mmax < 2:
        raise FitError("need at least m = 1, 2 to fit two constants")
    window = mmax + 6 if window is None else window
    defects, weights = {}, {}
    for m in range(1, mmax + 1):
        defects[m], weights[m] = virasoro_defect(m, window)
    c1, c2 = defects[1], defects[2]
    # c1 = a + b, c2 = 8a + 2b
    alpha = (c2 - 2 * c1) / 6
    beta = c1 - alpha
    for m, c in defects.items():
        if alpha * m**3 + beta * m != c:
            raise FitError(f"defect {c} at m={m} is not of the form alpha m^3 + beta m")
    return CentralFit(alpha, beta, defects, weights)


# ---------------------------------------------------------------------------
# Thom series and the exponential transformation
# ---------------------------------------------------------------------------


T0_RULE = "t0 = v^(-1)*e"


@dataclass(frozen=True)
class ThomSeries:
    series: LaurentSeries
    order: int
    t0_rule: str = T0_RULE

    def to_json(self) -> dict:
        return {"series": self.series.to_json(), "order": self.order, "t0_rule": self.t0_rule}


def thom_series(n: int) -> ThomSeries:
    """``sum_{-1 <= k < n} t_{k+1} e^k + O(e^n)`` over ``Q[t_0, ..., t_n]``."""
    if n < 0:
        raise TateError("order must be non-negative")
    ring = PolyRing.fock(n)
    terms = {2 * k: ring.gen(f"t{k + 1}") for k in range(-1, n)}
    return ThomSeries(LaurentSeries(terms, 2 * n, ring), n)


def phi_exp(n: int, vmax: int) -> dict[int, LaurentSeries]:
    """Coefficients of ``v^j`` in ``exp(v T)`` for ``j <= vmax``."""
    if n < 1 or vmax < 1:
        raise TateError("need N, vmax >= 1")
    t = thom_series(n).series
    out = {0: constant(t.ring.one(), t.ring)}
    p = out[0]
    for j in range(1, vmax + 1):
        p = mul(p, t).truncate2(2 * n)
        out[j] = p.scale(Q(1, math.factorial(j)))
    return out


def phi_grouplike(n: int, vmax: int) -> bool:
    """``Phi(v1 + v2) = Phi(v1) Phi(v2)`` coefficientwise in ``v1^a v2^b``."""
    phi = phi_exp(n, vmax)
    for a in range(vmax + 1):
        for b in range(vmax + 1 - a):
            lhs = phi[a + b].scale(math.comb(a + b, a))
            rhs = mul(phi[a], phi[b])
            if not lhs.agrees(rhs):
                return False
    return True


# ---------------------------------------------------------------------------
# matrix traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KontsevichCheck:
    lhs: PiHalf
    rhs: PiHalf
    match: bool


def kontsevich_check(eigs: Iterable, k: int) -> KontsevichCheck:
    """Compare ``Trace gamma_{-k-1/2}`` against the odd-factorial formula."""
    eigs = [Q(e) for e in eigs]
    if k < 1:
        raise TateError("k must be >= 1")
    if not eigs or any(e <= 0 for e in eigs):
        raise TateError("eigenvalues must be positive")
    power_sum = sum((e ** -(2 * k + 1) for e in eigs), Q(0))
    lhs = gamma_reciprocal(Fraction(-2 * k - 1, 2)) * power_sum
    rhs = PiHalf.pi_power(-1, Q((-1) ** k * double_factorial(k), 2**k)) * power_sum
    return KontsevichCheck(lhs, rhs, lhs == rhs)
