"""Invertible nil-Laurent series, the Witt algebra and the odd double cover.

An element of the group is a series ``g(x) = sum g_k x^(k+1)`` with ``g_0`` a
unit and ``g_k`` nilpotent for ``k < 0``; it acts on Laurent series by
substitution ``f -> f o g``.  Odd series in ``sqrt(x)`` map onto the group by
squaring.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MembershipError, ParityError, RingMismatchError
from .series import (
    ExponentParity,
    LaurentSeries,
    compose,
    default_prec,
    derivative,
    from_sqrt_variable,
    gen,
    invert_comp,
    monomial,
    mul,
    parity,
    to_sqrt_variable,
)


def _check_member(g: LaurentSeries) -> None:
    if parity(g) is not ExponentParity.INTEGRAL:
        raise MembershipError("group elements have integral exponents")
    ring = g.ring
    if g.head2 <= 2:
        raise MembershipError("coefficient of x is not known")
    if not ring.is_unit(g.coeffs2().get(2, ring.zero())):
        raise MembershipError("coefficient of x is not a unit")
    for d, a in g.items2():
        if d <= 0 and not ring.is_nilpotent(a):
            raise MembershipError(f"coefficient {a} of x^{d // 2} is not nilpotent")


@dataclass(frozen=True, eq=False)
class NilLaurentAut:
    series: LaurentSeries

    def __post_init__(self):
        _check_member(self.series)

    @property
    def ring(self):
        return self.series.ring

    def agrees(self, other: NilLaurentAut) -> bool:
        return self.series.agrees(other.series)

    def __str__(self):
        return str(self.series)


def make_aut(series: LaurentSeries) -> NilLaurentAut:
    return NilLaurentAut(series)


def identity(ring) -> NilLaurentAut:
    return NilLaurentAut(gen(ring))


def group_compose(g: NilLaurentAut, h: NilLaurentAut, prec: int | None = None) -> NilLaurentAut:
    """``g o h``, i.e. ``x -> g(h(x))``."""
    if g.ring != h.ring:
        raise RingMismatchError(f"group elements over {g.ring} and {h.ring}")
    return NilLaurentAut(compose(g.series, h.series, prec))


def group_inverse(g: NilLaurentAut, prec: int | None = None) -> NilLaurentAut:
    return NilLaurentAut(invert_comp(g.series, prec))


def act(g: NilLaurentAut, f: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Send the Euler class ``e`` to ``g(e)``."""
    return compose(f, g.series, prec)


def witt_apply(k: int, f: LaurentSeries) -> LaurentSeries:
    """The derivation ``x^(k+1) d/dx``."""
    return mul(monomial(k + 1, 1, f.ring), derivative(f))


def _check_odd(gc: LaurentSeries) -> None:
    if parity(gc) is not ExponentParity.ODD_HALF:
        raise ParityError("the cover is defined on odd series in sqrt(x)")
    ring = gc.ring
    if gc.head2 <= 1 or not ring.is_unit(gc.coeffs2().get(1, ring.zero())):
        raise MembershipError("coefficient of x^(1/2) must be a unit")
    for d, a in gc.items2():
        if d < 1 and not ring.is_nilpotent(a):
            raise MembershipError(f"coefficient {a} of x^({d}/2) is not nilpotent")


def double_cover(gc: LaurentSeries) -> NilLaurentAut:
    """``g(x) = gc(sqrt(x))^2``."""
    _check_odd(gc)
    return NilLaurentAut(mul(gc, gc))


def odd_compose(gc: LaurentSeries, hc: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Composition of odd series in the ``sqrt(x)`` variable."""
    _check_odd(gc)
    _check_odd(hc)
    return odd_action(hc, gc, prec)


def odd_action(gc: LaurentSeries, u: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """``u o gc`` computed in the variable ``y = sqrt(x)``."""
    _check_odd(gc)
    prec = default_prec() if prec is None else prec
    # prec counts x-steps; in y the same window is twice as many steps
    out = compose(to_sqrt_variable(u), to_sqrt_variable(gc), 2 * prec)
    return from_sqrt_variable(out)
