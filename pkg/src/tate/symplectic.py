"""The Tate pairing on Laurent series and its half-integral model.

On the Laurent side ``(f, g) = boundary(f g)`` and the symplectic form is
``{f, g} = (I f, g)`` where ``I`` substitutes the formal inverse ``[-1](e)``.
On the half-integral side ``<u, v> = pi * res u dv``.  The embedding
``e^k -> gamma_{-k-1/2}`` intertwines the two forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParityError, PrecisionError
from .fgl import FormalGroupData, additive_fgl, boundary
from .scalars import PIHALF, PiHalf, from_doubled, gamma_reciprocal, to_doubled
from .series import (
    ExponentParity,
    LaurentSeries,
    compose,
    derivative,
    mul,
    parity,
    residue,
)

ADDITIVE = additive_fgl()


def kronecker_pair(f: LaurentSeries, g: LaurentSeries, fg: FormalGroupData = ADDITIVE):
    return boundary(mul(f, g), fg)


def involution(f: LaurentSeries, fg: FormalGroupData = ADDITIVE) -> LaurentSeries:
    """``f(e) -> f([-1](e))``; for the additive law simply ``e -> -e``."""
    if parity(f) is not ExponentParity.INTEGRAL:
        raise ParityError("the involution acts on integral-exponent series")
    return compose(f, fg.minus_one, fg.prec)


def symp(f: LaurentSeries, g: LaurentSeries, fg: FormalGroupData = ADDITIVE):
    return kronecker_pair(involution(f, fg), g, fg)


@dataclass(frozen=True)
class DividedPower:
    """``gamma_s(x) = x^s / Gamma(1 + s)``, zero at negative integers."""

    index2: int

    @property
    def index(self) -> Fraction:
        return from_doubled(self.index2)

    @property
    def coefficient(self) -> PiHalf:
        return gamma_reciprocal(self.index)

    @property
    def series(self) -> LaurentSeries:
        return LaurentSeries({self.index2: self.coefficient}, ring=PIHALF)

    def derivative(self) -> DividedPower:
        return DividedPower(self.index2 - 2)


def divided_power(s) -> DividedPower:
    return DividedPower(to_doubled(s))


def dp(s) -> LaurentSeries:
    return divided_power(s).series


def form_angle(u: LaurentSeries, v: LaurentSeries) -> PiHalf:
    """``pi * res u dv``."""
    r = residue(mul(u, derivative(v)))
    return PIHALF.coerce(r) * PiHalf.pi_power(2)


def embed_half(f: LaurentSeries) -> LaurentSeries:
    """Linear extension of ``e^k -> gamma_{-k-1/2}``; the image is odd-half."""
    if not f.is_exact():
        raise PrecisionError("embedding needs an exactly known series: unknown high powers land at low exponents")
    if parity(f) is not ExponentParity.INTEGRAL:
        raise ParityError("embedding acts on integral-exponent series")
    out = {}
    for d, a in f.items2():
        k = d // 2
        s2 = -2 * k - 1
        out[s2] = PIHALF.coerce(a) * gamma_reciprocal(from_doubled(s2))
    return LaurentSeries(out, ring=PIHALF)


def embed_inverse(u: LaurentSeries) -> LaurentSeries:
    """Preimage of an exact odd-half series under :func:`embed_half`."""
    if not u.is_exact():
        raise PrecisionError("preimage needs an exactly known series")
    if u.is_zero():
        return LaurentSeries(ring=PIHALF)
    if parity(u) is not ExponentParity.ODD_HALF:
        raise ParityError("the image of the embedding is odd-half")
    out = {}
    for s2, a in u.items2():
        k = (-s2 - 1) // 2
        out[2 * k] = PIHALF.coerce(a) * gamma_reciprocal(from_doubled(s2)).inverse()
    return LaurentSeries(out, ring=PIHALF)
