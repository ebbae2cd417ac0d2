"""One-dimensional formal group laws presented by their logarithm.

Only the logarithm, its compositional inverse and the formal inverse series
``[-1](e)`` are ever needed, so the group law itself is not built.  The
universal law is truncated: ``log(e) = sum_{n<N} CP_n e^(n+1) / (n+1)`` over
``Q[CP_1, ..., CP_{N-1}]`` with ``CP_0 = 1``, known up to ``O(e^(N+1))``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import TateError
from .scalars import RATIONAL, PolyRing, Q, Ring
from .series import (
    LaurentSeries,
    compose,
    derivative,
    gen,
    invert_comp,
    mul,
    residue,
)


@dataclass(frozen=True)
class FormalGroupData:
    name: str
    ring: Ring
    log: LaurentSeries
    exp: LaurentSeries
    minus_one: LaurentSeries
    #: relative precision used when composing against this law
    prec: int

    def dlog(self) -> LaurentSeries:
        return derivative(self.log)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ring": str(self.ring),
            "log": self.log.to_json(),
            "exp": self.exp.to_json(),
            "minus_one": self.minus_one.to_json(),
        }


def additive_fgl(head: int = 8, ring: Ring = RATIONAL) -> FormalGroupData:
    if head < 2:
        raise TateError("additive law needs head >= 2")
    x = gen(ring)
    return FormalGroupData("additive", ring, x, x, -x, head)


def mishchenko_fgl(n: int) -> FormalGroupData:
    """Universal law over ``Q[CP_1, ..., CP_{n-1}]`` truncated at ``O(e^(n+1))``."""
    if n < 1:
        raise TateError("the Mishchenko law needs N >= 1")
    ring = PolyRing.cobordism(n)
    terms = {2: ring.one()}
    for k in range(1, n):
        terms[2 * k + 2] = ring.gen(f"CP{k}") * Q(1, k + 1)
    log = LaurentSeries(terms, 2 * n + 2, ring)
    exp = invert_comp(log, n)
    minus_one = compose(exp, -log, n)
    return FormalGroupData(f"mu:{n}", ring, log, exp, minus_one, n)


def boundary(f: LaurentSeries, fg: FormalGroupData):
    """``res f(e) dlog(e)``: the geometric boundary of a free T-manifold class."""
    return residue(mul(f, fg.dlog()))


def fgl_from_name(name: str, head: int = 8) -> FormalGroupData:
    """``additive`` or ``mu:N``."""
    if name == "additive":
        return additive_fgl(head)
    if name.startswith("mu:"):
        return mishchenko_fgl(int(name[3:]))
    raise TateError(f"unknown formal group law preset {name!r}")


def cobordism_degree(exponents: tuple[int, ...], e_power: int = 0) -> int:
    """Cohomological degree of ``prod CP_n^(a_n) * e^j``.

    ``CP_n`` sits in degree ``-2n`` and ``e`` in degree 2.  This is bookkeeping
    only; nothing in the series code enforces homogeneity.
    """
    return -2 * sum((i + 1) * a for i, a in enumerate(exponents)) + 2 * e_power
