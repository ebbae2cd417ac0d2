"""Exact Laurent-series algebra for circle-equivariant Tate cohomology.

Series live over a coefficient ring (rationals, ``Q[sqrt(pi)^(+-1)]``,
``Q[eps]/eps^n`` or a polynomial ring) with doubled half-integer exponents.
"""
from .autgroup import NilLaurentAut, act, double_cover, group_compose, group_inverse, odd_action, witt_apply
from .errors import (
    AdmissibilityError,
    FitError,
    MembershipError,
    ParityError,
    ParseError,
    PoleError,
    PrecisionError,
    RingMismatchError,
    TateError,
    WindowError,
)
from .expr import Context, eval_text, parse, render
from .fgl import FormalGroupData, additive_fgl, boundary, mishchenko_fgl
from .fock import (
    FockElement,
    GradedOperator,
    central_charge_fit,
    commutator,
    enumerate_basis,
    kontsevich_check,
    mode,
    phi_exp,
    rho,
    thom_series,
    virasoro,
    virasoro_mode_compat,
)
from .scalars import PIHALF, RATIONAL, NilpotentRing, PiHalf, PolyRing, gamma_reciprocal, gamma_value
from .series import (
    LaurentSeries,
    compose,
    derivative,
    galois,
    invert_comp,
    invert_mul,
    monomial,
    mul,
    residue,
    truncate_mt,
)
from .symplectic import divided_power, dp, embed_half, form_angle, involution, kronecker_pair, symp

__version__ = "0.1.0"
