"""Seeded property checks grouped into suites for ``tate verify``.

Every check returns ``(passed, witness)``; the witness is a short rendering of
the offending instance (or of the computed value on success) and doubles as a
reproducer.  Suites run sequentially in a fixed order, so reports are
byte-identical for a given seed.
"""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import autgroup as ag
from . import fock, symplectic as sp
from .errors import FitError
from .fgl import additive_fgl, boundary, mishchenko_fgl
from .scalars import (
    RATIONAL,
    Nil,
    NilpotentRing,
    PiHalf,
    double_factorial,
    gamma_reciprocal,
    gamma_value,
)
from .series import (
    LaurentSeries,
    compose,
    derivative,
    galois,
    gen,
    invert_comp,
    monomial,
    mul,
    residue,
)

DEFAULT_SEED = 20240


@dataclass
class CheckResult:
    check: str
    status: str  # "pass" | "fail"
    witness: str


@dataclass
class RunReport:
    suite: str
    seed: int
    results: list[CheckResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def summary(self) -> str:
        failed = sum(r.status == "fail" for r in self.results)
        return f"{self.suite}: {len(self.results) - failed}/{len(self.results)} checks passed (seed {self.seed})"

    def lines(self) -> list[str]:
        out = [f"{r.status.upper()} {r.check}: {r.witness}" for r in self.results]
        out += [f"NOTE {n}" for n in self.notes]
        out.append(self.summary())
        return out

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        d["ok"] = self.ok
        return d


Check = Callable[[random.Random, list], tuple]


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


def rand_rational(rng: random.Random, lo=-5, hi=5) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 3))


def rand_laurent(rng: random.Random, lo=-4, hi=4, terms=4) -> LaurentSeries:
    return LaurentSeries({2 * rng.randint(lo, hi): rand_rational(rng) for _ in range(terms)})


def rand_nil(rng: random.Random, ring: NilpotentRing, unit: bool) -> Nil:
    c = [rng.randint(-3, 3) for _ in range(ring.n)]
    c[0] = rng.choice([-2, -1, 1, 2, 3]) if unit else 0
    return Nil(ring.n, c)


def rand_group_series(rng: random.Random, ring) -> LaurentSeries:
    """``a x + b x^2 + c x^3`` plus nilpotent terms at ``x^0`` and ``x^-1``."""
    if isinstance(ring, NilpotentRing):
        terms = {2: rand_nil(rng, ring, True)}
        for d in (4, 6):
            terms[d] = rand_nil(rng, ring, rng.random() < 0.5)
        for d in (0, -2):
            terms[d] = rand_nil(rng, ring, False)
        return LaurentSeries(terms, ring=ring)
    a = rng.choice([-2, -1, 1, 2, 3])
    return LaurentSeries({2: a, 4: rand_rational(rng), 6: rand_rational(rng)})


def rand_odd(rng: random.Random, ring=RATIONAL) -> LaurentSeries:
    """Odd series in ``sqrt(x)`` with unit ``x^(1/2)`` coefficient."""
    if isinstance(ring, NilpotentRing):
        terms = {1: rand_nil(rng, ring, True), 3: rand_nil(rng, ring, rng.random() < 0.5)}
        terms[-1] = rand_nil(rng, ring, False)
        return LaurentSeries(terms, ring=ring)
    return LaurentSeries({1: rng.choice([-1, 1, 2]), 3: rand_rational(rng), 5: rand_rational(rng)})


def inverse_to_head(g: LaurentSeries, head2: int, start: int = 8) -> LaurentSeries:
    """Compositional inverse with enough working precision that ``g o g^-1``
    is known below ``x^(head2/2)``."""
    prec = start
    while True:
        h = invert_comp(g, prec)
        if compose(g, h, prec).head2 >= head2 or prec > 64:
            return h
        prec += 4


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _scalars(rng, notes):
    yield "gamma.recurrence", _all(
        gamma_value(Fraction(s2 + 2, 2)) == Fraction(s2, 2) * gamma_value(Fraction(s2, 2))
        for s2 in range(-9, 10)
        if not (s2 % 2 == 0 and s2 <= 0)
    )
    sqrtpi = PiHalf.pi_power(1)
    yield "gamma.duplication", _all(
        gamma_value(Fraction(s2, 2)) * gamma_value(Fraction(s2 + 1, 2))
        == gamma_value(s2) * sqrtpi * Fraction(2) ** (1 - s2)
        for s2 in range(1, 11)
    )
    yield "gamma.half_integer_formula", _all(
        gamma_value(Fraction(2 * k + 1, 2)) == PiHalf.pi_power(1, Fraction(double_factorial(k), 2**k))
        for k in range(0, 8)
    )
    yield "gamma.reciprocal", _all(
        gamma_reciprocal(Fraction(s2, 2)) * gamma_value(Fraction(s2 + 2, 2)) == 1
        for s2 in range(-9, 10)
        if not (s2 % 2 == 0 and s2 <= -2)
    )
    yield "gamma.reciprocal_poles", _all(gamma_reciprocal(-k) == 0 for k in range(1, 6))
    ring = NilpotentRing(4)
    ok = True
    for _ in range(20):
        a = rand_nil(rng, ring, False)
        ok &= a**4 == 0
    yield "nilpotent.powering", (ok, "a^4 = 0 for 20 random nilpotents in Q[eps]/eps^4")


def _series(rng, notes):
    e = lambda k: monomial(k)  # noqa: E731
    yield "residue.axiom", _all(residue(e(k)) == (1 if k == -1 else 0) for k in range(-10, 11))
    ok, wit = True, "20 random triples"
    for _ in range(20):
        f, g, h = rand_laurent(rng), rand_laurent(rng), rand_laurent(rng)
        good = mul(mul(f, g), h) == mul(f, mul(g, h)) and mul(f, g + h) == mul(f, g) + mul(f, h)
        good &= mul(f, g) == mul(g, f)
        if not good:
            ok, wit = False, f"f={f}, g={g}, h={h}"
            break
    yield "ring.axioms", (ok, wit)
    ok, wit = True, "20 random pairs"
    for _ in range(20):
        f, g = rand_laurent(rng), rand_laurent(rng)
        if residue(derivative(f)) != 0 or residue(mul(f, derivative(g))) != -residue(mul(derivative(f), g)):
            ok, wit = False, f"f={f}, g={g}"
            break
    yield "residue.by_parts", (ok, wit)
    ok, wit = True, "20 random substitutions"
    for _ in range(20):
        f = rand_laurent(rng, -4, 3)
        g = rand_group_series(rng, RATIONAL)
        lhs = residue(mul(compose(f, g, 8), derivative(g)))
        if lhs != residue(f):
            ok, wit = False, f"f={f}, g={g}: {lhs} != {residue(f)}"
            break
    yield "residue.substitution_invariance", (ok, wit)
    ok, wit = True, "10 random triples over Q[eps]/eps^3"
    ring = NilpotentRing(3)
    for _ in range(10):
        f, g, h = (rand_group_series(rng, ring) for _ in range(3))
        lhs = compose(compose(f, g, 16), h, 16)
        rhs = compose(f, compose(g, h, 16), 16)
        if not lhs.agrees(rhs) or min(lhs.head2, rhs.head2) < 8:
            ok, wit = False, f"f={f}, g={g}, h={h}"
            break
    yield "compose.associative", (ok, wit)
    ok, wit = True, "10 random elements over Q[eps]/eps^3"
    for _ in range(10):
        g = rand_group_series(rng, ring)
        h = inverse_to_head(g, 12)
        if not compose(g, h, 12).agrees(gen(ring)) or not invert_comp(h, 8).agrees(g):
            ok, wit = False, f"g={g}"
            break
    yield "invert_comp.round_trip", (ok, wit)
    u = LaurentSeries({1: 1, 3: -2, 4: 5, -1: 3})
    yield "galois.involution", (galois(galois(u)) == u and galois(LaurentSeries({1: 1, -3: 2})) == -LaurentSeries({1: 1, -3: 2}), str(u))


def _fgl(rng, notes):
    x = gen()
    add = additive_fgl()
    mu = mishchenko_fgl(8)
    yield "log_exp.inverse", (
        compose(mu.log, mu.exp, 8).agrees(gen(mu.ring)) and compose(mu.exp, mu.log, 8).agrees(gen(mu.ring)),
        "Mishchenko N=8",
    )
    yield "minus_one.formal_inverse", (compose(mu.log, mu.minus_one, 8).agrees(-mu.log), "log([-1](e)) = -log(e), N=8")
    yield "minus_one.involution", (compose(mu.minus_one, mu.minus_one, 8).agrees(gen(mu.ring)), "N=8")
    cp = [mu.ring.one()] + [mu.ring.gen(f"CP{k}") for k in range(1, 8)]
    yield "boundary.mishchenko", _all(boundary(monomial(-k, 1, mu.ring), mu) == cp[k - 1] for k in range(1, 8))
    ok = all(boundary(f, add) == residue(f) for f in (rand_laurent(rng) for _ in range(20)))
    yield "boundary.additive_is_residue", (ok, "20 random series")
    yield "additive.preset", (add.log == x and add.exp == x and add.minus_one == -x, "log = exp = x")


def _symplectic(rng, notes):
    e = monomial
    yield "symp.grid", _all(
        sp.symp(e(k), e(l)) == ((-1) ** (k % 2) if k + l + 1 == 0 else 0) for k in range(-8, 9) for l in range(-8, 9)
    )
    ok, wit = True, "20 random pairs"
    for _ in range(20):
        f, g = rand_laurent(rng), rand_laurent(rng)
        if sp.symp(f, g) != -sp.symp(g, f):
            ok, wit = False, f"f={f}, g={g}"
            break
    yield "symp.antisymmetric", (ok, wit)
    halves = (range(0, 9), range(-8, 0))
    yield "symp.lagrangian", _all(
        sp.symp(e(k), e(l)) == 0 for half in halves for k in half for l in half
    )
    yield "symp.nondegenerate", _all(abs(sp.symp(e(k), e(-k - 1))) == 1 for k in range(-8, 8))
    grid_ok = True
    for k in range(-6, 7):
        for l in range(-6, 7):
            val = sp.form_angle(sp.embed_half(e(k)), sp.embed_half(e(l)))
            grid_ok &= val.is_rational() and val == sp.symp(e(k), e(l))
    yield "proposition.grid", (grid_ok, "<embed e^k, embed e^l> = {e^k, e^l} for k, l in [-6, 6]")
    yield "embed.odd", _all(
        galois(sp.embed_half(f)) == -sp.embed_half(f) for f in (rand_laurent(rng) for _ in range(10))
    )
    ok = True
    for _ in range(10):
        target = LaurentSeries({2 * rng.randint(-5, 5) + 1: rand_rational(rng) for _ in range(4)})
        ok &= sp.embed_half(sp.embed_inverse(target)) == target
    yield "embed.window_surjective", (ok, "10 random odd windows")
    yield "divided_power.derivative", _all(
        derivative(sp.dp(Fraction(s2, 2))) == sp.dp(Fraction(s2 - 2, 2)) for s2 in range(-9, 10)
    )
    mu = mishchenko_fgl(6)
    f, g = monomial(-2, 1, mu.ring), monomial(1, 1, mu.ring)
    notes.append(f"Mishchenko N=6: symp(e^-2, e) = {sp.symp(f, g, mu)}, symp(e, e^-2) = {sp.symp(g, f, mu)} (recorded, not asserted)")


def _autgroup(rng, notes):
    for ring, count in ((RATIONAL, 10), (NilpotentRing(4), 10)):
        ok, wit = True, f"{count} random elements over {ring}"
        for _ in range(count):
            g = ag.make_aut(rand_group_series(rng, ring))
            h = ag.make_aut(rand_group_series(rng, ring))
            f = ag.make_aut(rand_group_series(rng, ring))
            inv = ag.NilLaurentAut(inverse_to_head(g.series, 16))
            one = ag.group_compose(g, inv, 24)
            a = ag.group_compose(ag.group_compose(g, h, 24), f, 24)
            b = ag.group_compose(g, ag.group_compose(h, f, 24), 24)
            if not (one.series.agrees(gen(ring)) and one.series.head2 >= 16 and a.agrees(b) and min(a.series.head2, b.series.head2) >= 16):
                ok, wit = False, f"g={g}, h={h}, f={f}"
                break
        yield f"group.axioms[{ring}]", (ok, wit)
    probes = [monomial(k) for k in range(-3, 4)] + [monomial(Fraction(1, 2)), monomial(Fraction(-3, 2))]
    yield "witt.bracket", _all(
        ag.witt_apply(m, ag.witt_apply(n, f)) - ag.witt_apply(n, ag.witt_apply(m, f)) == (n - m) * ag.witt_apply(m + n, f)
        for m in range(-3, 5)
        for n in range(-3, 5)
        for f in probes
    )
    ok = True
    for _ in range(10):
        f, g, k = rand_laurent(rng), rand_laurent(rng), rng.randint(-3, 4)
        ok &= ag.witt_apply(k, mul(f, g)) == mul(ag.witt_apply(k, f), g) + mul(f, ag.witt_apply(k, g))
    yield "witt.derivation", (ok, "10 random pairs")
    for ring in (RATIONAL, NilpotentRing(3)):
        ok, wit = True, f"10 odd pairs over {ring}"
        for _ in range(10):
            gc, hc = rand_odd(rng, ring), rand_odd(rng, ring)
            lhs = ag.double_cover(ag.odd_compose(gc, hc, 8))
            rhs = ag.group_compose(ag.double_cover(gc), ag.double_cover(hc), 8)
            if not lhs.agrees(rhs) or ag.double_cover(-gc).series != ag.double_cover(gc).series:
                ok, wit = False, f"gc={gc}, hc={hc}"
                break
        yield f"cover.homomorphism[{ring}]", (ok, wit)
        ok, wit = True, f"10 odd actions over {ring}"
        for _ in range(10):
            gc = rand_odd(rng, ring)
            u = LaurentSeries({2 * rng.randint(-3, 3) + 1: rand_rational(rng) for _ in range(3)}, ring=ring)
            v = LaurentSeries({2 * rng.randint(-3, 3) + 1: rand_rational(rng) for _ in range(3)}, ring=ring)
            gu, gv = ag.odd_action(gc, u, 8), ag.odd_action(gc, v, 8)
            same = residue(mul(gu, derivative(gv))) == residue(mul(u, derivative(v)))
            odd = galois(gu) == -gu
            if not (same and odd):
                ok, wit = False, f"gc={gc}, u={u}, v={v}"
                break
        yield f"odd_action.symplectic[{ring}]", (ok, wit)


def _fock(rng, notes):
    window = 15
    ops = {k: fock.rho(monomial(k), window) for k in range(-5, 5)}
    low = range(0, 13)
    ok = True
    for a in range(-5, 5):
        for b in range(-5, 5):
            c = fock.commutator(ops[a], ops[b], low)
            want = sp.symp(monomial(a), monomial(b))
            ok &= set(c.weights2()) == set(low) and all(c.scalar_on(w) == want for w in low)
    yield "heisenberg.rho", (ok, "a, b in [-5, 4], weights <= 6")
    halves = [Fraction(s2, 2) for s2 in range(-9, 10, 2)]
    modes = {s: fock.mode(s, window) for s in halves}
    ok = True
    for s in halves:
        for t in halves:
            c = fock.commutator(modes[s], modes[t], low)
            want = s if s + t == 0 else 0
            ok &= all(c.scalar_on(w) == want for w in low)
    yield "heisenberg.modes", (ok, "|s|, |t| <= 9/2, weights <= 6")
    vir = {n: fock.virasoro(n, 14) for n in range(-8, 9)}
    ok = True
    for m in range(-3, 4):
        for n in range(-3, 4):
            if m + n == 0:
                continue
            c = fock.commutator(vir[m], vir[n], low)
            ok &= set(c.weights2()) == set(low) and c.agrees(vir[m + n].scale(m - n).restrict(low))
    yield "virasoro.witt_part", (ok, "|m|, |n| <= 3, m + n != 0")
    try:
        fit = fock.central_charge_fit(4, 10)
        fit2 = fock.central_charge_fit(2, 10)
        ok = (fit.alpha, fit.beta) == (fit2.alpha, fit2.beta) and any(fit.defects.values())
        wit = f"alpha={fit.alpha}, beta={fit.beta}, c={fit.central_charge}"
    except FitError as exc:
        ok, wit = False, str(exc)
    yield "virasoro.central_fit", (ok, wit)
    ok = True
    for n in range(-2, 3):
        for s in [Fraction(s2, 2) for s2 in range(-7, 8, 2)]:
            ok &= fock.virasoro_mode_compat(n, s, 12)
    yield "virasoro.mode_compat", (ok, "|n| <= 2, |s| <= 7/2")
    yield "thom.coefficients", (
        fock.thom_series(4).series.coefficient(-1) == fock.thom_series(4).series.ring.gen("t0"),
        str(fock.thom_series(4).series.render("e")),
    )
    yield "phi.grouplike", (fock.phi_grouplike(5, 3), "N=5, vmax=3")
    yield "kontsevich.traces", _all(
        fock.kontsevich_check(eigs, k).match for eigs in ((1,), (1, 2, 3), (2, 3, 5)) for k in range(1, 5)
    )


SUITES: dict[str, Callable] = {
    "scalars": _scalars,
    "series": _series,
    "fgl": _fgl,
    "symplectic": _symplectic,
    "autgroup": _autgroup,
    "fock": _fock,
}


def _all(it) -> tuple:
    ok = all(it)
    return ok, "all instances" if ok else "some instance failed"


def run_suite(name: str, seed: int = DEFAULT_SEED) -> RunReport:
    if name == "all":
        total = RunReport("all", seed)
        for sub in SUITES:
            rep = run_suite(sub, seed)
            total.results += [CheckResult(f"{sub}.{r.check}", r.status, r.witness) for r in rep.results]
            total.notes += rep.notes
        return total
    if name not in SUITES:
        raise KeyError(name)
    rng = random.Random(f"{seed}:{name}")
    report = RunReport(name, seed)
    t0 = time.perf_counter()
    for check_id, (ok, witness) in SUITES[name](rng, report.notes):
        report.results.append(CheckResult(check_id, "pass" if ok else "fail", witness))
    report.seconds = time.perf_counter() - t0
    return report
