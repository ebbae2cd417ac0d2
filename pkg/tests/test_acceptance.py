"""Acceptance criteria, one test per criterion, all exact.

Each criterion function returns ``(ok, detail)``.  The pytest hooks in
``conftest.py`` print one PASS/FAIL line per criterion at the end of the run;
``python tests/test_acceptance.py`` prints the same lines directly.
"""
from __future__ import annotations

import math
import random
import sys
from fractions import Fraction

import pytest
import sympy

import tate.autgroup as ag
import tate.symplectic as sp
from tate import fock
from tate.checks import inverse_to_head, rand_group_series, rand_odd
from tate.expr import parse, render
from tate.fgl import boundary, mishchenko_fgl
from tate.scalars import NilpotentRing, PiHalf, gamma_value
from tate.series import compose, derivative, galois, gen, monomial, mul, residue

SEED = 20240
CRITERIA: dict[int, tuple[str, object]] = {}
RESULTS: list[str] = []


def criterion(number: int, title: str):
    def wrap(fn):
        CRITERIA[number] = (title, fn)
        return fn

    return wrap


def e(k):
    return monomial(k)


def _sympy_gamma_over_sqrtpi(s: Fraction):
    """Gamma(s) / sqrt(pi) from sympy, as a Fraction."""
    val = sympy.simplify(sympy.gamma(sympy.Rational(s.numerator, s.denominator)) / sympy.sqrt(sympy.pi))
    return Fraction(int(val.p), int(val.q))


# ---------------------------------------------------------------------------


@criterion(1, "residue axiom res(e^k de) = delta_{k+1,0}, k in [-10, 10]")
def c1():
    bad = [k for k in range(-10, 11) if residue(e(k)) != (1 if k == -1 else 0)]
    return not bad, f"21 exponents, failures {bad}"


@criterion(2, "Mishchenko N=8: boundary(e^-k) = CP_{k-1}, k = 1..7")
def c2():
    mu = mishchenko_fgl(8)
    ring = mu.ring
    want = [ring.one()] + [ring.gen(f"CP{k}") for k in range(1, 7)]
    got = [boundary(monomial(-k, 1, ring), mu) for k in range(1, 8)]
    return got == want, ", ".join(str(g) for g in got)


@criterion(3, "symplectic grid, antisymmetry and Lagrangian halves, k, l in [-8, 8]")
def c3():
    rng = range(-8, 9)
    table = {(k, l): sp.symp(e(k), e(l)) for k in rng for l in rng}
    grid = all(v == ((-1) ** (k % 2) if k + l + 1 == 0 else 0) for (k, l), v in table.items())
    anti = all(table[k, l] == -table[l, k] for k in rng for l in rng)
    r = random.Random(SEED)
    for _ in range(50):
        f = sum((e(r.randint(-8, 8)).scale(r.randint(-4, 4)) for _ in range(4)), monomial(0, 0))
        g = sum((e(r.randint(-8, 8)).scale(r.randint(-4, 4)) for _ in range(4)), monomial(0, 0))
        anti &= sp.symp(f, g) == -sp.symp(g, f)
    lag = all(table[k, l] == 0 for k in rng for l in rng if (k >= 0) == (l >= 0))
    return grid and anti and lag, f"grid={grid}, antisymmetric={anti}, lagrangian={lag}"


@criterion(4, "<embed e^k, embed e^l> = symp(e^k, e^l) with pi-exponent 0; Gamma identities")
def c4():
    grid = True
    for k in range(-6, 7):
        for l in range(-6, 7):
            val = sp.form_angle(sp.embed_half(e(k)), sp.embed_half(e(l)))
            grid &= val.exponents() in ([], [0]) and val == sp.symp(e(k), e(l))
    # Gamma(k + 1/2) = (2k-1)!! 2^-k sqrt(pi), including negative k via the
    # generalized double factorial, checked against sympy
    half = True
    for s2 in range(-9, 10, 2):
        s = Fraction(s2, 2)
        g = gamma_value(s)
        half &= g.exponents() == [1] and Fraction(g.terms[1]) == _sympy_gamma_over_sqrtpi(s)
        k = (s2 - 1) // 2
        if k >= 0:
            half &= g == PiHalf.pi_power(1, Fraction(math.prod(range(1, 2 * k, 2)), 2**k))
    # duplication Gamma(s) Gamma(s + 1/2) = 2^(1-2s) sqrt(pi) Gamma(2s), s in (0, 5]
    dup = True
    for s2 in range(1, 11):
        s = Fraction(s2, 2)
        lhs = gamma_value(s) * gamma_value(s + Fraction(1, 2))
        rhs = gamma_value(2 * s) * PiHalf.pi_power(1, Fraction(2) ** (1 - s2))
        dup &= lhs == rhs
    return grid and half and dup, f"grid={grid}, half_integer_gamma={half}, duplication={dup}"


@criterion(5, "group over Q[eps]/eps^4: 200 elements, inverses and associativity to head 8")
def c5():
    ring = NilpotentRing(4)
    r = random.Random(f"{SEED}:group")
    x = gen(ring)
    worst = (math.inf, math.inf)
    for i in range(200):
        g, h, f = (rand_group_series(r, ring) for _ in range(3))
        inv = ag.group_inverse(ag.make_aut(g), 15)
        one = ag.group_compose(ag.make_aut(g), inv, 16).series
        gg, hh, ff = ag.make_aut(g), ag.make_aut(h), ag.make_aut(f)
        lhs = ag.group_compose(ag.group_compose(gg, hh, 18), ff, 18).series
        rhs = ag.group_compose(gg, ag.group_compose(hh, ff, 18), 18).series
        worst = (min(worst[0], one.head2), min(worst[1], lhs.head2, rhs.head2))
        if not (one.agrees(x) and one.head2 >= 16 and lhs.agrees(rhs) and min(lhs.head2, rhs.head2) >= 16):
            return False, f"element {i}: g={g}, h={h}, f={f}"
    return True, f"200 triples; known through doubled heads {worst[0]} (inverse) and {worst[1]} (associativity)"


@criterion(6, "Witt relations [witt(m), witt(n)] = (n - m) witt(m + n), m, n in [-3, 4]")
def c6():
    probes = [monomial(Fraction(s2, 2)) for s2 in range(-12, 13)]
    ok = all(
        ag.witt_apply(m, ag.witt_apply(n, f)) - ag.witt_apply(n, ag.witt_apply(m, f))
        == ag.witt_apply(m + n, f).scale(n - m)
        for m in range(-3, 5)
        for n in range(-3, 5)
        for f in probes
    )
    return ok, f"64 pairs on {len(probes)} monomials x^s, s in [-6, 6]"


@criterion(7, "double cover: homomorphism, fiber {+gc, -gc}, odd action preserves parity and <,>")
def c7():
    r = random.Random(f"{SEED}:cover")
    hom = fib = odd = inv = True
    for _ in range(100):
        gc, hc = rand_odd(r), rand_odd(r)
        lhs = ag.double_cover(ag.odd_compose(gc, hc, 8))
        rhs = ag.group_compose(ag.double_cover(gc), ag.double_cover(hc), 8)
        hom &= lhs.agrees(rhs)
        fib &= ag.double_cover(-gc).series == ag.double_cover(gc).series
        u = sum((monomial(Fraction(2 * r.randint(-3, 3) + 1, 2)).scale(r.randint(-3, 3)) for _ in range(3)), monomial(0, 0))
        v = sum((monomial(Fraction(2 * r.randint(-3, 3) + 1, 2)).scale(r.randint(-3, 3)) for _ in range(3)), monomial(0, 0))
        gu, gv = ag.odd_action(gc, u, 8), ag.odd_action(gc, v, 8)
        odd &= galois(gu) == -gu and galois(gv) == -gv
        inv &= sp.form_angle(gu, gv) == sp.form_angle(u, v)
    return hom and fib and odd and inv, f"homomorphism={hom}, fiber={fib}, odd={odd}, invariant={inv} on 100 odd series"


@criterion(8, "Heisenberg: [rho(e^a), rho(e^b)] = symp(e^a, e^b) id on weights <= 6")
def c8():
    ops = {k: fock.rho(e(k), 15) for k in range(-5, 5)}
    low = range(0, 13)
    for a in range(-5, 5):
        for b in range(-5, 5):
            c = fock.commutator(ops[a], ops[b], low)
            want = sp.symp(e(a), e(b))
            if set(c.weights2()) != set(low) or any(c.scalar_on(w) != want for w in low):
                return False, f"a={a}, b={b}"
    return True, "100 pairs on 13 weight spaces"


@criterion(9, "Virasoro relations, central fit and mode compatibility")
def c9():
    low = range(0, 13)
    vir = {n: fock.virasoro(n, 14) for n in range(-6, 7)}
    witt = all(
        set((c := fock.commutator(vir[m], vir[n], low)).weights2()) == set(low)
        and c.agrees(vir[m + n].scale(m - n).restrict(low))
        for m in range(-3, 4)
        for n in range(-3, 4)
        if m + n
    )
    fit = fock.central_charge_fit(4, 10)
    fit2 = fock.central_charge_fit(2, 10)
    consistent = (fit.alpha, fit.beta) == (fit2.alpha, fit2.beta)
    nontrivial = any(fit.defects.values())
    compat = all(
        fock.virasoro_mode_compat(n, Fraction(s2, 2), 12) for n in range(-2, 3) for s2 in range(-7, 8, 2)
    )
    ok = witt and consistent and nontrivial and compat
    return ok, (
        f"witt_part={witt}, alpha={fit.alpha}, beta={fit.beta}, c={fit.central_charge}, "
        f"defects={[str(fit.defects[m]) for m in sorted(fit.defects)]}, mode_compat={compat}"
    )


@criterion(10, "Kontsevich traces for (1), (1,2,3), (2,3,5), k = 1..4")
def c10():
    bad = [
        (eigs, k) for eigs in ((1,), (1, 2, 3), (2, 3, 5)) for k in range(1, 5) if not fock.kontsevich_check(eigs, k).match
    ]
    return not bad, f"12 cases, mismatches {bad}"


@criterion(11, "Thom series coefficients and grouplike phi at head 5, v-order 3")
def c11():
    th = fock.thom_series(5)
    ring = th.series.ring
    coeffs = all(th.series.coefficient(k) == ring.gen(f"t{k + 1}") for k in range(-1, 5))
    coeffs &= th.series.coefficient(-1) == ring.gen("t0") and th.series.head2 == 10
    group = fock.phi_grouplike(5, 3)
    return coeffs and group, f"coefficients={coeffs}, grouplike={group}"


@criterion(12, "CLI golden files, parse/render round trip and exit codes")
def c12():
    import clicases as cc

    golden = [n for n, argv in cc.GOLDEN.items() if cc.run_cli(argv)[1] != cc.golden_text(n)]
    trip = [s for s in cc.ROUND_TRIP if parse(render(parse(s))) != parse(s) or render(parse(render(parse(s)))) != render(parse(s))]
    codes = [argv for argv, want in cc.EXIT_CODES if cc.run_cli(argv)[0] != want]
    ok = not golden and not trip and not codes
    return ok, (
        f"{len(cc.GOLDEN)} golden files (mismatched {golden}), {len(cc.ROUND_TRIP)} round trips "
        f"(failed {trip}), {len(cc.EXIT_CODES)} exit codes (wrong {codes})"
    )


# ---------------------------------------------------------------------------


def run_criterion(number: int) -> tuple[bool, str]:
    title, fn = CRITERIA[number]
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its message
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"{'PASS' if ok else 'FAIL'} [{number}] {title} -- {detail}"
    RESULTS.append(line)
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, line = run_criterion(number)
    print(line)
    assert ok, line


if __name__ == "__main__":
    sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent))
    failed = 0
    for n in sorted(CRITERIA):
        ok, line = run_criterion(n)
        failed += not ok
        print(line, flush=True)
    sys.exit(1 if failed else 0)
