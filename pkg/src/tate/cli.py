"""Command-line front end.

Every command takes expressions in the shared grammar (see ``tate.expr``) and
prints an exact result, either as text or, with ``--json``, as a JSON object.
Exit codes: 0 success, 1 a verify check failed, 2 usage, parse or math error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import autgroup as ag
from . import fock
from . import symplectic as sp
from .checks import DEFAULT_SEED, SUITES, run_suite
from .errors import TateError
from .expr import Context, as_rational, as_series, eval_text, render_value, value_json
from .fgl import boundary
from .scalars import Q
from .series import residue

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def _globals(suppress: bool) -> argparse.ArgumentParser:
    # the same flags are accepted before and after the subcommand
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = _Parser(add_help=False)
    p.add_argument("--ring", default=d("rational"), help="rational | pihalf | nil:n | mu:N | poly:a,b")
    p.add_argument("--head", type=int, default=d(None), help="working precision (default $TATE_DEFAULT_HEAD or 8)")
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="seed for randomized checks")
    p.add_argument("--out", default=d(None), help="also write the JSON result to this path")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tate", description=__doc__.splitlines()[0], parents=[_globals(False)])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    common = [_globals(True)]

    def cmd(name, help_, *args):
        p = sub.add_parser(name, help=help_, parents=common)
        for a in args:
            p.add_argument(a)
        return p

    cmd("eval", "evaluate an expression", "expr")
    cmd("residue", "coefficient of x^-1", "expr")
    cmd("boundary", "res(f dlog e) for the ring's formal group", "expr")
    cmd("pair", "Kronecker pairing boundary(f g)", "f", "g")
    cmd("symp", "symplectic form boundary(I(f) g)", "f", "g")
    cmd("angle", "pi * res(u dv) on half-integral series", "u", "v")
    cmd("embed", "e^k -> gamma_{-k-1/2}", "expr")
    cmd("act", "substitute a group element: f o g", "g", "f")
    cmd("ginv", "compositional inverse of a group element", "g")
    cmd("gcomp", "group product g o h", "g", "h")
    witt = cmd("witt", "apply x^(k+1) d/dx", "f")
    witt.add_argument("--k", type=int, required=True)
    cmd("cover", "square an odd series in sqrt(x) into the group", "gc")
    vir = cmd("virasoro", "matrix blocks of L_n")
    vir.add_argument("--n", type=int, required=True)
    vir.add_argument("--maxweight", type=Fraction, default=Fraction(3))
    cc = cmd("ccfit", "exact fit of the Virasoro central defect")
    cc.add_argument("--mmax", type=int, default=4)
    cc.add_argument("--maxweight", type=Fraction, default=None)
    ko = cmd("kontsevich", "divided-power trace against the odd-factorial formula")
    ko.add_argument("--eigs", required=True, help="comma-separated positive rationals")
    ko.add_argument("--k", type=int, required=True)
    th = cmd("thom", "the Thom series sum t_{k+1} e^k")
    th.add_argument("--order", type=int, required=True)
    cmd("verify", f"run a check suite: {', '.join([*SUITES, 'all'])}", "suite")
    return parser


# ---------------------------------------------------------------------------


def _series(ctx, text):
    return as_series(eval_text(text, ctx), ctx.ring)


def _value(result, ctx):
    return {"text": render_value(result), "json": value_json(result)}


def _run(args) -> tuple[int, str, dict]:
    """Return (exit code, text output, json payload)."""
    c = args.command
    if c == "verify":
        if args.suite != "all" and args.suite not in SUITES:
            raise _Usage(f"unknown suite {args.suite!r}; choose from {', '.join([*SUITES, 'all'])}")
        report = run_suite(args.suite, args.seed)
        return (EXIT_OK if report.ok else EXIT_FAIL), "\n".join(report.lines()), report.to_json()
    if c == "virasoro":
        op = fock.virasoro(args.n, args.maxweight)
        payload = {"n": args.n, "maxweight": str(args.maxweight), **op.to_json()}
        lines = [f"L_{args.n} on weights <= {args.maxweight}"]
        for b in payload["blocks"]:
            lines.append(f"weight {b['source_weight']} -> {b['target_weight']}: cols [{', '.join(b['cols'])}] rows [{', '.join(b['rows'])}]")
            lines += ["  " + " ".join(row) for row in b["entries"]]
        return EXIT_OK, "\n".join(lines), payload
    if c == "ccfit":
        fit = fock.central_charge_fit(args.mmax, args.maxweight)
        defects = ", ".join(f"c_{m} = {v}" for m, v in sorted(fit.defects.items()))
        text = f"alpha = {fit.alpha}\nbeta = {fit.beta}\ncentral charge c = {fit.central_charge}\n{defects}"
        return EXIT_OK, text, fit.to_json()
    if c == "kontsevich":
        try:
            eigs = [Q(Fraction(s)) for s in args.eigs.split(",")]
        except ValueError as exc:
            raise _Usage(f"bad --eigs: {exc}") from exc
        res = fock.kontsevich_check(eigs, args.k)
        payload = {"eigs": [str(e) for e in eigs], "k": args.k, "lhs": str(res.lhs), "rhs": str(res.rhs), "match": res.match}
        return EXIT_OK, f"lhs = {res.lhs}\nrhs = {res.rhs}\nmatch = {str(res.match).lower()}", payload
    if c == "thom":
        th = fock.thom_series(args.order)
        return EXIT_OK, f"{th.series.render('e')}\n{th.t0_rule}", th.to_json()

    ctx = Context.from_name(args.ring, args.head)
    if c == "eval":
        out = eval_text(args.expr, ctx)
    elif c == "residue":
        out = residue(_series(ctx, args.expr))
    elif c == "boundary":
        out = boundary(_series(ctx, args.expr), ctx.fgl)
    elif c == "pair":
        out = sp.kronecker_pair(_series(ctx, args.f), _series(ctx, args.g), ctx.fgl)
    elif c == "symp":
        out = sp.symp(_series(ctx, args.f), _series(ctx, args.g), ctx.fgl)
    elif c == "angle":
        out = sp.form_angle(_series(ctx, args.u), _series(ctx, args.v))
    elif c == "embed":
        out = sp.embed_half(_series(ctx, args.expr))
    elif c == "act":
        out = ag.act(ag.make_aut(_series(ctx, args.g)), _series(ctx, args.f), ctx.prec)
    elif c == "ginv":
        out = ag.group_inverse(ag.make_aut(_series(ctx, args.g)), ctx.prec).series
    elif c == "gcomp":
        g, h = ag.make_aut(_series(ctx, args.g)), ag.make_aut(_series(ctx, args.h))
        out = ag.group_compose(g, h, ctx.prec).series
    elif c == "witt":
        out = ag.witt_apply(args.k, _series(ctx, args.f))
    elif c == "cover":
        out = ag.double_cover(_series(ctx, args.gc)).series
    else:  # pragma: no cover - argparse restricts the choices
        raise _Usage(f"unknown command {c}")
    v = _value(out, ctx)
    return EXIT_OK, v["text"], v["json"]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _Usage(parser.format_usage().strip())
        code, text, payload = _run(args)
    except _Usage as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except TateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(json.dumps(payload, indent=2, sort_keys=True) if args.json else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
