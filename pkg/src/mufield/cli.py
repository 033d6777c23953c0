"""Command-line front end.

Commands: axioms, eval, converge, demo, identities. Output is human-readable
by default; --json emits a schema'd envelope carrying the tool version, the
command, sha256 digests of file inputs, the seed of any randomized sweep,
and the command body. Identical inputs and seed produce identical envelopes
apart from the timestamp field.

Exit codes: 0 all checks passed, 1 a check failed or a domain error surfaced
from a valid request, 2 invalid input or usage.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import math
import sys
import time

from . import __version__
from .demos import DEMO_NAMES, run_demo
from .errors import DomainError, MuFieldError, UsageError
from .membership import (
    FieldContext,
    check_axioms,
    crisp,
    load_mu_spec,
    mu_eval,
    mu_summary,
)
from .real_field import (
    FAIL,
    PASS,
    UNMET,
    mu_abs,
    mu_compare,
    mu_inf,
    mu_sup,
)
from .complex_field import mu_abs_c, mu_arg, mu_conj, mu_exp, mu_log, mu_pow
from .registry import DEFAULT_SWEEP_IDS, LITERAL_VARIANTS, REGISTRY, run_identity_sweep
from .sequences import load_experiment, run_experiment, trace_rows

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _to_jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    return repr(obj)


def _envelope(command: str, body, inputs=(), seed=None, status: int = 0) -> dict:
    return {
        "tool": "mufield",
        "version": __version__,
        "command": command,
        "inputs": {p: _sha256(p) for p in inputs},
        "seed": seed,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "body": _to_jsonable(body),
        "status": status,
    }


def _emit(env: dict, args, human_lines) -> int:
    if args.json:
        print(json.dumps(env, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)
    return env["status"]


def _load_mu(path: str | None):
    if path is None:
        return crisp()
    with open(path, "r", encoding="utf-8") as f:
        return load_mu_spec(f.read())


def _parse_grid(text: str):
    lo, hi, step = (float(p) for p in text.split(":"))
    if step <= 0 or hi < lo:
        raise UsageError(f"bad grid {text!r}; expected lo:hi:step with step > 0")
    out = []
    v = lo
    while v <= hi + 1e-12:
        out.append(round(v, 12))
        v += step
    return out


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise UsageError(f"bad complex literal {text!r}; expected re or re,im")


def _ctx(args, mu, kind="real") -> FieldContext:
    tol = getattr(args, "tol", None)
    return FieldContext(
        kind=kind,
        mu=mu,
        eq_tol=tol if tol else 1e-9,
        identity_tol=tol if tol else 1e-9,
    )


def cmd_axioms(args) -> int:
    mu = _load_mu(args.mu)
    inputs = [args.mu] if args.mu else []
    if args.samples:
        with open(args.samples, "r", encoding="utf-8") as f:
            samples = [float(v) for v in json.load(f)]
        inputs.append(args.samples)
    else:
        samples = _parse_grid(args.grid)
    ctx = _ctx(args, mu)
    report = check_axioms(ctx, samples)
    summary = mu_summary(ctx, samples)
    status = EXIT_OK if report.passed else EXIT_CHECK_FAILED
    body = {
        "verdicts": report.verdicts,
        "violations": [
            {"axiom": v.axiom, "operands": list(v.operands), "weight": v.lhs, "bound": v.rhs}
            for v in report.violations
        ],
        "negation_symmetry": report.negation_symmetry,
        "sample_count": report.sample_count,
        "inf_mu": summary.inf_mu,
        "count_zero": summary.count_zero,
        "scope": "sample-relative",
    }
    lines = [f"axiom audit over {report.sample_count} samples (sample-relative)"]
    for a, ok in report.verdicts.items():
        lines.append(f"  axiom ({a}): {'pass' if ok else 'FAIL'}")
    for v in report.violations[:10]:
        lines.append(f"    violation ({v.axiom}) at {v.operands}: weight {v.lhs:.6g} < bound {v.rhs:.6g}")
    lines.append(f"  inf weight over samples: {summary.inf_mu:.6g} (zeros: {summary.count_zero})")
    return _emit(_envelope("axioms", body, inputs, status=status), args, lines)


_EVAL_OPS = {
    "mu": ("a",),
    "mu_abs": ("a",),
    "mu_compare": ("a", "b"),
    "mu_sup": ("set",),
    "mu_inf": ("set",),
    "mu_conj": ("z",),
    "mu_abs_c": ("z",),
    "mu_arg": ("z",),
    "mu_exp": ("z",),
    "mu_log": ("z",),
    "mu_pow": ("base", "z"),
}


def cmd_eval(args) -> int:
    if args.op not in _EVAL_OPS:
        print(f"unknown op {args.op!r}; known: {', '.join(sorted(_EVAL_OPS))}", file=sys.stderr)
        return EXIT_USAGE
    mu = _load_mu(args.mu)
    needs = _EVAL_OPS[args.op]
    for field in needs:
        if getattr(args, field if field != "set" else "set_values") is None:
            print(f"op {args.op} needs --{field.replace('_', '-')}", file=sys.stderr)
            return EXIT_USAGE
    kind = "complex" if args.op in ("mu_conj", "mu_abs_c", "mu_arg", "mu_exp", "mu_log", "mu_pow") else "real"
    ctx = _ctx(args, mu, kind)
    memberships = {}
    try:
        if args.op == "mu":
            value = mu_eval(ctx, args.a)
            memberships[str(args.a)] = value
        elif args.op == "mu_abs":
            value = mu_abs(ctx, args.a)
            memberships[str(args.a)] = mu_eval(ctx, args.a)
        elif args.op == "mu_compare":
            value = mu_compare(ctx, args.a, args.b).value
            memberships[str(args.a)] = mu_eval(ctx, args.a)
            memberships[str(args.b)] = mu_eval(ctx, args.b)
        elif args.op in ("mu_sup", "mu_inf"):
            vals = [float(v) for v in args.set_values.split(",")]
            sv = (mu_sup if args.op == "mu_sup" else mu_inf)(ctx, vals)
            value = {"value": sv.scaled, "witness": sv.raw, "weight": sv.weight}
            memberships[str(sv.raw)] = sv.weight
        else:
            z = _parse_complex(args.z)
            memberships[str(z)] = mu_eval(ctx, z)
            if args.op == "mu_conj":
                value = mu_conj(ctx, z)
            elif args.op == "mu_abs_c":
                value = mu_abs_c(ctx, z)
            elif args.op == "mu_arg":
                value = mu_arg(ctx, z)
            elif args.op == "mu_exp":
                value = mu_exp(ctx, z)
            elif args.op == "mu_log":
                value = mu_log(ctx, z)
            else:
                base = _parse_complex(args.base)
                value = mu_pow(ctx, base, z, args.branch)
    except DomainError as e:
        env = _envelope("eval", {"op": args.op, "error": str(e)},
                        [args.mu] if args.mu else [], status=EXIT_CHECK_FAILED)
        return _emit(env, args, [f"eval {args.op}: {e}"])
    body = {"op": args.op, "value": _to_jsonable(value), "memberships": memberships}
    lines = [f"{args.op} = {value}"]
    for k, w in memberships.items():
        lines.append(f"  weight({k}) = {w:.9g}")
    return _emit(_envelope("eval", body, [args.mu] if args.mu else []), args, lines)


def _verdict_lines(v) -> list:
    rows = [f"  {v.expr} -> {v.candidate:.9g}: {v.verdict}"
            f" (trivial tail fraction {v.trivial_tail_fraction:.3f},"
            f" certificate {v.tail_certificate or 'none'})"]
    for eps, n in v.eps_table:
        rows.append(f"    eps={eps:<8g} N={'not within horizon' if n is None else n}")
    return rows


def cmd_converge(args) -> int:
    with open(args.experiment, "r", encoding="utf-8") as f:
        exp = load_experiment(f.read())
    report = run_experiment(exp)
    if args.trace:
        expr, _, cand = (args.trace_target or "").partition(":")
        if not expr:
            expr, cand = exp.candidates[0][0], str(exp.candidates[0][1])
        with open(args.trace, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["n", "term", "membership", "scaled_deviation"])
            for row in trace_rows(exp, expr, float(cand)):
                writer.writerow(row)
    body = {
        "label": exp.label,
        "horizon": exp.horizon,
        "verdicts": [_to_jsonable(v) for v in report.verdicts],
        "classical": [
            {"expr": e, "candidate": c, "verdict": v.verdict} for e, c, v in report.classical
        ],
        "theorem_checks": [_to_jsonable(c) for c in report.theorem_checks],
    }
    lines = [f"experiment {exp.label or args.experiment}: horizon {exp.horizon}"]
    for v in report.verdicts:
        lines.extend(_verdict_lines(v))
    for c in report.theorem_checks:
        lines.append(f"  {c.identity_id}: {c.verdict} {'; '.join(c.notes)}")
    return _emit(_envelope("converge", body, [args.experiment]), args, lines)


def cmd_demo(args) -> int:
    if args.name not in DEMO_NAMES:
        print(f"unknown demo {args.name!r}; catalog: {', '.join(DEMO_NAMES)}", file=sys.stderr)
        return EXIT_USAGE
    demo = run_demo(args.name)
    status = EXIT_OK if demo.ok else EXIT_CHECK_FAILED
    body = {
        "name": demo.name,
        "headline": demo.headline,
        "claims": [{"claim": label, "holds": flag} for label, flag in demo.claims],
        "verdicts": [_to_jsonable(v) for v in demo.report.verdicts],
        "bounds": _to_jsonable(demo.bounds) if demo.bounds else None,
        "literal_variant": _to_jsonable(demo.literal_variant) if demo.literal_variant else None,
    }
    lines = [f"demo {demo.name}: {demo.headline}"]
    for label, flag in demo.claims:
        lines.append(f"  [{'ok' if flag else 'FAIL'}] {label}")
    for v in demo.report.verdicts:
        lines.extend(_verdict_lines(v))
    if demo.bounds is not None:
        b = demo.bounds
        lines.append(
            f"  scaled bounds: max |x w(x)| = {b.scaled_abs_max:.6g}"
            + (f", first exceeds probe {b.probe:g} at n={b.first_exceed_n}" if b.first_exceed_n else "")
        )
    return _emit(_envelope("demo", body, status=status), args, lines)


def cmd_identities(args) -> int:
    ids = list(args.ids) if args.ids else list(DEFAULT_SWEEP_IDS)
    if args.literal:
        ids = [LITERAL_VARIANTS.get(i, i) for i in ids]
    unknown = [i for i in ids if i not in REGISTRY]
    if unknown:
        print(f"unknown identities: {', '.join(unknown)}", file=sys.stderr)
        return EXIT_USAGE
    mu = _load_mu(args.mu) if args.mu else None
    if mu is None and not args.random:
        args.random = True  # random tables are the only mode without a weighting file
    tol = args.tol if args.tol else 1e-9
    outcomes = run_identity_sweep(
        ids,
        trials=args.trials,
        seed=args.seed,
        mu=mu,
        eq_tol=tol,
        identity_tol=tol,
    )
    any_failed = any(o.failed for o in outcomes)
    body = {
        "trials": args.trials,
        "mode": "fixed-mu" if mu is not None else "random-tables",
        "outcomes": [
            {
                "id": o.ident,
                "passed": o.passed,
                "failed": o.failed,
                "precondition_unmet": o.unmet,
                "max_residual": o.max_residual,
            }
            for o in outcomes
        ],
    }
    lines = [f"identity sweep: {args.trials} trials each, seed {args.seed}"]
    lines.append(f"  {'id':<12} {'pass':>6} {'fail':>6} {'unmet':>6}  max residual")
    for o in outcomes:
        lines.append(
            f"  {o.ident:<12} {o.passed:>6} {o.failed:>6} {o.unmet:>6}  {o.max_residual:.3e}"
        )
        if o.first_failure is not None:
            lines.append(f"    first failure: operands {o.first_failure.operands}")
    status = EXIT_CHECK_FAILED if any_failed else EXIT_OK
    return _emit(
        _envelope("identities", body, [args.mu] if args.mu else [], seed=args.seed, status=status),
        args,
        lines,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mufield",
        description="Verification tooling for membership-weighted real and complex arithmetic.",
    )
    parser.add_argument("--json", action="store_true", help="emit a JSON envelope")
    parser.add_argument("--tol", type=float, default=None, help="override eq/identity tolerance")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    # the same flags are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("axioms", help="audit the five closure axioms over samples", parents=[common])
    p.add_argument("mu", nargs="?", default=None, help="membership spec (JSON)")
    p.add_argument("--samples", default=None, help="JSON array of sample points")
    p.add_argument("--grid", default="-5:5:0.5", help="lo:hi:step sample grid")
    p.set_defaults(fn=cmd_axioms)

    p = sub.add_parser("eval", parents=[common], help="evaluate one weighted operation")
    p.add_argument("op", help=f"one of: {', '.join(sorted(_EVAL_OPS))}")
    p.add_argument("--mu", default=None, help="membership spec (JSON); identity weighting if omitted")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--set", dest="set_values", default=None, help="comma-separated reals")
    p.add_argument("--z", default=None, help="complex as re,im")
    p.add_argument("--base", default=None, help="complex base as re,im")
    p.add_argument("--branch", type=int, default=0)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("converge", parents=[common], help="run a convergence experiment file")
    p.add_argument("experiment", help="experiment spec (JSON)")
    p.add_argument("--trace", default=None, help="write a CSV deviation trace here")
    p.add_argument("--trace-target", default=None, help="expr:candidate to trace")
    p.set_defaults(fn=cmd_converge)

    p = sub.add_parser("demo", parents=[common], help="reproduce a cataloged counterexample")
    p.add_argument("name", help=f"one of: {', '.join(DEMO_NAMES)}")
    p.set_defaults(fn=cmd_demo)

    p = sub.add_parser("identities", parents=[common], help="sweep the identity registry")
    p.add_argument("ids", nargs="*", help="registry ids (all when omitted)")
    p.add_argument("--random", action="store_true", help="random operand tables (default)")
    p.add_argument("--mu", default=None, help="fixed membership spec instead of random tables")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--literal", action="store_true", help="check literal variants where they exist")
    p.set_defaults(fn=cmd_identities)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (MuFieldError, FileNotFoundError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
