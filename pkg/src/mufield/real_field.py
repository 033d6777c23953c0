"""Weighted order, modulus, and extrema over the reals, plus identity checks.

Everything routes through the scaled value x * w(x). The order induced by
scaled values is a total preorder, not a partial order: distinct reals can
be weighted onto the same scaled value, so "equal" here means mu-equivalent.
Order comparisons use an absolute slack (ctx.eq_tol) because scaled values
cluster near zero by design.

The identity registry covers the ordered-field implications O1..O8, the
modulus laws R1..R5b, and the supremum characterization S1. Ratio-form
identities are guarded: when a referenced membership is at or below
ctx.min_mu the verdict is "precondition-unmet" rather than a failure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, UsageError
from .membership import FieldContext, mu_eval

PASS = "pass"
FAIL = "fail"
UNMET = "precondition-unmet"


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@dataclass(frozen=True)
class ScaledValue:
    """A raw value with its weight and their product (computed exactly once)."""

    raw: float
    weight: float
    scaled: float

    @classmethod
    def of(cls, ctx: FieldContext, a: float) -> "ScaledValue":
        w = mu_eval(ctx, a)
        return cls(raw=float(a), weight=w, scaled=float(a) * w)


def scaled(ctx: FieldContext, a: float) -> float:
    return ScaledValue.of(ctx, a).scaled


def mu_compare(ctx: FieldContext, a: float, b: float) -> Ordering:
    """Order a and b by their scaled values, eq_tol apart counts as equal."""
    sa, sb = scaled(ctx, a), scaled(ctx, b)
    if abs(sa - sb) <= ctx.eq_tol:
        return Ordering.EQUAL
    return Ordering.LESS if sa < sb else Ordering.GREATER


def mu_le(ctx, a, b) -> bool:
    return mu_compare(ctx, a, b) in (Ordering.LESS, Ordering.EQUAL)


def mu_lt(ctx, a, b) -> bool:
    return mu_compare(ctx, a, b) is Ordering.LESS


def mu_ge(ctx, a, b) -> bool:
    return mu_compare(ctx, a, b) in (Ordering.GREATER, Ordering.EQUAL)


def mu_gt(ctx, a, b) -> bool:
    return mu_compare(ctx, a, b) is Ordering.GREATER


def mu_abs(ctx: FieldContext, a: float) -> float:
    """Weighted modulus |a| * w(a); zero at a = 0 regardless of the weight."""
    a = float(a)
    if a == 0.0:
        return 0.0
    return abs(a) * mu_eval(ctx, a)


def mu_sup(ctx: FieldContext, values) -> ScaledValue:
    """Maximum scaled value over a finite non-empty set, with its witness."""
    vals = list(values)
    if not vals:
        raise UsageError("mu_sup needs a non-empty set")
    return max((ScaledValue.of(ctx, v) for v in vals), key=lambda s: s.scaled)


def mu_inf(ctx: FieldContext, values) -> ScaledValue:
    """Minimum scaled value over a finite non-empty set, with its witness."""
    vals = list(values)
    if not vals:
        raise UsageError("mu_inf needs a non-empty set")
    return min((ScaledValue.of(ctx, v) for v in vals), key=lambda s: s.scaled)


@dataclass(frozen=True)
class BoundsReport:
    """Scaled extremes of a finite set, with an optional probe comparison.

    Finite sets always have both bounds. scaled_within_raw records the
    finite-scale fact max |x w(x)| <= max |x|, which holds because w <= 1.
    """

    sup: ScaledValue
    inf: ScaledValue
    mu_bounded_above: bool
    mu_bounded_below: bool
    scaled_abs_max: float
    raw_abs_max: float
    scaled_within_raw: bool
    probe: float | None = None
    within_probe: bool | None = None


def mu_bounded_report(ctx: FieldContext, values, bound_probe: float | None = None) -> BoundsReport:
    vals = [float(v) for v in values]
    if not vals:
        raise UsageError("mu_bounded_report needs a non-empty set")
    svals = [ScaledValue.of(ctx, v) for v in vals]
    sup = max(svals, key=lambda s: s.scaled)
    inf = min(svals, key=lambda s: s.scaled)
    scaled_abs = max(abs(s.scaled) for s in svals)
    raw_abs = max(abs(v) for v in vals)
    return BoundsReport(
        sup=sup,
        inf=inf,
        mu_bounded_above=True,
        mu_bounded_below=True,
        scaled_abs_max=scaled_abs,
        raw_abs_max=raw_abs,
        scaled_within_raw=scaled_abs <= raw_abs + ctx.eq_tol,
        probe=bound_probe,
        within_probe=None if bound_probe is None else scaled_abs <= bound_probe,
    )


@dataclass(frozen=True)
class IdentityCheckReport:
    """Outcome of one identity evaluation.

    residual is relative with an absolute floor: |lhs - rhs| scaled by
    max(1, |lhs|, |rhs|). Inequality checks use the one-sided excess instead.
    verdict is "pass", "fail", or "precondition-unmet"; the last mirrors the
    guarded "provided w(...) != 0" clauses and is not a failure.
    """

    identity_id: str
    operands: tuple
    lhs: float | complex
    rhs: float | complex
    residual: float
    verdict: str
    notes: tuple = ()
    details: dict = field(default_factory=dict)


def _scale(lhs, rhs) -> float:
    return max(1.0, abs(lhs), abs(rhs))


def rel_residual(lhs, rhs) -> float:
    return abs(lhs - rhs) / _scale(lhs, rhs)


def one_sided_excess(lhs, rhs) -> float:
    """How far lhs sits above rhs, scaled; zero when lhs <= rhs."""
    return max(0.0, (lhs - rhs) / _scale(lhs, rhs))


def _eq_report(ctx, ident, operands, lhs, rhs, notes=(), **details):
    res = rel_residual(lhs, rhs)
    verdict = PASS if res <= ctx.identity_tol else FAIL
    return IdentityCheckReport(ident, tuple(operands), lhs, rhs, res, verdict, tuple(notes), details)


def _le_report(ctx, ident, operands, lhs, rhs, notes=(), **details):
    excess = one_sided_excess(lhs, rhs)
    verdict = PASS if (lhs - rhs) <= ctx.eq_tol else FAIL
    return IdentityCheckReport(ident, tuple(operands), lhs, rhs, excess, verdict, tuple(notes), details)


def _unmet(ident, operands, why, **details):
    return IdentityCheckReport(
        ident, tuple(operands), math.nan, math.nan, math.nan, UNMET, (why,), details
    )


def _weights_ok(ctx, points) -> tuple[bool, str]:
    for p in points:
        if mu_eval(ctx, p) <= ctx.min_mu:
            return False, f"membership at {p!r} is at or below min_mu"
    return True, ""


def check_sup_characterization(
    ctx: FieldContext, values, eps_schedule, probe: float | None = None
) -> IdentityCheckReport:
    """For each eps > 0 find a witness x1 with M - eps < x1 w(x1) <= M.

    M defaults to the scaled supremum of the set; pass probe to test a
    non-supremum candidate, which must fail for small enough eps.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise UsageError("check_sup_characterization needs a non-empty set")
    eps_list = [float(e) for e in eps_schedule]
    if any(e <= 0.0 for e in eps_list):
        raise UsageError("all eps must be > 0")
    m = mu_sup(ctx, vals).scaled if probe is None else float(probe)
    witnesses = []
    failed_eps = []
    for eps in eps_list:
        found = None
        for v in vals:
            s = scaled(ctx, v)
            if m - eps - ctx.eq_tol < s <= m + ctx.eq_tol:
                found = (eps, v, s)
                break
        if found is None:
            failed_eps.append(eps)
        else:
            witnesses.append(found)
    verdict = PASS if not failed_eps else FAIL
    return IdentityCheckReport(
        "S1",
        tuple(vals),
        m,
        m,
        0.0 if verdict == PASS else math.inf,
        verdict,
        (),
        {"witnesses": witnesses, "failed_eps": failed_eps, "bound": m},
    )


# ---------------------------------------------------------------------------
# Registry: ordered-field implications and modulus laws
# ---------------------------------------------------------------------------

def _check_o1(ctx, ops):
    (a,) = ops
    sa = scaled(ctx, a)
    if a >= 0.0:
        return _le_report(ctx, "O1", ops, 0.0, sa, notes=("a >= 0 branch",))
    return _le_report(ctx, "O1", ops, sa, 0.0, notes=("a <= 0 branch",))


def _signed_implication(ctx, ident, ops, hyps, concl_lhs, concl_rhs, points):
    """Shared shape for O2..O7: sign hypotheses on scaled values, guarded."""
    ok, why = _weights_ok(ctx, points)
    if not ok:
        return _unmet(ident, ops, why)
    for lhs, rhs in hyps:
        if lhs > rhs + ctx.eq_tol:
            return _unmet(ident, ops, "hypothesis not satisfied")
    return _le_report(ctx, ident, ops, concl_lhs, concl_rhs)


def _check_o2(ctx, ops):
    (a,) = ops
    return _signed_implication(
        ctx, "O2", ops,
        hyps=[(0.0, scaled(ctx, a))],
        concl_lhs=scaled(ctx, -a), concl_rhs=0.0,
        points=(a, -a),
    )


def _check_o3(ctx, ops):
    a, b = ops
    return _signed_implication(
        ctx, "O3", ops,
        hyps=[(0.0, scaled(ctx, a)), (0.0, scaled(ctx, b))],
        concl_lhs=0.0, concl_rhs=scaled(ctx, a + b),
        points=(a, b, a + b),
    )


def _check_o4(ctx, ops):
    a, b = ops
    return _signed_implication(
        ctx, "O4", ops,
        hyps=[(scaled(ctx, a), 0.0), (scaled(ctx, b), 0.0)],
        concl_lhs=scaled(ctx, a + b), concl_rhs=0.0,
        points=(a, b, a + b),
    )


def _check_o5(ctx, ops):
    a, b = ops
    return _signed_implication(
        ctx, "O5", ops,
        hyps=[(0.0, scaled(ctx, a)), (0.0, scaled(ctx, b))],
        concl_lhs=0.0, concl_rhs=scaled(ctx, a * b),
        points=(a, b, a * b),
    )


def _check_o6(ctx, ops):
    a, b = ops
    return _signed_implication(
        ctx, "O6", ops,
        hyps=[(scaled(ctx, a), 0.0), (scaled(ctx, b), 0.0)],
        concl_lhs=0.0, concl_rhs=scaled(ctx, a * b),
        points=(a, b, a * b),
    )


def _check_o7(ctx, ops):
    a, b = ops
    return _signed_implication(
        ctx, "O7", ops,
        hyps=[(0.0, scaled(ctx, a)), (scaled(ctx, b), 0.0)],
        concl_lhs=scaled(ctx, a * b), concl_rhs=0.0,
        points=(a, b, a * b),
    )


def _check_o8(ctx, ops):
    (a,) = ops
    if a == 0.0:
        return _unmet("O8", ops, "a must be nonzero")
    return _le_report(ctx, "O8", ops, 0.0, scaled(ctx, a * a))


def _check_r1(ctx, ops):
    (a,) = ops
    w = mu_eval(ctx, a)
    if a > 0.0:
        piecewise = a * w
    elif a == 0.0:
        piecewise = 0.0
    else:
        piecewise = -a * w
    return _eq_report(ctx, "R1", ops, mu_abs(ctx, a), piecewise)


def _check_r2(ctx, ops):
    (a,) = ops
    wa, wn = mu_eval(ctx, a), mu_eval(ctx, -a)
    if abs(wa - wn) > ctx.eq_tol:
        return _unmet("R2", ops, "requires w(-a) = w(a)", w_a=wa, w_neg_a=wn)
    return _eq_report(ctx, "R2", ops, mu_abs(ctx, -a), mu_abs(ctx, a))


def _check_r3(ctx, ops):
    a, b = ops
    ok, why = _weights_ok(ctx, (a, b, a * b))
    if not ok:
        return _unmet("R3", ops, why)
    lhs = mu_abs(ctx, a * b) / mu_eval(ctx, a * b)
    rhs = (mu_abs(ctx, a) / mu_eval(ctx, a)) * (mu_abs(ctx, b) / mu_eval(ctx, b))
    return _eq_report(ctx, "R3", ops, lhs, rhs)


def _check_r4(ctx, ops):
    a, b = ops
    ok, why = _weights_ok(ctx, (a, b, a + b))
    if not ok:
        return _unmet("R4", ops, why)
    lhs = mu_abs(ctx, a + b) / mu_eval(ctx, a + b)
    rhs = mu_abs(ctx, a) / mu_eval(ctx, a) + mu_abs(ctx, b) / mu_eval(ctx, b)
    return _le_report(ctx, "R4", ops, lhs, rhs)


def _check_r5a(ctx, ops):
    a, c = ops
    if c <= 0.0:
        return _unmet("R5a", ops, "bound c must be > 0")
    ok, why = _weights_ok(ctx, (a,))
    if not ok:
        return _unmet("R5a", ops, why)
    if not (mu_abs(ctx, a) < c + ctx.eq_tol):
        return _unmet("R5a", ops, "hypothesis |a|_w < c not satisfied")
    bound = c / mu_eval(ctx, a)
    lo = _le_report(ctx, "R5a", ops, -bound, a)
    hi = _le_report(ctx, "R5a", ops, a, bound)
    worst = max(lo.residual, hi.residual)
    verdict = PASS if lo.verdict == PASS and hi.verdict == PASS else FAIL
    return IdentityCheckReport("R5a", tuple(ops), a, bound, worst, verdict, (), {"bound": bound})


def _check_r5b(ctx, ops):
    a, c = ops
    if c <= 0.0:
        return _unmet("R5b", ops, "bound c must be > 0")
    ok, why = _weights_ok(ctx, (a, c))
    if not ok:
        return _unmet("R5b", ops, why)
    wa, wabs = mu_eval(ctx, a), mu_eval(ctx, abs(a))
    if abs(wa - wabs) > ctx.eq_tol:
        return _unmet("R5b", ops, "requires w(|a|) = w(a)", w_a=wa, w_abs_a=wabs)
    if not mu_lt(ctx, abs(a), c) and not (abs(scaled(ctx, abs(a)) - scaled(ctx, c)) <= ctx.eq_tol):
        return _unmet("R5b", ops, "hypothesis |a| <_w c not satisfied")
    bound = c * mu_eval(ctx, c) / wa
    lo = _le_report(ctx, "R5b", ops, -bound, a)
    hi = _le_report(ctx, "R5b", ops, a, bound)
    worst = max(lo.residual, hi.residual)
    verdict = PASS if lo.verdict == PASS and hi.verdict == PASS else FAIL
    return IdentityCheckReport("R5b", tuple(ops), a, bound, worst, verdict, (), {"bound": bound})


def _check_s1(ctx, ops):
    return check_sup_characterization(ctx, ops, (0.5, 1e-1, 1e-3))


REAL_IDENTITIES = {
    "O1": ("sign of a is preserved by the weighted order", 1, _check_o1),
    "O2": ("0 <=_w a implies -a <=_w 0", 1, _check_o2),
    "O3": ("nonnegatives are closed under addition", 2, _check_o3),
    "O4": ("nonpositives are closed under addition", 2, _check_o4),
    "O5": ("nonnegatives are closed under multiplication", 2, _check_o5),
    "O6": ("product of nonpositives is nonnegative", 2, _check_o6),
    "O7": ("mixed signs multiply to nonpositive", 2, _check_o7),
    "O8": ("squares are nonnegative", 1, _check_o8),
    "R1": ("piecewise form of the weighted modulus", 1, _check_r1),
    "R2": ("modulus is even, given a symmetric weighting", 1, _check_r2),
    "R3": ("modulus ratios multiply", 2, _check_r3),
    "R4": ("triangle inequality in ratio form", 2, _check_r4),
    "R5a": ("|a|_w < c sandwiches a by c / w(a)", 2, _check_r5a),
    "R5b": ("|a| <_w c sandwiches a by c w(c) / w(a)", 2, _check_r5b),
    "S1": ("supremum characterization by eps-witnesses", None, _check_s1),
}


def check_real_identity(ctx: FieldContext, ident: str, operands) -> IdentityCheckReport:
    """Evaluate one registry identity on the given operands."""
    if ident not in REAL_IDENTITIES:
        raise UsageError(f"unknown real identity {ident!r}; known: {sorted(REAL_IDENTITIES)}")
    _, arity, fn = REAL_IDENTITIES[ident]
    ops = tuple(float(v) for v in operands)
    for v in ops:
        if not math.isfinite(v):
            raise DomainError(f"operand {v!r} is not finite")
    if arity is not None and len(ops) != arity:
        raise UsageError(f"identity {ident} takes {arity} operand(s), got {len(ops)}")
    if arity is None and not ops:
        raise UsageError(f"identity {ident} needs at least one operand")
    return fn(ctx, ops)
