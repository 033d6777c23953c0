"""Catalog of desk-scale counterexample experiments.

Each entry binds a sequence family, explicit weight assignments, candidate
limits, and a horizon, reproducing a known separation between classical and
weighted convergence:

  nonunique_limit      a log-drift sequence, classically divergent, is
                       supported at two distinct weighted limits.
  unbounded_convergent an exponentially growing sequence is supported at 1
                       while its weighted values blow past any probe.
  sum_failure          two sequences each supported at 1 whose sum is
                       supported at 0; the arithmetic limit 2 is supported
                       only trivially (all tail weights are zero).
  product_failure      factors supported at 1 and 1/3 whose product is
                       supported at 0, not at 1/3 nontrivially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UsageError
from .forms import WeightForm, constant_weight
from .membership import (
    FamilyMatcher,
    FieldContext,
    MembershipFunction,
    MuRule,
)
from .forms import ValueForm
from .sequences import (
    DEFAULT_EPS,
    SUPPORTED,
    SUPPORTED_TRIVIALLY,
    REFUTED,
    ExperimentSpec,
    ExperimentReport,
    MuAssignment,
    SequenceSpec,
    classical_converges,
    mu_converges,
    run_experiment,
    seq_bounded_report,
    SeqBoundsReport,
)

DEMO_NAMES = ("nonunique_limit", "unbounded_convergent", "sum_failure", "product_failure")

# n / (n+1)^3, the index weighting both log-drift families carry
_POLY_N_OVER_CUBE = WeightForm("rational_poly", {"p": [0, 1], "q": [1, 3, 3, 1]})
# n^2 / (2n+1)^3
_POLY_SQ_OVER_ODD_CUBE = WeightForm("rational_poly", {"p": [0, 0, 1], "q": [1, 6, 12, 8]})
# n^2 / (2 (n+1)^3)
_POLY_SQ_OVER_2CUBE = WeightForm("rational_poly", {"p": [0, 0, 1], "q": [2, 6, 6, 2]})
# 3 (3n+1) / (2 n^2); exceeds 1 below n = 5, so entries using it start there
_POLY_PARTNER = WeightForm("rational_poly", {"p": [3, 9], "q": [0, 0, 2]})
# 1 / n
_POLY_INV_N = WeightForm("rational_poly", {"p": [1], "q": [0, 1]})
_INV_EXP = WeightForm("inv_exp_p1_sq", {})


def _zero_default_mu(rules=()) -> MembershipFunction:
    return MembershipFunction(tuple(rules), 0.0)


def _nonunique_limit() -> ExperimentSpec:
    horizon = 100_000
    seq = SequenceSpec("log_plus", {"c": 1.0}, n_min=1, n_max=horizon)
    shift = 1.0 - math.sqrt(2.0)
    mu = _zero_default_mu(
        (
            MuRule(FamilyMatcher(ValueForm("log_n_plus_c", {"c": 1.0}), 1, horizon), _POLY_N_OVER_CUBE),
            MuRule(FamilyMatcher(ValueForm("log_n_plus_c", {"c": math.sqrt(2.0)}), 1, horizon), _POLY_N_OVER_CUBE),
        )
    )
    return ExperimentSpec(
        sequence=seq,
        assignment=MuAssignment(
            (
                ("self", None, _POLY_N_OVER_CUBE),
                ("self", shift, _POLY_N_OVER_CUBE),
            )
        ),
        candidates=(("self", 0.0), ("self", shift)),
        eps_schedule=DEFAULT_EPS,
        horizon=horizon,
        ctx=FieldContext(mu=mu),
        envelopes=(
            ("self", 0.0, "log_drift_over_cubic"),
            ("self", shift, "log_drift_over_cubic"),
        ),
        label="nonunique_limit",
    )


def _unbounded_convergent() -> ExperimentSpec:
    horizon = 600
    seq = SequenceSpec("exp_plus", {"c": 2.0}, n_min=1, n_max=horizon)
    mu = _zero_default_mu(
        (MuRule(FamilyMatcher(ValueForm("exp_n_plus_c", {"c": 2.0}), 1, horizon), 1.0),)
    )
    return ExperimentSpec(
        sequence=seq,
        assignment=MuAssignment(
            (
                ("self", None, constant_weight(1.0)),
                ("self", 1.0, _INV_EXP),
            )
        ),
        candidates=(("self", 1.0),),
        eps_schedule=DEFAULT_EPS,
        horizon=horizon,
        ctx=FieldContext(mu=mu),
        envelopes=(("self", 1.0, "inverse_exponential"),),
        label="unbounded_convergent",
    )


def _sum_failure() -> ExperimentSpec:
    horizon = 1_200_000
    seq = SequenceSpec("sq_ratio", {}, n_min=1, n_max=horizon)
    return ExperimentSpec(
        sequence=seq,
        partner=seq,
        assignment=MuAssignment(
            (
                ("self", 1.0, _POLY_SQ_OVER_ODD_CUBE),
                ("partner", 1.0, _POLY_SQ_OVER_ODD_CUBE),
                ("sum", None, _POLY_SQ_OVER_2CUBE),
            )
        ),
        candidates=(("self", 1.0), ("partner", 1.0), ("sum", 0.0), ("sum", 2.0)),
        eps_schedule=DEFAULT_EPS,
        horizon=horizon,
        ctx=FieldContext(mu=_zero_default_mu()),
        envelopes=(("sum", 0.0, "harmonic"),),
        label="sum_failure",
    )


def _product_failure() -> ExperimentSpec:
    horizon = 400_000
    third = 1.0 / 3.0
    seq = SequenceSpec("sq_ratio", {}, n_min=5, n_max=horizon)
    partner = SequenceSpec("moebius", {"a": 1.0, "b": 1.0, "c": 3.0, "d": 1.0}, n_min=5, n_max=horizon)
    return ExperimentSpec(
        sequence=seq,
        partner=partner,
        assignment=MuAssignment(
            (
                ("self", 1.0, _POLY_SQ_OVER_ODD_CUBE),
                ("partner", third, _POLY_PARTNER),
                ("product", None, _POLY_INV_N),
            )
        ),
        candidates=(("self", 1.0), ("partner", third), ("product", 0.0), ("product", third)),
        eps_schedule=DEFAULT_EPS,
        horizon=horizon,
        ctx=FieldContext(mu=_zero_default_mu()),
        envelopes=(("product", 0.0, "harmonic"),),
        label="product_failure",
    )


_BUILDERS = {
    "nonunique_limit": _nonunique_limit,
    "unbounded_convergent": _unbounded_convergent,
    "sum_failure": _sum_failure,
    "product_failure": _product_failure,
}

HEADLINES = {
    "nonunique_limit": "two distinct weighted limits for one classically divergent sequence",
    "unbounded_convergent": "weighted-convergent yet weighted-unbounded",
    "sum_failure": "weighted limits do not add: sum converges to 0, not to 1 + 1",
    "product_failure": "weighted limits do not multiply: product converges to 0, not to 1/3",
}


def demo_catalog(name: str) -> ExperimentSpec:
    """The fully bound experiment for a registered demo name."""
    if name not in _BUILDERS:
        raise UsageError(f"unknown demo {name!r}; catalog: {', '.join(DEMO_NAMES)}")
    return _BUILDERS[name]()


@dataclass(frozen=True)
class DemoReport:
    name: str
    headline: str
    experiment: ExperimentSpec
    report: ExperimentReport
    claims: tuple  # ((label, bool), ...)
    bounds: SeqBoundsReport | None = None
    literal_variant: object = None

    @property
    def ok(self) -> bool:
        return all(flag for _, flag in self.claims)


def run_demo(name: str) -> DemoReport:
    """Run a catalog demo and check the claims it is meant to reproduce."""
    exp = demo_catalog(name)
    report = run_experiment(exp)
    claims = []
    bounds = None
    literal = None

    if name == "nonunique_limit":
        shift = 1.0 - math.sqrt(2.0)
        v0 = report.verdict_for("self", 0.0)
        v1 = report.verdict_for("self", shift)
        claims.append(("supported at 0", v0.verdict == SUPPORTED))
        claims.append((f"supported at {shift:.6f}", v1.verdict == SUPPORTED))
        classical = classical_converges(exp.sequence, 0.0, exp.eps_schedule, exp.horizon)
        claims.append(("classically divergent (refuted at horizon)", classical.verdict == REFUTED))
    elif name == "unbounded_convergent":
        v = report.verdict_for("self", 1.0)
        claims.append(("supported at 1", v.verdict == SUPPORTED))
        bounds = seq_bounded_report(exp, "self", probe=1e6)
        claims.append(("scaled stream exceeds probe 1e6", bounds.within_probe is False))
        # literal reading: the inverse-exponential weight is bound to the
        # stream shifted by -1, leaving the deviation stream at weight zero.
        # The zero is bound explicitly: past n ~ 36 the shifted and unshifted
        # terms are indistinguishable in doubles, so a value-based fallback
        # could not keep them apart.
        literal_exp = ExperimentSpec(
            sequence=exp.sequence,
            assignment=MuAssignment(
                (
                    ("self", None, constant_weight(1.0)),
                    ("self", -1.0, _INV_EXP),
                    ("self", 1.0, constant_weight(0.0)),
                )
            ),
            candidates=(("self", 1.0),),
            eps_schedule=exp.eps_schedule,
            horizon=exp.horizon,
            ctx=exp.ctx,
            label="unbounded_convergent_literal",
        )
        literal = mu_converges(literal_exp, "self", 1.0)
        claims.append(("literal reading supported only trivially", literal.verdict == SUPPORTED_TRIVIALLY))
    elif name == "sum_failure":
        claims.append(("x supported at 1", report.verdict_for("self", 1.0).verdict == SUPPORTED))
        claims.append(("y supported at 1", report.verdict_for("partner", 1.0).verdict == SUPPORTED))
        claims.append(("sum supported at 0 nontrivially", report.verdict_for("sum", 0.0).verdict == SUPPORTED))
        claims.append(("sum at 2 supported only trivially", report.verdict_for("sum", 2.0).verdict == SUPPORTED_TRIVIALLY))
    elif name == "product_failure":
        third = 1.0 / 3.0
        claims.append(("x supported at 1", report.verdict_for("self", 1.0).verdict == SUPPORTED))
        claims.append(("y supported at 1/3", report.verdict_for("partner", third).verdict == SUPPORTED))
        claims.append(("product supported at 0", report.verdict_for("product", 0.0).verdict == SUPPORTED))
        claims.append(("product at 1/3 supported only trivially", report.verdict_for("product", third).verdict == SUPPORTED_TRIVIALLY))

    return DemoReport(
        name=name,
        headline=HEADLINES[name],
        experiment=exp,
        report=report,
        claims=tuple(claims),
        bounds=bounds,
        literal_variant=literal,
    )
