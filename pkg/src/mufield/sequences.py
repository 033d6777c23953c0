"""Closed-form sequences, per-expression weight assignments, convergence scans.

A convergence verdict here is horizon-relative: the scan certifies that the
weighted deviation |v_n - candidate| * w(v_n - candidate) stays below eps
from some minimal index N(eps) through the horizon. Deviations are compared
against eps with a slack relative to eps itself (dev < eps * (1 + eq_tol)),
so closed forms whose deviation lands exactly on eps at the formula index
count as within; the weighted order keeps its absolute slack. Verdicts are
upgraded by a tail certificate when the deviation is monotone nonincreasing
over the scanned tail, or when the experiment declares an analytic envelope.

A verdict is "supported-trivially" when every resolved membership from the
first supported index onward sits at or below ctx.min_mu: the convergence
then rests entirely on zero weights, so any candidate would be supported.
The flag keeps statements like "converges to 0, not to 2 nontrivially"
machine-checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SpecError, UsageError, ValidationError
from .forms import (
    EXP_INDEX_CAP,
    ValueForm,
    WeightForm,
    constant_weight,
    parse_weight_form,
    weight_form_to_obj,
)
from .membership import FieldContext, crisp, parse_mu_spec, serialize_mu_spec
from .real_field import (
    FAIL,
    PASS,
    UNMET,
    IdentityCheckReport,
    ScaledValue,
)

DEFAULT_EPS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
DEFAULT_HORIZON = 100_000

SEQUENCE_FORMS = ("log_plus", "exp_plus", "sq_ratio", "moebius", "constant", "table")
EXPRESSIONS = ("self", "partner", "sum", "product")

_FORM_TO_VALUE_FORM = {
    "log_plus": "log_n_plus_c",
    "exp_plus": "exp_n_plus_c",
    "sq_ratio": "sq_ratio",
    "moebius": "moebius",
}

CERT_MONOTONE = "monotone-decreasing-envelope"

SUPPORTED = "supported"
SUPPORTED_TRIVIALLY = "supported-trivially"
REFUTED = "refuted-at-horizon"


@dataclass(frozen=True)
class SequenceSpec:
    """A closed-form family (or explicit table) with its valid index range."""

    form: str
    params: dict = field(default_factory=dict)
    n_min: int = 1
    n_max: int = DEFAULT_HORIZON

    def __post_init__(self):
        if self.form not in SEQUENCE_FORMS:
            raise SpecError(f"unknown sequence form {self.form!r}; known: {SEQUENCE_FORMS}")
        if self.n_min < 1 or self.n_min > self.n_max:
            raise ValidationError(f"index range [{self.n_min}, {self.n_max}] is invalid")
        cap = self.index_cap()
        if cap is not None and self.n_max > cap:
            raise ValidationError(
                f"form {self.form!r} caps at n <= {cap} to avoid overflow, got n_max={self.n_max}"
            )
        if self.form == "constant" and "value" not in self.params:
            raise SpecError("constant sequence requires params.value")
        if self.form == "table":
            pts = self.params.get("points")
            if not isinstance(pts, dict) or not pts:
                raise SpecError("table sequence requires a non-empty params.points map")
            for k in range(self.n_min, self.n_max + 1):
                if k not in pts:
                    raise ValidationError(f"table sequence missing index n={k}")

    def index_cap(self) -> int | None:
        return EXP_INDEX_CAP if self.form == "exp_plus" else None

    def _value_form(self) -> ValueForm:
        return ValueForm(_FORM_TO_VALUE_FORM[self.form], self.params)

    def terms(self, ns: np.ndarray) -> np.ndarray:
        if self.form == "constant":
            return np.full(ns.shape, float(self.params["value"]))
        if self.form == "table":
            pts = self.params["points"]
            return np.array([float(pts[int(k)]) for k in ns])
        return self._value_form().terms(ns.astype(float))

    def term_at(self, n: int) -> float:
        if not (self.n_min <= n <= self.n_max):
            raise UsageError(f"index {n} outside [{self.n_min}, {self.n_max}]")
        return float(self.terms(np.array([n]))[0])


def term_at(seq: SequenceSpec, n: int) -> float:
    return seq.term_at(n)


@dataclass(frozen=True)
class MuAssignment:
    """Maps tracked expressions to weight forms of n.

    Entries are (expression, offset, form): expression names which stream is
    weighted (self, partner, sum, product), offset is the candidate the
    stream is shifted by (None means the raw stream, equivalent to 0).
    Unassigned expressions fall back to the context membership function
    evaluated at the numeric value of the expression.
    """

    entries: tuple = ()

    def __post_init__(self):
        for e in self.entries:
            expr, offset, wf = e
            if expr not in EXPRESSIONS:
                raise SpecError(f"unknown expression tag {expr!r}; known: {EXPRESSIONS}")
            if offset is not None:
                float(offset)
            if not isinstance(wf, WeightForm):
                raise SpecError(f"assignment for {expr!r} must carry a WeightForm")

    def resolve(self, expr: str, offset: float | None, tol: float) -> WeightForm | None:
        want = 0.0 if offset is None else float(offset)
        for e_expr, e_off, wf in self.entries:
            if e_expr != expr:
                continue
            have = 0.0 if e_off is None else float(e_off)
            if abs(want - have) <= tol:
                return wf
        return None


@dataclass(frozen=True)
class ConvergenceVerdict:
    expr: str
    candidate: float
    eps_table: tuple  # ((eps, N-or-None), ...) with N antitone in eps
    horizon: int
    n_start: int
    trivial_tail_fraction: float
    tail_certificate: str | None
    verdict: str


@dataclass(frozen=True)
class ExperimentSpec:
    """A sequence (optionally a partner), weights, candidates, and a horizon."""

    sequence: SequenceSpec
    partner: SequenceSpec | None = None
    assignment: MuAssignment = MuAssignment()
    candidates: tuple = ()  # ((expr, value), ...)
    eps_schedule: tuple = DEFAULT_EPS
    horizon: int = DEFAULT_HORIZON
    ctx: FieldContext = field(default_factory=FieldContext)
    envelopes: tuple = ()  # ((expr, candidate, envelope label), ...)
    label: str = ""

    def __post_init__(self):
        if not self.eps_schedule or any(e <= 0.0 for e in self.eps_schedule):
            raise ValidationError("eps schedule must be non-empty and positive")
        seqs = [self.sequence] + ([self.partner] if self.partner else [])
        for s in seqs:
            if self.horizon > s.n_max:
                raise ValidationError(
                    f"horizon {self.horizon} exceeds sequence n_max {s.n_max}"
                )
            cap = s.index_cap()
            if cap is not None and self.horizon > cap:
                raise ValidationError(f"horizon {self.horizon} exceeds family cap {cap}")
        if self.horizon < self.n_start:
            raise ValidationError("horizon below the first valid index")
        for expr, value in self.candidates:
            if expr not in EXPRESSIONS:
                raise SpecError(f"unknown candidate expression {expr!r}")
            float(value)
            if expr in ("partner", "sum", "product") and self.partner is None and expr != "partner":
                pass
        for e_expr, _, wf in self.assignment.entries:
            wf.validate_range(self.n_start, self.horizon, where=f"mu[{e_expr}]")

    @property
    def n_start(self) -> int:
        n0 = self.sequence.n_min
        if self.partner is not None:
            n0 = max(n0, self.partner.n_min)
        return n0

    def indices(self) -> np.ndarray:
        return np.arange(self.n_start, self.horizon + 1, dtype=np.int64)

    def expression_values(self, expr: str, ns: np.ndarray) -> np.ndarray:
        if expr == "self":
            return self.sequence.terms(ns)
        if self.partner is None:
            raise UsageError(f"expression {expr!r} needs a partner sequence")
        if expr == "partner":
            return self.partner.terms(ns)
        x = self.sequence.terms(ns)
        y = self.partner.terms(ns)
        return x + y if expr == "sum" else x * y

    def resolved_weights(
        self, expr: str, candidate: float | None, ns: np.ndarray, values: np.ndarray
    ) -> np.ndarray:
        wf = self.assignment.resolve(expr, candidate, self.ctx.eq_tol)
        if wf is not None:
            return wf.weights(ns.astype(float))
        shift = 0.0 if candidate is None else float(candidate)
        return self.ctx.mu.weight_many(values - shift)

    def envelope_for(self, expr: str, candidate: float) -> str | None:
        for e_expr, e_cand, label in self.envelopes:
            if e_expr == expr and abs(float(e_cand) - float(candidate)) <= self.ctx.eq_tol:
                return label
        return None


def scaled_deviation(exp: ExperimentSpec, expr: str, candidate: float, n: int) -> float:
    """|v_n - candidate| times the resolved weight at (v_n - candidate)."""
    if not (exp.n_start <= n <= exp.horizon):
        raise UsageError(f"index {n} outside [{exp.n_start}, {exp.horizon}]")
    ns = np.array([n], dtype=np.int64)
    values = exp.expression_values(expr, ns)
    w = exp.resolved_weights(expr, candidate, ns, values)
    return float(np.abs(values - float(candidate))[0] * w[0])


def _deviation_arrays(exp, expr, candidate):
    ns = exp.indices()
    values = exp.expression_values(expr, ns)
    weights = exp.resolved_weights(expr, candidate, ns, values)
    dev = np.abs(values - float(candidate)) * weights
    return ns, values, weights, dev


def _eps_n(dev: np.ndarray, ns: np.ndarray, eps: float, eq_tol: float) -> int | None:
    bad = dev >= eps * (1.0 + eq_tol)
    if not bad.any():
        return int(ns[0])
    last = int(np.nonzero(bad)[0][-1])
    if ns[last] == ns[-1]:
        return None
    return int(ns[last]) + 1


def min_index_for_epsilon(exp: ExperimentSpec, expr: str, candidate: float, eps: float):
    """Smallest k with deviation < eps (1 + slack) for every n in [k, horizon]."""
    if eps <= 0.0:
        raise UsageError("eps must be > 0")
    ns, _, _, dev = _deviation_arrays(exp, expr, candidate)
    return _eps_n(dev, ns, float(eps), exp.ctx.eq_tol)


def mu_converges(exp: ExperimentSpec, expr: str, candidate: float) -> ConvergenceVerdict:
    """Full eps table, triviality fraction, and tail certificate for one candidate."""
    ns, _, weights, dev = _deviation_arrays(exp, expr, candidate)
    eq_tol = exp.ctx.eq_tol
    table = tuple((eps, _eps_n(dev, ns, float(eps), eq_tol)) for eps in exp.eps_schedule)
    found = [n for _, n in table if n is not None]
    all_found = len(found) == len(table)
    tail_from = min(found) if found else int(ns[0])
    tail = ns >= tail_from
    frac = float(np.mean(weights[tail] <= exp.ctx.min_mu))

    certificate = None
    if all_found:
        tdev = dev[tail]
        if tdev.size < 2 or bool(np.all(np.diff(tdev) <= eq_tol)):
            certificate = CERT_MONOTONE
        else:
            label = exp.envelope_for(expr, candidate)
            if label is not None:
                certificate = f"analytic-bound({label})"

    if not all_found:
        verdict = REFUTED
    elif frac == 1.0:
        verdict = SUPPORTED_TRIVIALLY
    else:
        verdict = SUPPORTED
    return ConvergenceVerdict(
        expr=expr,
        candidate=float(candidate),
        eps_table=table,
        horizon=exp.horizon,
        n_start=tail_from,
        trivial_tail_fraction=frac,
        tail_certificate=certificate,
        verdict=verdict,
    )


def classical_converges(
    seq: SequenceSpec, candidate: float, eps_schedule=DEFAULT_EPS, horizon: int | None = None
) -> ConvergenceVerdict:
    """The same scan with the identity weighting (weight 1 everywhere)."""
    h = min(seq.n_max, DEFAULT_HORIZON) if horizon is None else horizon
    exp = ExperimentSpec(
        sequence=seq,
        eps_schedule=tuple(eps_schedule),
        horizon=h,
        ctx=FieldContext(mu=crisp()),
    )
    return mu_converges(exp, "self", candidate)


@dataclass(frozen=True)
class SeqBoundsReport:
    """Scaled extremes of one expression stream over the horizon."""

    expr: str
    sup: ScaledValue
    sup_n: int
    inf: ScaledValue
    inf_n: int
    scaled_abs_max: float
    raw_abs_max: float
    scaled_within_raw: bool
    probe: float | None = None
    within_probe: bool | None = None
    first_exceed_n: int | None = None


def seq_bounded_report(exp: ExperimentSpec, expr: str = "self", probe: float | None = None) -> SeqBoundsReport:
    ns = exp.indices()
    values = exp.expression_values(expr, ns)
    weights = exp.resolved_weights(expr, None, ns, values)
    s = values * weights
    i_sup, i_inf = int(np.argmax(s)), int(np.argmin(s))
    scaled_abs = float(np.max(np.abs(s)))
    raw_abs = float(np.max(np.abs(values)))
    first_exceed = None
    within = None
    if probe is not None:
        over = np.nonzero(np.abs(s) > probe)[0]
        within = over.size == 0
        if over.size:
            first_exceed = int(ns[over[0]])
    return SeqBoundsReport(
        expr=expr,
        sup=ScaledValue(float(values[i_sup]), float(weights[i_sup]), float(s[i_sup])),
        sup_n=int(ns[i_sup]),
        inf=ScaledValue(float(values[i_inf]), float(weights[i_inf]), float(s[i_inf])),
        inf_n=int(ns[i_inf]),
        scaled_abs_max=scaled_abs,
        raw_abs_max=raw_abs,
        scaled_within_raw=scaled_abs <= raw_abs + exp.ctx.eq_tol,
        probe=probe,
        within_probe=within,
        first_exceed_n=first_exceed,
    )


def check_monotone(exp: ExperimentSpec, probe: float | None = None) -> IdentityCheckReport:
    """Certify that the scaled stream is nondecreasing and closes on its supremum.

    Monotonicity is checked termwise with eq_tol slack. When a probe is given
    and the scaled stream exceeds it, the supremum-convergence conclusion is
    reported as precondition-unmet (the stream is not bounded within the
    probe, so the monotone-convergence statement has no content at horizon).
    """
    if exp.horizon < exp.n_start + 1:
        raise UsageError("check_monotone needs at least two indices")
    ns = exp.indices()
    values = exp.expression_values("self", ns)
    weights = exp.resolved_weights("self", None, ns, values)
    s = values * weights
    eq_tol = exp.ctx.eq_tol
    drops = np.nonzero(np.diff(s) < -eq_tol)[0]
    if drops.size:
        k = int(ns[drops[0]])
        return IdentityCheckReport(
            "monotone", (), float(s[drops[0] + 1]), float(s[drops[0]]), math.inf, FAIL,
            (f"scaled stream decreases at n={k}",), {"first_violation_n": k},
        )
    sup = float(np.max(s))
    if probe is not None and float(np.max(np.abs(s))) > probe:
        return IdentityCheckReport(
            "monotone", (), float(s[-1]), sup, math.nan, UNMET,
            ("scaled stream exceeds the probe; not bounded at this scale",),
            {"probe": probe},
        )
    gap_final = sup - float(s[-1])
    gaps = sup - s
    gap_monotone = bool(np.all(np.diff(gaps) <= eq_tol))
    tol = eq_tol * (1.0 + abs(sup))
    verdict = PASS if gap_final <= tol and gap_monotone else FAIL
    return IdentityCheckReport(
        "monotone", (), float(s[-1]), sup, gap_final / (1.0 + abs(sup)), verdict,
        (), {"gap_final": gap_final, "gap_nonincreasing": gap_monotone, "sup": sup},
    )


@dataclass(frozen=True)
class ExperimentReport:
    label: str
    verdicts: tuple  # ConvergenceVerdict per declared candidate
    classical: tuple  # ((expr, candidate, ConvergenceVerdict), ...)
    theorem_checks: tuple  # IdentityCheckReport per cross-check

    def verdict_for(self, expr: str, candidate: float, tol: float = 1e-9) -> ConvergenceVerdict:
        for v in self.verdicts:
            if v.expr == expr and abs(v.candidate - candidate) <= tol:
                return v
        raise UsageError(f"no verdict for ({expr}, {candidate})")


def run_experiment(exp: ExperimentSpec) -> ExperimentReport:
    """Verdicts for every declared candidate plus limit-arithmetic cross-checks.

    When both input sequences converge classically (at this horizon and eps
    schedule), the sum and product are asserted to be mu-supported at l + m
    and l * m. When only mu-convergence holds, observed verdicts are reported
    without asserting any arithmetic.
    """
    for expr, _ in exp.candidates:
        if expr in ("partner", "sum", "product") and exp.partner is None:
            raise UsageError(f"candidate on {expr!r} needs a partner sequence")
    verdicts = tuple(mu_converges(exp, expr, value) for expr, value in exp.candidates)

    classical = []
    self_candidates = [v for e, v in exp.candidates if e == "self"]
    partner_candidates = [v for e, v in exp.candidates if e == "partner"]
    for cand in self_candidates:
        classical.append(("self", cand, classical_converges(exp.sequence, cand, exp.eps_schedule, exp.horizon)))
    for cand in partner_candidates:
        classical.append(("partner", cand, classical_converges(exp.partner, cand, exp.eps_schedule, exp.horizon)))

    checks = []
    if exp.partner is not None and self_candidates and partner_candidates:
        l, m = self_candidates[0], partner_candidates[0]
        cl = next(v for e, c, v in classical if e == "self" and c == l)
        cm = next(v for e, c, v in classical if e == "partner" and c == m)
        both = cl.verdict != REFUTED and cm.verdict != REFUTED
        for expr, target in (("sum", l + m), ("product", l * m)):
            if not both:
                checks.append(IdentityCheckReport(
                    f"limit-{expr}", (l, m), math.nan, math.nan, math.nan, UNMET,
                    ("classical support not established at this horizon",), {},
                ))
                continue
            v = mu_converges(exp, expr, target)
            ok = v.verdict in (SUPPORTED, SUPPORTED_TRIVIALLY)
            checks.append(IdentityCheckReport(
                f"limit-{expr}", (l, m), target, target, 0.0 if ok else math.inf,
                PASS if ok else FAIL,
                (f"{expr} verdict: {v.verdict}",), {"verdict": v.verdict},
            ))
    return ExperimentReport(exp.label, verdicts, tuple(classical), tuple(checks))


def trace_rows(exp: ExperimentSpec, expr: str, candidate: float):
    """(n, term, membership, scaled_deviation) rows for plotting."""
    ns, values, weights, dev = _deviation_arrays(exp, expr, candidate)
    for i in range(ns.size):
        yield int(ns[i]), float(values[i]), float(weights[i]), float(dev[i])


# ---------------------------------------------------------------------------
# Structured document (JSON-shaped) load / dump
# ---------------------------------------------------------------------------

def _parse_sequence(doc, where="sequence") -> SequenceSpec:
    if not isinstance(doc, dict) or "form" not in doc:
        raise SpecError(f"{where}: needs an object with 'form'")
    params = dict(doc.get("params", {}))
    if doc["form"] == "table" and "points" in params:
        params["points"] = {int(k): float(v) for k, v in params["points"].items()}
    return SequenceSpec(
        form=doc["form"],
        params=params,
        n_min=int(doc.get("n_min", 1)),
        n_max=int(doc.get("n_max", DEFAULT_HORIZON)),
    )


def _parse_tag(key: str, where="mu"):
    base, _, off = key.partition(":")
    aliases = {"sum_with": "sum", "product_with": "product"}
    expr = aliases.get(base, base)
    for suffix in ("_minus",):
        if expr.endswith(suffix):
            expr = expr[: -len(suffix)]
            if not off:
                raise SpecError(f"{where}: tag {key!r} needs an offset after ':'")
    if expr not in EXPRESSIONS:
        raise SpecError(f"{where}: unknown expression tag {key!r}")
    offset = float(off) if off else None
    return expr, offset


def _tag_to_key(expr: str, offset) -> str:
    if offset is None:
        return expr
    return f"{expr}_minus:{float(offset)!r}"


def parse_experiment(doc: dict) -> ExperimentSpec:
    """Build an experiment from its schema'd document form."""
    if not isinstance(doc, dict) or "sequence" not in doc:
        raise SpecError("experiment: top level must be an object with 'sequence'")
    seq = _parse_sequence(doc["sequence"])
    partner = _parse_sequence(doc["partner"], "partner") if doc.get("partner") else None
    entries = []
    for key, obj in dict(doc.get("mu", {})).items():
        expr, offset = _parse_tag(key)
        entries.append((expr, offset, parse_weight_form(obj, where=f"mu[{key}]")))
    candidates = []
    for item in doc.get("candidates", []):
        if isinstance(item, dict):
            if "expr" not in item or "value" not in item:
                raise SpecError("candidates: objects need 'expr' and 'value'")
            candidates.append((item["expr"], float(item["value"])))
        else:
            candidates.append(("self", float(item)))
    eps = tuple(float(e) for e in doc.get("eps", DEFAULT_EPS))
    horizon = int(doc.get("horizon", DEFAULT_HORIZON))
    fallback = parse_mu_spec(doc["fallback_mu"]) if doc.get("fallback_mu") else crisp()
    tols = dict(doc.get("tolerances", {}))
    ctx = FieldContext(
        kind="real",
        mu=fallback,
        eq_tol=float(tols.get("eq_tol", 1e-9)),
        identity_tol=float(tols.get("identity_tol", 1e-9)),
        min_mu=float(tols.get("min_mu", 1e-12)),
    )
    return ExperimentSpec(
        sequence=seq,
        partner=partner,
        assignment=MuAssignment(tuple(entries)),
        candidates=tuple(candidates),
        eps_schedule=eps,
        horizon=horizon,
        ctx=ctx,
        label=str(doc.get("label", "")),
    )


def serialize_experiment(exp: ExperimentSpec) -> dict:
    def seq_obj(s: SequenceSpec):
        params = dict(s.params)
        if s.form == "table":
            params["points"] = {str(k): v for k, v in params["points"].items()}
        return {"form": s.form, "params": params, "n_min": s.n_min, "n_max": s.n_max}

    doc = {
        "sequence": seq_obj(exp.sequence),
        "mu": {
            _tag_to_key(expr, off): weight_form_to_obj(wf)
            for expr, off, wf in exp.assignment.entries
        },
        "candidates": [{"expr": e, "value": v} for e, v in exp.candidates],
        "eps": list(exp.eps_schedule),
        "horizon": exp.horizon,
        "fallback_mu": serialize_mu_spec(exp.ctx.mu),
        "label": exp.label,
    }
    if exp.partner is not None:
        doc["partner"] = seq_obj(exp.partner)
    return doc


def load_experiment(text_or_doc) -> ExperimentSpec:
    import json

    if isinstance(text_or_doc, (bytes, str)):
        try:
            doc = json.loads(text_or_doc)
        except json.JSONDecodeError as e:
            raise SpecError(f"experiment: invalid JSON ({e})") from e
    else:
        doc = text_or_doc
    return parse_experiment(doc)
