"""Membership functions over the reals and complexes, and their audits.

A membership function is an ordered rule list with a default weight: the
first rule whose matcher accepts a value (within its tolerance) supplies the
weight, otherwise the default applies. All weights live in [0, 1] and are
validated eagerly at construction, scanning declared family index ranges.

The module also audits the five closure axioms a weighting must satisfy to
make the weighted reals/complexes behave like a field:

    (i)   w(x + y)  >= min(w(x), w(y))
    (ii)  w(-x)     >= w(x)
    (iii) w(x y)    >= min(w(x), w(y))
    (iv)  w(1/x)    >= w(x)          for x != 0
    (v)   w(0) = 1 = w(1)

Audits are sample-relative: they brute-force all pairs drawn from the given
samples (O(len(samples)^2) pair work) and make no claim about other points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, SpecError, UsageError, ValidationError
from .forms import (
    ValueForm,
    WeightForm,
    parse_value_form,
    parse_weight_form,
    weight_form_to_obj,
)

AXIOM_IDS = ("i", "ii", "iii", "iv", "v")

Scalar = Union[float, complex]


def _require_finite(v: Scalar, what: str = "value") -> Scalar:
    if isinstance(v, complex):
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise DomainError(f"{what} must have finite components, got {v!r}")
        return v
    v = float(v)
    if not np.isfinite(v):
        raise DomainError(f"{what} must be finite, got {v!r}")
    return v


@dataclass(frozen=True)
class PointMatcher:
    """Accepts values within tol of a single point."""

    value: Scalar
    tol: float = 1e-9

    def hit(self, v: Scalar) -> bool:
        return abs(v - self.value) <= self.tol


@dataclass(frozen=True)
class SetMatcher:
    """Accepts values within tol of any member of a finite set."""

    values: tuple
    tol: float = 1e-9

    def hit(self, v: Scalar) -> bool:
        return any(abs(v - s) <= self.tol for s in self.values)


@dataclass(frozen=True)
class FamilyMatcher:
    """Accepts values within tol of form(n) for some n in [n_min, n_max].

    Membership of a hit is looked up at the matched index, so the rule weight
    may be a WeightForm of n. Family members must be separated by much more
    than tol inside the declared range for matching to be unambiguous.
    """

    form: ValueForm
    n_min: int
    n_max: int
    tol: float = 1e-9

    def match_index(self, v: float) -> int | None:
        est = self.form.invert(v)
        if est is None:
            return None
        base = int(np.floor(est))
        for k in (base - 1, base, base + 1, base + 2):
            if self.n_min <= k <= self.n_max and abs(v - self.form.term_at(k)) <= self.tol:
                return k
        return None

    def match_indices(self, values: np.ndarray) -> np.ndarray:
        """Vectorized match: per-element matched index, or -1."""
        out = np.full(values.shape, -1, dtype=np.int64)
        with np.errstate(all="ignore"):
            if self.form.form == "log_n_plus_c":
                t = values - self.form.params["c"]
                est = np.where(t <= 50.0, np.exp(np.minimum(t, 50.0)), np.nan)
            elif self.form.form == "exp_n_plus_c":
                t = values - self.form.params["c"]
                est = np.where(t > 0.0, np.log(np.where(t > 0.0, t, 1.0)), np.nan)
            elif self.form.form == "sq_ratio":
                s = np.sqrt(np.where(values > 1.0, values, np.nan))
                est = 1.0 / (s - 1.0)
            else:
                p = self.form.params
                den = values * p["c"] - p["a"]
                est = np.where(den != 0.0, (p["b"] - values * p["d"]) / np.where(den != 0.0, den, 1.0), np.nan)
            base = np.floor(np.where(np.isfinite(est), est, self.n_min - 10)).astype(np.int64)
            for off in (-1, 0, 1, 2):
                k = base + off
                ok = (k >= self.n_min) & (k <= self.n_max) & (out < 0)
                if not ok.any():
                    continue
                kf = np.where(ok, k, self.n_min).astype(float)
                hit = ok & (np.abs(values - self.form.terms(kf)) <= self.tol)
                out = np.where(hit, k, out)
        return out


Matcher = Union[PointMatcher, SetMatcher, FamilyMatcher]


@dataclass(frozen=True)
class MuRule:
    """One matcher with its weight (a constant or a weight form of n)."""

    matcher: Matcher
    weight: Union[float, WeightForm]

    def __post_init__(self):
        if isinstance(self.weight, WeightForm):
            if not isinstance(self.matcher, FamilyMatcher):
                raise ValidationError("index-dependent weights require a family matcher")
        else:
            w = float(self.weight)
            if not (0.0 <= w <= 1.0):
                raise ValidationError(f"rule weight {w!r} out of [0, 1]")
        tol = self.matcher.tol
        if tol < 0.0:
            raise ValidationError(f"matcher tol {tol!r} must be >= 0")
        if isinstance(self.matcher, FamilyMatcher):
            if self.matcher.n_min < 1 or self.matcher.n_min > self.matcher.n_max:
                raise ValidationError(
                    f"family index range [{self.matcher.n_min}, {self.matcher.n_max}] is invalid"
                )


@dataclass(frozen=True)
class MembershipFunction:
    """Ordered rules with a default weight; first matching rule wins.

    Rule order is significant and user-controlled; overlapping matchers are
    allowed. Construction scans every family rule's index range and rejects
    any weight outside [0, 1], so evaluation never has to re-check.
    """

    rules: tuple = ()
    default: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if not (0.0 <= float(self.default) <= 1.0):
            raise ValidationError(f"default weight {self.default!r} out of [0, 1]")
        for i, rule in enumerate(self.rules):
            if not isinstance(rule, MuRule):
                raise ValidationError(f"rules[{i}] is not a MuRule")
            if isinstance(rule.weight, WeightForm) and isinstance(rule.matcher, FamilyMatcher):
                rule.weight.validate_range(
                    rule.matcher.n_min, rule.matcher.n_max, where=f"rules[{i}]"
                )

    def weight(self, v: Scalar) -> float:
        """Weight of the first rule accepting v, else the default."""
        is_complex = isinstance(v, complex) and v.imag != 0.0
        if isinstance(v, complex) and v.imag == 0.0:
            v = v.real
        for rule in self.rules:
            m = rule.matcher
            if isinstance(m, FamilyMatcher):
                if is_complex:
                    continue
                k = m.match_index(v)
                if k is not None:
                    w = rule.weight
                    return w.weight_at(k) if isinstance(w, WeightForm) else float(w)
            elif m.hit(v):
                return float(rule.weight)
        return float(self.default)

    def weight_many(self, values: np.ndarray) -> np.ndarray:
        """Vectorized weight of real values; first matching rule wins."""
        out = np.full(values.shape, float(self.default))
        decided = np.zeros(values.shape, dtype=bool)
        for rule in self.rules:
            m = rule.matcher
            if isinstance(m, PointMatcher):
                if isinstance(m.value, complex) and m.value.imag != 0.0:
                    continue
                hit = np.abs(values - (m.value.real if isinstance(m.value, complex) else m.value)) <= m.tol
                take = hit & ~decided
                out[take] = float(rule.weight)
                decided |= hit
            elif isinstance(m, SetMatcher):
                hit = np.zeros(values.shape, dtype=bool)
                for s in m.values:
                    if isinstance(s, complex) and s.imag != 0.0:
                        continue
                    hit |= np.abs(values - (s.real if isinstance(s, complex) else s)) <= m.tol
                take = hit & ~decided
                out[take] = float(rule.weight)
                decided |= hit
            else:
                ks = m.match_indices(values)
                hit = ks >= 0
                take = hit & ~decided
                if take.any():
                    w = rule.weight
                    if isinstance(w, WeightForm):
                        out[take] = w.weights(ks[take].astype(float))
                    else:
                        out[take] = float(w)
                decided |= hit
            if decided.all():
                break
        return out


def crisp() -> MembershipFunction:
    """The identity weighting: every value gets weight 1."""
    return MembershipFunction((), 1.0)


def two_level(values, level: float, tol: float = 1e-9) -> MembershipFunction:
    """Weight 1 on the given finite set, the constant level elsewhere."""
    return MembershipFunction(
        (MuRule(SetMatcher(tuple(values), tol), 1.0),), float(level)
    )


def from_rules(rules, default: float) -> MembershipFunction:
    """Validated construction from an explicit rule list."""
    return MembershipFunction(tuple(rules), float(default))


@dataclass(frozen=True)
class FieldContext:
    """Scalar kind, membership function, and tolerance policy.

    Every operation in the library takes one of these. eq_tol is the absolute
    slack used by matchers and order comparisons, identity_tol the relative
    residual bound for identity checks, and min_mu the threshold below which
    a membership counts as zero for division guards.
    """

    kind: str = "real"
    mu: MembershipFunction = field(default_factory=crisp)
    eq_tol: float = 1e-9
    identity_tol: float = 1e-9
    min_mu: float = 1e-12

    def __post_init__(self):
        if self.kind not in ("real", "complex"):
            raise ValidationError(f"kind must be 'real' or 'complex', got {self.kind!r}")
        if not (self.eq_tol > 0.0 and self.identity_tol > 0.0):
            raise ValidationError("tolerances must be strictly positive")
        if not (0.0 <= self.min_mu < 1.0):
            raise ValidationError("min_mu must lie in [0, 1)")


def mu_eval(ctx: FieldContext, v: Scalar) -> float:
    """Membership weight of v under ctx.mu; v must be finite."""
    v = _require_finite(v)
    return ctx.mu.weight(v)


# ---------------------------------------------------------------------------
# Structured document (JSON-shaped) load / dump
# ---------------------------------------------------------------------------

def parse_mu_spec(doc: dict) -> MembershipFunction:
    """Build a membership function from its schema'd document form."""
    if not isinstance(doc, dict):
        raise SpecError("mu spec: top level must be an object")
    if "default" not in doc:
        raise SpecError("mu spec: missing 'default'")
    default = doc["default"]
    if not isinstance(default, (int, float)) or isinstance(default, bool):
        raise SpecError("mu spec: 'default' must be a number")
    raw_rules = doc.get("rules", [])
    if not isinstance(raw_rules, list):
        raise SpecError("mu spec: 'rules' must be an array")
    rules = []
    for i, item in enumerate(raw_rules):
        where = f"rules[{i}]"
        if not isinstance(item, dict) or "match" not in item or "mu" not in item:
            raise SpecError(f"{where}: each rule needs 'match' and 'mu'")
        match = item["match"]
        kind = match.get("kind")
        tol = float(match.get("tol", 1e-9))
        if kind == "point":
            if "value" not in match:
                raise SpecError(f"{where}.match: point matcher needs 'value'")
            matcher: Matcher = PointMatcher(_scalar_from_obj(match["value"], where), tol)
        elif kind == "set":
            vals = match.get("values")
            if not isinstance(vals, list) or not vals:
                raise SpecError(f"{where}.match: set matcher needs non-empty 'values'")
            matcher = SetMatcher(tuple(_scalar_from_obj(v, where) for v in vals), tol)
        elif kind == "family":
            form = parse_value_form(match.get("form"), match.get("params"), where=f"{where}.match")
            n_min = int(match.get("n_min", 1))
            n_max = int(match.get("n_max", 100_000))
            matcher = FamilyMatcher(form, n_min, n_max, tol)
        else:
            raise SpecError(f"{where}.match.kind: unknown kind {kind!r}")
        weight = parse_weight_form(item["mu"], where=f"{where}.mu")
        if weight.form == "const":
            rules.append(MuRule(matcher, float(weight.params["value"])))
        else:
            rules.append(MuRule(matcher, weight))
    return MembershipFunction(tuple(rules), float(default))


def serialize_mu_spec(mu: MembershipFunction) -> dict:
    """Inverse of parse_mu_spec up to evaluation equivalence."""
    rules = []
    for rule in mu.rules:
        m = rule.matcher
        if isinstance(m, PointMatcher):
            match = {"kind": "point", "value": _scalar_to_obj(m.value), "tol": m.tol}
        elif isinstance(m, SetMatcher):
            match = {"kind": "set", "values": [_scalar_to_obj(v) for v in m.values], "tol": m.tol}
        else:
            match = {
                "kind": "family",
                "form": m.form.form,
                "params": dict(m.form.params),
                "n_min": m.n_min,
                "n_max": m.n_max,
                "tol": m.tol,
            }
        w = rule.weight
        mu_obj = weight_form_to_obj(w) if isinstance(w, WeightForm) else float(w)
        rules.append({"match": match, "mu": mu_obj})
    return {"default": float(mu.default), "rules": rules}


def load_mu_spec(text_or_doc) -> MembershipFunction:
    """Parse a membership function from JSON text or an already-decoded dict."""
    import json

    if isinstance(text_or_doc, (bytes, str)):
        try:
            doc = json.loads(text_or_doc)
        except json.JSONDecodeError as e:
            raise SpecError(f"mu spec: invalid JSON ({e})") from e
    else:
        doc = text_or_doc
    return parse_mu_spec(doc)


def _scalar_from_obj(obj, where: str) -> Scalar:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return float(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise SpecError(f"{where}: scalar must be a number or an [re, im] pair")


def _scalar_to_obj(v: Scalar):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return float(v)


# ---------------------------------------------------------------------------
# Axiom audit and summary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    operands: tuple
    lhs: float  # the weight that should dominate
    rhs: float  # the bound it had to meet


@dataclass(frozen=True)
class AxiomReport:
    """Sample-relative verdicts for the five closure axioms.

    The report speaks only about the supplied samples; nothing is claimed
    about unsampled points. negation_symmetry is a derived check: wherever
    axiom (ii) holds at both a and -a, the two weights must agree, which the
    report verifies explicitly.
    """

    verdicts: dict
    violations: tuple
    negation_symmetry: bool
    negation_pairs_checked: int
    sample_count: int

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


def check_axioms(ctx: FieldContext, samples) -> AxiomReport:
    """Audit the five axioms over all pairs of samples (O(n^2) pair work)."""
    pts = [_require_finite(s, "sample") for s in samples]
    if not pts:
        raise UsageError("check_axioms needs a non-empty sample list")
    tol = ctx.eq_tol
    w = {p: ctx.mu.weight(p) for p in pts}
    violations = []

    def violate(axiom, operands, lhs, rhs):
        violations.append(AxiomViolation(axiom, operands, lhs, rhs))

    for x in pts:
        for y in pts:
            bound = min(w[x], w[y])
            ws = ctx.mu.weight(x + y)
            if ws < bound - tol:
                violate("i", (x, y), ws, bound)
            wp = ctx.mu.weight(x * y)
            if wp < bound - tol:
                violate("iii", (x, y), wp, bound)
    for x in pts:
        wn = ctx.mu.weight(-x)
        if wn < w[x] - tol:
            violate("ii", (x,), wn, w[x])
        if abs(x) > tol:
            wi = ctx.mu.weight(1.0 / x if not isinstance(x, complex) else 1.0 / x)
            if wi < w[x] - tol:
                violate("iv", (x,), wi, w[x])
    w0, w1 = ctx.mu.weight(0.0), ctx.mu.weight(1.0)
    if abs(w0 - 1.0) > tol:
        violate("v", (0.0,), w0, 1.0)
    if abs(w1 - 1.0) > tol:
        violate("v", (1.0,), w1, 1.0)

    sym_ok = True
    sym_checked = 0
    for x in pts:
        wn = ctx.mu.weight(-x)
        wb = ctx.mu.weight(-(-x))
        if wn >= w[x] - tol and wb >= wn - tol:
            sym_checked += 1
            if abs(wn - w[x]) > 2.0 * tol:
                sym_ok = False

    seen = {v.axiom for v in violations}
    verdicts = {a: a not in seen for a in AXIOM_IDS}
    return AxiomReport(
        verdicts=verdicts,
        violations=tuple(violations),
        negation_symmetry=sym_ok,
        negation_pairs_checked=sym_checked,
        sample_count=len(pts),
    )


@dataclass(frozen=True)
class MuSummary:
    """Finite-sample surrogate for the global infimum of the weighting."""

    inf_mu: float
    count_zero: int
    witness: Scalar

    def __post_init__(self):
        if not (0.0 <= self.inf_mu <= 1.0):
            raise ValidationError("inf_mu must lie in [0, 1]")


def mu_summary(ctx: FieldContext, samples) -> MuSummary:
    """Minimum weight over the samples plus the count of near-zero weights."""
    pts = [_require_finite(s, "sample") for s in samples]
    if not pts:
        raise UsageError("mu_summary needs a non-empty sample list")
    weights = [(ctx.mu.weight(p), p) for p in pts]
    inf_w, witness = min(weights, key=lambda t: t[0])
    zeros = sum(1 for wt, _ in weights if wt <= ctx.min_mu)
    return MuSummary(inf_mu=inf_w, count_zero=zeros, witness=witness)
