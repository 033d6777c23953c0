"""Closed-form families of an integer index, and weight forms into [0, 1].

Value forms describe how a family member depends on its index n (sequence
terms, family matchers). Weight forms map an index n to a membership weight.
Both are registered under short string IDs so structured documents can name
them. Evaluation runs through a single numpy code path for scalars and
arrays alike, which keeps repeated evaluations bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError, ValidationError

VALUE_FORM_IDS = ("log_n_plus_c", "exp_n_plus_c", "sq_ratio", "moebius")
WEIGHT_FORM_IDS = ("const", "rational_poly", "inv_exp_p1_sq")

# exp(n) overflows a double past n ~ 709.78; stay clear of the edge.
EXP_INDEX_CAP = 700

_VALUE_FORM_PARAMS = {
    "log_n_plus_c": ("c",),
    "exp_n_plus_c": ("c",),
    "sq_ratio": (),
    "moebius": ("a", "b", "c", "d"),
}

_CHUNK = 200_000  # bound memory while scanning large index ranges


def _horner(coeffs, n):
    """Evaluate a polynomial given by ascending coefficients at n."""
    acc = np.zeros_like(n, dtype=float) if isinstance(n, np.ndarray) else 0.0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class ValueForm:
    """A registered closed form of the index n, e.g. log(n) + c."""

    form: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.form not in VALUE_FORM_IDS:
            raise SpecError(f"unknown value form {self.form!r}; known: {VALUE_FORM_IDS}")
        wanted = _VALUE_FORM_PARAMS[self.form]
        missing = [k for k in wanted if k not in self.params]
        if missing:
            raise SpecError(f"value form {self.form!r} missing params {missing}")

    def terms(self, n):
        """Evaluate the form at n (scalar or array of indices)."""
        p = self.params
        if self.form == "log_n_plus_c":
            return np.log(n) + p["c"]
        if self.form == "exp_n_plus_c":
            return np.exp(n) + p["c"]
        if self.form == "sq_ratio":
            return (1.0 + 1.0 / n) ** 2
        # moebius: (a n + b) / (c n + d)
        return (p["a"] * n + p["b"]) / (p["c"] * n + p["d"])

    def term_at(self, n: int) -> float:
        return float(self.terms(np.array([n], dtype=float))[0])

    def index_cap(self) -> int | None:
        return EXP_INDEX_CAP if self.form == "exp_n_plus_c" else None

    def invert(self, v: float) -> float | None:
        """Real-valued index estimate with terms(estimate) = v, or None."""
        p = self.params
        if self.form == "log_n_plus_c":
            t = v - p["c"]
            if t > 50.0:  # index beyond any practical range
                return None
            return math.exp(t)
        if self.form == "exp_n_plus_c":
            t = v - p["c"]
            if t <= 0.0:
                return None
            return math.log(t)
        if self.form == "sq_ratio":
            if v <= 1.0:
                return None
            return 1.0 / (math.sqrt(v) - 1.0)
        num = p["b"] - v * p["d"]
        den = v * p["c"] - p["a"]
        if den == 0.0:
            return None
        return num / den


@dataclass(frozen=True)
class WeightForm:
    """A registered weight form of the index n with range [0, 1]."""

    form: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.form not in WEIGHT_FORM_IDS:
            raise SpecError(f"unknown weight form {self.form!r}; known: {WEIGHT_FORM_IDS}")
        if self.form == "const":
            if "value" not in self.params:
                raise SpecError("weight form 'const' requires params.value")
        if self.form == "rational_poly":
            if not self.params.get("p") or not self.params.get("q"):
                raise SpecError("weight form 'rational_poly' requires coefficient lists p and q")

    def weights(self, n):
        """Evaluate the weight at n (scalar or array of indices)."""
        if self.form == "const":
            v = float(self.params["value"])
            if isinstance(n, np.ndarray):
                return np.full_like(n, v, dtype=float)
            return v
        if self.form == "rational_poly":
            return _horner(self.params["p"], n) / _horner(self.params["q"], n)
        # inv_exp_p1_sq: 1 / (e^n + 1)^2, computed stably for large n
        e = np.exp(-n)
        return np.exp(-2.0 * n) / (1.0 + e) ** 2

    def weight_at(self, n: int) -> float:
        return float(self.weights(np.array([n], dtype=float))[0])

    def validate_range(self, n_min: int, n_max: int, where: str = "weight form") -> None:
        """Scan the declared index range and reject any weight outside [0, 1]."""
        lo = n_min
        while lo <= n_max:
            hi = min(lo + _CHUNK - 1, n_max)
            ns = np.arange(lo, hi + 1, dtype=float)
            ws = self.weights(ns)
            bad = np.nonzero((ws < 0.0) | (ws > 1.0) | ~np.isfinite(ws))[0]
            if bad.size:
                k = int(ns[bad[0]])
                raise ValidationError(
                    f"{where}: weight {float(ws[bad[0]])!r} out of [0, 1] at n={k}"
                )
            lo = hi + 1


def constant_weight(value: float) -> WeightForm:
    return WeightForm("const", {"value": float(value)})


def parse_weight_form(obj, where: str = "mu") -> WeightForm:
    """Accept a bare number (constant weight) or {"form": ..., "params": ...}."""
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return constant_weight(float(obj))
    if isinstance(obj, dict):
        form = obj.get("form")
        if not isinstance(form, str):
            raise SpecError(f"{where}: weight form object needs a string 'form'")
        return WeightForm(form, dict(obj.get("params", {})))
    raise SpecError(f"{where}: expected a number or a weight-form object, got {type(obj).__name__}")


def weight_form_to_obj(w: WeightForm):
    if w.form == "const":
        return float(w.params["value"])
    return {"form": w.form, "params": dict(w.params)}


def parse_value_form(form: str, params, where: str = "family") -> ValueForm:
    if not isinstance(form, str):
        raise SpecError(f"{where}: 'form' must be a string")
    return ValueForm(form, {k: float(v) for k, v in dict(params or {}).items()})
