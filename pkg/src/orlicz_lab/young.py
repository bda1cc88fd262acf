"""Young-function calculus.

A Young function is a smooth convex increasing gauge ``f: [0, inf) -> [0, inf)``
with ``f(0) = 0`` and ``f(t) -> inf``.  This module provides the parametric
families used throughout the package, their derivatives and (generalized)
inverses, and Legendre conjugation ``f*(y) = sup_x (x y - f(x))`` in closed
form where available and by guarded monotone root finding otherwise.

Conventions:

* All gauges live on ``t >= 0``; callers extend to the real line by evenness
  (pass ``abs(t)``).  Negative arguments raise ``NegativeArgument``.
* Generalized inverses use the lower convention ``inf {t : g(t) >= s}``, which
  resolves the zero plateau that conjugates of gauges with ``f'(0) > 0`` carry.
* Evaluation methods accept numpy arrays as well as scalars; the root-finding
  paths (`inverse` on polynomials, numeric conjugation) are scalar with
  dedicated vectorized variants where bulk evaluation matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import roots
from .errors import NegativeArgument, UnboundedConjugate

_INV_E = math.exp(-1.0)


def _check_nonneg(t, what: str = "argument") -> None:
    if np.any(np.asarray(t) < 0.0):
        raise NegativeArgument(f"{what} must be nonnegative, got {t!r}")


class YoungFunction:
    """Base class for the parametric gauge families.

    Subclasses implement the unchecked kernels ``_eval``, ``_deriv``,
    ``_deriv2`` and ``_dinv`` (generalized inverse of the derivative); the
    public methods validate the domain and add the generic numeric fallbacks.
    """

    # ----- kernels (no domain checks; scalar or ndarray input) -----

    def _eval(self, t):
        raise NotImplementedError

    def _deriv(self, t):
        raise NotImplementedError

    def _deriv2(self, t):
        raise NotImplementedError

    def _dinv(self, v):
        """Generalized inverse of the derivative: ``inf {t : f'(t) >= v}``."""
        raise NotImplementedError

    # ----- public surface -----

    @property
    def derivative_at_zero(self) -> float:
        return float(self._deriv(0.0))

    @property
    def has_superlinear_growth(self) -> bool:
        """Whether ``f'`` is unbounded, so the conjugate is finite everywhere."""
        return True

    def evaluate(self, t):
        _check_nonneg(t)
        return self._eval(t)

    __call__ = evaluate

    def derivative(self, t):
        _check_nonneg(t)
        return self._deriv(t)

    def derivative_inverse(self, v):
        """Solve ``f'(t) = v`` for ``t >= 0``, returning 0 on the slope plateau."""
        _check_nonneg(v)
        return self._dinv(v)

    def inverse(self, s: float, tol: float = roots.RTOL) -> float:
        """Solve ``f(t) = s`` by doubling bracket, bisection, and Newton polish."""
        _check_nonneg(s, "level")
        if s == 0.0:
            return 0.0
        return roots.solve_increasing(
            lambda t: float(self._eval(t)),
            float(s),
            fprime=lambda t: float(self._deriv(t)),
            rtol=tol,
        )

    def inverse_values(self, s: np.ndarray) -> np.ndarray:
        """Vectorized `inverse`; fixed-count bisection unless a closed form exists."""
        s = np.asarray(s, dtype=float)
        _check_nonneg(s, "level")
        out = np.zeros_like(s)
        pos = s > 0.0
        if not np.any(pos):
            return out
        sp = s[pos]
        hi_val = float(self.inverse(float(sp.max()))) * (1.0 + 1e-9) + 1e-12
        lo = np.zeros_like(sp)
        hi = np.full_like(sp, hi_val)
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            below = self._eval(mid) < sp
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out[pos] = 0.5 * (lo + hi)
        return out

    def conjugate(self) -> "ConjugateFunction":
        """Legendre conjugate as a reusable evaluator (built once per instance)."""
        return self._conjugate

    @cached_property
    def _conjugate(self) -> "ConjugateFunction":
        return self._make_conjugate()

    def _make_conjugate(self) -> "ConjugateFunction":
        if not self.has_superlinear_growth:
            raise UnboundedConjugate(
                f"{self!r} has bounded slope; its conjugate is +inf beyond the slope "
                "and carries no usable geometry"
            )
        return ConjugateFunction(source=self, closed_form=None, threshold=self.derivative_at_zero)

    def to_json_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Power(YoungFunction):
    """``f(t) = t**p / p`` for ``p > 1``; conjugate is the dual power ``t**q / q``."""

    p: float

    def __post_init__(self):
        if not self.p > 1.0:
            raise ValueError(f"power family needs p > 1, got {self.p}")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    def _eval(self, t):
        return t ** self.p / self.p

    def _deriv(self, t):
        return t ** (self.p - 1.0)

    def _deriv2(self, t):
        e = self.p - 2.0
        if np.ndim(t) == 0:
            if t > 0.0:
                return (self.p - 1.0) * float(t) ** e
            return 0.0 if e > 0.0 else (self.p - 1.0 if e == 0.0 else math.inf)
        with np.errstate(divide="ignore"):
            out = (self.p - 1.0) * np.where(t > 0.0, t, 1.0) ** e
        zero_val = 0.0 if e > 0.0 else (self.p - 1.0 if e == 0.0 else np.inf)
        return np.where(t > 0.0, out, zero_val)

    def _dinv(self, v):
        return v ** (1.0 / (self.p - 1.0))

    def inverse(self, s: float, tol: float = roots.RTOL) -> float:
        _check_nonneg(s, "level")
        return (self.p * s) ** (1.0 / self.p)

    def inverse_values(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        _check_nonneg(s, "level")
        return (self.p * s) ** (1.0 / self.p)

    def _make_conjugate(self) -> "ConjugateFunction":
        return ConjugateFunction(source=self, closed_form="power", threshold=0.0, q=self.q)

    def to_json_dict(self) -> dict:
        return {"family": "power", "p": self.p}


@dataclass(frozen=True)
class ScaledExp(YoungFunction):
    """``f(t) = (e**t - 1) / e``, the exponential gauge normalized to slope 1 at t=1."""

    def _eval(self, t):
        return np.expm1(t) / math.e

    def _deriv(self, t):
        return np.exp(t - 1.0)

    _deriv2 = _deriv

    def _dinv(self, v):
        if np.ndim(v) == 0:
            return 1.0 + math.log(v) if v > _INV_E else 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(v > _INV_E, 1.0 + np.log(np.maximum(v, 1e-300)), 0.0)

    def inverse(self, s: float, tol: float = roots.RTOL) -> float:
        _check_nonneg(s, "level")
        return math.log1p(math.e * s)

    def inverse_values(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        _check_nonneg(s, "level")
        return np.log1p(math.e * s)

    def _make_conjugate(self) -> "ConjugateFunction":
        return ConjugateFunction(source=self, closed_form="scaled_exp", threshold=_INV_E)

    def to_json_dict(self) -> dict:
        return {"family": "scaled_exp"}


@dataclass(frozen=True)
class Exp(YoungFunction):
    """``f(t) = e**t - 1``; its conjugate is reached through the numeric path."""

    def _eval(self, t):
        return np.expm1(t)

    def _deriv(self, t):
        return np.exp(t)

    _deriv2 = _deriv

    def _dinv(self, v):
        if np.ndim(v) == 0:
            return math.log(v) if v > 1.0 else 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(v > 1.0, np.log(np.maximum(v, 1e-300)), 0.0)

    def inverse(self, s: float, tol: float = roots.RTOL) -> float:
        _check_nonneg(s, "level")
        return math.log1p(s)

    def inverse_values(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        _check_nonneg(s, "level")
        return np.log1p(s)

    def to_json_dict(self) -> dict:
        return {"family": "exp"}


@dataclass(frozen=True)
class Polynomial(YoungFunction):
    """``f(t) = a_1 t + a_2 t**2 + ... + a_k t**k`` with coefficients ``(a_1, ..., a_k)``.

    Construction only requires a nonzero coefficient vector; the Young axioms
    (``a_1 >= 0``, convexity on a grid) are checked by `validate_young`, which
    keeps deliberately broken instances constructible for diagnostics.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        if not self.coeffs or all(a == 0.0 for a in self.coeffs):
            raise ValueError("polynomial gauge needs at least one nonzero coefficient")

    @property
    def effective_degree(self) -> int:
        deg = 0
        for i, a in enumerate(self.coeffs, start=1):
            if a != 0.0:
                deg = i
        return deg

    @property
    def has_superlinear_growth(self) -> bool:
        return self.effective_degree >= 2

    def _eval(self, t):
        acc = 0.0
        for a in reversed(self.coeffs):
            acc = acc * t + a
        return acc * t

    def _deriv(self, t):
        acc = 0.0
        for i in range(len(self.coeffs), 0, -1):
            acc = acc * t + i * self.coeffs[i - 1]
        return acc

    def _deriv2(self, t):
        acc = 0.0
        for i in range(len(self.coeffs), 1, -1):
            acc = acc * t + i * (i - 1) * self.coeffs[i - 1]
        return acc

    def _dinv(self, v):
        if np.ndim(v) == 0:
            if v <= self.coeffs[0]:
                return 0.0
            return roots.solve_increasing(
                lambda t: float(self._deriv(t)),
                float(v),
                fprime=lambda t: float(self._deriv2(t)),
            )
        return _dinv_array_by_bisection(self, np.asarray(v, dtype=float))

    def to_json_dict(self) -> dict:
        return {"family": "polynomial", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class Scaled(YoungFunction):
    """``f(t) = factor * base(t)`` for ``factor > 0``; exercises the numeric conjugate."""

    base: YoungFunction
    factor: float

    def __post_init__(self):
        if not self.factor > 0.0:
            raise ValueError(f"scale factor must be positive, got {self.factor}")

    @property
    def has_superlinear_growth(self) -> bool:
        return self.base.has_superlinear_growth

    def _eval(self, t):
        return self.factor * self.base._eval(t)

    def _deriv(self, t):
        return self.factor * self.base._deriv(t)

    def _deriv2(self, t):
        return self.factor * self.base._deriv2(t)

    def _dinv(self, v):
        return self.base._dinv(v / self.factor)

    def inverse(self, s: float, tol: float = roots.RTOL) -> float:
        _check_nonneg(s, "level")
        return self.base.inverse(s / self.factor, tol)

    def inverse_values(self, s: np.ndarray) -> np.ndarray:
        return self.base.inverse_values(np.asarray(s, dtype=float) / self.factor)

    def to_json_dict(self) -> dict:
        return {"family": "scaled", "factor": self.factor, "base": self.base.to_json_dict()}


def _dinv_array_by_bisection(f: YoungFunction, v: np.ndarray) -> np.ndarray:
    """Vectorized generalized inverse of ``f'`` by fixed-count bisection."""
    out = np.zeros_like(v)
    active = v > f.derivative_at_zero
    if not np.any(active):
        return out
    va = v[active]
    hi = float(f._dinv(float(va.max()))) * (1.0 + 1e-9) + 1.0
    lo_arr = np.zeros_like(va)
    hi_arr = np.full_like(va, hi)
    for _ in range(100):
        mid = 0.5 * (lo_arr + hi_arr)
        below = f._deriv(mid) < va
        lo_arr = np.where(below, mid, lo_arr)
        hi_arr = np.where(below, hi_arr, mid)
    out[active] = 0.5 * (lo_arr + hi_arr)
    return out


# ---------------------------------------------------------------------------
# Legendre conjugation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugateFunction:
    """Evaluator for ``f*(y) = sup_{x >= 0} (x y - f(x))``.

    ``f*`` vanishes on the plateau ``[0, threshold]`` with
    ``threshold = f'(0)``, is convex and nondecreasing beyond it, and its
    slope at ``y`` is the maximizer ``x*(y) = (f')^{-1}(y)``.

    ``closed_form`` tags the two families with exact formulas ("power" with
    dual exponent ``q``, and "scaled_exp" with ``y ln y + 1/e``); everything
    else goes through monotone root finding on ``f'(x) = y``.
    """

    source: YoungFunction
    closed_form: Optional[str]
    threshold: float
    q: Optional[float] = None

    # ----- evaluation -----

    def evaluate(self, y):
        _check_nonneg(y)
        if self.closed_form == "power":
            return y ** self.q / self.q
        if self.closed_form == "scaled_exp":
            if np.ndim(y) == 0:
                return float(y) * math.log(y) + _INV_E if y > _INV_E else 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(y > _INV_E, y * np.log(np.maximum(y, 1e-300)) + _INV_E, 0.0)
        if np.ndim(y) == 0:
            if y <= self.threshold:
                return 0.0
            x = self.source._dinv(float(y))
            return x * float(y) - float(self.source._eval(x))
        return self._values_numeric(np.asarray(y, dtype=float))

    __call__ = evaluate

    def _values_numeric(self, y: np.ndarray) -> np.ndarray:
        x = self.source._dinv(y)
        return np.maximum(x * y - self.source._eval(x), 0.0)

    def derivative(self, y):
        """Slope of the conjugate, i.e. the maximizer ``x*(y)``."""
        _check_nonneg(y)
        if self.closed_form == "power":
            return y ** (self.q - 1.0)
        return self.source._dinv(y)

    def inverse(self, s: float, tol: float = roots.RTOL) -> float:
        """Generalized inverse ``inf {t : f*(t) >= s}`` (plateau-aware)."""
        _check_nonneg(s, "level")
        if s == 0.0:
            return 0.0
        if self.closed_form == "power":
            return (self.q * s) ** (1.0 / self.q)
        if self.closed_form == "scaled_exp":
            # t ln t + 1/e = s  <=>  t = exp(W0(s - 1/e))
            return math.exp(roots.lambert_w0(s - _INV_E))
        lo = self.threshold
        hi = max(1.0, 2.0 * lo)
        for _ in range(roots.MAX_ITER):
            if float(self.evaluate(hi)) >= s:
                break
            hi *= 2.0
        return roots.solve_increasing(
            lambda t: float(self.evaluate(t)), float(s), lo=lo, hi=hi, rtol=tol
        )

    def inverse_values(self, s: np.ndarray) -> np.ndarray:
        """Vectorized `inverse`."""
        s = np.asarray(s, dtype=float)
        _check_nonneg(s, "level")
        if self.closed_form == "power":
            return (self.q * s) ** (1.0 / self.q)
        if self.closed_form == "scaled_exp":
            return np.exp(roots.lambert_w0_values(s - _INV_E))
        out = np.full_like(s, self.threshold)
        pos = s > 0.0
        if not np.any(pos):
            return np.zeros_like(s)
        out[~pos] = 0.0
        sp = s[pos]
        hi_val = float(self.inverse(float(sp.max()))) * (1.0 + 1e-9) + 1e-12
        lo = np.full_like(sp, self.threshold)
        hi = np.full_like(sp, hi_val)
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            below = self.evaluate(mid) < sp
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out[pos] = 0.5 * (lo + hi)
        return out


def conjugate(f: YoungFunction) -> ConjugateFunction:
    """Legendre conjugate of ``f`` with the family-appropriate evaluator."""
    return f.conjugate()


def conjugate_value_numeric(f: YoungFunction, y: float) -> float:
    """Generic ``sup_x (x y - f(x))`` by solving ``f'(x) = y``, ignoring closed forms.

    Independent route kept for cross-checking the tagged evaluators.
    """
    _check_nonneg(y)
    if y <= f.derivative_at_zero:
        return 0.0
    x = roots.solve_increasing(
        lambda t: float(f._deriv(t)), float(y), fprime=lambda t: float(f._deriv2(t))
    )
    return x * y - float(f._eval(x))


def biconjugate_value(g: ConjugateFunction, x: float) -> float:
    """``sup_y (x y - g(y))`` computed from ``g`` alone (no access to its source)."""
    _check_nonneg(x)
    if x == 0.0:
        return 0.0
    hi = 1.0
    for _ in range(roots.MAX_ITER):
        if float(g.derivative(hi)) >= x:
            break
        hi *= 2.0
    y = roots.solve_increasing(lambda t: float(g.derivative(t)), float(x), hi=hi)
    return x * y - float(g.evaluate(y))


def conjugate_inverse(g: ConjugateFunction, s: float, tol: float = roots.RTOL) -> float:
    """Functional form of `ConjugateFunction.inverse`."""
    return g.inverse(s, tol)


def young_gap(f: YoungFunction, x: float, y: float) -> float:
    """``f(x) + f*(y) - x y``; nonnegative, zero exactly when ``y = f'(x)``."""
    _check_nonneg(x)
    _check_nonneg(y)
    return float(f._eval(x)) + float(f.conjugate().evaluate(y)) - float(x) * float(y)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class YoungDiagnostics:
    """Grid report of axiom violations; an empty list means the gauge passes."""

    violations: list
    grid_max: float
    grid_n: int

    @property
    def passed(self) -> bool:
        return not self.violations


def validate_young(f: YoungFunction, grid_max: float = 10.0, grid_n: int = 200) -> YoungDiagnostics:
    """Check the gauge axioms numerically on ``grid_n`` points of ``[0, grid_max]``.

    Reported violations: nonzero value at 0, negative or decreasing values,
    negative or decreasing slope (convexity), and missing growth toward the
    grid end.  Diagnostics only; never raises on a failing gauge.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    viol: list = []
    t = np.linspace(0.0, grid_max, grid_n)
    vals = np.asarray(f._eval(t), dtype=float)
    slopes = np.asarray(f._deriv(t), dtype=float)
    scale = max(1.0, float(np.max(np.abs(vals[np.isfinite(vals)]), initial=0.0)))

    if abs(float(f._eval(0.0))) > 1e-12:
        viol.append(f"value at 0 is {float(f._eval(0.0))!r}, expected 0")
    if not np.all(np.isfinite(vals)):
        viol.append("non-finite values on the grid")
    if np.any(vals < -1e-12 * scale):
        viol.append("negative values on the grid")
    if np.any(np.diff(vals) < -1e-10 * scale):
        viol.append("values decrease on the grid")
    if np.any(slopes < -1e-12 * max(1.0, float(np.max(np.abs(slopes), initial=0.0)))):
        i = int(np.argmin(slopes))
        viol.append(f"negative slope {slopes[i]!r} at t={t[i]!r} (slope at 0 must be >= 0)")
    if np.any(np.diff(slopes) < -1e-10 * max(1.0, float(np.max(np.abs(slopes), initial=0.0)))):
        viol.append("slope decreases on the grid (convexity fails)")
    if float(f._eval(grid_max)) <= float(f._eval(grid_max / 2.0)) + 1e-15:
        viol.append("no growth across the grid (gauge must be unbounded)")
    return YoungDiagnostics(violations=viol, grid_max=grid_max, grid_n=grid_n)


# ---------------------------------------------------------------------------
# JSON codec and registry
# ---------------------------------------------------------------------------


def from_json_dict(d: dict) -> YoungFunction:
    """Decode ``{"family": ...}`` into a gauge instance."""
    if not isinstance(d, dict) or "family" not in d:
        raise ValueError(f"gauge spec must be an object with a 'family' key, got {d!r}")
    fam = d["family"]
    if fam == "power":
        return Power(p=float(d["p"]))
    if fam == "scaled_exp":
        return ScaledExp()
    if fam == "exp":
        return Exp()
    if fam == "polynomial":
        return Polynomial(coeffs=tuple(float(a) for a in d["coeffs"]))
    if fam == "scaled":
        return Scaled(base=from_json_dict(d["base"]), factor=float(d["factor"]))
    raise ValueError(f"unknown gauge family {fam!r}")


def standard_registry() -> dict:
    """Named gauges covering every family and both conjugation paths."""
    return {
        "power-1.5": Power(1.5),
        "power-2": Power(2.0),
        "power-3": Power(3.0),
        "power-5": Power(5.0),
        "scaled-exp": ScaledExp(),
        "exp": Exp(),
        "poly-cubic": Polynomial((0.5, 0.25, 0.125)),
        "poly-quartic": Polynomial((0.0, 0.6, 0.0, 0.1)),
        "half-scaled-exp": Scaled(ScaledExp(), 0.5),
    }
