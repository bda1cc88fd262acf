"""Robust scalar solvers: bracketed root finding, 1-d minimization, Lambert W.

All target functions in this package are smooth and monotone (or unimodal),
so every solver here follows the same recipe: find a guaranteed bracket by
geometric expansion, contract it by bisection, and polish with Newton when a
derivative is supplied.  Iteration caps convert silent stalls into
``NoConvergence``.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .errors import NoConvergence

# Defaults shared by every solver in the package.
RTOL = 1e-12
ATOL = 1e-14
MAX_ITER = 200

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def bracket_root(
    f: Callable[[float], float],
    target: float,
    hi0: float = 1.0,
    max_iter: int = MAX_ITER,
) -> tuple[float, float]:
    """Bracket the solution of ``f(t) = target`` for nondecreasing f on [0, inf).

    Doubles the upper end from ``hi0`` until ``f(hi) >= target``.
    """
    lo = 0.0
    hi = hi0
    for _ in range(max_iter):
        if f(hi) >= target:
            return lo, hi
        lo = hi
        hi *= 2.0
        if not math.isfinite(hi):
            break
    raise NoConvergence(f"no bracket for target {target}: f({hi}) still below it")


def solve_increasing(
    f: Callable[[float], float],
    target: float,
    fprime: Optional[Callable[[float], float]] = None,
    lo: float = 0.0,
    hi: Optional[float] = None,
    rtol: float = RTOL,
    atol: float = ATOL,
    max_iter: int = MAX_ITER,
) -> float:
    """Solve ``f(t) = target`` for a nondecreasing ``f`` on ``t >= lo``.

    Brackets by doubling when ``hi`` is not supplied, then bisects; when
    ``fprime`` is given, Newton steps are taken whenever they stay inside the
    current bracket (safeguarded Newton), which converges quadratically on
    the smooth gauges used here.

    Returns t with ``|f(t) - target| <= rtol * max(1, |target|)`` or a bracket
    narrower than ``atol``.
    """
    if hi is None:
        blo, bhi = bracket_root(f, target, hi0=max(1.0, 2.0 * lo or 1.0), max_iter=max_iter)
        lo = max(lo, blo)
        hi = bhi
    flo = f(lo) - target
    if flo > 0.0:
        # target below the range start; monotonicity pins the answer at lo
        return lo
    ftol = rtol * max(1.0, abs(target))
    t = 0.5 * (lo + hi)
    for _ in range(max_iter):
        ft = f(t) - target
        if abs(ft) <= ftol:
            return t
        if ft > 0.0:
            hi = t
        else:
            lo = t
        if hi - lo <= atol + rtol * abs(hi):
            return 0.5 * (lo + hi)
        t_next = None
        if fprime is not None:
            d = fprime(t)
            if d > 0.0 and math.isfinite(d):
                cand = t - ft / d
                if lo < cand < hi:
                    t_next = cand
        t = t_next if t_next is not None else 0.5 * (lo + hi)
    raise NoConvergence(
        f"solve_increasing stalled: bracket [{lo}, {hi}], target {target}"
    )


def golden_section_min(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rtol: float = RTOL,
    max_iter: int = MAX_ITER,
    expand: bool = True,
) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(argmin, min)``.

    With ``expand=True`` the interval is first widened geometrically until the
    minimum is interior (an endpoint no longer beats its inner neighbor).
    """
    if not lo < hi:
        raise ValueError("empty interval")
    if expand:
        span = hi - lo
        for _ in range(max_iter):
            grew = False
            if f(lo) < f(lo + 0.25 * span):
                lo -= span
                span = hi - lo
                grew = True
            if f(hi) < f(hi - 0.25 * span):
                hi += span
                span = hi - lo
                grew = True
            if not grew:
                break
        else:
            raise NoConvergence("golden_section_min: bracket expansion did not settle")
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
        if b - a <= rtol * (1.0 + abs(a) + abs(b)):
            break
    x = 0.5 * (a + b)
    return x, f(x)


def lambert_w0_values(a, residual_tol: float = 1e-12, max_iter: int = 80):
    """Vectorized `lambert_w0` over an array of arguments ``>= -1/e``."""
    a = np.asarray(a, dtype=float)
    if np.any(a < -math.exp(-1.0) - 1e-15):
        raise ValueError("lambert_w0_values requires every argument >= -1/e")
    w = np.where(
        a < -0.25,
        -1.0 + np.sqrt(2.0 * np.maximum(1.0 + math.e * a, 0.0)),
        a / (1.0 + np.abs(a)),
    )
    big = a >= 1.0
    if np.any(big):
        la = np.log(np.maximum(a, 1.0))
        w = np.where(big, la - np.log(np.maximum(la, 1.0)) * (la > 1.0), w)
    tol = residual_tol * np.maximum(1.0, np.abs(a))
    for _ in range(max_iter):
        ew = np.exp(w)
        r = w * ew - a
        if np.all(np.abs(r) <= tol):
            break
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * r / (2.0 * wp1)
        w = w - r / denom
    else:
        raise NoConvergence("lambert_w0_values did not converge")
    return w


def lambert_w0(a: float, residual_tol: float = 1e-12, max_iter: int = MAX_ITER) -> float:
    """Principal branch W0 of the Lambert W function, for ``a >= -1/e``.

    Halley iteration on ``w e^w = a`` from a log-based start; the result is
    accepted only once the residual ``|w e^w - a|`` falls below
    ``residual_tol`` (absolute for small ``a``, relative otherwise).
    """
    if a < -math.exp(-1.0) - 1e-15:
        raise ValueError(f"lambert_w0 requires a >= -1/e, got {a}")
    if a == 0.0:
        return 0.0
    # start: series near the branch point, log asymptotics elsewhere
    if a < -0.25:
        w = -1.0 + math.sqrt(2.0 * (1.0 + math.e * a))
    elif a < 1.0:
        w = a / (1.0 + a)
    else:
        w = math.log(a)
        w -= math.log(w) if w > 1.0 else 0.0
    tol = residual_tol * max(1.0, abs(a))
    for _ in range(max_iter):
        ew = math.exp(w)
        r = w * ew - a
        if abs(r) <= tol:
            return w
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * r / (2.0 * wp1)
        w -= r / denom
    raise NoConvergence(f"lambert_w0 did not reach residual {residual_tol} for a={a}")
