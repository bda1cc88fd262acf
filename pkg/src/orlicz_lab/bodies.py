"""Geometry of the coordinate Orlicz ball, its conjugate ball, and the polar dual.

For a tuple ``(f_1, ..., f_n)`` of Young gauges the three bodies are

* the unit ball of the induced Luxemburg norm,
  ``{x : sum_i f_i(|x_i|) <= 1}``,
* the analogous ball for the conjugate tuple, and
* the polar dual ``{y : sup_{x in ball} <x, y> <= 1}``.

All three are convex, centrally symmetric, and symmetric under coordinate
sign flips, which reduces every computation here to the closed positive
orthant.  The support function is evaluated two independent ways: a KKT
reduction to one monotone scalar equation, and the dual Orlicz-norm
infimum over a scale parameter; their agreement is a standing test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import roots
from .errors import NotSupported
from .young import ConjugateFunction, YoungFunction, from_json_dict, validate_young

ORLICZ = "kphi"
CONJUGATE = "kphistar"
POLAR = "kpolar"
BODY_KINDS = (ORLICZ, CONJUGATE, POLAR)


@dataclass(frozen=True)
class YoungTuple:
    """An ordered tuple of validated Young gauges defining an n-dimensional ball."""

    functions: tuple

    def __post_init__(self):
        fns = tuple(self.functions)
        object.__setattr__(self, "functions", fns)
        if not fns:
            raise ValueError("a Young tuple needs at least one component")
        for i, f in enumerate(fns):
            diag = validate_young(f)
            if not diag.passed:
                raise ValueError(f"component {i} ({f!r}) fails validation: {diag.violations}")

    @property
    def n(self) -> int:
        return len(self.functions)

    @cached_property
    def conjugates(self) -> tuple:
        return tuple(f.conjugate() for f in self.functions)

    def to_json_list(self) -> list:
        return [f.to_json_dict() for f in self.functions]

    @classmethod
    def from_json_list(cls, items) -> "YoungTuple":
        return cls(tuple(from_json_dict(d) for d in items))

    def _check_dim(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected a vector of length {self.n}, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError(f"non-finite vector {x!r}")
        return x


def luxemburg_norm(yt: YoungTuple, x, tol: float = roots.RTOL) -> float:
    """``inf {lam > 0 : sum_i f_i(|x_i| / lam) <= 1}``, and 0 at the origin.

    In the scale variable ``mu = 1/lam`` the modular is increasing, so the
    infimum is the unique root of ``sum_i f_i(|x_i| mu) = 1``.
    """
    ax = np.abs(yt._check_dim(x))
    if not ax.any():
        return 0.0
    fns = yt.functions

    def modular(mu: float) -> float:
        return float(sum(f._eval(a * mu) for f, a in zip(fns, ax)))

    def modular_slope(mu: float) -> float:
        return float(sum(a * f._deriv(a * mu) for f, a in zip(fns, ax)))

    mu = roots.solve_increasing(modular, 1.0, fprime=modular_slope, rtol=tol)
    return 1.0 / mu


def support(yt: YoungTuple, y, tol: float = roots.RTOL) -> float:
    """Support value ``sup {<x, y> : sum_i f_i(|x_i|) <= 1}`` of the Orlicz ball.

    Sign symmetry reduces to ``y >= 0``.  At the optimum there is a multiplier
    ``mu > 0`` with ``x_i = (f_i')^{-1}(y_i / mu)`` (clamped to 0 on the slope
    plateau), and ``mu`` solves the monotone equation ``modular(x(mu)) = 1``.
    """
    ay = np.abs(yt._check_dim(y))
    if not ay.any():
        return 0.0
    fns = yt.functions

    # nu = 1/mu makes the modular increasing in the unknown
    def modular(nu: float) -> float:
        return float(sum(f._eval(f._dinv(a * nu)) for f, a in zip(fns, ay)))

    def modular_slope(nu: float) -> float:
        total = 0.0
        for f, a in zip(fns, ay):
            v = a * nu
            x = f._dinv(v)
            if x <= 0.0:
                continue
            curv = float(f._deriv2(x))
            if curv <= 0.0 or not math.isfinite(curv):
                continue
            total += v * a / curv
        return total

    nu = roots.solve_increasing(modular, 1.0, fprime=modular_slope, rtol=tol)
    return float(sum(a * f._dinv(a * nu) for f, a in zip(fns, ay)))


def luxemburg_values(yt: YoungTuple, X: np.ndarray, bisect_iter: int = 90) -> np.ndarray:
    """Vectorized `luxemburg_norm` over rows of ``X`` (shape ``(m, n)``)."""
    ax = np.abs(np.asarray(X, dtype=float))
    m = ax.shape[0]
    out = np.zeros(m)
    active = ax.max(axis=1) > 0.0
    if not active.any():
        return out
    axa = ax[active]
    fns = yt.functions

    def modular(mu: np.ndarray) -> np.ndarray:
        tot = np.zeros_like(mu)
        for i, f in enumerate(fns):
            tot += f._eval(axa[:, i] * mu)
        return tot

    hi = np.ones(axa.shape[0])
    for _ in range(roots.MAX_ITER):
        low = modular(hi) < 1.0
        if not low.any():
            break
        hi[low] *= 2.0
    lo = np.zeros_like(hi)
    for _ in range(bisect_iter):
        mid = 0.5 * (lo + hi)
        below = modular(mid) < 1.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out[active] = 1.0 / (0.5 * (lo + hi))
    return out


def support_values(yt: YoungTuple, Y: np.ndarray, bisect_iter: int = 90) -> np.ndarray:
    """Vectorized `support` over rows of ``Y`` (shape ``(m, n)``), for bulk work."""
    ay = np.abs(np.asarray(Y, dtype=float))
    m = ay.shape[0]
    out = np.zeros(m)
    active = ay.max(axis=1) > 0.0
    if not active.any():
        return out
    aya = ay[active]
    fns = yt.functions

    def modular(nu: np.ndarray) -> np.ndarray:
        tot = np.zeros_like(nu)
        for i, f in enumerate(fns):
            tot += f._eval(f._dinv(aya[:, i] * nu))
        return tot

    hi = np.ones(aya.shape[0])
    for _ in range(roots.MAX_ITER):
        low = modular(hi) < 1.0
        if not low.any():
            break
        hi[low] *= 2.0
    lo = np.zeros_like(hi)
    for _ in range(bisect_iter):
        mid = 0.5 * (lo + hi)
        below = modular(mid) < 1.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    nu = 0.5 * (lo + hi)
    h = np.zeros_like(nu)
    for i, f in enumerate(fns):
        h += aya[:, i] * f._dinv(aya[:, i] * nu)
    out[active] = h
    return out


def amemiya_norm(yt: YoungTuple, y, tol: float = roots.RTOL) -> float:
    """Dual Orlicz norm ``inf_{k>0} (1 + sum_i f_i*(k |y_i|)) / k``.

    Equal to the support function of the Orlicz ball; kept as an independent
    route (golden section over ``log k``) for cross-checking `support`.
    """
    ay = np.abs(yt._check_dim(y))
    if not ay.any():
        return 0.0
    conjs = yt.conjugates

    def objective(u: float) -> float:
        k = math.exp(u)
        return (1.0 + float(sum(g.evaluate(k * a) for g, a in zip(conjs, ay)))) / k

    scale = float(ay.max())
    u0 = -math.log(scale) if scale > 0 else 0.0
    _, val = roots.golden_section_min(objective, u0 - 2.0, u0 + 2.0, rtol=tol)
    return val


@dataclass(frozen=True)
class BodyHandle:
    """One of the three evaluatable bodies over a fixed tuple of gauges."""

    kind: str
    tuple: YoungTuple

    def __post_init__(self):
        if self.kind not in BODY_KINDS:
            raise NotSupported(f"unknown body kind {self.kind!r}; use one of {BODY_KINDS}")

    @property
    def n(self) -> int:
        return self.tuple.n

    @cached_property
    def half_widths(self) -> np.ndarray:
        """Per-axis extents; exact for these coordinate-defined symmetric bodies."""
        if self.kind == ORLICZ:
            w = [f.inverse(1.0) for f in self.tuple.functions]
        elif self.kind == CONJUGATE:
            w = [g.inverse(1.0) for g in self.tuple.conjugates]
        else:
            w = [1.0 / f.inverse(1.0) for f in self.tuple.functions]
        return np.asarray(w, dtype=float)

    def gauge(self, x) -> float:
        """Membership functional with unit level set at the boundary.

        Modular sum for the two Orlicz balls; support of the primal ball for
        the polar (1-homogeneous, so also the polar's gauge norm).
        """
        x = self.tuple._check_dim(x)
        if self.kind == ORLICZ:
            return float(sum(f._eval(abs(v)) for f, v in zip(self.tuple.functions, x)))
        if self.kind == CONJUGATE:
            return float(sum(g.evaluate(abs(v)) for g, v in zip(self.tuple.conjugates, x)))
        return support(self.tuple, x)

    def gauge_values(self, X: np.ndarray) -> np.ndarray:
        """Vectorized `gauge` over rows of ``X``."""
        X = np.abs(np.asarray(X, dtype=float))
        if self.kind == ORLICZ:
            return sum(f._eval(X[:, i]) for i, f in enumerate(self.tuple.functions))
        if self.kind == CONJUGATE:
            return sum(g.evaluate(X[:, i]) for i, g in enumerate(self.tuple.conjugates))
        return support_values(self.tuple, X)

    def contains(self, x, tol: float = 1e-9) -> bool:
        return self.gauge(x) <= 1.0 + tol

    def boundary_point(self, direction) -> np.ndarray:
        """Scale ``direction`` onto the boundary (gauge value exactly 1)."""
        d = self.tuple._check_dim(direction)
        if not np.abs(d).any():
            raise ValueError("direction must be nonzero")
        if self.kind == POLAR:
            return d / support(self.tuple, d)
        ad = np.abs(d)
        if self.kind == ORLICZ:
            evals = [(f._eval, f._deriv) for f in self.tuple.functions]
        else:
            evals = [(g.evaluate, g.derivative) for g in self.tuple.conjugates]

        def gauge_at(t: float) -> float:
            return float(sum(ev(t * a) for (ev, _), a in zip(evals, ad)))

        def gauge_slope(t: float) -> float:
            return float(sum(a * dv(t * a) for (_, dv), a in zip(evals, ad)))

        t = roots.solve_increasing(gauge_at, 1.0, fprime=gauge_slope)
        return t * d


def orlicz_ball(yt: YoungTuple) -> BodyHandle:
    return BodyHandle(ORLICZ, yt)


def conjugate_ball(yt: YoungTuple) -> BodyHandle:
    return BodyHandle(CONJUGATE, yt)


def polar_dual(yt: YoungTuple) -> BodyHandle:
    return BodyHandle(POLAR, yt)


# ---------------------------------------------------------------------------
# Monte Carlo volume
# ---------------------------------------------------------------------------

_CHUNK = 1 << 16


@dataclass(frozen=True)
class VolumeEstimate:
    estimate: float
    stderr: float
    n_samples: int
    seed: int
    hits: int

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }


def volume_mc(body: BodyHandle, n_samples: int, seed: int) -> VolumeEstimate:
    """Hit-or-miss volume against the exact bounding box, with binomial stderr.

    Samples are drawn in fixed-size chunks, each chunk from its own stream
    keyed by ``(seed, chunk index)``, and hits are accumulated as integers;
    the estimate is therefore bit-identical however the chunks are scheduled.
    """
    if n_samples < 1000:
        raise ValueError(f"n_samples must be at least 1000, got {n_samples}")
    w = body.half_widths
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise NotSupported(f"degenerate bounding box {w!r}")
    box_volume = float(np.prod(2.0 * w))
    hits = 0
    done = 0
    chunk_index = 0
    while done < n_samples:
        m = min(_CHUNK, n_samples - done)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,)))
        pts = rng.uniform(-1.0, 1.0, size=(m, body.n)) * w
        hits += int(np.count_nonzero(body.gauge_values(pts) <= 1.0))
        done += m
        chunk_index += 1
    p = hits / n_samples
    stderr = box_volume * math.sqrt(max(p * (1.0 - p), 0.0) / n_samples)
    return VolumeEstimate(
        estimate=p * box_volume, stderr=stderr, n_samples=n_samples, seed=seed, hits=hits
    )


def boundary_section(body: BodyHandle, resolution: int) -> np.ndarray:
    """Closed planar boundary curve as rows ``(theta, x1, x2)``; 2-d bodies only."""
    if body.n != 2:
        raise NotSupported("boundary sections are only defined for 2-d bodies")
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    thetas = np.arange(resolution) * (2.0 * math.pi / resolution)
    rows = np.empty((resolution, 3))
    for k, th in enumerate(thetas):
        pt = body.boundary_point(np.array([math.cos(th), math.sin(th)]))
        rows[k] = (th, pt[0], pt[1])
    return rows
