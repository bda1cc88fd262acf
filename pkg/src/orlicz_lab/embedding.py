"""Explicit area-preserving disc-to-rectangle maps and their product embedding.

Factor ``i`` of the construction sends the planar disc of capacity
``c_i = 4 rho_i`` onto a nested family of open rectangles.  A circle of
action ``A = pi |z|^2`` lands on the boundary of a centered rectangle
``R(A)`` with half-widths

    alpha(A) = sqrt(A a(A) / (4 b(A))),   beta(A) = A / (4 alpha(A)),

a uniform shrink of the constraint box with half-widths
``a(A) = f^{-1}(A/c_i + eps/n)`` and ``b(A) = (f*)^{-1}(A/c_i + eps/n)``.
By construction ``4 alpha beta = A`` exactly, and ``alpha <= a``,
``beta <= b`` hold precisely when the feasibility slack

    4 f^{-1}(s + eps/n) (f*)^{-1}(s + eps/n) - c_i s,   s in [0, 1],

stays positive, which `feasibility_certificate` scans for.  Boundary points
are laid out counterclockwise from ``(alpha(A), 0)`` with uniform density
per side, sides weighted by the flux masses ``alpha'(A) beta(A)`` (vertical
sides) and ``alpha(A) beta'(A)`` (horizontal sides); those masses sum to
``(4 alpha beta)' = 1``, and within each side the Jacobian of the map is
identically 1, so the map preserves area away from the four corner seams.

The product of ``n`` such maps takes the ``2n``-ball of capacity
``c = min_i c_i`` into the slightly inflated product bodies; the two
``verify_containment_*`` drivers certify that numerically on samples.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import roots
from .bodies import YoungTuple, luxemburg_values, support_values
from .capacity import index_products
from .errors import (
    ContainmentViolation,
    InfeasibleConstraints,
    NonMonotoneFamily,
    OutOfDomain,
    SeamProximity,
)
from .young import ConjugateFunction, YoungFunction

TWO_PI = 2.0 * math.pi
_CHUNK = 1 << 16


@dataclass(frozen=True)
class EmbeddingSpec:
    """Tuple, slack parameter, and the per-factor capacities they induce."""

    tuple: YoungTuple
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        for i, c in enumerate(self.capacities):
            if not 4.0 < c <= 8.0 + 1e-12:
                raise ValueError(f"capacity c_{i} = {c!r} outside (4, 8]")

    @cached_property
    def capacities(self) -> tuple:
        return tuple(4.0 * r for r in index_products(self.tuple))

    @property
    def n(self) -> int:
        return self.tuple.n

    @property
    def capacity(self) -> float:
        return min(self.capacities)


@dataclass(frozen=True)
class FeasibilityCertificate:
    min_slack: float
    argmin_s: float
    grid_n: int

    @property
    def feasible(self) -> bool:
        return self.min_slack > 0.0

    def to_json_dict(self) -> dict:
        return asdict(self) | {"feasible": self.feasible}


def feasibility_certificate(
    f: YoungFunction,
    c_i: float,
    epsilon: float,
    n: int,
    grid_n: int = 2000,
) -> FeasibilityCertificate:
    """Scan ``min_s 4 f^{-1}(s + eps/n)(f*)^{-1}(s + eps/n) - c_i s`` over [0, 1].

    A dense grid locates the minimum and golden-section refines around it.
    Positive slack certifies that the realized rectangles fit strictly inside
    their constraint boxes at every action level.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if grid_n < 1000:
        raise ValueError("grid_n must be at least 1000 for a trustworthy scan")
    g = f.conjugate()
    shift = epsilon / n

    def slack(s: float) -> float:
        u = s + shift
        return 4.0 * float(f.inverse(u)) * float(g.inverse(u)) - c_i * s

    svals = np.linspace(0.0, 1.0, grid_n + 1)
    u = svals + shift
    vals = 4.0 * np.asarray(f.inverse_values(u)) * np.asarray(g.inverse_values(u)) - c_i * svals
    k = int(np.argmin(vals))
    best_s, best = float(svals[k]), float(vals[k])
    step = 1.0 / grid_n
    lo = max(0.0, best_s - 2.0 * step)
    hi = min(1.0, best_s + 2.0 * step)
    s_ref, v_ref = roots.golden_section_min(slack, lo, hi, expand=False)
    if v_ref < best:
        best_s, best = s_ref, v_ref
    return FeasibilityCertificate(min_slack=best, argmin_s=best_s, grid_n=grid_n)


@dataclass(frozen=True)
class NestedRectFamily:
    """Constraint and realized half-widths of the rectangle family of one factor."""

    f: YoungFunction
    conj: ConjugateFunction
    c_i: float
    epsilon: float
    n_factors: int

    @property
    def shift(self) -> float:
        return self.epsilon / self.n_factors

    def level(self, action):
        return action / self.c_i + self.shift

    def state(self, action: np.ndarray) -> dict:
        """All per-action quantities on an array of actions in ``[0, c_i]``.

        Keys: constraint half-widths ``a, b``, their action-derivatives
        ``ap, bp``, realized half-widths ``alpha, beta``, and the side flux
        masses ``w_side = alpha' beta`` and ``w_top = alpha beta'``.
        """
        action = np.asarray(action, dtype=float)
        lv = self.level(action)
        a = np.asarray(self.f.inverse_values(lv))
        b = np.asarray(self.conj.inverse_values(lv))
        ap = 1.0 / (self.c_i * np.asarray(self.f._deriv(a), dtype=float))
        bp = 1.0 / (self.c_i * np.asarray(self.conj.derivative(b), dtype=float))
        alpha = np.sqrt(action * a / (4.0 * b))
        beta = np.where(alpha > 0.0, action / np.where(alpha > 0.0, 4.0 * alpha, 1.0), 0.0)
        skew = action * (ap / a - bp / b) / 8.0
        w_side = 0.125 + skew
        w_top = 0.125 - skew
        if np.any(w_side <= 0.0) or np.any(w_top <= 0.0):
            raise NonMonotoneFamily(
                "a side flux mass is nonpositive: the rectangle family is not nested"
            )
        return {
            "a": a, "b": b, "ap": ap, "bp": bp,
            "alpha": alpha, "beta": beta, "w_side": w_side, "w_top": w_top,
        }


@dataclass(frozen=True)
class SigmaMap:
    """One certified area-preserving factor map, disc of capacity c_i onto rectangles."""

    family: NestedRectFamily
    certificate: FeasibilityCertificate

    @property
    def c_i(self) -> float:
        return self.family.c_i

    def corner_breaks(self, action: float) -> np.ndarray:
        """Cumulative boundary masses of the four corners, in (0, 1)."""
        st = self.family.state(np.asarray([action]))
        ws, wt = float(st["w_side"][0]), float(st["w_top"][0])
        return np.cumsum([ws, 2.0 * wt, 2.0 * ws, 2.0 * wt])

    def evaluate_many(self, Z: np.ndarray) -> np.ndarray:
        """Map rows ``(u, v)`` of ``Z`` to image points ``(x, y)``."""
        Z = np.asarray(Z, dtype=float)
        u, v = Z[:, 0], Z[:, 1]
        action = math.pi * (u * u + v * v)
        if np.any(action > self.c_i * (1.0 + 1e-12)):
            raise OutOfDomain(
                f"action {float(action.max())!r} exceeds the factor capacity {self.c_i!r}"
            )
        theta = np.arctan2(v, u)
        theta = np.where(theta < 0.0, theta + TWO_PI, theta)
        frac = theta / TWO_PI
        st = self.family.state(np.minimum(action, self.c_i))
        alpha, beta = st["alpha"], st["beta"]
        ws, wt = st["w_side"], st["w_top"]
        b1 = ws
        b2 = b1 + 2.0 * wt
        b3 = b2 + 2.0 * ws
        b4 = b3 + 2.0 * wt
        conds = [frac < b1, frac < b2, frac < b3, frac < b4]
        x = np.select(
            conds,
            [alpha, alpha * (1.0 - (frac - b1) / wt), -alpha, -alpha * (1.0 - (frac - b3) / wt)],
            default=alpha,
        )
        y = np.select(
            conds,
            [beta * frac / ws, beta, beta * (1.0 - (frac - b2) / ws), -beta],
            default=-beta * (1.0 - (frac - b4) / ws),
        )
        return np.column_stack([x, y])

    def evaluate(self, z) -> tuple[float, float]:
        """Scalar wrapper around `evaluate_many`; the origin maps to the origin."""
        z = np.asarray(z, dtype=float)
        out = self.evaluate_many(z.reshape(1, 2))[0]
        return float(out[0]), float(out[1])

    def condition_margins_many(self, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-sample slack of the two image constraints (positive = strict)."""
        Z = np.asarray(Z, dtype=float)
        action = math.pi * (Z[:, 0] ** 2 + Z[:, 1] ** 2)
        lv = self.family.level(action)
        img = self.evaluate_many(Z)
        mx = lv - np.asarray(self.family.f._eval(np.abs(img[:, 0])), dtype=float)
        my = lv - np.asarray(self.family.conj.evaluate(np.abs(img[:, 1])), dtype=float)
        return mx, my

    # ----- seam geometry and the numeric area-preservation check -----

    def seam_safe_mask(self, Z: np.ndarray, h: float, factor: float = 10.0) -> np.ndarray:
        """True for rows whose ``factor*h`` neighborhood avoids corner seams.

        Checks the angular distance to the four corner rays at a fan of
        nearby action levels, and excludes near-zero actions where the
        angular picture degenerates.
        """
        Z = np.asarray(Z, dtype=float)
        r = np.hypot(Z[:, 0], Z[:, 1])
        action = math.pi * r * r
        theta = np.arctan2(Z[:, 1], Z[:, 0])
        theta = np.where(theta < 0.0, theta + TWO_PI, theta)
        safe = action >= max(1e-6, math.pi * (factor * h) ** 2)
        safe &= math.pi * (r + factor * h) ** 2 <= self.c_i
        idx = np.nonzero(safe)[0]
        if idx.size == 0:
            return safe
        pad = factor * h
        for frac_shift in np.linspace(-1.0, 1.0, 5):
            r_shift = np.maximum(r[idx] + frac_shift * pad, 0.0)
            st = self.family.state(math.pi * r_shift**2)
            ws, wt = st["w_side"], st["w_top"]
            breaks = np.stack([ws, ws + 2.0 * wt, 3.0 * ws + 2.0 * wt, 3.0 * ws + 4.0 * wt])
            for k in range(4):
                phi = TWO_PI * breaks[k]
                d = np.abs(theta[idx] - phi)
                d = np.minimum(d, TWO_PI - d)
                safe[idx] &= r[idx] * d > pad
        return safe

    def jacobian_deviation_many(self, Z: np.ndarray, h: float) -> np.ndarray:
        """``|det Dsigma - 1|`` by central differences at pre-filtered points."""
        Z = np.asarray(Z, dtype=float)
        m = Z.shape[0]
        e1 = np.array([h, 0.0])
        e2 = np.array([0.0, h])
        stack = np.vstack([Z + e1, Z - e1, Z + e2, Z - e2])
        img = self.evaluate_many(stack)
        dx = (img[:m] - img[m : 2 * m]) / (2.0 * h)
        dy = (img[2 * m : 3 * m] - img[3 * m :]) / (2.0 * h)
        det = dx[:, 0] * dy[:, 1] - dy[:, 0] * dx[:, 1]
        return np.abs(det - 1.0)

    def jacobian_check(self, z, h: float) -> float:
        """Scalar area-preservation check; rejects stencils near seams."""
        z = np.asarray(z, dtype=float).reshape(1, 2)
        r = float(np.hypot(z[0, 0], z[0, 1]))
        if math.pi * (r + h) ** 2 > self.c_i * (1.0 + 1e-12):
            raise OutOfDomain("finite-difference stencil leaves the factor disc")
        if not bool(self.seam_safe_mask(z, h)[0]):
            raise SeamProximity(
                f"point {z[0]!r} is within 10h of a corner seam (or its action is degenerate)"
            )
        return float(self.jacobian_deviation_many(z, h)[0])


def build_sigma(
    f: YoungFunction,
    conj: ConjugateFunction,
    c_i: float,
    epsilon: float,
    n: int,
    grid_n: int = 2000,
    monotonicity_grid_n: int = 10_000,
) -> SigmaMap:
    """Construct and certify one factor map.

    Refuses to build when the feasibility slack is nonpositive
    (`InfeasibleConstraints`) or when either realized half-width fails to
    increase strictly along a dense action grid (`NonMonotoneFamily`).
    """
    cert = feasibility_certificate(f, c_i, epsilon, n, grid_n=grid_n)
    if not cert.feasible:
        raise InfeasibleConstraints(
            f"slack {cert.min_slack!r} at s = {cert.argmin_s!r}; "
            "the nested rectangle family does not fit its constraint boxes"
        )
    family = NestedRectFamily(f=f, conj=conj, c_i=c_i, epsilon=epsilon, n_factors=n)
    actions = np.linspace(0.0, c_i, monotonicity_grid_n + 1)[1:]
    st = family.state(actions)
    sq_side = actions * st["a"] / st["b"]
    sq_top = actions * st["b"] / st["a"]
    if np.any(np.diff(sq_side) <= 0.0) or np.any(np.diff(sq_top) <= 0.0):
        raise NonMonotoneFamily(
            "realized half-widths are not strictly increasing on the action grid"
        )
    return SigmaMap(family=family, certificate=cert)


@dataclass(frozen=True)
class ProductMap:
    """Coordinate-pairwise product of factor maps on the 2n-ball of capacity c.

    Vectors use the block layout ``(u_1..u_n, v_1..v_n)`` on input and
    ``(x_1..x_n, y_1..y_n)`` on output, pairing ``(u_i, v_i) -> (x_i, y_i)``
    through factor ``i``.
    """

    maps: tuple

    @property
    def n(self) -> int:
        return len(self.maps)

    @property
    def capacity(self) -> float:
        return min(m.c_i for m in self.maps)

    def apply_many(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        n = self.n
        if Z.ndim != 2 or Z.shape[1] != 2 * n:
            raise ValueError(f"expected shape (m, {2 * n}), got {Z.shape}")
        actions = math.pi * (Z[:, :n] ** 2 + Z[:, n:] ** 2)
        total = actions.sum(axis=1)
        if np.any(total > self.capacity * (1.0 + 1e-12)):
            raise OutOfDomain(
                f"total action {float(total.max())!r} exceeds the ball capacity "
                f"{self.capacity!r}"
            )
        out = np.empty_like(Z)
        for i, sigma in enumerate(self.maps):
            img = sigma.evaluate_many(np.column_stack([Z[:, i], Z[:, n + i]]))
            out[:, i] = img[:, 0]
            out[:, n + i] = img[:, 1]
        return out

    def apply(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return self.apply_many(z.reshape(1, -1))[0]


def build_product(spec: EmbeddingSpec, grid_n: int = 2000) -> ProductMap:
    """Build every factor of an embedding spec (raises on any infeasible factor)."""
    maps = []
    for f, g, c_i in zip(spec.tuple.functions, spec.tuple.conjugates, spec.capacities):
        maps.append(build_sigma(f, g, c_i, spec.epsilon, spec.n, grid_n=grid_n))
    return ProductMap(maps=tuple(maps))


# ---------------------------------------------------------------------------
# Sampling and containment verification
# ---------------------------------------------------------------------------


def _ball_chunks(dim: int, radius: float, count: int, seed: int, on_sphere: bool, key_base: int):
    """Uniform samples in (or on) the ``dim``-ball, in deterministic keyed chunks."""
    done = 0
    chunk = 0
    while done < count:
        m = min(_CHUNK, count - done)
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(key_base + chunk,))
        )
        g = rng.normal(size=(m, dim))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        dirs = g / norms
        if on_sphere:
            yield dirs * radius
        else:
            u = rng.random((m, 1))
            yield dirs * (radius * u ** (1.0 / dim))
        done += m
        chunk += 1


@dataclass(frozen=True)
class ContainmentReport:
    """Maxima of the image gauges over the sampled ball, with pass/fail margins."""

    kind: str
    epsilon: float
    n_samples: int
    boundary_samples: int
    seed: int
    max_modular_x: float
    max_modular_y: Optional[float]
    max_support_y: Optional[float]
    max_luxemburg_x: Optional[float]
    min_margin_x: float
    min_margin_y: float
    passed: bool

    def to_json_dict(self) -> dict:
        return asdict(self)


def verify_containment_dual(
    spec: EmbeddingSpec,
    pm: ProductMap,
    n_samples: int,
    seed: int,
) -> ContainmentReport:
    """Certify image of the c-ball inside the (1+eps)-inflated dual product.

    Tracks the modular sums of both image blocks over interior samples plus a
    boundary batch at total action exactly c; raises `ContainmentViolation`
    with a witness on any exceedance of 1 + eps.
    """
    yt, eps = spec.tuple, spec.epsilon
    n = spec.n
    radius = math.sqrt(spec.capacity / math.pi)
    boundary = min(1024, max(64, n_samples // 100))
    max_sx = 0.0
    max_sy = 0.0
    witness = None
    batches = [(_ball_chunks(2 * n, radius, n_samples, seed, False, 0), n_samples)]
    batches.append((_ball_chunks(2 * n, radius, boundary, seed, True, 1 << 32), boundary))
    for gen, _ in batches:
        for Z in gen:
            img = pm.apply_many(Z)
            sx = np.zeros(Z.shape[0])
            sy = np.zeros(Z.shape[0])
            for i, (f, g) in enumerate(zip(yt.functions, yt.conjugates)):
                sx += np.asarray(f._eval(np.abs(img[:, i])), dtype=float)
                sy += np.asarray(g.evaluate(np.abs(img[:, n + i])), dtype=float)
            k = int(np.argmax(sx))
            if sx[k] > max_sx:
                max_sx = float(sx[k])
                if max_sx >= 1.0 + eps:
                    witness = Z[k]
            k = int(np.argmax(sy))
            if sy[k] > max_sy:
                max_sy = float(sy[k])
                if max_sy >= 1.0 + eps:
                    witness = Z[k]
    passed = max_sx < 1.0 + eps and max_sy < 1.0 + eps
    report = ContainmentReport(
        kind="dual",
        epsilon=eps,
        n_samples=n_samples,
        boundary_samples=boundary,
        seed=seed,
        max_modular_x=max_sx,
        max_modular_y=max_sy,
        max_support_y=None,
        max_luxemburg_x=None,
        min_margin_x=1.0 + eps - max_sx,
        min_margin_y=1.0 + eps - max_sy,
        passed=passed,
    )
    if not passed:
        raise ContainmentViolation(
            f"image gauge reached ({max_sx!r}, {max_sy!r}) against the bound {1.0 + eps!r}",
            witness=witness,
        )
    return report


def check_polar_point(spec: EmbeddingSpec, x, y) -> tuple[float, float]:
    """Margins of one image point against the polar-product bounds.

    Returns ``(1 + eps - modular(x), 2 + eps - support(y))``; raises
    `ContainmentViolation` when either is negative.
    """
    yt, eps = spec.tuple, spec.epsilon
    x = np.asarray(x, dtype=float)
    sx = float(sum(f._eval(abs(v)) for f, v in zip(yt.functions, x)))
    hy = float(support_values(yt, np.asarray(y, dtype=float).reshape(1, -1))[0])
    mx = 1.0 + eps - sx
    my = 2.0 + eps - hy
    if mx < 0.0 or my < 0.0:
        raise ContainmentViolation(
            f"polar containment fails: modular(x) = {sx!r}, support(y) = {hy!r}",
            witness=(x, np.asarray(y, dtype=float)),
        )
    return mx, my


def verify_containment_polar(
    spec: EmbeddingSpec,
    pm: ProductMap,
    n_samples: int,
    seed: int,
) -> ContainmentReport:
    """Certify the rescaled image inside sqrt(2)(1+eps) times ball x polar dual.

    Checks the x-block modular sum against 1 + eps and the support value of
    the y-block against 2 + eps; under the rescale ``(x, y) -> (sqrt2 x,
    y/sqrt2)`` those give gauges at most 1 in the inflated product (the
    Luxemburg norm of the x-block is tracked too, since the rescaled x-gauge
    is exactly ``lux(x)/(1+eps)``).
    """
    yt, eps = spec.tuple, spec.epsilon
    n = spec.n
    radius = math.sqrt(spec.capacity / math.pi)
    boundary = min(1024, max(64, n_samples // 100))
    max_sx = 0.0
    max_hy = 0.0
    max_lux = 0.0
    witness = None
    batches = [(_ball_chunks(2 * n, radius, n_samples, seed, False, 0), n_samples)]
    batches.append((_ball_chunks(2 * n, radius, boundary, seed, True, 1 << 32), boundary))
    for gen, _ in batches:
        for Z in gen:
            img = pm.apply_many(Z)
            xs, ys = img[:, :n], img[:, n:]
            sx = np.zeros(Z.shape[0])
            for i, f in enumerate(yt.functions):
                sx += np.asarray(f._eval(np.abs(xs[:, i])), dtype=float)
            hy = support_values(yt, ys)
            lux = luxemburg_values(yt, xs)
            k = int(np.argmax(sx))
            if sx[k] > max_sx:
                max_sx = float(sx[k])
                if max_sx >= 1.0 + eps:
                    witness = Z[k]
            k = int(np.argmax(hy))
            if hy[k] > max_hy:
                max_hy = float(hy[k])
                if max_hy >= 2.0 + eps:
                    witness = Z[k]
            max_lux = max(max_lux, float(lux.max()))
    passed = max_sx < 1.0 + eps and max_hy < 2.0 + eps and max_lux <= 1.0 + eps + 1e-9
    report = ContainmentReport(
        kind="polar",
        epsilon=eps,
        n_samples=n_samples,
        boundary_samples=boundary,
        seed=seed,
        max_modular_x=max_sx,
        max_modular_y=None,
        max_support_y=max_hy,
        max_luxemburg_x=max_lux,
        min_margin_x=1.0 + eps - max_sx,
        min_margin_y=2.0 + eps - max_hy,
        passed=passed,
    )
    if not passed:
        raise ContainmentViolation(
            f"polar containment fails: modular(x) up to {max_sx!r}, "
            f"support(y) up to {max_hy!r}",
            witness=witness,
        )
    return report


# ---------------------------------------------------------------------------
# Aggregate embed run
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbedReport:
    """Feasibility scan, construction status, and verification maxima for a run."""

    epsilon: float
    capacities: tuple
    capacity: float
    feasibility: tuple
    built: bool
    jacobian_max_dev: Optional[float]
    jacobian_points: int
    jacobian_step: float
    constraint_margin_x: Optional[float]
    constraint_margin_y: Optional[float]
    containment_dual: Optional[ContainmentReport]
    containment_polar: Optional[ContainmentReport]
    seed: int

    @property
    def passed(self) -> bool:
        if not self.built:
            return False
        checks = [
            self.jacobian_max_dev is None or self.jacobian_max_dev <= 1e-4,
            self.constraint_margin_x is None or self.constraint_margin_x > 0.0,
            self.constraint_margin_y is None or self.constraint_margin_y > 0.0,
            self.containment_dual is None or self.containment_dual.passed,
            self.containment_polar is None or self.containment_polar.passed,
        ]
        return all(checks)

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "capacities": list(self.capacities),
            "capacity": self.capacity,
            "feasibility": [c.to_json_dict() for c in self.feasibility],
            "built": self.built,
            "jacobian_max_dev": self.jacobian_max_dev,
            "jacobian_points": self.jacobian_points,
            "jacobian_step": self.jacobian_step,
            "constraint_margin_x": self.constraint_margin_x,
            "constraint_margin_y": self.constraint_margin_y,
            "containment_dual": None
            if self.containment_dual is None
            else self.containment_dual.to_json_dict(),
            "containment_polar": None
            if self.containment_polar is None
            else self.containment_polar.to_json_dict(),
            "seed": self.seed,
            "passed": self.passed,
        }


def sample_jacobian_deviation(
    sigma: SigmaMap, n_points: int, h: float, seed: int
) -> tuple[float, int]:
    """Max finite-difference Jacobian deviation over seam-safe disc samples."""
    radius = math.sqrt(sigma.c_i / math.pi) - 2.0 * 10.0 * h
    collected = 0
    worst = 0.0
    for chunk_idx in range(64):
        want = n_points - collected
        if want <= 0:
            break
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_idx,)))
        g = rng.normal(size=(max(want * 2, 256), 2))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        pts = g / norms * (radius * rng.random((g.shape[0], 1)) ** 0.5)
        mask = sigma.seam_safe_mask(pts, h)
        pts = pts[mask][:want]
        if pts.shape[0] == 0:
            continue
        worst = max(worst, float(sigma.jacobian_deviation_many(pts, h).max()))
        collected += pts.shape[0]
    return worst, collected


def embed_report(
    spec: EmbeddingSpec,
    containment_samples: int = 100_000,
    polar_samples: int = 10_000,
    jacobian_points: int = 10_000,
    jacobian_step: float = 1e-4,
    seed: int = 0,
    grid_n: int = 2000,
) -> EmbedReport:
    """Run the full pipeline: scan, build, margins, Jacobian, both containments.

    An infeasible factor stops the run after the scan with ``built=False``
    (that is a reported finding, not an error).
    """
    certs = tuple(
        feasibility_certificate(f, c_i, spec.epsilon, spec.n, grid_n=grid_n)
        for f, c_i in zip(spec.tuple.functions, spec.capacities)
    )
    if not all(c.feasible for c in certs):
        return EmbedReport(
            epsilon=spec.epsilon,
            capacities=spec.capacities,
            capacity=spec.capacity,
            feasibility=certs,
            built=False,
            jacobian_max_dev=None,
            jacobian_points=0,
            jacobian_step=jacobian_step,
            constraint_margin_x=None,
            constraint_margin_y=None,
            containment_dual=None,
            containment_polar=None,
            seed=seed,
        )
    pm = build_product(spec, grid_n=grid_n)
    worst_dev = 0.0
    total_jac = 0
    for i, sigma in enumerate(pm.maps):
        dev, cnt = sample_jacobian_deviation(sigma, jacobian_points, jacobian_step, seed + i)
        worst_dev = max(worst_dev, dev)
        total_jac += cnt
    margin_x = math.inf
    margin_y = math.inf
    radius = math.sqrt(spec.capacity / math.pi)
    for Z in _ball_chunks(2 * spec.n, radius, min(containment_samples, 50_000), seed + 101, False, 0):
        for i, sigma in enumerate(pm.maps):
            mx, my = sigma.condition_margins_many(
                np.column_stack([Z[:, i], Z[:, spec.n + i]])
            )
            margin_x = min(margin_x, float(mx.min()))
            margin_y = min(margin_y, float(my.min()))
    dual = verify_containment_dual(spec, pm, containment_samples, seed + 202)
    polar = verify_containment_polar(spec, pm, polar_samples, seed + 303)
    return EmbedReport(
        epsilon=spec.epsilon,
        capacities=spec.capacities,
        capacity=spec.capacity,
        feasibility=certs,
        built=True,
        jacobian_max_dev=worst_dev,
        jacobian_points=total_jac,
        jacobian_step=jacobian_step,
        constraint_margin_x=margin_x,
        constraint_margin_y=margin_y,
        containment_dual=dual,
        containment_polar=polar,
        seed=seed,
    )
