"""Capacity values and bounds for the two dual Lagrangian products, plus audits.

Everything here reduces to the per-index products

    rho_i = f_i^{-1}(1) * (f_i*)^{-1}(1),

which the Young inequalities pin into ``(1, 2]``.  The product of the ball
with its conjugate ball has all normalized capacities equal to ``4 min_i
rho_i`` (hence at most 8); the product with the polar dual is only bracketed,
between ``2 min_i rho_i`` and 4.  The audit suites check the inequality
chains and the equality conditions numerically instead of assuming them.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .bodies import YoungTuple, conjugate_ball, orlicz_ball, volume_mc

FLAG_TOL = 1e-9


def index_products(yt: YoungTuple) -> list:
    """The products ``rho_i`` from the unit-level inverses of each pair."""
    return [
        float(f.inverse(1.0)) * float(g.inverse(1.0))
        for f, g in zip(yt.functions, yt.conjugates)
    ]


def min_product(yt: YoungTuple) -> tuple[float, int]:
    """``min_i rho_i`` and its index; ties resolve to the lowest index."""
    rho = index_products(yt)
    idx = min(range(len(rho)), key=lambda i: rho[i])
    return rho[idx], idx


def capacity_dual_product(yt: YoungTuple) -> float:
    """Common value of all normalized capacities on ball x conjugate ball."""
    return 4.0 * min_product(yt)[0]


def capacity_polar_bounds(yt: YoungTuple) -> tuple[float, float]:
    """(lower, upper) capacity bracket for ball x polar dual."""
    return 2.0 * min_product(yt)[0], 4.0


@dataclass(frozen=True)
class ViterboCertificate:
    """Three independent findings on whether the polar-product capacity pins to 4.

    ``pinned`` is the literally sufficient numerical condition (min rho = 2).
    ``slope_one_condition`` is the classical sufficient condition f_I'(1) = 1.
    ``young_equality`` checks the equality case of the product inequality at
    level one, i.e. ``(f_I*)^{-1}(1) = f_I'(f_I^{-1}(1))``.  The three are
    reported separately because they disagree on real gauges, and
    ``disagreement`` flags exactly that.
    """

    rho: tuple
    rho_min: float
    argmin_index: int
    pinned: bool
    slope_one_condition: bool
    young_equality: bool
    disagreement: bool
    tol: float

    def to_json_dict(self) -> dict:
        return asdict(self) | {"rho": list(self.rho)}


def strong_viterbo_check(yt: YoungTuple, tol: float = FLAG_TOL) -> ViterboCertificate:
    rho = index_products(yt)
    rho_min, idx = min_product(yt)
    f = yt.functions[idx]
    g = yt.conjugates[idx]
    pinned = abs(rho_min - 2.0) <= tol * 2.0
    slope_at_one = float(f.derivative(1.0))
    slope_one = abs(slope_at_one - 1.0) <= tol
    lhs = float(g.inverse(1.0))
    rhs = float(f.derivative(f.inverse(1.0)))
    young_eq = abs(lhs - rhs) <= tol * max(1.0, abs(rhs))
    return ViterboCertificate(
        rho=tuple(rho),
        rho_min=rho_min,
        argmin_index=idx,
        pinned=pinned,
        slope_one_condition=slope_one,
        young_equality=young_eq,
        disagreement=pinned != slope_one,
        tol=tol,
    )


@dataclass(frozen=True)
class MahlerChain:
    """Monte Carlo check of ``4^n/n! <= V V* / rho_min^n < V V*`` with 3-sigma slack."""

    n: int
    rho_min: float
    vol_ball: float
    vol_ball_stderr: float
    vol_conjugate: float
    vol_conjugate_stderr: float
    lower: float
    middle: float
    middle_stderr: float
    upper: float
    upper_stderr: float
    lower_holds: bool
    upper_holds: bool
    n_samples: int
    seed: int

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds

    def to_json_dict(self) -> dict:
        return asdict(self) | {"holds": self.holds}


def mahler_chain(yt: YoungTuple, mc_samples: int, seed: int) -> MahlerChain:
    rho_min, _ = min_product(yt)
    vk = volume_mc(orlicz_ball(yt), mc_samples, seed)
    vc = volume_mc(conjugate_ball(yt), mc_samples, seed + 1)
    n = yt.n
    upper = vk.estimate * vc.estimate
    upper_stderr = math.hypot(vk.estimate * vc.stderr, vc.estimate * vk.stderr)
    scale = rho_min**n
    middle = upper / scale
    middle_stderr = upper_stderr / scale
    lower = 4.0**n / math.factorial(n)
    # the middle/upper comparison shares the same MC estimates, so it is exact
    # given them; strictness comes from rho_min > 1
    return MahlerChain(
        n=n,
        rho_min=rho_min,
        vol_ball=vk.estimate,
        vol_ball_stderr=vk.stderr,
        vol_conjugate=vc.estimate,
        vol_conjugate_stderr=vc.stderr,
        lower=lower,
        middle=middle,
        middle_stderr=middle_stderr,
        upper=upper,
        upper_stderr=upper_stderr,
        lower_holds=lower <= middle + 3.0 * middle_stderr,
        upper_holds=middle < upper,
        n_samples=mc_samples,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Inequality audit suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Sampling plan for the inequality audits (sizes, ranges, RNG seed)."""

    x_max: float = 10.0
    grid_n: int = 200
    random_pairs: int = 10_000
    seed: int = 0


@dataclass(frozen=True)
class ComponentAudit:
    """Worst margins of the Young-inequality battery for one gauge.

    Margins are oriented so that nonnegative (or strictly positive where
    noted) means the inequality holds.
    """

    gauge: str
    worst_gap: float          # min of f(x) + f*(y) - xy over random pairs; >= -1e-12
    equality_gap: float       # max gap at y = f'(x); <= 1e-10
    product_margin: float     # min of (x + y) - f^{-1}(x)(f*)^{-1}(y); >= -1e-10
    lower_margin: float       # min of f^{-1}(x)(f*)^{-1}(x) - x; > 0
    ratio_margin: float       # min of f(a) - f*(f(a)/a); > 0
    slope_monotone: bool

    @property
    def passed(self) -> bool:
        return (
            self.worst_gap >= -1e-12
            and self.equality_gap <= 1e-10
            and self.product_margin >= -1e-10
            and self.lower_margin > 0.0
            and self.ratio_margin > 0.0
            and self.slope_monotone
        )

    def to_json_dict(self) -> dict:
        return asdict(self) | {"passed": self.passed}


@dataclass(frozen=True)
class InequalitySuiteReport:
    components: tuple
    grid: GridSpec

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.components)

    def to_json_dict(self) -> dict:
        return {
            "components": [c.to_json_dict() for c in self.components],
            "grid": asdict(self.grid),
            "passed": self.passed,
        }


def audit_component(f, g, grid: GridSpec, label: str = "") -> ComponentAudit:
    """Run the full inequality battery for one gauge/conjugate pair."""
    rng = np.random.default_rng(grid.seed)
    xs = rng.uniform(0.0, grid.x_max, grid.random_pairs)
    ys = rng.uniform(0.0, grid.x_max, grid.random_pairs)
    gaps = f._eval(xs) + g.evaluate(ys) - xs * ys
    worst_gap = float(np.min(gaps))

    tgrid = np.linspace(0.0, grid.x_max, grid.grid_n)
    slopes = np.asarray(f._deriv(tgrid), dtype=float)
    eq_gaps = f._eval(tgrid) + g.evaluate(slopes) - tgrid * slopes
    equality_gap = float(np.max(np.abs(eq_gaps)))

    levels = np.linspace(grid.x_max / grid.grid_n, grid.x_max, grid.grid_n)
    inv = np.array([f.inverse(float(s)) for s in levels])
    cinv = np.array([g.inverse(float(s)) for s in levels])
    product_margin = float(np.min(levels[:, None] + levels[None, :] - np.outer(inv, cinv)))
    lower_margin = float(np.min(inv * cinv - levels))

    ratios = f._eval(levels) / levels
    ratio_margin = float(np.min(f._eval(levels) - g.evaluate(ratios)))

    slope_monotone = bool(
        np.all(np.diff(slopes) >= -1e-10 * max(1.0, float(np.max(np.abs(slopes)))))
    )
    return ComponentAudit(
        gauge=label or repr(f),
        worst_gap=worst_gap,
        equality_gap=equality_gap,
        product_margin=product_margin,
        lower_margin=lower_margin,
        ratio_margin=ratio_margin,
        slope_monotone=slope_monotone,
    )


def inequality_suite(yt: YoungTuple, grid: GridSpec = GridSpec()) -> InequalitySuiteReport:
    comps = tuple(
        audit_component(f, g, grid, label=f"component-{i}")
        for i, (f, g) in enumerate(zip(yt.functions, yt.conjugates))
    )
    return InequalitySuiteReport(components=comps, grid=grid)


# ---------------------------------------------------------------------------
# Aggregate report
# ---------------------------------------------------------------------------

RHO_SLACK = 1e-12


@dataclass(frozen=True)
class CapacityReport:
    """Capacity values, bound bracket, condition flags, and optional volume chain."""

    rho: tuple
    argmin_index: int
    c_dual: float
    polar_lower: float
    polar_upper: float
    equality_flags: tuple
    slope_one_flag: bool
    certificate: ViterboCertificate
    mahler: Optional[MahlerChain]
    invariant_violations: tuple

    @property
    def passed(self) -> bool:
        return not self.invariant_violations and (self.mahler is None or self.mahler.holds)

    def to_json_dict(self) -> dict:
        return {
            "rho": list(self.rho),
            "argmin_index": self.argmin_index,
            "c_dual": self.c_dual,
            "polar_lower": self.polar_lower,
            "polar_upper": self.polar_upper,
            "equality_flags": list(self.equality_flags),
            "slope_one_flag": self.slope_one_flag,
            "certificate": self.certificate.to_json_dict(),
            "mahler": None if self.mahler is None else self.mahler.to_json_dict(),
            "invariant_violations": list(self.invariant_violations),
            "passed": self.passed,
        }


def capacity_report(
    yt: YoungTuple,
    mahler_samples: int = 0,
    seed: int = 0,
    tol: float = FLAG_TOL,
) -> CapacityReport:
    """Full capacity report; ``mahler_samples > 0`` adds the MC volume chain."""
    rho = index_products(yt)
    rho_min, idx = min_product(yt)
    cert = strong_viterbo_check(yt, tol)
    c_dual = 4.0 * rho_min
    polar_lower, polar_upper = 2.0 * rho_min, 4.0

    violations = []
    for i, r in enumerate(rho):
        if not (1.0 < r <= 2.0 + RHO_SLACK):
            violations.append(f"rho[{i}] = {r!r} outside (1, 2]")
    if c_dual > 8.0 + RHO_SLACK:
        violations.append(f"dual-product capacity {c_dual!r} exceeds 8")
    if not polar_lower > 2.0:
        violations.append(f"polar lower bound {polar_lower!r} not strictly above 2")
    if polar_lower > polar_upper + RHO_SLACK:
        violations.append("polar bounds inverted")

    flags = []
    for f, g in zip(yt.functions, yt.conjugates):
        lhs = float(g.inverse(1.0))
        rhs = float(f.derivative(f.inverse(1.0)))
        flags.append(abs(lhs - rhs) <= tol * max(1.0, abs(rhs)))

    mahler = mahler_chain(yt, mahler_samples, seed) if mahler_samples > 0 else None
    return CapacityReport(
        rho=tuple(rho),
        argmin_index=idx,
        c_dual=c_dual,
        polar_lower=polar_lower,
        polar_upper=polar_upper,
        equality_flags=tuple(flags),
        slope_one_flag=cert.slope_one_condition,
        certificate=cert,
        mahler=mahler,
        invariant_violations=tuple(violations),
    )
