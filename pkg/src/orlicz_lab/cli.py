"""Command-line front end: JSON configs in, JSON/CSV/SVG reports out.

Subcommands: ``capacity``, ``embed``, ``plot``, ``volume``, ``inequalities``,
``report``.  Every run is a pure function of the config file and the seed, so
repeated runs produce byte-identical outputs.  Exit codes: 0 on pass, 1 on
usage or config errors, 2 on invariant violations.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bodies import (
    BODY_KINDS,
    BodyHandle,
    YoungTuple,
    boundary_section,
    volume_mc,
)
from .capacity import GridSpec, capacity_report, inequality_suite
from .embedding import EmbeddingSpec, build_product, embed_report
from .errors import ConfigError, ContainmentViolation, LabError

_SAMPLE_DEFAULTS = {
    "volume": 1_000_000,
    "mahler": 200_000,
    "containment": 100_000,
    "polar": 10_000,
    "jacobian": 10_000,
    "embed_csv": 2_000,
}
_SAMPLE_MINIMUMS = {
    "volume": 1000,
    "mahler": 1000,
    "containment": 1000,
    "polar": 1000,
    "jacobian": 100,
    "embed_csv": 16,
}


@dataclass(frozen=True)
class LabConfig:
    """Validated run configuration (tuple, epsilon, seeds, sizes, plot options)."""

    tuple: YoungTuple
    epsilon: float
    seed: int
    samples: dict
    feasibility_grid: int
    inequality_grid: GridSpec
    plot_body: str
    plot_resolution: int
    raw: dict

    @property
    def sha256(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def parse_config(raw: dict, seed_override=None) -> LabConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if "tuple" not in raw or not isinstance(raw["tuple"], list) or not raw["tuple"]:
        raise ConfigError("config needs a nonempty 'tuple' array of gauge specs")
    try:
        yt = YoungTuple.from_json_list(raw["tuple"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad tuple spec: {exc}") from exc

    epsilon = raw.get("epsilon", 0.05)
    if not isinstance(epsilon, (int, float)) or not 0.0 < float(epsilon) <= 1.0:
        raise ConfigError(f"epsilon must lie in (0, 1], got {epsilon!r}")

    seed = raw.get("seed", 0) if seed_override is None else seed_override
    if not isinstance(seed, int) or seed < 0 or seed >= 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")

    samples = dict(_SAMPLE_DEFAULTS)
    for key, val in (raw.get("samples") or {}).items():
        if key not in samples:
            raise ConfigError(f"unknown sample count {key!r}")
        if not isinstance(val, int) or val < _SAMPLE_MINIMUMS[key]:
            raise ConfigError(
                f"samples.{key} must be an integer >= {_SAMPLE_MINIMUMS[key]}, got {val!r}"
            )
        samples[key] = val

    grid_raw = raw.get("grid") or {}
    feas = grid_raw.get("feasibility", 2000)
    if not isinstance(feas, int) or feas < 1000:
        raise ConfigError(f"grid.feasibility must be an integer >= 1000, got {feas!r}")
    ineq = GridSpec(
        x_max=float(grid_raw.get("x_max", 10.0)),
        grid_n=int(grid_raw.get("inequality", 200)),
        random_pairs=int(grid_raw.get("random_pairs", 10_000)),
        seed=seed,
    )
    if ineq.x_max <= 0 or ineq.grid_n < 2 or ineq.random_pairs < 1:
        raise ConfigError(f"bad inequality grid {grid_raw!r}")

    plot_raw = raw.get("plot") or {}
    body = plot_raw.get("body", "kphi")
    if body not in BODY_KINDS:
        raise ConfigError(f"plot.body must be one of {BODY_KINDS}, got {body!r}")
    resolution = plot_raw.get("resolution", 256)
    if not isinstance(resolution, int) or resolution < 8:
        raise ConfigError(f"plot.resolution must be an integer >= 8, got {resolution!r}")

    return LabConfig(
        tuple=yt,
        epsilon=float(epsilon),
        seed=seed,
        samples=samples,
        feasibility_grid=feas,
        inequality_grid=ineq,
        plot_body=body,
        plot_resolution=resolution,
        raw=raw,
    )


def load_config(path: str, seed_override=None) -> LabConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return parse_config(raw, seed_override=seed_override)


def _meta(cfg: LabConfig) -> dict:
    return {"version": __version__, "config_sha256": cfg.sha256}


# ---------------------------------------------------------------------------
# Commands (each returns payload dict + exit code)
# ---------------------------------------------------------------------------


def cmd_capacity(cfg: LabConfig) -> tuple[dict, int]:
    # the volume chain runs here only when explicitly requested; `report` always runs it
    explicit = cfg.raw.get("samples") or {}
    mahler = cfg.samples["mahler"] if "mahler" in explicit else 0
    rep = capacity_report(cfg.tuple, mahler_samples=mahler, seed=cfg.seed)
    payload = rep.to_json_dict() | _meta(cfg)
    return payload, 0 if rep.passed else 2


def cmd_inequalities(cfg: LabConfig) -> tuple[dict, int]:
    rep = inequality_suite(cfg.tuple, cfg.inequality_grid)
    payload = rep.to_json_dict() | _meta(cfg)
    return payload, 0 if rep.passed else 2


def cmd_volume(cfg: LabConfig, body_kind=None) -> tuple[dict, int]:
    body = BodyHandle(body_kind or cfg.plot_body, cfg.tuple)
    est = volume_mc(body, cfg.samples["volume"], cfg.seed)
    payload = est.to_json_dict() | {"body": body.kind} | _meta(cfg)
    return payload, 0


def cmd_embed(cfg: LabConfig, csv_path=None) -> tuple[dict, int]:
    spec = EmbeddingSpec(cfg.tuple, cfg.epsilon)
    try:
        rep = embed_report(
            spec,
            containment_samples=cfg.samples["containment"],
            polar_samples=cfg.samples["polar"],
            jacobian_points=cfg.samples["jacobian"],
            seed=cfg.seed,
            grid_n=cfg.feasibility_grid,
        )
    except ContainmentViolation as exc:
        payload = {"error": str(exc), "witness": _jsonify(exc.witness)} | _meta(cfg)
        return payload, 2
    payload = rep.to_json_dict() | _meta(cfg)
    if csv_path is not None and rep.built:
        _write_embed_csv(spec, cfg, Path(csv_path))
        payload["csv"] = str(csv_path)
    return payload, 0 if (not rep.built or rep.passed) else 2


def cmd_plot(cfg: LabConfig, body_kind, resolution, out_path: Path) -> tuple[dict, int]:
    body = BodyHandle(body_kind or cfg.plot_body, cfg.tuple)
    if body.n != 2:
        raise ConfigError("plots are 2-d sections; the tuple must have exactly 2 components")
    res = resolution or cfg.plot_resolution
    rows = boundary_section(body, res)
    worst = 0.0
    for row in rows:
        worst = max(worst, abs(body.gauge(row[1:]) - 1.0))
    svg = render_boundary_svg(rows)
    csv_text = "theta,x1,x2\n" + "".join(
        f"{_fmt(th)},{_fmt(x1)},{_fmt(x2)}\n" for th, x1, x2 in rows
    )
    out_path.write_text(svg)
    csv_path = out_path.with_suffix(".csv")
    csv_path.write_text(csv_text)
    payload = {
        "svg": str(out_path),
        "csv": str(csv_path),
        "body": body.kind,
        "resolution": res,
        "max_gauge_deviation": worst,
    } | _meta(cfg)
    return payload, 0 if worst <= 1e-6 else 2


def cmd_report(cfg: LabConfig) -> tuple[dict, int]:
    cap = capacity_report(cfg.tuple, mahler_samples=cfg.samples["mahler"], seed=cfg.seed)
    ineq = inequality_suite(cfg.tuple, cfg.inequality_grid)
    spec = EmbeddingSpec(cfg.tuple, cfg.epsilon)
    try:
        emb = embed_report(
            spec,
            containment_samples=cfg.samples["containment"],
            polar_samples=cfg.samples["polar"],
            jacobian_points=cfg.samples["jacobian"],
            seed=cfg.seed,
            grid_n=cfg.feasibility_grid,
        )
        emb_payload = emb.to_json_dict()
        emb_ok = not emb.built or emb.passed
    except ContainmentViolation as exc:
        emb_payload = {"error": str(exc), "witness": _jsonify(exc.witness)}
        emb_ok = False
    passed = cap.passed and ineq.passed and emb_ok
    payload = {
        "capacity": cap.to_json_dict(),
        "inequalities": ineq.to_json_dict(),
        "embedding": emb_payload,
        "passed": passed,
    } | _meta(cfg)
    return payload, 0 if passed else 2


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return repr(float(v))


def _jsonify(obj):
    if obj is None:
        return None
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj]
    if isinstance(obj, (tuple, list)):
        return [_jsonify(v) for v in obj]
    return obj


def render_boundary_svg(rows: np.ndarray, size: int = 512, fill_fraction: float = 0.8) -> str:
    """Minimal deterministic SVG: frame, mathematical axes, closed boundary curve."""
    pts = rows[:, 1:]
    extent = float(np.abs(pts).max())
    scale = fill_fraction * (size / 2.0) / extent
    half = size / 2.0

    def to_px(xy):
        return half + xy[0] * scale, half - xy[1] * scale

    coords = " ".join(f"{x:.6f},{y:.6f}" for x, y in (to_px(p) for p in pts))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="0" y1="{half}" x2="{size}" y2="{half}" stroke="#999" stroke-width="1"/>',
        f'<line x1="{half}" y1="0" x2="{half}" y2="{size}" stroke="#999" stroke-width="1"/>',
        f'<polygon points="{coords}" fill="none" stroke="black" stroke-width="1.5"/>',
        f"<!-- scale: {scale:.9f} px per unit -->",
        "</svg>",
        "",
    ]
    return "\n".join(lines)


def _write_embed_csv(spec: EmbeddingSpec, cfg: LabConfig, path: Path) -> None:
    """Sample (z, sigma(z)) pairs per factor for external plotting."""
    pm = build_product(spec, grid_n=cfg.feasibility_grid)
    count = cfg.samples["embed_csv"]
    out = ["factor,zx,zy,x,y\n"]
    for i, sigma in enumerate(pm.maps):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(i,)))
        g = rng.normal(size=(count, 2))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        radius = math.sqrt(sigma.c_i / math.pi)
        pts = g / norms * (radius * np.sqrt(rng.random((count, 1))))
        img = sigma.evaluate_many(pts)
        for (zx, zy), (x, y) in zip(pts, img):
            out.append(f"{i},{_fmt(zx)},{_fmt(zy)},{_fmt(x)},{_fmt(y)}\n")
    path.write_text("".join(out))


def _emit(payload: dict, out_path) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lab",
        description="Orlicz-ball capacity and embedding laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("capacity", "embed", "plot", "volume", "inequalities", "report"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if name == "embed":
            p.add_argument("--csv", default=None, help="also dump (z, sigma(z)) samples as CSV")
        if name in ("plot", "volume"):
            p.add_argument("--body", choices=BODY_KINDS, default=None)
        if name == "plot":
            p.add_argument("--resolution", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, seed_override=args.seed)
        if args.command == "capacity":
            payload, code = cmd_capacity(cfg)
        elif args.command == "inequalities":
            payload, code = cmd_inequalities(cfg)
        elif args.command == "volume":
            payload, code = cmd_volume(cfg, body_kind=args.body)
        elif args.command == "embed":
            payload, code = cmd_embed(cfg, csv_path=args.csv)
        elif args.command == "plot":
            out = Path(args.out) if args.out else Path("plot.svg")
            payload, code = cmd_plot(cfg, args.body, args.resolution, out)
            _emit(payload, None)
            return code
        else:
            payload, code = cmd_report(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except LabError as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return 2
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
