"""Command-line front end: ingest, analyze, plan and divide.

Every command writes its outputs plus ``run_config.json`` into ``--out-dir``.
Feeding that file back through ``--config`` repeats the run.
"""
from __future__ import annotations

import argparse
import inspect
import json
import math
import os
import sys

import numpy as np

from . import surfaces
from .dem import DEMFormatError, grid_to_json, heightfield_to_json, load_dem
from .diffgeo import curvature_field, imaging_surface, max_valid_height_1d
from .expr import ExpressionError, compile_expression
from .ortho import REGION_MODES, MaskRegion, OrthoParams, region
from .partition import assign_points, decision_boundaries
from .plan import (COST_KINDS, CapturePlan, CostSpec, PlanContext, SolverConfig, batch_fill,
                   normal_density_curve, normal_density_surface, pareto_front, sequential_fill)
from .svg import SvgMap
from .terrain import Bounds, HeightField, OutOfBoundsError, SurfaceModel, mean_smooth

EXIT_OK, EXIT_INPUT, EXIT_UNREACHED = 0, 2, 3


class InputError(Exception):
    pass


# --- shared argument groups ---------------------------------------------------

def _global_args():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run")
    g.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    g.add_argument("--out-dir", default=".", help="output directory (default .)")
    g.add_argument("--grid-res", type=int, default=None, help="raster resolution per axis")
    g.add_argument("--config", default=None, help="JSON run config; explicit flags override it")
    return p


def _surface_args():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("surface")
    g.add_argument("--surface", default="cos_sum", help=f"built-in surface: {', '.join(surfaces.BUILTINS)}")
    g.add_argument("--expr", default=None, help="surface expression in x, y, e.g. 'cos(x)+cos(y)'")
    g.add_argument("--dem", default=None, help="PGM/PNG elevation map")
    g.add_argument("--smooth", type=int, default=17, help="mean-filter window for --dem (odd; 1 = off)")
    g.add_argument("--spacing", type=float, default=1.0, help="DEM grid spacing")
    g.add_argument("--bounds", type=float, nargs=2, default=None, metavar=("LOW", "HIGH"),
                   help="square domain [LOW, HIGH]^2 (analytic surfaces only)")
    g.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="built-in surface parameter (repeatable)")
    return p


def _ortho_args():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("imaging")
    g.add_argument("--d", type=float, default=3.0, help="imaging height (default 3)")
    g.add_argument("--eps", type=float, default=10.0, help="angular field of view in degrees (default 10)")
    g.add_argument("--dx", type=float, default=None, help="march step (default R/50)")
    g.add_argument("--m", type=float, default=5.0, help="max/min radius ratio (default 5)")
    return p


def _solver_args():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("optimizer")
    g.add_argument("--cost", default="F3", type=str.upper, choices=COST_KINDS)
    g.add_argument("--w1", type=float, default=None)
    g.add_argument("--w2", type=float, default=None)
    g.add_argument("--schedule", default=None, help="F4 weight schedule: 'inverse-n' or a JSON map N->[w1,w2]")
    g.add_argument("--n-starts", type=int, default=1)
    g.add_argument("--max-iters", type=int, default=300)
    g.add_argument("--step-init", type=float, default=0.5, help="initial step in units of R")
    g.add_argument("--step-tol", type=float, default=1e-3, help="final step in units of R")
    return p


# --- builders -----------------------------------------------------------------

def _params(pairs) -> dict:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise InputError(f"--param {key}: not a number: {value!r}") from None
    return out


def build_surface(args) -> SurfaceModel:
    if args.dem:
        if not os.path.exists(args.dem):
            raise InputError(f"no such file: {args.dem}")
        hf = load_dem(args.dem)
        hf = HeightField(hf.elevations, (args.spacing, args.spacing), (0.0, 0.0))
        if args.smooth > 1:
            hf = mean_smooth(hf, args.smooth)
        return SurfaceModel(hf)
    bounds = args.bounds
    if args.expr:
        lo, hi = (-5.0, 5.0) if not bounds else bounds
        return surfaces.from_expression(args.expr, lo, hi)
    params = _params(args.param)
    if bounds:
        factory = surfaces.BUILTINS.get(args.surface)
        if factory is not None and "low" not in inspect.signature(factory).parameters:
            raise InputError(f"surface {args.surface!r} does not take --bounds")
        params.update(low=bounds[0], high=bounds[1])
    return surfaces.builtin(args.surface, **params)


def build_params(args) -> OrthoParams:
    R = args.d * math.tan(math.radians(args.eps))
    dx = args.dx if args.dx is not None else R / 50
    return OrthoParams.from_degrees(args.d, args.eps, dx=dx, m=args.m)


def build_spec(args) -> CostSpec:
    schedule = args.schedule
    if schedule and schedule.lstrip().startswith("{"):
        schedule = json.loads(schedule)
    return CostSpec(args.cost, args.w1, args.w2, schedule)


def build_solver(args) -> SolverConfig:
    return SolverConfig(args.max_iters, args.step_init, args.step_tol, args.n_starts, args.seed)


def _res(args, default):
    return args.grid_res if args.grid_res is not None else default


# --- output helpers -----------------------------------------------------------

def _write(args, name, payload):
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, name)
    mode = "wb" if isinstance(payload, bytes) else "w"
    with open(path, mode, **({} if mode == "wb" else {"newline": "\n", "encoding": "utf-8"})) as fh:
        fh.write(payload)
    return path


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _base_map(model: SurfaceModel, title="", res=101) -> SvgMap:
    X, Y = model.bounds.grid(res)
    return SvgMap(model.bounds, title=title).contours(X, Y, model.elevation(X, Y))


def _surface_label(args) -> str:
    return args.dem or args.expr or args.surface


# --- commands -----------------------------------------------------------------

def cmd_ingest(args):
    if not os.path.exists(args.path):
        raise InputError(f"no such file: {args.path}")
    hf = load_dem(args.path)
    if args.smooth > 1:
        hf = mean_smooth(hf, args.smooth)
    _write(args, "heightfield.json", _dump(heightfield_to_json(hf)))
    model = SurfaceModel(hf)
    X, Y = np.meshgrid(hf.x, hf.y)
    svg = SvgMap(model.bounds, title=os.path.basename(args.path)).contours(X, Y, hf.elevations)
    _write(args, "heightfield.svg", svg.render())
    print(f"heightfield {hf.rows}x{hf.cols}, range [{hf.elevations.min():g}, {hf.elevations.max():g}]")


def cmd_curvature(args):
    model = build_surface(args)
    cf = curvature_field(model, _res(args, 201))
    b = model.bounds
    h = (b.width / (cf.K.shape[1] - 1), b.height / (cf.K.shape[0] - 1))
    out = {"Kmax": cf.Kmax, "K": grid_to_json(cf.K, h, (b.xmin, b.ymin)),
           "H": grid_to_json(cf.H, h, (b.xmin, b.ymin))}
    _write(args, "curvature.json", _dump(out))
    svg = SvgMap(b, title=f"gaussian curvature of {_surface_label(args)}").contours(cf.x, cf.y, cf.K)
    _write(args, "curvature.svg", svg.render())
    print(f"Kmax = {cf.Kmax:.6g}")


def cmd_imaging_surface(args):
    model = build_surface(args)
    s = imaging_surface(model, args.d, _res(args, 101))
    b = model.bounds
    h = (b.width / (s.x.shape[1] - 1), b.height / (s.x.shape[0] - 1))
    out = {"d": s.d, "invalid_count": int(np.count_nonzero(~s.valid)),
           "x": grid_to_json(s.points[..., 0], h, (b.xmin, b.ymin)),
           "y": grid_to_json(s.points[..., 1], h, (b.xmin, b.ymin)),
           "z": grid_to_json(s.points[..., 2], h, (b.xmin, b.ymin)),
           "valid": [int(v) for v in s.valid.ravel()]}
    _write(args, "imaging_surface.json", _dump(out))
    svg = _base_map(model, f"imaging surface d={args.d:g}")
    bad = ~s.valid
    if bad.any():
        svg.cells(s.x[bad], s.y[bad], min(h), color="#d22")
    _write(args, "imaging_surface.svg", svg.render())
    print(f"{out['invalid_count']} of {s.valid.size} imaging points below the surface")


def cmd_height_bound(args):
    try:
        f = compile_expression(args.f)
    except ExpressionError as exc:
        raise InputError(str(exc)) from None
    res = max_valid_height_1d(lambda x: f(x, 0.0), tuple(args.domain), args.tol, args.cap, args.res)
    _write(args, "height_bound.json", _dump({"f": args.f, "domain": list(args.domain), **res.to_dict()}))
    if res.bounded:
        print(f"D = {res.value:.4f}")
    else:
        print(f"D unbounded (no invalid imaging point up to d = {args.cap:g})")


def cmd_region(args):
    model = build_surface(args)
    params = build_params(args)
    reg = region(model, tuple(args.point), params, args.mode, N=args.N)
    out = {"params": params.to_dict(), "R": params.R, "region": reg.to_dict()}
    svg = _base_map(model, f"{args.mode} region")
    if isinstance(reg, MaskRegion):
        out["equivalent_radius"] = math.sqrt(reg.cell_count * reg.dx * reg.dy / math.pi)
        pts = reg.points
        out["max_radius"] = float(np.max(np.hypot(*(pts - np.asarray(reg.center)).T)))
        svg.cells(pts[:, 0], pts[:, 1], reg.dx, opacity=0.35)
    elif reg.kind == "polygon":
        svg.polyline(reg.vertices, stroke="#06c", closed=True)
    elif reg.kind == "ellipse":
        svg.ellipse(*reg.center, reg.major, reg.minor, reg.angle)
    else:
        svg.circle(*reg.center, reg.radius)
    svg.point(*reg.center)
    _write(args, "region.json", _dump(out))
    _write(args, "region.svg", svg.render())
    print(json.dumps({k: v for k, v in out.items() if k != "region"} | {"kind": reg.kind}, sort_keys=True))


def _plan_svg(model, plan: CapturePlan, title, segments=()):
    svg = _base_map(model, title)
    for c in plan.circles:
        svg.circle(c.x, c.y, c.r)
    for c in plan.circles:
        svg.point(c.x, c.y)
    for s in segments:
        svg.polyline([s.start, s.end], stroke="#06c", width=1.5)
    return svg


def cmd_plan(args):
    model = build_surface(args)
    ctx = PlanContext(model, build_params(args))
    spec, cfg = build_spec(args), build_solver(args)
    res = _res(args, 400)
    if args.algo == "batch":
        plan = batch_fill(ctx, spec, cfg, args.target, args.N0, args.n_max, res)
    else:
        plan = sequential_fill(ctx, spec, cfg, args.step, args.target, args.n_max, res)
    _write(args, "plan.json", plan.to_json() + "\n")
    _write(args, "plan_history.csv", plan.history_csv())
    _write(args, "plan.svg", _plan_svg(model, plan, f"{args.algo} fill, {spec.kind}").render())
    m = plan.metrics
    print(f"N = {len(plan.circles)}, coverage = {m['percent_covered']:.2f}%, status = {plan.status}")
    return EXIT_OK if plan.status == "reached" else EXIT_UNREACHED


def cmd_pareto(args):
    model = build_surface(args)
    ctx = PlanContext(model, build_params(args))
    front = pareto_front(ctx, args.N, build_solver(args), args.n_points)
    lines = ["lambda,f1,f2"] + [f"{p.lam!r},{p.f1!r},{p.f2!r}" for p in front]
    _write(args, "pareto.csv", "\n".join(lines) + "\n")
    out = [{"lambda": p.lam, "f1": p.f1, "f2": p.f2, "centers": p.X.tolist()} for p in front]
    _write(args, "pareto.json", _dump(out))
    print(f"{len(front)} nondominated points")


def cmd_divide(args):
    try:
        with open(args.plan, encoding="utf-8") as fh:
            plan = CapturePlan.from_dict(json.load(fh))
    except OSError as exc:
        raise InputError(f"cannot read plan: {exc}") from None
    except (KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"malformed plan file: {exc}") from None
    if not plan.circles:
        raise InputError("plan has no circles")
    if args.bounds:
        bounds = Bounds.from_list(args.bounds)
    elif "bounds" in plan.provenance:
        bounds = Bounds.from_list(plan.provenance["bounds"])
    else:
        raise InputError("plan carries no bounds; pass --bounds")
    labels = assign_points(plan.circles, bounds, _res(args, 400))
    segs = decision_boundaries(plan.circles)
    _write(args, "labels.json", labels.to_json() + "\n")
    _write(args, "labels.pgm", labels.to_pgm())
    _write(args, "boundaries.json", _dump([s.to_dict() for s in segs]))
    svg = SvgMap(bounds, title="surface division")
    for c in plan.circles:
        svg.circle(c.x, c.y, c.r)
    for s in segs:
        svg.polyline([s.start, s.end], stroke="#06c", width=1.5)
    _write(args, "divide.svg", svg.render())
    counts = labels.counts(len(plan.circles))
    print(f"{len(plan.circles)} regions, {int(np.count_nonzero(counts))} non-empty, "
          f"{labels.unassigned_count} unassigned cells, {len(segs)} boundaries")


def cmd_normals(args):
    z_range = tuple(args.z_range)
    if args.f:
        try:
            g = compile_expression(args.f)
        except ExpressionError as exc:
            raise InputError(str(exc)) from None
        dens = normal_density_curve(lambda x: g(x, 0.0), tuple(args.domain), z_range,
                                    _res(args, 200), args.n_rays, args.top)
        (x0, x1) = args.domain
        view = Bounds(x0, x1, *z_range)
        svg = SvgMap(view, title=f"normal density of {args.f}")
        xs = np.linspace(x0, x1, 400)
        svg.polyline(np.column_stack([xs, g(xs, 0.0)]))
    else:
        model = build_surface(args)
        dens = normal_density_surface(model, z_range, _res(args, 60), args.n_rays, args.top)
        svg = _base_map(model, "normal density (column maxima)")
    for pt in dens.suggested:
        svg.point(pt[0], pt[1], color="#c00", size=3)
    out = {"shape": list(dens.counts.shape), "max_count": int(dens.counts.max()),
           "suggested": dens.suggested.tolist(), "suggested_counts": dens.suggested_counts.tolist()}
    _write(args, "normals.json", _dump(out))
    _write(args, "normals.svg", svg.render())
    print(_dump(out["suggested"]).strip())


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    glob, surf, orth, solv = _global_args(), _surface_args(), _ortho_args(), _solver_args()
    parser = argparse.ArgumentParser(prog="orthocover", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[glob], help="load a PGM/PNG elevation map")
    p.add_argument("path")
    p.add_argument("--smooth", type=int, default=17, help="mean-filter window (odd; 1 = off)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("curvature", parents=[glob, surf], help="gaussian and mean curvature grids")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("imaging-surface", parents=[glob, surf], help="offset surface and validity mask")
    p.add_argument("--d", type=float, default=3.0)
    p.set_defaults(func=cmd_imaging_surface)

    p = sub.add_parser("height-bound", parents=[glob], help="largest valid imaging height of y=f(x)")
    p.add_argument("--f", required=True, help="expression in x")
    p.add_argument("--domain", type=float, nargs=2, default=[-2.0, 2.0])
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--cap", type=float, default=100.0)
    p.add_argument("--res", type=int, default=2001)
    p.set_defaults(func=cmd_height_bound)

    p = sub.add_parser("region", parents=[glob, surf, orth], help="orthographic region around a point")
    p.add_argument("--point", type=float, nargs=2, default=[0.0, 0.0])
    p.add_argument("--mode", default="exact", choices=REGION_MODES)
    p.add_argument("--N", type=int, default=16, help="polygon directions")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("plan", parents=[glob, surf, orth, solv], help="fill the surface with capture circles")
    p.add_argument("--algo", default="batch", choices=("batch", "sequential"))
    p.add_argument("--target", type=float, default=90.0, help="coverage target in percent")
    p.add_argument("--N0", type=int, default=1)
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--step", type=int, default=1, choices=(1, 2, 3))
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("pareto", parents=[glob, surf, orth, solv], help="overlap/coverage trade-off front")
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--n-points", type=int, default=5)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("divide", parents=[glob], help="assign ground cells to plan circles")
    p.add_argument("--plan", required=True, help="plan.json from the plan command")
    p.add_argument("--bounds", type=float, nargs="+", default=None)
    p.set_defaults(func=cmd_divide)

    p = sub.add_parser("normals", parents=[glob, surf], help="normal-ray density and suggested points")
    p.add_argument("--f", default=None, help="1D curve expression in x (otherwise the surface is used)")
    p.add_argument("--domain", type=float, nargs=2, default=[-2.0, 2.0])
    p.add_argument("--z-range", type=float, nargs=2, default=[-2.0, 4.0])
    p.add_argument("--n-rays", type=int, default=None)
    p.add_argument("--top", type=int, default=5)
    p.set_defaults(func=cmd_normals)
    parser.set_defaults(commands=sub.choices)
    return parser


def _config_dict(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config", "out_dir", "commands")}


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config: {exc}") from None
        if cfg.get("command", args.command) != args.command:
            raise InputError(f"config is for {cfg['command']!r}, not {args.command!r}")
        sub = args.commands[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(cfg) - known - {"command"}
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        sub.set_defaults(**{k: v for k, v in cfg.items() if k != "command"})
        args = parser.parse_args(argv)
    if getattr(args, "n_rays", "unset") is None:
        args.n_rays = 400 if args.f else 80
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        os.makedirs(args.out_dir, exist_ok=True)
        code = args.func(args)
        _write(args, "run_config.json", _dump(_config_dict(args)))
        return EXIT_OK if code is None else code
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ValueError, OSError, DEMFormatError, OutOfBoundsError, ExpressionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
