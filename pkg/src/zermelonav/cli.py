"""Command-line front end.

Verbs:

    validate    sample the mild-flow condition; nonzero exit on violations
    field       CSV grid and SVG of flow arrows and speed contours
    geodesics   classical and generalized geodesic fans (CSV + SVG)
    indicatrix  unit indicatrices and reachable sets (CSV + SVG)
    compare     classical vs generalized transit times to targets (CSV)

Exit status: 0 success, 1 validation failure (or a navigation error),
2 malformed configuration.  Identical invocations produce byte-identical
CSV files.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .analysis import lemma_transit_comparison, reachable_set, sample_indicatrix
from .config import ProblemConfig, load_problem
from .csvio import (COMPARE_HEADER, FIELD_HEADER, INDICATRIX_HEADER,
                    TRAJECTORY_HEADER, trajectory_rows, write_csv)
from .errors import ConfigError, ZermeloError
from .fields import Point2, Tangent2, heading_grid
from .randers import RandersMetric
from .spray import SprayField, StepControl, integrate_fan
from .svgplot import SvgPlot, contour_segments


def _parse_point(text: str) -> Point2:
    try:
        sx, sy = text.split(",")
        return Point2(float(sx), float(sy))
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(
            f"expected 'x,y' coordinates, got {text!r}") from None


def _parse_pair(text: str) -> tuple[Point2, Point2]:
    try:
        start, end = text.split(":")
        return _parse_point(start), _parse_point(end)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'x0,y0:x1,y1', got {text!r}") from None


def _parse_angle(text: str) -> float:
    """Angle spec: 'pi/9', 'pi', or a plain number in radians."""
    t = text.strip().lower()
    try:
        if t == "pi":
            return math.pi
        if t.startswith("pi/"):
            return math.pi / float(t[3:])
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad angle spec {text!r}") from None


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _control(args) -> StepControl:
    rtol = args.tol
    return StepControl(rtol=rtol, atol=rtol * 1e-3)


def _metrics(cfg: ProblemConfig) -> tuple[RandersMetric, RandersMetric]:
    """(classical, generalized) metric pair on the configured domain."""
    return (RandersMetric(cfg.data.with_unit_speed(), tag="classical"),
            RandersMetric(cfg.data, tag="generalized"))


def _wind_arrows(plot: SvgPlot, cfg: ProblemConfig, n: int = 12,
                 scale: float = 0.35) -> None:
    dom = cfg.data.domain
    for x, y in dom.grid(n, n):
        w1, w2 = cfg.data.wind.value(Point2(x, y))
        if math.hypot(w1, w2) < 1e-12:
            continue
        plot.arrow(x, y, x + scale * w1, y + scale * w2, cls="wind")


# -- verbs ---------------------------------------------------------------------


def cmd_validate(args) -> int:
    cfg = load_problem(args.config)
    report = cfg.data.validate_convexity(args.grid, args.grid)
    if report.ok:
        print(f"OK: mild-flow condition holds at all {report.n_samples} samples")
        return 0
    print(f"FAIL: {len(report.violations)} of {report.n_samples} samples "
          "violate the mild-flow condition")
    for v in report.violations:
        print(f"  ({v.point.x}, {v.point.y}): |W|={v.wind_norm} speed={v.speed}")
    return 1


def cmd_field(args) -> int:
    cfg = load_problem(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dom = cfg.data.domain
    n = args.grid

    rows = []
    for x, y in dom.grid(n, n):
        p = Point2(x, y)
        w1, w2 = cfg.data.wind.value(p)
        wn = cfg.data.h_norm(p, Tangent2(w1, w2))
        u = cfg.data.speed.value(p)
        rows.append((x, y, w1, w2, wn, u, u - wn))
    write_csv(out / "field.csv", FIELD_HEADER, rows)

    plot = SvgPlot(dom.xmin, dom.xmax, dom.ymin, dom.ymax)
    xs = [dom.xmin + (dom.xmax - dom.xmin) * i / (n - 1) for i in range(n)]
    ys = [dom.ymin + (dom.ymax - dom.ymin) * j / (n - 1) for j in range(n)]
    speeds = [[cfg.data.speed.value(Point2(x, y)) for x in xs] for y in ys]
    smin = min(min(r) for r in speeds)
    smax = max(max(r) for r in speeds)
    if smax > smin:
        for k in range(1, 6):
            level = smin + (smax - smin) * k / 6
            for (a, b) in contour_segments(xs, ys, speeds, level):
                plot.polyline([a, b], cls="contour")
    _wind_arrows(plot, cfg, n=min(n, 15))
    plot.write(out / "field.svg")
    print(f"wrote {out / 'field.csv'} and {out / 'field.svg'}")
    return 0


def cmd_geodesics(args) -> int:
    cfg = load_problem(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    control = _control(args)
    n = max(1, round(2.0 * math.pi / args.dphi))
    phis = [2.0 * math.pi * k / n for k in range(n)]

    rows = []
    fans = {}
    for metric in _metrics(cfg):
        spray = SprayField(metric)
        fans[metric.tag] = integrate_fan(spray, args.p0, phis, args.t_end,
                                         control)
        for phi, traj in zip(phis, fans[metric.tag]):
            rows.extend(trajectory_rows(traj, metric.tag, phi))
    write_csv(out / "geodesics.csv", TRAJECTORY_HEADER, rows)

    dom = cfg.data.domain
    plot = SvgPlot(dom.xmin, dom.xmax, dom.ymin, dom.ymax)
    _wind_arrows(plot, cfg)
    for tag in ("classical", "generalized"):
        for traj in fans[tag]:
            plot.polyline([(s.p.x, s.p.y) for s in traj.states], cls=tag)
    plot.marker(args.p0.x, args.p0.y)
    plot.write(out / "geodesics.svg")

    failures = sum(1 for tag in fans for tr in fans[tag]
                   if tr.reason != "time_reached")
    note = f" ({failures} headings terminated early)" if failures else ""
    print(f"wrote {out / 'geodesics.csv'} and {out / 'geodesics.svg'}{note}")
    return 0


def cmd_indicatrix(args) -> int:
    cfg = load_problem(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    control = _control(args)
    phis = heading_grid(args.headings)

    rows = []
    curves = []
    for metric in _metrics(cfg):
        ind = sample_indicatrix(metric, args.p0, args.headings)
        for phi, vec in zip(ind.headings, ind.vectors):
            rows.append(("indicatrix", metric.tag, 0.0, phi, "ok",
                         vec.u, vec.v))
        curves.append(("indicatrix", metric.tag, 0.0,
                       [(args.p0.x + v.u, args.p0.y + v.v)
                        for v in ind.vectors]))
        spray = SprayField(metric)
        for t in args.horizons:
            rs = reachable_set(spray, args.p0, t, phis, control)
            pts = []
            for phi, end, reason in zip(phis, rs.endpoints, rs.reasons):
                if end is None:
                    rows.append(("reachable", metric.tag, t, phi, reason,
                                 None, None))
                else:
                    rows.append(("reachable", metric.tag, t, phi, "ok",
                                 end.x, end.y))
                    pts.append((end.x, end.y))
            curves.append(("reachable", metric.tag, t, pts))
    write_csv(out / "indicatrix.csv", INDICATRIX_HEADER, rows)

    dom = cfg.data.domain
    plot = SvgPlot(dom.xmin, dom.xmax, dom.ymin, dom.ymax)
    _wind_arrows(plot, cfg)
    for kind, tag, _t, pts in curves:
        if len(pts) > 1:
            closed = pts + [pts[0]]
            cls = f"{tag} dotted" if kind == "indicatrix" else tag
            plot.polyline(closed, cls=cls)
    plot.marker(args.p0.x, args.p0.y)
    plot.write(out / "indicatrix.svg")
    print(f"wrote {out / 'indicatrix.csv'} and {out / 'indicatrix.svg'}")
    return 0


def cmd_compare(args) -> int:
    cfg = load_problem(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    control = _control(args)

    rows = []
    for p0, target in args.pair:
        cmp = lemma_transit_comparison(cfg.data, p0, target,
                                       tolerance=args.tolerance,
                                       t_max=args.t_max, control=control)
        rows.append((p0.x, p0.y, target.x, target.y,
                     cmp.t_classical, cmp.t_generalized, cmp.gap, cmp.flag))
        print(f"({p0.x},{p0.y}) -> ({target.x},{target.y}): "
              f"T_classical={cmp.t_classical} T_generalized={cmp.t_generalized} "
              f"[{cmp.flag}]")
    write_csv(out / "compare.csv", COMPARE_HEADER, rows)
    print(f"wrote {out / 'compare.csv'}")
    return 0


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zermelonav",
        description="Time-optimal navigation in planar flow fields "
                    "with space-dependent ship speed.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--config", required=True, help="problem document path")
        if out:
            p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="relative integration tolerance")

    p = sub.add_parser("validate", help="check the mild-flow condition")
    common(p, out=False)
    p.add_argument("--grid", type=int, default=41,
                   help="samples per axis (>= 2)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("field", help="export the flow and speed fields")
    common(p)
    p.add_argument("--grid", type=int, default=21)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("geodesics", help="geodesic fans for both problems")
    common(p)
    p.add_argument("--p0", type=_parse_point, default=Point2(0.0, 0.0))
    p.add_argument("--dphi", type=_parse_angle, default=math.pi / 9,
                   help="heading increment, e.g. 'pi/9'")
    p.add_argument("--t-end", type=float, default=5.0)
    p.set_defaults(func=cmd_geodesics)

    p = sub.add_parser("indicatrix",
                       help="unit indicatrices and reachable sets")
    common(p)
    p.add_argument("--p0", type=_parse_point, default=Point2(0.0, 0.0))
    p.add_argument("--horizons", type=_parse_floats, default=[1.0, 2.0])
    p.add_argument("--headings", type=int, default=64)
    p.set_defaults(func=cmd_indicatrix)

    p = sub.add_parser("compare", help="transit-time comparison to targets")
    common(p)
    p.add_argument("--pair", type=_parse_pair, action="append", required=True,
                   metavar="X0,Y0:X1,Y1", help="start and target (repeatable)")
    p.add_argument("--tolerance", type=float, default=1e-3,
                   help="required arrival accuracy")
    p.add_argument("--t-max", type=float, default=6.0,
                   help="shooting time horizon")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except ZermeloError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
