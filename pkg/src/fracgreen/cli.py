"""Command-line front end.

Subcommands::

    fracgreen green-td --alpha 1.5 --r-range 0.1:3:30 --dt-range 1:1:1 --out td.csv
    fracgreen green-ti --alpha 1.5 --energy 1 --r-range 0.5:20:40 --out ti.csv
    fracgreen born     --alpha 2 --potential '{"kind":"gaussian","v0":0.3,"sigma":0.5}' --order 2 --out run
    fracgreen hfun     --spec "1,0,0,1; ; 0:1" --z 1
    fracgreen verify   --select 1,td-alpha2-reduction --out report.json

Ranges are ``a:b:n`` (n points from a to b inclusive) or a single value.

H-function spec grammar (``hfun --spec``)::

    spec   := orders ";" pairs ";" pairs
    orders := m "," n "," p "," q
    pairs  := empty | pair ("," pair)*
    pair   := number ":" number

Numbers are integers, decimals or fractions like ``-1/3`` and are read
exactly.  ``"1,0,0,1; ; 0:1"`` is exp(-z).

Defaults are natural units (hbar = 1, D_alpha = 1).  Output files start
with the artifact version and a JSON echo of the configuration; CSV
numbers use 17 significant digits, so identical configurations give
byte-identical files.  Exit codes: 0 ok, 2 configuration error, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .errors import ConditionsViolated, FracGreenError, InapplicableExpansion
from .foxh import characteristics, eval_residues, eval_series, evaluate, parse_spec, transform_power, validate
from .green_td import FractionalParams, SpacetimeSeparation, green_td
from .green_ti import TIContext, green_ti
from .scattering import (
    PotentialSpec,
    QuadSpec,
    ScatteringGeometry,
    born_series,
    initial_field,
    momentum_transfer,
    scattering_amplitude,
    square_grid,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> n points from a to b; ``a`` -> [a]."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ConfigError(f"range {text!r} needs n >= 1")
            return np.linspace(a, b, n)
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}: {exc}") from None
    raise ConfigError(f"bad range {text!r} (expected a:b:n)")


def load_potential(text: str) -> PotentialSpec:
    """Inline JSON object or path to a JSON file."""
    text = text.strip()
    try:
        data = json.loads(text) if text.startswith("{") else json.loads(Path(text).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read potential: {exc}") from None
    try:
        return PotentialSpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid potential: {exc}") from None


def params_from_args(args) -> FractionalParams:
    if args.d_alpha is not None and args.mass is not None:
        raise ConfigError("give either --d-alpha or --mass/--cbar, not both")
    if args.cbar is not None and args.mass is None:
        raise ConfigError("--cbar needs --mass")
    try:
        if args.mass is not None:
            cbar = 1.0 if args.cbar is None else args.cbar
            return FractionalParams.from_mass(args.alpha, args.mass, cbar, args.hbar)
        return FractionalParams(args.alpha, 1.0 if args.d_alpha is None else args.d_alpha, args.hbar)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def config_echo(args) -> dict:
    # worker count and plotting do not change the data
    d = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "workers", "no_plot")}
    return {"command": d.pop("command"), **d}


# ---------------------------------------------------------------------------
# output


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v) + 0.0, ".17g")  # folds -0.0 into 0


def write_table(path: Optional[Path], fmt_kind: str, columns: Sequence[str], rows: List[Sequence], echo: dict, extra: Optional[dict] = None):
    """CSV or JSON table with version and config header."""
    if fmt_kind == "json":
        doc = {"version": __version__, "config": echo, "columns": list(columns), "rows": [[_json_num(v) for v in r] for r in rows]}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        lines = [f"# fracgreen {__version__}", "# config: " + json.dumps(echo, sort_keys=True)]
        if extra:
            for k in sorted(extra):
                lines.append(f"# {k}: " + json.dumps(extra[k], sort_keys=True))
        lines.append(",".join(columns))
        lines += [",".join(fmt(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _json_num(v):
    if isinstance(v, str):
        return v
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def _out_path(args, suffix: str = "") -> Optional[Path]:
    if args.out is None:
        return None
    p = Path(args.out)
    ext = "." + args.format
    if suffix:
        stem = p.with_suffix("") if p.suffix == ext else p
        return stem.parent / f"{stem.name}_{suffix}{ext}"
    return p if p.suffix else p.with_suffix(ext)


def _plots(args) -> bool:
    return args.out is not None and not args.no_plot


# ---------------------------------------------------------------------------
# sweeps (module-level workers so they pickle)


def _td_row(job):
    r, dt, pkw, method, tol, max_terms = job
    params = FractionalParams(**pkw)
    kw = {"max_terms": max_terms} if method in ("series", "auto") and max_terms else {}
    try:
        res = green_td(SpacetimeSeparation(r, dt), params, method=method, tol=tol, **kw)
    except FracGreenError as exc:
        return ("error", f"(r={r!r}, dt={dt!r}): {exc}")
    return (r, dt, res.value.real, res.value.imag, res.abs_err_estimate, res.method)


def _ti_row(job):
    r, pkw, energy, method, tol = job
    ctx = TIContext(FractionalParams(**pkw), energy)
    try:
        res = green_ti(r, ctx, "plus", method, tol)
    except FracGreenError as exc:
        return ("error", f"(r={r!r}): {exc}")
    v = res.value
    return (r, v.real, v.imag, v.real, res.abs_err_estimate, res.method)


def _map(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def _check_rows(rows):
    for row in rows:
        if row[0] == "error":
            raise FracGreenError("numeric failure at " + row[1])
    return rows


def _pkw(p: FractionalParams) -> dict:
    return {"alpha": p.alpha, "d_alpha": p.d_alpha, "hbar": p.hbar}


# ---------------------------------------------------------------------------
# commands


def cmd_green_td(args) -> int:
    params = params_from_args(args)
    rs = parse_range(args.r_range)
    dts = parse_range(args.dt_range)
    if np.any(rs < 0):
        raise ConfigError("r must be non-negative")
    jobs = [(float(r), float(dt), _pkw(params), args.method, args.tol, args.max_terms) for dt in dts for r in rs]
    rows = _check_rows(_map(_td_row, jobs, args.workers))
    cols = ("r", "dt", "re_G", "im_G", "abs_err", "method")
    out = _out_path(args)
    write_table(out, args.format, cols, rows, config_echo(args))
    if _plots(args):
        from .plotting import plot_td_sweep

        plot_td_sweep(rows, out.with_suffix(".png"), params.alpha)
    return EXIT_OK


def cmd_green_ti(args) -> int:
    params = params_from_args(args)
    rs = parse_range(args.r_range)
    if np.any(rs <= 0):
        raise ConfigError("r must be positive (G+ is singular at r = 0)")
    if not args.energy > 0:
        raise ConfigError("energy must be positive")
    jobs = [(float(r), _pkw(params), args.energy, args.method, args.tol) for r in rs]
    rows = _check_rows(_map(_ti_row, jobs, args.workers))
    cols = ("r", "re_Gplus", "im_Gplus", "re_G", "abs_err", "method")
    out = _out_path(args)
    write_table(out, args.format, cols, rows, config_echo(args))
    if _plots(args):
        from .plotting import plot_ti_sweep

        plot_ti_sweep(rows, out.with_suffix(".png"), params.alpha)
    return EXIT_OK


def cmd_born(args) -> int:
    params = params_from_args(args)
    if args.potential is None:
        raise ConfigError("born needs --potential")
    if not args.energy > 0:
        raise ConfigError("energy must be positive")
    if args.order < 1:
        raise ConfigError("--order must be at least 1")
    pot = load_potential(args.potential)
    ctx = TIContext(params, args.energy)
    geom = ScatteringGeometry.from_context(ctx, args.direction)
    rv = pot.extent()
    half = args.half_width if args.half_width is not None else 2.0 * rv
    dx = args.dx if args.dx is not None else min(pot.feature_length() / 4, math.pi / (4 * ctx.k_mag))
    if not (half > 0 and dx > 0):
        raise ConfigError("--half-width and --dx must be positive")
    if half / dx > 2048:
        raise ConfigError(f"grid too large ({2 * math.ceil(half / dx)} nodes per side)")
    if args.green == "td" and args.t is None:
        raise ConfigError("--green td needs --t")
    x, y = square_grid(half, dx)
    f0 = initial_field(x, y, geom, ctx, pot, args.t if args.green == "td" else None)
    fields = born_series(f0, args.green, pot, ctx, args.order)
    echo = config_echo(args)
    extra = {"grid": {"half_width": half, "dx": dx, "nodes": len(x)}}
    field_cols = ("x", "y", "re_phi", "im_phi", "abs_phi")
    for f in fields[1:]:
        X, Y = f.mesh()
        v = f.values
        rows = zip(X.ravel(), Y.ravel(), v.real.ravel(), v.imag.ravel(), np.abs(v).ravel())
        write_table(_out_path(args, f"order{f.order}"), args.format, field_cols, list(rows), echo, {**extra, "order": f.order})
    # successive-difference norms: |phi(n) - phi(n-1)| scales as V0^n
    diffs = [float(np.max(np.abs(b.values - a.values))) for a, b in zip(fields, fields[1:])]
    orow = [(n + 1, d, d / diffs[n - 1] if n and diffs[n - 1] else 0.0) for n, d in enumerate(diffs)]
    write_table(_out_path(args, "orders"), args.format, ("order", "max_abs_increment", "ratio_to_previous"), orow, echo, extra)
    thetas = parse_range(args.theta_range)
    arows = []
    for th in thetas:
        g = ScatteringGeometry.from_context(ctx, args.direction, float(th))
        q = momentum_transfer(g, ctx)
        a = scattering_amplitude(float(th), ctx, pot, QuadSpec(), args.direction)
        arows.append((float(th), q, a.real, a.imag, abs(a)))
    write_table(_out_path(args, "amplitude"), args.format, ("theta", "q", "re_f", "im_f", "abs_f"), arows, echo)
    if _plots(args):
        from .plotting import plot_amplitude, plot_field

        for f in fields[1:]:
            plot_field(f, _out_path(args, f"order{f.order}").with_suffix(".png"))
        plot_amplitude(arows, _out_path(args, "amplitude").with_suffix(".png"))
    return EXIT_OK


def cmd_hfun(args) -> int:
    try:
        spec = parse_spec(args.spec)
    except ValueError as exc:
        raise ConfigError(f"invalid spec: {exc}") from None
    bad = [v for v in validate(spec) if v.condition == "degenerate" or (args.method == "series" and v.condition != "condition3")]
    if bad:
        names = sorted({v.condition for v in bad})
        print("invalid spec: " + ", ".join(names), file=sys.stderr)
        for v in bad[:10]:
            print(f"  {v}", file=sys.stderr)
        return EXIT_CONFIG
    fn = {"series": eval_series, "residues": eval_residues, "auto": evaluate}[args.method]
    zs = parse_range(args.z)
    k = args.property_k
    rows = []
    for z in zs:
        res = fn(spec, float(z), args.tol)
        # H(z) = k H'(z^k) with H' the power-transformed spec, any k > 0
        alt = fn(transform_power(spec, k), float(z) ** k, args.tol)
        dev = abs(k * alt.value - res.value)
        scale = max(abs(res.value), 1e-300)
        ok = dev <= max(1e-12 * scale, 10 * (res.abs_err_estimate + k * alt.abs_err_estimate))
        rows.append((float(z), res.value.real, res.value.imag, res.abs_err_estimate, res.method, "true" if ok else "false"))
    ch = characteristics(spec)
    extra = {"characteristics": {"delta": ch.delta, "delta_star": ch.delta_star, "little_delta": ch.little_delta, "mu": ch.mu}}
    write_table(_out_path(args), args.format, ("z", "re_H", "im_H", "abs_err", "method", "power_property_ok"), rows, config_echo(args), extra)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import resolve, run_checks

    sel = [s for s in args.select.split(",") if s.strip()] if args.select else None
    try:
        resolve(sel)
    except KeyError as exc:
        raise ConfigError(str(exc)) from None
    results = run_checks(sel, echo=lambda line: print(line, file=sys.stderr))
    doc = {
        "version": __version__,
        "config": config_echo(args),
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if doc["passed"] else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# argument parser


def _common(p, physics: bool = True):
    if physics:
        p.add_argument("--alpha", type=float, default=2.0, help="Levy index in (1, 2]")
        p.add_argument("--d-alpha", type=float, default=None, help="generalized coefficient D_alpha (default 1)")
        p.add_argument("--mass", type=float, default=None, help="particle mass; D_alpha from mass and --cbar")
        p.add_argument("--cbar", type=float, default=None, help="velocity scale paired with --mass (default 1)")
        p.add_argument("--hbar", type=float, default=1.0)
        p.add_argument("--energy", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-16, help="relative series tolerance")
    p.add_argument("--out", default=None, help="output file (stdout if omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-plot", action="store_true", help="skip the figures written next to --out")
    p.add_argument("--workers", type=int, default=1, help="processes for sweeps (output order is fixed)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracgreen", description="Green's functions of the 2D space-fractional Schrodinger equation")
    ap.add_argument("--version", action="version", version=f"fracgreen {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("green-td", help="time-dependent Green's function on an (r, dt) grid")
    _common(p)
    p.add_argument("--r-range", default="0.1:3:10")
    p.add_argument("--dt-range", default="1")
    p.add_argument("--method", choices=("auto", "series", "hform", "asymptotic"), default="series")
    p.add_argument("--max-terms", type=int, default=1_000_000)
    p.set_defaults(func=cmd_green_td)

    p = sub.add_parser("green-ti", help="time-independent G+ and principal-value G on an r grid")
    _common(p)
    p.add_argument("--r-range", default="0.5:10:20")
    p.add_argument("--method", choices=("series", "asymptotic"), default="series")
    p.add_argument("--max-terms", type=int, default=None, help="unused; accepted for a uniform interface")
    p.set_defaults(func=cmd_green_ti)

    p = sub.add_parser("born", help="Born-series fields and first-Born amplitudes")
    _common(p)
    p.add_argument("--potential", default=None, help="inline JSON or path to a JSON file")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--green", choices=("ti", "td"), default="ti")
    p.add_argument("--t", type=float, default=None, help="time slice for --green td")
    p.add_argument("--direction", type=float, default=0.0, help="incidence angle (radians)")
    p.add_argument("--half-width", type=float, default=None, help="grid half width (default 2 R_V)")
    p.add_argument("--dx", type=float, default=None)
    p.add_argument("--theta-range", default="0:3.141592653589793:13")
    p.add_argument("--max-terms", type=int, default=None, help="unused; accepted for a uniform interface")
    p.set_defaults(func=cmd_born)

    p = sub.add_parser("hfun", help="evaluate a Fox H-function from a text spec")
    _common(p, physics=False)
    p.add_argument("--spec", required=True)
    p.add_argument("--z", default="1")
    p.add_argument("--method", choices=("series", "residues", "auto"), default="auto")
    p.add_argument("--property-k", type=float, default=2.0, help="k used for the power-property consistency flag")
    p.set_defaults(func=cmd_hfun)

    p = sub.add_parser("verify", help="run the oracle acceptance suite")
    p.add_argument("--select", default=None, help="comma-separated check ids or names")
    p.add_argument("--out", default=None, help="JSON report path (stdout if omitted)")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConditionsViolated as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InapplicableExpansion as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FracGreenError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
