"""Command-line surface.

Subcommands: exact (single force value), curve (sweep to CSV), classic
(flat two-plate check), perturb (IR-cutoff demonstration), verify
(invariant suites), plot (CSV to SVG).  Owns every file format; the
physics modules stay print-free.

Exit codes: 0 success, 1 numerical or verification failure, 2 usage error.
Environment overrides: CASIMIR_REL_TOL and CASIMIR_KAPPA_MAX feed the
quadrature contract when the matching flags are absent (flags win over
environment, environment wins over defaults).

Determinism contract: every command's output is a pure function of its
flags, environment, and input files; curve output in particular does not
depend on --jobs.  Files are written atomically (temp file, then rename)
and use "\n" newlines regardless of platform.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict

from .errors import CasimirError, DomainError
from .greens import PlateConfig
from .quadrature import QuadratureSpec
from .stress_kernel import force_classic, force_exact, force_perturbative
from . import verify as verify_mod

_CSV_HEADER = "eta,f_eta,err_est,kappa_max,n_evals"


# ---------------------------------------------------------------------------
# Shared plumbing.


def _env_float(name: str) -> float | None:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise DomainError(f"environment variable {name} must be a number, got {raw!r}")


def _resolve_spec(args: argparse.Namespace) -> QuadratureSpec:
    rel = args.rel_tol if args.rel_tol is not None else _env_float("CASIMIR_REL_TOL")
    kmax = args.kappa_max if args.kappa_max is not None else _env_float("CASIMIR_KAPPA_MAX")
    kwargs = {}
    if rel is not None:
        kwargs["rel_tol"] = rel
    if kmax is not None:
        kwargs["kappa_max_policy"] = kmax
    return QuadratureSpec(**kwargs)


def _write_atomic(path: str, data: str) -> None:
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-curve-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _fmt(v: float) -> str:
    # repr of a Python float is the shortest round-trip decimal
    return repr(float(v))


# ---------------------------------------------------------------------------
# exact


def cmd_exact(args: argparse.Namespace) -> int:
    have_pair = args.a is not None or args.b is not None
    if (args.eta is None) == (not have_pair):
        raise DomainError("supply exactly one of --eta or the pair --a/--b")
    spec = _resolve_spec(args)
    a = None
    if args.eta is not None:
        eta = float(args.eta)
    else:
        if args.a is None or args.b is None:
            raise DomainError("--a and --b must be given together")
        cfg = PlateConfig(a=args.a, b=args.b)
        a, eta = cfg.a, cfg.eta
    r = force_exact(eta, spec)
    payload = r.as_dict()
    if a is not None:
        payload["t_xx"] = r.f_eta / (a * a)
    if args.json:
        print(json.dumps(payload, sort_keys=True))
        return 0
    print(f"eta       = {_fmt(r.eta)}")
    print(f"f(eta)    = {_fmt(r.f_eta)}")
    print(f"err_est   = {_fmt(r.err_est)}")
    print(f"kappa_max = {_fmt(r.kappa_max)}")
    print(f"n_evals   = {r.n_evals}")
    if a is not None:
        print(f"T_xx      = {_fmt(payload['t_xx'])}   (a = {_fmt(a)}, hbar = c = 1)")
    return 0


# ---------------------------------------------------------------------------
# curve


def _row_worker(packed: tuple[float, float, float, int, float | None]):
    eta, rel, ab, sub, kmax = packed
    spec = QuadratureSpec(rel_tol=rel, abs_tol=ab, max_subdivisions=sub, kappa_max_policy=kmax)
    r = force_exact(eta, spec)
    return (r.eta, r.f_eta, r.err_est, r.kappa_max, r.n_evals)


def _curve_grid(eta_min: float, eta_max: float, points: int, spacing: str) -> list[float]:
    if points < 2:
        raise DomainError(f"need at least 2 points, got {points}")
    if not (0.0 <= eta_min < eta_max) or not math.isfinite(eta_max):
        raise DomainError(f"need 0 <= eta_min < eta_max, got [{eta_min!r}, {eta_max!r}]")
    if spacing == "log":
        if eta_min <= 0.0:
            raise DomainError("log spacing requires eta_min > 0")
        ratio = eta_max / eta_min
        grid = [eta_min * ratio ** (i / (points - 1)) for i in range(points)]
    else:
        step = (eta_max - eta_min) / (points - 1)
        grid = [eta_min + step * i for i in range(points)]
    if any(y <= x for x, y in zip(grid, grid[1:])):
        raise DomainError("grid is not strictly increasing; reduce points or widen the range")
    return grid


def _load_cache(path: str) -> dict:
    if not os.path.exists(path):
        return {}
    with open(path, "r") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"cache file {path!r} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise DomainError(f"cache file {path!r} must hold a JSON object")
    return data


_ROW_FIELDS = ("eta", "f_eta", "err_est", "kappa_max", "n_evals")


def cmd_curve(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    grid = _curve_grid(args.eta_min, args.eta_max, args.points, args.spacing)
    if args.jobs < 1:
        raise DomainError(f"--jobs must be >= 1, got {args.jobs}")

    cache = _load_cache(args.cache) if args.cache else {}
    fp = spec.fingerprint()
    rows: dict[float, tuple] = {}
    misses: list[float] = []
    for eta in grid:
        entry = cache.get(f"{eta!r}|{fp}")
        if isinstance(entry, dict) and all(k in entry for k in _ROW_FIELDS):
            rows[eta] = tuple(entry[k] for k in _ROW_FIELDS)
        else:
            misses.append(eta)

    packed = [
        (eta, spec.rel_tol, spec.abs_tol, spec.max_subdivisions, spec.kappa_max_policy)
        for eta in misses
    ]
    if args.jobs > 1 and len(packed) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            computed = list(pool.map(_row_worker, packed))
    else:
        computed = [_row_worker(p) for p in packed]
    for eta, row in zip(misses, computed):
        rows[eta] = row
        cache[f"{eta!r}|{fp}"] = dict(zip(_ROW_FIELDS, row))

    lines = [_CSV_HEADER]
    for eta in grid:
        e, f, err, km, ne = rows[eta]
        lines.append(f"{_fmt(e)},{_fmt(f)},{_fmt(err)},{_fmt(km)},{int(ne)}")
    _write_atomic(args.out, "\n".join(lines) + "\n")
    if args.cache:
        _write_atomic(args.cache, json.dumps(cache, sort_keys=True) + "\n")
    print(f"wrote {len(grid)} rows to {args.out}" + (f" ({len(misses)} computed, {len(grid) - len(misses)} cached)" if args.cache else ""))
    return 0


# ---------------------------------------------------------------------------
# classic / perturb


def cmd_classic(args: argparse.Namespace) -> int:
    a = float(args.a)
    if not (math.isfinite(a) and a > 0.0):
        raise DomainError(f"--a must be > 0, got {a!r}")
    spec = _resolve_spec(args)
    numeric = force_classic(a, spec)
    analytic = -math.pi / (24.0 * a * a)
    rel = abs(numeric - analytic) / abs(analytic)
    print(f"numeric   = {_fmt(numeric)}")
    print(f"analytic  = {_fmt(analytic)}   (-pi/(24 a^2))")
    print(f"rel_diff  = {_fmt(rel)}")
    return 0 if rel <= 1e-8 else 1


def cmd_perturb(args: argparse.Namespace) -> int:
    a, b, k_min = float(args.a), float(args.b), float(args.k_min)
    if not (math.isfinite(a) and a > 0.0):
        raise DomainError(f"--a must be > 0, got {a!r}")
    if not (math.isfinite(b) and b >= 0.0):
        raise DomainError(f"--b must be >= 0, got {b!r}")
    if not (math.isfinite(k_min) and k_min > 0.0):
        raise DomainError(f"--k-min must be > 0, got {k_min!r}")
    spec = _resolve_spec(args)
    v1 = force_perturbative(a, b, k_min, spec)
    v2 = force_perturbative(a, b, k_min / 2.0, spec)
    print(f"k_min     = {_fmt(k_min)}  ->  {_fmt(v1)}")
    print(f"k_min/2   = {_fmt(k_min / 2.0)}  ->  {_fmt(v2)}")
    print(f"increase  = {_fmt(v2 - v1)}")
    print(f"ab/(2 pi) * ln 2 = {_fmt(a * b * math.log(2.0) / (2.0 * math.pi))}   (expected deep-IR step)")
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args: argparse.Namespace) -> int:
    checks = verify_mod.run(args.suite)
    all_passed = all(c.passed for c in checks)
    if args.json:
        print(
            json.dumps(
                {
                    "suite": args.suite,
                    "checks": [asdict(c) for c in checks],
                    "all_passed": all_passed,
                },
                sort_keys=True,
            )
        )
    else:
        for c in checks:
            tag = "PASS" if c.passed else "FAIL"
            extra = f"   ({c.detail})" if c.detail else ""
            print(f"[{tag}] {c.name}: measured={c.measured:.3e} threshold={c.threshold:.3e}{extra}")
        print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# plot


def _read_curve_csv(path: str) -> list[tuple]:
    with open(path, "r", newline="") as fh:
        text = fh.read()
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or lines[0] != _CSV_HEADER:
        raise DomainError(f"{path!r} is not a curve CSV (expected header {_CSV_HEADER!r})")
    if len(lines) < 2:
        raise DomainError(f"{path!r} has no data rows")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 5:
            raise DomainError(f"malformed CSV row: {ln!r}")
        try:
            rows.append(
                (float(parts[0]), float(parts[1]), float(parts[2]), float(parts[3]), int(parts[4]))
            )
        except ValueError:
            raise DomainError(f"malformed CSV row: {ln!r}")
    return rows


def _axis_transform(vals: list[float], log: bool, what: str) -> list[float]:
    if not log:
        return list(vals)
    if min(vals) <= 0.0:
        raise DomainError(f"log {what} axis needs strictly positive values")
    return [math.log10(v) for v in vals]


def _render_svg(rows: list[tuple], log_x: bool, log_y: bool) -> str:
    width, height = 800.0, 520.0
    ml, mr, mt, mb = 75.0, 25.0, 25.0, 55.0
    xs = _axis_transform([r[0] for r in rows], log_x, "x")
    ys = _axis_transform([r[1] for r in rows], log_y, "y")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(x: float) -> float:
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def py(y: float) -> float:
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb)

    def tick_label(t: float, log: bool) -> str:
        return f"{10.0 ** t:.4g}" if log else f"{t:.4g}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<line x1="{ml:.2f}" y1="{height - mb:.2f}" x2="{width - mr:.2f}" y2="{height - mb:.2f}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{ml:.2f}" y1="{mt:.2f}" x2="{ml:.2f}" y2="{height - mb:.2f}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for i in range(5):
        tx = x0 + (x1 - x0) * i / 4.0
        ty = y0 + (y1 - y0) * i / 4.0
        parts.append(
            f'<line x1="{px(tx):.2f}" y1="{height - mb:.2f}" x2="{px(tx):.2f}" '
            f'y2="{height - mb + 5.0:.2f}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px(tx):.2f}" y="{height - mb + 18.0:.2f}" font-size="11" '
            f'text-anchor="middle" font-family="sans-serif">{tick_label(tx, log_x)}</text>'
        )
        parts.append(
            f'<line x1="{ml - 5.0:.2f}" y1="{py(ty):.2f}" x2="{ml:.2f}" y2="{py(ty):.2f}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{ml - 8.0:.2f}" y="{py(ty) + 4.0:.2f}" font-size="11" '
            f'text-anchor="end" font-family="sans-serif">{tick_label(ty, log_y)}</text>'
        )
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts.append(
        f'<polyline fill="none" stroke="#1f6fb4" stroke-width="1.5" points="{pts}"/>'
    )
    xlabel = "eta (log scale)" if log_x else "eta"
    ylabel = "f(eta) (log scale)" if log_y else "f(eta)"
    parts.append(
        f'<text x="{(ml + width - mr) / 2.0:.2f}" y="{height - 12.0:.2f}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{(mt + height - mb) / 2.0:.2f}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 16 {(mt + height - mb) / 2.0:.2f})">'
        f"{ylabel}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(args: argparse.Namespace) -> int:
    rows = _read_curve_csv(args.input)
    svg = _render_svg(rows, args.log_x, args.log_y)
    _write_atomic(args.output, svg)
    print(f"wrote {args.output} ({len(rows)} points)")
    return 0


# ---------------------------------------------------------------------------
# parser wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir-plate",
        description="Vacuum stress on a single plate in a linear confining background.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--rel-tol", type=float, default=None,
                     help="quadrature relative tolerance (default 1e-9; env CASIMIR_REL_TOL)")
    tol.add_argument("--kappa-max", type=float, default=None,
                     help="fixed momentum cutoff instead of the adaptive one (env CASIMIR_KAPPA_MAX)")

    p = sub.add_parser("exact", parents=[tol], help="force coefficient at one eta")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--a", type=float, default=None, help="plate height")
    p.add_argument("--b", type=float, default=None, help="potential slope")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("curve", parents=[tol], help="sweep eta and write a CSV")
    p.add_argument("--eta-min", type=float, required=True)
    p.add_argument("--eta-max", type=float, required=True)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--spacing", choices=("log", "lin"), default="log")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache", default=None, help="JSON result cache, keyed by eta and tolerance")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("classic", parents=[tol], help="flat two-plate force against -pi/(24 a^2)")
    p.add_argument("--a", type=float, required=True)
    p.set_defaults(func=cmd_classic)

    p = sub.add_parser("perturb", parents=[tol], help="IR-cutoff dependence of the perturbative estimate")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--k-min", type=float, required=True)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=("airy", "greens", "stress", "all"), default="all")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a curve CSV as an SVG chart")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--log-x", action="store_true")
    p.add_argument("--log-y", action="store_true")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return int(args.func(args))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CasimirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
