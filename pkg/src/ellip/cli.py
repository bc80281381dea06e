"""Command-line entry point: ``ellip solve|validate|bench|classify``.

Exit codes for ``solve``: 0 success, 1 configuration error, 2 non-contractive
series, 3 conformal map failed the univalence check.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from . import classification as classify_mod
from . import operators, solver, validation
from ._validation import as_map, check_grid, check_int, check_positive, check_tau, default_angular
from .conformal import BoundaryDataSpec, transport_boundary, univalence_check
from .exceptions import DerivativeVanishes, ModeOverflow, NonContractive, SampleCountMismatch
from .field import PolarGrid, to_csv

EXIT_OK, EXIT_CONFIG, EXIT_NONCONTRACTIVE, EXIT_MAP = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _err(msg: str) -> None:
    print(f"ellip: {msg}", file=sys.stderr)


def load_config(path) -> dict:
    """Parse and validate a solve configuration; raises :class:`ConfigError` naming the field."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config: file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc})")
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a JSON object")
    try:
        cfg = {}
        cfg["tau"] = check_tau(raw.get("tau"), "tau")
        cfg["tol"] = check_positive(raw.get("tol", 1e-9), "tol")
        cfg["n_max"] = check_int(raw.get("n_max", 500), "n_max")
        cfg["seed"] = check_int(raw.get("seed", 0), "seed")
        grid = raw.get("grid", {})
        if not isinstance(grid, dict):
            raise ValueError("grid: must be an object with J, M, K_max")
        K = grid.get("K_max", 48)
        M = grid.get("M", default_angular(K) if isinstance(K, int) and not isinstance(K, bool) else None)
        cfg["grid"] = check_grid(grid.get("J", 64), M, K)
        try:
            cfg["map"] = as_map(raw.get("map"))
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"map: {exc}")
        if "boundary" not in raw:
            raise ValueError("boundary: missing")
        try:
            cfg["boundary"] = BoundaryDataSpec.from_dict(raw["boundary"])
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"boundary: {exc}")
        va = raw.get("validate_against")
        if va not in (None, "exact"):
            raise ValueError(f"validate_against: expected 'exact' or null, got {va!r}")
        if va == "exact" and cfg["boundary"].kind != "exact":
            raise ValueError("validate_against: 'exact' requires an exact boundary spec")
        cfg["validate_against"] = va
        alpha = raw.get("alpha", cfg["boundary"].alpha)
        if alpha is not None and not (isinstance(alpha, (int, float)) and 0 < alpha < 1):
            raise ValueError(f"alpha: must lie in (0, 1), got {alpha!r}")
        cfg["alpha"] = alpha
        out = raw.get("output", {})
        if not isinstance(out, dict):
            raise ValueError("output: must be an object")
        base = path.parent
        cfg["solution_csv"] = base / out.get("solution_csv", "solution.csv")
        cfg["report_json"] = base / out.get("report_json", "report.json")
        cfg["xy_csv"] = base / out["xy_csv"] if out.get("xy_csv") else None
    except ValueError as exc:
        raise ConfigError(str(exc))
    return cfg


def cmd_solve(config_path) -> int:
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    omega = cfg["map"]
    uni = univalence_check(omega)
    if not uni.passed:
        _err("map: univalence check failed: " + "; ".join(uni.reasons))
        return EXIT_MAP
    J, M, K = cfg["grid"]
    grid = PolarGrid(J, M, K)
    tau = cfg["tau"]
    spec = cfg["boundary"]
    try:
        H = transport_boundary(spec, omega, M, K, tau=tau)
        S, report = solver.run(
            H, omega, tau, tol=cfg["tol"], n_max=cfg["n_max"], grid=grid,
            residual_points=solver.interior_points(20, cfg["seed"]), alpha=cfg["alpha"],
        )
    except (SampleCountMismatch, ModeOverflow) as exc:
        _err(f"boundary: {exc}")
        return EXIT_CONFIG
    except DerivativeVanishes as exc:
        _err(f"map: {exc}")
        return EXIT_MAP
    except NonContractive as exc:
        _err(f"series: {exc}")
        return EXIT_NONCONTRACTIVE
    if cfg["validate_against"] == "exact":
        report.interior_error = solver.interior_error(
            S, spec.exact_function(tau), 100, cfg["seed"], omega=None if omega.is_identity else omega)
    doc = report.to_dict(timings=False)
    doc["univalence"] = uni.to_dict()
    doc["map"] = omega.to_dict()
    out = {"report": doc, "timings": report.timings}
    cfg["report_json"].parent.mkdir(parents=True, exist_ok=True)
    cfg["report_json"].write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    to_csv(S, cfg["solution_csv"])
    if cfg["xy_csv"] is not None:
        to_csv(S, cfg["xy_csv"], mapping=omega)
    print(f"m={report.m} boundary_error={report.boundary_error:.3g} residual={report.residual:.3g}"
          + (f" interior_error={report.interior_error:.3g}" if report.interior_error is not None else ""))
    return EXIT_OK


def cmd_validate(J: int = 48, K_max: int = 24, M: int | None = None) -> int:
    results = validation.run_suites(J, K_max, M)
    print(validation.format_table(results))
    return EXIT_OK if all(r.passed for r in results) else 1


def _time(fn, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(sizes, out_path="bench.csv", seed: int = 0) -> int:
    rows = []
    for s in sizes:
        K = max(1, s // 2)
        grid = PolarGrid.for_modes(s, K)
        rng = np.random.default_rng(seed)
        phi = operators.random_field(grid, rng, min(6, K))
        operators.radial_integrator(grid)
        for name, op in (("K", operators.apply_K), ("Kz", operators.apply_Kz), ("Kzbar", operators.apply_Kzbar)):
            rows.append((name, s, K, _time(lambda: op(phi))))
        spec = BoundaryDataSpec.from_exact([0, 0, 0, 1], [0, 0, 1], 0.5)
        H = transport_boundary(spec, None, grid.M, K)
        rows.append(("run", s, K, _time(lambda: solver.run(H, None, 0.5, 1e-9, 500, grid), 1)))
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["op", "J", "Kmax", "seconds"])
        for op, J, K, t in rows:
            w.writerow([op, J, K, f"{t:.6f}"])
    for op, J, K, t in rows:
        print(f"{op:6s} J={J:<4d} Kmax={K:<4d} {t:.6f}s")
    return EXIT_OK


def _parse_complex(text: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def cmd_classify(a: complex, b: complex, c: complex) -> int:
    try:
        coeffs = classify_mod.EquationCoefficients(a, b, c)
        result = classify_mod.classify(coeffs).to_dict()
        result["certified"] = True
    except classify_mod.DegenerateEquation as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except classify_mod.Inconclusive as exc:
        result = {
            "roots": [[r.real, r.imag] for r in exc.roots],
            "elliptic": False,
            "strongly_elliptic": False,
            "reversed_roles": a == 0,
            "certified": False,
        }
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _normalize_argv(argv):
    # let "--c -1,0" through: argparse would read "-1,0" as an option
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--a", "--b", "--c"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellip", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a Dirichlet problem described by a JSON config")
    s.add_argument("--config", required=True)

    v = sub.add_parser("validate", help="run the oracle and invariant self-check suites")
    v.add_argument("--J", type=int, default=48)
    v.add_argument("--kmax", type=int, default=24)
    v.add_argument("--M", type=int, default=None)

    b = sub.add_parser("bench", help="time the operators and a full solve")
    b.add_argument("--sizes", default="32,64,128")
    b.add_argument("--out", default="bench.csv")
    b.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("classify", help="classify a f_xx + 2b f_xy + c f_yy = 0")
    for name in ("a", "b", "c"):
        c.add_argument(f"--{name}", type=_parse_complex, required=True, metavar="RE,IM")
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_normalize_argv(argv))
    threads = os.environ.get("ELLIP_THREADS")
    limiter = nullcontext()
    if threads:
        from threadpoolctl import threadpool_limits
        limiter = threadpool_limits(limits=max(1, int(threads)))
    with limiter:
        if args.command == "solve":
            return cmd_solve(args.config)
        if args.command == "validate":
            return cmd_validate(args.J, args.kmax, args.M)
        if args.command == "bench":
            try:
                sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
            except ValueError:
                _err(f"sizes: expected comma-separated integers, got {args.sizes!r}")
                return EXIT_CONFIG
            return cmd_bench(sizes, args.out, args.seed)
        return cmd_classify(args.a, args.b, args.c)


if __name__ == "__main__":
    sys.exit(main())
