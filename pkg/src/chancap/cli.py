"""Command-line front end: parameter sweeps that emit TSV plot data,
degradability scans, spin-alignment conjecture searches, and certificate
verification, all reproducible from (config, seed).

Exit codes: 0 success, 2 validation error, 3 numerical failure,
4 conjecture counterexample found.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .channels import parse_channel_spec
from .optimize import OptimConfig, SwarmConfig
from .sdp import SdpNumericalError, SdpSettings
from .spinalign import AlignmentInstance, parse_instances, search_minimum

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_COUNTEREXAMPLE = 4

WORKERS_ENV = "CHANCAP_WORKERS"


class ValidationError(ValueError):
    pass


def cell_seed(base_seed: int, index: int) -> int:
    """Stable per-cell seed derived from the base seed and the cell index."""
    digest = hashlib.blake2b(f"{base_seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") % (2**31 - 1)


def _parse_grid(text: str) -> list[float]:
    if ":" in text:
        lo, hi, count = text.split(":")
        count = int(count)
        if count < 1:
            raise ValidationError("grid count must be >= 1")
        return [float(v) for v in np.linspace(float(lo), float(hi), count)]
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValidationError("empty grid")
    return values


def _load_config(path: str | None, overrides: dict) -> dict:
    config = {}
    if path:
        with open(path) as fh:
            config = json.load(fh)
    for key, val in overrides.items():
        if val is not None:
            config[key] = val
    return config


def _atomic_write(path: str, payload: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def _header(config: dict, columns: list[str], provenance: dict[str, str]) -> list[str]:
    lines = [f"# chancap {__version__}",
             f"# config = {json.dumps(config, sort_keys=True)}"]
    for col in columns:
        lines.append(f"# column {col}: {provenance.get(col, 'value')}")
    lines.append("# " + "\t".join(columns))
    return lines


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return f"{v:.12g}"


def _run_cells(worker, args_list, workers: int):
    if workers <= 1:
        return [worker(a) for a in args_list]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, args_list))


def _optim_config(config: dict, seed: int) -> OptimConfig:
    swarm = SwarmConfig(**config.get("swarm", {}))
    return OptimConfig(seed=seed,
                       restarts=int(config.get("restarts", 12)),
                       max_iters=int(config.get("max_iters", 500)),
                       grad_tol=float(config.get("grad_tol", 1e-8)),
                       step_init=float(config.get("step_init", 0.5)),
                       golden_tol=float(config.get("golden_tol", 1e-10)),
                       swarm=swarm)


# ---------------------------------------------------------------------------
# sweep


def _ns_cell(args: tuple) -> dict:
    from .capacity import gamma_bound, q1, transposition_bound
    from .channels import make_ns

    s, seed, config = args
    pair = make_ns(s)
    cfg = _optim_config(config, seed)
    return {
        "s": s,
        "ci": q1(pair, "reduced", cfg).value,
        "ub_gamma": gamma_bound(pair),
        "ub_transposition": transposition_bound(pair),
        "analytic": float(np.log2(1.0 + np.sqrt(1.0 - s))),
    }


def _w_cell(args: tuple) -> dict:
    from .capacity import (beta_bound, ea_capacity, gamma_bound, holevo_info,
                           private_info, private_upper_bound, q1)
    from .channels import make_w

    s, mu, seed, config = args
    pair = make_w(s, mu)
    cfg = _optim_config(config, seed)
    return {
        "mu": mu,
        "pi": private_info(pair, cfg).value,
        "pc": private_upper_bound(pair, l=int(config.get("l", 5))),
        "ci": q1(pair, "general", cfg).value,
        "qc": gamma_bound(pair),
        "hi": holevo_info(pair, cfg).value,
        "cc": beta_bound(pair),
        "cea": ea_capacity(pair, cfg).value,
    }


def cmd_capacity_sweep(channel: str, grid: list[float], out: str, config: dict) -> int:
    if not grid:
        raise ValidationError("empty grid: nothing to sweep")
    base_seed = int(config.get("seed", 42))
    workers = int(config.get("workers", 1))
    family = channel.split(":")[0]
    if family == "Ns":
        for s in grid:
            if not (0.0 <= s <= 0.5):
                raise ValidationError(f"grid point s={s} outside [0, 1/2]")
        cells = [(s, cell_seed(base_seed, i), config) for i, s in enumerate(grid)]
        rows = _run_cells(_ns_cell, cells, workers)
        columns = ["s", "ci", "ub_gamma", "ub_transposition", "analytic"]
        provenance = {"s": "grid", "ci": "search (golden section, reduced family)",
                      "ub_gamma": "solver (interior point, log2)",
                      "ub_transposition": "solver (interior point, log2)",
                      "analytic": "closed form log2(1+sqrt(1-s))"}
    elif family == "W":
        pair = parse_channel_spec(channel + (",mu=0.5" if "mu=" not in channel else ""))
        s = pair.params["s"]
        for mu in grid:
            if not (0.0 <= mu <= 1.0):
                raise ValidationError(f"grid point mu={mu} outside [0, 1]")
        cells = [(s, mu, cell_seed(base_seed, i), config) for i, mu in enumerate(grid)]
        rows = _run_cells(_w_cell, cells, workers)
        columns = ["mu", "pi", "pc", "ci", "qc", "hi", "cc", "cea"]
        provenance = {"mu": "grid", "pi": "search (ensemble ascent)",
                      "pc": "solver (order-alpha relaxation, upper bound)",
                      "ci": "search (density ascent)",
                      "qc": "solver (interior point, log2)",
                      "hi": "search (ensemble ascent)",
                      "cc": "solver (interior point, log2)",
                      "cea": "search (concave ascent)"}
    else:
        raise ValidationError(f"sweep supports channel families Ns and W, got {family!r}")
    lines = _header(dict(config, seed=base_seed, channel=channel), columns, provenance)
    for row in rows:
        lines.append("\t".join(_fmt(row[c]) for c in columns))
    _atomic_write(out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# degradability


def _deg_cell(args: tuple) -> dict:
    from .channels import make_w
    from .degrade import dg_adg, pcubed_degradable

    mu, _seed, _config = args
    pair = make_w(0.5, mu)
    rep = dg_adg(pair)
    if 0.0 < mu < 1.0:
        pc = "1" if pcubed_degradable(mu) else "0"
    else:
        pc = "NA"
    return {"mu": mu, "dg": rep.dg, "adg": rep.adg, "pcubed": pc}


def cmd_degradability_sweep(grid: list[float], out: str, config: dict) -> int:
    if not grid:
        raise ValidationError("empty grid: nothing to sweep")
    for mu in grid:
        if not (0.0 <= mu <= 1.0):
            raise ValidationError(f"grid point mu={mu} outside [0, 1]")
    base_seed = int(config.get("seed", 42))
    workers = int(config.get("workers", 1))
    cells = [(mu, cell_seed(base_seed, i), config) for i, mu in enumerate(grid)]
    rows = _run_cells(_deg_cell, cells, workers)
    columns = ["mu", "dg", "adg", "pcubed"]
    provenance = {"mu": "grid", "dg": "solver (diamond distance to complement)",
                  "adg": "solver (diamond distance from complement)",
                  "pcubed": "closed-form Gram criterion (NA at the boundary)"}
    lines = _header(dict(config, seed=base_seed), columns, provenance)
    for row in rows:
        lines.append("\t".join(_fmt(row[c]) for c in columns))
    _atomic_write(out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# spinalign


def _spin_cell(args: tuple) -> dict:
    idx, instance, seed, config, replay_dir = args
    config = dict(config)
    config.setdefault("restarts", 6)
    # desk-scale swarm budget; override through the config document
    config.setdefault("swarm", {"particles": 16, "iters": 200})
    cfg = _optim_config(config, seed)
    rep = search_minimum(instance, cfg,
                         use_swarm=bool(config.get("use_swarm", True)),
                         replay_dir=replay_dir)
    return {
        "instance_id": idx,
        "conjectured": rep["conjectured"],
        "best": rep["result"].value,
        "gap": rep["gap"],
        "converged": int(rep["result"].converged),
        "counterexample": rep["counterexample"],
    }


def cmd_spinalign(out: str, config: dict, n: int | None = None, s: float | None = None,
                  random_count: int | None = None, instances_path: str | None = None,
                  replay_dir: str | None = None) -> int:
    base_seed = int(config.get("seed", 42))
    workers = int(config.get("workers", 1))
    if instances_path is not None:
        with open(instances_path) as fh:
            instances = parse_instances(fh.read())
    elif random_count is not None:
        if n is None or s is None:
            raise ValidationError("--random requires --n and --s")
        if n > 6:
            raise ValidationError("n must be <= 6")
        site = np.diag([s, 1.0 - s]).astype(complex)
        instances = []
        for i in range(random_count):
            rng = np.random.default_rng(cell_seed(base_seed, 10_000 + i))
            instances.append(AlignmentInstance.random_x(n, site, rng))
    else:
        raise ValidationError("give either --instances or --random")
    cells = [(i, inst, cell_seed(base_seed, i), config, replay_dir)
             for i, inst in enumerate(instances)]
    rows = _run_cells(_spin_cell, cells, workers)
    columns = ["instance_id", "conjectured", "best", "gap", "converged"]
    provenance = {"conjectured": "closed form (aligned assignment)",
                  "best": "search (sphere descent + swarm)",
                  "gap": "best - conjectured"}
    lines = _header(dict(config, seed=base_seed), columns, provenance)
    for row in rows:
        lines.append("\t".join(_fmt(row[c]) for c in columns))
    _atomic_write(out, "\n".join(lines) + "\n")
    if any(row["counterexample"] for row in rows):
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(family: str, params: dict, out: str | None = None, tamper=None) -> int:
    from .capacity import verify_certificates
    from .channels import apply, make_md, make_ns
    from .linalg import random_density

    report = verify_certificates(family, params, tamper=tamper)
    pair = make_ns(params["s"]) if family == "Ns" else make_md(params["d"])
    rng = np.random.default_rng(20_240_901)
    cp_resid = 0.0
    for _ in range(5):
        rho = random_density(pair.d_a, rng)
        for leg in ("direct", "complement"):
            img = apply(pair, rho, leg)
            cp_resid = max(cp_resid,
                           abs(np.trace(img).real - 1.0),
                           max(0.0, -float(np.linalg.eigvalsh(img).min())))
    report["channel_invariants"] = {"residual": cp_resid, "passed": cp_resid <= 1e-9}
    ok = report["passed"] and report["channel_invariants"]["passed"]
    print(f"certificates for {family} {params}: {'PASS' if ok else 'FAIL'}")
    for name, entry in report["checks"].items():
        flag = "ok " if entry["passed"] else "VIOLATED"
        print(f"  {flag} {name:32s} residual {entry['residual']:.3e}")
    print(f"  {'ok ' if report['channel_invariants']['passed'] else 'VIOLATED'} "
          f"{'channel.cptp':32s} residual {cp_resid:.3e}")
    if out:
        _atomic_write(out, json.dumps(report, default=float, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_channel_info(channel: str) -> int:
    from .channels import choi
    from .linalg import dag, partial_trace

    pair = parse_channel_spec(channel)
    e = pair.isometry.matrix
    iso_res = float(np.linalg.norm(dag(e) @ e - np.eye(pair.d_a)))
    j = choi(pair)
    marg_res = float(np.linalg.norm(partial_trace(j, (pair.d_a, pair.d_b), 0) - np.eye(pair.d_a)))
    print(f"channel: {pair.label}")
    print(f"dims (in, out, env): {pair.isometry.dims}")
    print(f"isometry residual: {iso_res:.3e}")
    print(f"choi marginal residual: {marg_res:.3e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chancap",
                                     description="channel capacity toolbox")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--config", type=str, default=None)

    p = sub.add_parser("sweep", help="capacity sweep emitting TSV plot data")
    common(p)
    p.add_argument("--channel", required=True, help="e.g. 'Ns' or 'W:s=0.5'")
    p.add_argument("--grid", required=True, help="lo:hi:count or comma list")
    p.add_argument("--restarts", type=int, default=None)

    p = sub.add_parser("degradability", help="dg/adg scan of the balanced family")
    common(p)
    p.add_argument("--grid", required=True)

    p = sub.add_parser("spinalign", help="conjecture search over instances")
    common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--random", type=int, default=None, dest="random_count")
    p.add_argument("--instances", type=str, default=None)
    p.add_argument("--replay-dir", type=str, default=None)
    p.add_argument("--restarts", type=int, default=None)

    p = sub.add_parser("verify", help="check explicit bound certificates")
    common(p)
    p.add_argument("--family", required=True, choices=["Ns", "Md"])
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("channel-info", help="print channel diagnostics")
    common(p)
    p.add_argument("--channel", required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        workers_default = int(os.environ.get(WORKERS_ENV, "1"))
        overrides = {"seed": args.seed, "workers": args.workers}
        if getattr(args, "restarts", None) is not None:
            overrides["restarts"] = args.restarts
        config = _load_config(args.config, overrides)
        config.setdefault("seed", 42)
        config.setdefault("workers", workers_default)

        if args.command == "sweep":
            if not args.out:
                raise ValidationError("--out is required for sweep")
            return cmd_capacity_sweep(args.channel, _parse_grid(args.grid),
                                      args.out, config)
        if args.command == "degradability":
            if not args.out:
                raise ValidationError("--out is required for degradability")
            return cmd_degradability_sweep(_parse_grid(args.grid), args.out, config)
        if args.command == "spinalign":
            if not args.out:
                raise ValidationError("--out is required for spinalign")
            return cmd_spinalign(args.out, config, n=args.n, s=args.s,
                                 random_count=args.random_count,
                                 instances_path=args.instances,
                                 replay_dir=args.replay_dir)
        if args.command == "verify":
            params = {}
            if args.family == "Ns":
                if args.s is None:
                    raise ValidationError("verify Ns requires --s")
                params = {"s": args.s}
            else:
                if args.d is None:
                    raise ValidationError("verify Md requires --d")
                params = {"d": args.d}
            return cmd_verify(args.family, params, out=args.out)
        if args.command == "channel-info":
            return cmd_channel_info(args.channel)
        raise ValidationError(f"unknown command {args.command}")
    except (ValidationError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SdpNumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
