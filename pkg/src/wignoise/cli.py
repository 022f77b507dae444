"""Command-line front end emitting the headline tables and figure data.

Four subcommands write delimited data (CSV or JSON) plus a JSON
provenance sidecar carrying the resolved configuration:

* ``table1``: entropy and decoherence per Fibonacci tone ratio, plus
  the golden-mean surrogate row.
* ``sweep``: decoherence over a (delta, sigma) lattice, analytic route.
* ``wigner``: averaged phase-space sheets for a set of noise strengths.
* ``dist``: one drive's trajectory window and shift density, with
  caustics emitted as the sentinel string "inf".

Flag values override an optional JSON config file, which overrides the
built-in reference defaults.  ``--plot`` additionally renders the
matching matplotlib figure next to the data file.  Exit codes: 0 on
success, 2 on configuration errors, 3 on convergence failures.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .coherence import (averaged_wigner, coherence_report, epsilon_analytic)
from .errors import CausticPoint, ConvergenceError
from .quadrature import PeriodicAverageSpec, PhaseSpaceGrid, default_grid, grid_nodes
from .shiftmodels import (GOLDEN_MEAN, GaussianShift, GoldenMean,
                          TrajectoryWindow, TwoTone, critical_points, density,
                          entropy, fibonacci, fibonacci_ratio, shift_at,
                          support_interval, theta_period)
from .wavepacket import GaussianPacket, StateCase

DEFAULTS = {
    "case": "single",
    "noise": "twotone",
    "delta0": 16.1,
    "delta1": 2.0,
    "sigma": 0.6,
    "j": 1,
    "j_max": 5,
    "k0": 1.7,
    "coh_len": 1.1,
    "nodes": 4096,
    "grid_nx": None,
    "grid_nk": None,
    "format": "csv",
    "plot": False,
}

_CASES = {
    "single": StateCase.SINGLE,
    "interferometer": StateCase.INTERFEROMETER,
    "magnetic": StateCase.MAGNETIC,
}

_WIGNER_SIGMAS = (0.0, 0.6, 1.2, 1.8)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=os.path.basename(path) + ".")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(path: str, fmt: str, command: str, config: dict,
          columns: list[str], rows: list[dict]) -> None:
    meta = {"command": command, "config": config, "columns": columns,
            "version": __version__}
    if fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(row[c]) for c in columns) for row in rows)
        _atomic_write(path, "\n".join(lines) + "\n")
        _atomic_write(path + ".meta.json",
                      json.dumps(meta, sort_keys=True, indent=2) + "\n")
    else:
        doc = {"meta": meta, "columns": columns,
               "rows": [[row[c] for c in columns] for row in rows]}
        _atomic_write(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")


def _plot_path(out: str) -> str:
    root, ext = os.path.splitext(out)
    return (root if ext else out) + ".png"


def _packet(cfg) -> GaussianPacket:
    return GaussianPacket(x0=0.0, k0=cfg["k0"], delta=cfg["coh_len"])


def _grid_override(grid: PhaseSpaceGrid, cfg) -> PhaseSpaceGrid:
    nx = cfg["grid_nx"] or grid.nx
    nk = cfg["grid_nk"] or grid.nk
    return PhaseSpaceGrid(grid.x_min, grid.x_max, grid.k_min, grid.k_max,
                          nx=nx, nk=nk, rule=grid.rule)


def cmd_table1(cfg) -> tuple[list[str], list[dict]]:
    packet = _packet(cfg)
    nodes = cfg["nodes"]
    window = TrajectoryWindow(n_samples=max(2**16, 16 * nodes))
    rows = []
    for j in range(1, cfg["j_max"] + 1):
        model = TwoTone(cfg["delta0"], cfg["delta1"], j)
        s_val = entropy(model, window, check=True)
        spec = PeriodicAverageSpec(n_nodes=nodes)
        eps_s = coherence_report(StateCase.SINGLE, packet, model, spec=spec,
                                 check=True, entropy_nats=s_val).epsilon
        eps_d = coherence_report(StateCase.MAGNETIC, packet, model, spec=spec,
                                 check=True, entropy_nats=s_val).epsilon
        ratio = fibonacci_ratio(j)
        rows.append({"j": j, "r_j": f"{ratio.numerator}/{ratio.denominator}",
                     "S": s_val, "eps_single": eps_s, "eps_double": eps_d})
    model = GoldenMean(cfg["delta0"], cfg["delta1"])
    s_val = entropy(model, window, check=True)
    spec = PeriodicAverageSpec(n_nodes=max(8192, nodes))
    eps_s = coherence_report(StateCase.SINGLE, packet, model, spec=spec,
                             check=True, entropy_nats=s_val).epsilon
    eps_d = coherence_report(StateCase.MAGNETIC, packet, model, spec=spec,
                             check=True, entropy_nats=s_val).epsilon
    rows.append({"j": "inf", "r_j": _fmt(GOLDEN_MEAN), "S": s_val,
                 "eps_single": eps_s, "eps_double": eps_d})
    return ["j", "r_j", "S", "eps_single", "eps_double"], rows


def cmd_sweep(cfg) -> tuple[list[str], list[dict]]:
    case = _CASES[cfg["case"]]
    rows = []
    for delta in np.arange(0.2, 6.0 + 1e-9, 0.1):
        packet = GaussianPacket(x0=0.0, k0=cfg["k0"], delta=round(float(delta), 10))
        for sigma in np.arange(0.0, 6.0 + 1e-9, 0.1):
            model = GaussianShift(cfg["delta0"], round(float(sigma), 10))
            eps = epsilon_analytic(case, packet, model)
            rows.append({"delta": packet.delta, "sigma": model.sigma,
                         "epsilon": eps})
    return ["delta", "sigma", "epsilon"], rows


def cmd_wigner(cfg) -> tuple[list[str], list[dict]]:
    packet = _packet(cfg)
    rows = []
    for case_name in ("interferometer", "magnetic"):
        case = _CASES[case_name]
        grid = default_grid(packet, case, GaussianShift(cfg["delta0"],
                                                        max(_WIGNER_SIGMAS)))
        grid = _grid_override(grid, cfg)
        x, _, k, _ = grid_nodes(grid)
        for sigma in _WIGNER_SIGMAS:
            model = GaussianShift(cfg["delta0"], sigma)
            sheet = averaged_wigner(case, packet, model, x[:, None], k[None, :])
            for i, xv in enumerate(x):
                for m, kv in enumerate(k):
                    rows.append({"x": float(xv), "k": float(kv),
                                 "W": float(sheet[i, m]), "sigma": sigma,
                                 "case": case_name})
    return ["x", "k", "W", "sigma", "case"], rows


def cmd_dist(cfg) -> tuple[list[str], list[dict]]:
    if cfg["noise"] == "goldenmean":
        model = GoldenMean(cfg["delta0"], cfg["delta1"])
        window = 2.0 * math.pi * fibonacci(8)
        caustics = np.array([model.delta0])
    elif cfg["noise"] == "twotone":
        model = TwoTone(cfg["delta0"], cfg["delta1"], cfg["j"])
        window = theta_period(model)
        _, caustics = critical_points(model)
    else:
        raise ValueError(f"dist needs a trajectory noise model, "
                         f"got {cfg['noise']!r}")
    rows = []
    n_traj = 2048
    theta = np.linspace(0.0, window, n_traj)
    for t, d in zip(theta, shift_at(model, theta)):
        rows.append({"series": "trajectory", "arg": float(t), "value": float(d)})
    lo, hi = support_interval(model)
    sample = np.unique(np.concatenate([np.linspace(lo, hi, 513), caustics]))
    for d in sample:
        try:
            value = density(model, float(d))
        except CausticPoint:
            value = "inf"
        rows.append({"series": "density", "arg": float(d), "value": value})
    return ["series", "arg", "value"], rows


_COMMANDS = {
    "table1": cmd_table1,
    "sweep": cmd_sweep,
    "wigner": cmd_wigner,
    "dist": cmd_dist,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wignoise",
        description="Neutron phase-space decoherence tables and figure data.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (("table1", "entropy and decoherence per tone ratio"),
                      ("sweep", "decoherence over a (delta, sigma) lattice"),
                      ("wigner", "averaged phase-space sheets"),
                      ("dist", "shift trajectory and density samples")):
        cmd = sub.add_parser(name, help=doc)
        cmd.add_argument("--out", required=True, help="output file path")
        cmd.add_argument("--format", choices=("csv", "json"), default=None)
        cmd.add_argument("--config", default=None,
                         help="JSON file with default overrides")
        cmd.add_argument("--case", choices=tuple(_CASES), default=None)
        cmd.add_argument("--noise",
                         choices=("gaussian", "twotone", "goldenmean"),
                         default=None)
        cmd.add_argument("--delta0", type=float, default=None,
                         help="mean shift (angstrom)")
        cmd.add_argument("--delta1", type=float, default=None,
                         help="tone amplitude (angstrom)")
        cmd.add_argument("--sigma", type=float, default=None,
                         help="Gaussian noise strength (angstrom)")
        cmd.add_argument("--j", type=int, default=None, help="Fibonacci index")
        cmd.add_argument("--k0", type=float, default=None,
                         help="mean wavenumber (1/angstrom)")
        cmd.add_argument("--coh-len", type=float, default=None,
                         help="packet coherence length (angstrom)")
        cmd.add_argument("--nodes", type=int, default=None,
                         help="trajectory-average nodes per axis")
        cmd.add_argument("--grid-nx", type=int, default=None)
        cmd.add_argument("--grid-nk", type=int, default=None)
        cmd.add_argument("--plot", action="store_true", default=None,
                         help="also render the matching figure as PNG")
        if name == "table1":
            cmd.add_argument("--j-max", type=int, default=None,
                             help="largest Fibonacci index in the table")
    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config is not None:
        with open(args.config) as handle:
            loaded = json.load(handle)
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    if cfg["nodes"] < 64:
        raise ValueError("--nodes must be >= 64")
    if cfg["j_max"] < 1:
        raise ValueError("--j-max must be >= 1")
    return cfg


def _render(command: str, rows: list[dict], out: str) -> None:
    from . import plots

    renderer = {"table1": plots.render_table1, "sweep": plots.render_sweep,
                "wigner": plots.render_wigner, "dist": plots.render_dist}[command]
    renderer(rows, _plot_path(out))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        columns, rows = _COMMANDS[args.command](cfg)
        _emit(args.out, cfg["format"], args.command, cfg, columns, rows)
        if cfg["plot"]:
            _render(args.command, rows, args.out)
    except ConvergenceError as exc:
        print(f"wignoise {args.command}: convergence failure: {exc}",
              file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"wignoise {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
