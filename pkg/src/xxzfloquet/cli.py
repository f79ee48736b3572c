"""Command-line driver: ``classify``, ``evolve``, ``effcheck`` and ``table1``.

Exit codes: 0 success, 2 configuration error, 3 accuracy error,
4 resource error.  Sites are 1-based in every input and output.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .classifier import (
    LIBRARY_NAMES,
    ClusterClass,
    all_clusters,
    classify_cluster,
    classify_product_state,
    cluster_label,
    library_state,
    localized_mask,
)
from .config import (
    ConfigError,
    build_basis,
    build_lattice,
    build_params,
    load_file,
    resolve,
    snapshot_times,
    time_unit,
)
from .errors import AccuracyError, InvalidArgumentError, ResourceError, XXZError
from .evolution import EvolutionConfig, evolve_periodic, evolve_static
from .floquet_average import DEFAULT_NODES, effective_deviation
from .hilbert import ProductState, SpinBasis, parse_spin_string, product_state_vector
from .lattice import build_chain, check_dynamics_chain
from .operators import DrivenXXZ, ModelParams
from .specfun import j0, j0_zero

log = logging.getLogger("xxzfloquet")

EXIT_OK, EXIT_CONFIG, EXIT_ACCURACY, EXIT_RESOURCE = 0, 2, 3, 4
EFFCHECK_MAX_DIM = 256  # L = 8 at S = 1/2


def fmt(x: float) -> str:
    """17 significant digits: lossless for doubles."""
    return format(float(x), ".17g")


def _resolve_state(spec: str, basis: SpinBasis) -> ProductState:
    if spec in LIBRARY_NAMES:
        if basis.two_s != 1:
            raise ConfigError("run.state", "named states are spin-1/2 only")
        return library_state(spec, basis.num_sites)
    return parse_spin_string(spec, basis)


def _bonds_1based(bonds) -> list[list[int]]:
    return [[i + 1, j + 1] for i, j in bonds]


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# -- classify ------------------------------------------------------------------


def cmd_classify(args) -> dict:
    if args.enumerate:
        mask = localized_mask(args.length)
        report = {
            "length": args.length,
            "total": int(mask.size),
            "counts": {"localized": int(mask.sum()), "non_localized": int(mask.size - mask.sum())},
        }
        if args.list:
            basis = SpinBasis(args.length, 1)
            report["localized_states"] = [
                ProductState.from_index(basis, int(n)).label() for n in np.flatnonzero(mask)
            ]
        return report
    basis = SpinBasis(args.length, 1)
    state = _resolve_state(args.state, basis)
    result = classify_product_state(build_chain(args.length, periodic=True), state)
    return {
        "state": state.label(),
        "name": args.state if args.state in LIBRARY_NAMES else None,
        "length": args.length,
        "class": result.tag,
        "witness": _bonds_1based(result.witness),
    }


# -- evolve --------------------------------------------------------------------


def _write_profile_csv(path: Path, times, profiles) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "site", "sz"])
        for t, prof in zip(times, profiles):
            for n, v in enumerate(prof, start=1):
                w.writerow([fmt(t), n, fmt(v)])


def _write_entropy_csv(path: Path, times, sigmas) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "sigma"])
        for t, s in zip(times, sigmas):
            w.writerow([fmt(t), fmt(s)])


def run_evolve(cfg: dict, out_dir: Path) -> dict:
    """One trajectory for a fully resolved config; returns the manifest."""
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        graph = build_lattice(cfg)
        check_dynamics_chain(graph)
        basis = build_basis(cfg, graph)
        params = build_params(cfg)
        model = DrivenXXZ(graph, basis, params)
        state = _resolve_state(str(cfg["run"]["state"]), basis)
        psi0 = product_state_vector(state)
        unit = time_unit(params)
        times = snapshot_times(cfg)
        ev = cfg["evolve"]
        driver = cfg["run"].get("driver", "periodic")
        if driver == "periodic":
            ecfg = EvolutionConfig(
                t_max=float(ev["t_max"]) * unit,
                snapshot_times=[t * unit for t in times],
                steps_per_period=int(ev["steps_per_period"]),
                krylov_dim=int(ev["krylov_dim"]),
                tolerance=float(ev["tolerance"]),
                scheme=str(ev.get("scheme", "interaction")),
            )
            traj = evolve_periodic(model, psi0, ecfg)
        elif driver == "effective":
            handle = model.handle("H_eff", a=params.delta_j / params.omega)
            traj = evolve_static(handle, psi0, [t * unit for t in times],
                                 krylov_dim=int(ev["krylov_dim"]), tolerance=float(ev["tolerance"]))
        else:
            raise ConfigError("run.driver", f"expected periodic or effective, got {driver!r}")

    out_dir.mkdir(parents=True, exist_ok=True)
    scaled = [t / unit for t in traj.times]
    outputs = []
    if traj.sz:
        _write_profile_csv(out_dir / "sz_profile.csv", scaled, traj.sz)
        outputs.append("sz_profile.csv")
    if traj.entropy:
        _write_entropy_csv(out_dir / "entropy.csv", scaled, traj.entropy)
        outputs.append("entropy.csv")
    manifest = {
        "subcommand": "evolve",
        "version": __version__,
        "config": cfg,
        "state": state.label(),
        "time_unit": fmt(unit),
        "outputs": outputs + ["manifest.json"],
        "norm_drift": fmt(traj.norm_drift),
        "magnetization_drift": fmt(traj.magnetization_drift),
        "steps": traj.steps,
        "warnings": [str(w.message) for w in caught],
        "wall_time_s": round(time.perf_counter() - start, 3),
    }
    _write_json(out_dir / "manifest.json", manifest)
    return manifest


def _evolve_overrides(args) -> dict:
    return {
        "lattice": {"length": args.length},
        "model": {
            "j_perp": args.j_perp,
            "j_par_bar": args.j_par_bar,
            "amplitude_a": args.amplitude_a,
            "delta_j": args.delta_j,
            "two_s": args.two_s,
        },
        "evolve": {
            "t_max": args.t_max,
            "steps_per_period": args.steps_per_period,
            "snapshots": {"every": args.snapshot_every} if args.snapshot_every else None,
            "krylov_dim": args.krylov_dim,
            "tolerance": args.tolerance,
        },
        "run": {"state": args.state, "driver": args.driver},
    }


def cmd_evolve(args) -> dict:
    file_cfg = load_file(args.config) if args.config else {}
    base = resolve(file_cfg, _evolve_overrides(args))
    out = Path(args.out)
    omegas = args.omega or [base["model"]["omega"]]
    if len(omegas) == 1:
        cfg = resolve(base, {"model": {"omega": omegas[0]}})
        return run_evolve(cfg, out)
    runs = {}
    for om in omegas:
        cfg = resolve(base, {"model": {"omega": om}})
        sub = f"omega_{fmt(om)}"
        runs[sub] = run_evolve(cfg, out / sub)
    return {"subcommand": "evolve", "sweep": sorted(runs), "runs": runs}


# -- effcheck ------------------------------------------------------------------


def cmd_effcheck(args) -> list[dict]:
    file_cfg = load_file(args.config) if args.config else {}
    cfg = resolve(file_cfg, {"lattice": {"length": args.length}, "model": {"two_s": args.two_s}})
    graph = build_lattice(cfg)
    basis = build_basis(cfg, graph)
    if basis.dim > EFFCHECK_MAX_DIM:
        raise ResourceError(f"effcheck builds dense matrices; dimension {basis.dim} exceeds {EFFCHECK_MAX_DIM}")
    params = build_params(cfg)
    model = DrivenXXZ(graph, basis, params)
    a_values = args.a if args.a else [0.0, 0.5, 1.0, j0_zero(1)]
    reports = []
    for a in a_values:
        dev = effective_deviation(model, a, args.nodes)
        reports.append({
            "lattice": {"kind": graph.kind, "num_sites": graph.num_sites, "periodic": graph.periodic},
            "two_s": basis.two_s,
            "a": a,
            "nodes": args.nodes,
            "max_abs_deviation": dev,
        })
    return reports


# -- table1 --------------------------------------------------------------------


def table1_rows(a: float, length: int = 8, bond: int = 3) -> list[dict]:
    """Bond-operator coefficient for each of the 16 clusters, measured on a ring.

    The cluster is embedded at sites ``bond-1 .. bond+2`` (0-based) of an
    all-down ring and ``b(a)`` is compared with ``b(0)``.
    """
    graph = build_chain(length, periodic=True)
    basis = SpinBasis(length, 1)
    model = DrivenXXZ(graph, basis, ModelParams(1.0, 0.0))
    zero = j0_zero(1)
    rows = []
    for cl in all_clusters():
        digits = [0] * length
        for k, c in enumerate(cl):
            digits[(bond - 1 + k) % length] = c
        psi = product_state_vector(ProductState(basis, tuple(digits)))
        ba = model.apply_bond(bond, bond + 1, a, psi).amplitudes
        b0 = model.apply_bond(bond, bond + 1, 0.0, psi).amplitudes
        bz = model.apply_bond(bond, bond + 1, zero, psi).amplitudes
        cls = classify_cluster(*cl)
        n0 = np.linalg.norm(b0)
        measured = float(np.vdot(b0, ba).real / n0**2) if n0 > 0 else None
        expected = {ClusterClass.H0: j0(a), ClusterClass.H1: 1.0, ClusterClass.HX: None}[cls]
        rows.append({
            "cluster": cluster_label(cl),
            "class": cls.value,
            "coefficient": cls.coefficient_label(),
            "coefficient_value": expected,
            "measured_coefficient": measured,
            "b0_nonzero": bool(n0 > 0),
            "annihilated_at_zero": bool(np.linalg.norm(bz) <= 1e-12),
        })
    return rows


def cmd_table1(args) -> dict:
    rows = table1_rows(args.a)
    report = {"a": args.a, "rows": rows}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "table1.json", report)
    return report


def _print_table1(report: dict) -> None:
    print(f"{'cluster':8} {'class':5} {'coefficient':12} {'measured':>22} annihilated@A1")
    for r in report["rows"]:
        meas = "-" if r["measured_coefficient"] is None else fmt(r["measured_coefficient"])
        coef = r["coefficient"] or "undefined"
        print(f"{r['cluster']:8} {r['class']:5} {coef:12} {meas:>22} {r['annihilated_at_zero']}")


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xxzfloquet", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="localized / non-localized decision for product states")
    c.add_argument("--state", default="A0", help="A0, A1, B0, B1 or a u/d string (site 1 first)")
    c.add_argument("--length", type=int, default=16)
    c.add_argument("--enumerate", action="store_true", help="count all 2^L product states")
    c.add_argument("--list", action="store_true", help="with --enumerate, list localized states")
    c.add_argument("--out", help="also write the JSON report to this file")

    e = sub.add_parser("evolve", help="time evolution, writes CSV files and a manifest")
    e.add_argument("--config", help="YAML config file (or a previous manifest.json)")
    e.add_argument("--out", default="run", help="output directory")
    e.add_argument("--state")
    e.add_argument("--length", type=int)
    e.add_argument("--omega", type=float, nargs="+", help="one value, or several for a sweep")
    e.add_argument("--amplitude-a", type=float)
    e.add_argument("--delta-j", type=float)
    e.add_argument("--j-perp", type=float)
    e.add_argument("--j-par-bar", type=float)
    e.add_argument("--two-s", type=int)
    e.add_argument("--t-max", type=float)
    e.add_argument("--snapshot-every", type=float)
    e.add_argument("--steps-per-period", type=int)
    e.add_argument("--krylov-dim", type=int)
    e.add_argument("--tolerance", type=float)
    e.add_argument("--driver", choices=("periodic", "effective"))

    f = sub.add_parser("effcheck", help="quadrature average vs closed-form effective Hamiltonian")
    f.add_argument("--config")
    f.add_argument("--length", type=int, default=6)
    f.add_argument("--two-s", type=int, default=1)
    f.add_argument("--a", type=float, nargs="+")
    f.add_argument("--nodes", type=int, default=DEFAULT_NODES)

    t = sub.add_parser("table1", help="bond-operator coefficients of the 16 four-site clusters")
    t.add_argument("--a", type=float, default=2.4048)
    t.add_argument("--out", help="directory for table1.json")
    t.add_argument("--json", action="store_true", help="print JSON instead of a text table")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "classify":
            report = cmd_classify(args)
            if args.out:
                _write_json(Path(args.out), report)
            print(json.dumps(report, indent=2))
        elif args.command == "evolve":
            print(json.dumps(cmd_evolve(args), indent=2))
        elif args.command == "effcheck":
            print(json.dumps(cmd_effcheck(args), indent=2))
        elif args.command == "table1":
            report = cmd_table1(args)
            if args.json:
                print(json.dumps(report, indent=2))
            else:
                _print_table1(report)
    except ResourceError as exc:
        log.error("resource error: %s", exc)
        return EXIT_RESOURCE
    except AccuracyError as exc:
        log.error("accuracy error: %s (try a larger evolve.steps_per_period)", exc)
        return EXIT_ACCURACY
    except (InvalidArgumentError, XXZError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
