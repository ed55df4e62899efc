"""Command-line front end: experiment orchestration and persistence.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 I/O error. Every run writes its data files plus a manifest carrying the
config snapshot, master seed, tool version and sha256 digests of the
emitted files; the manifest is written atomically last. Data files
(CSV/JSON) contain no timestamps, so identical seeds give byte-identical
outputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, load_config
from .gaussian import make_vacuum, quad_statistics
from .spectral import (
    apply_measurement_jitter,
    default_grid,
    spectrum_report,
    synthesize_spectrum,
)
from .teleporter import (
    Regime,
    TeleporterConfig,
    analytic_noise_budget,
    run_teleport,
)
from .timetrace import (
    DT_PS,
    concatenate_modes,
    estimate_report,
    extract_modes,
    quantize_trace,
    simulate_traces,
    synth_random_coherent,
)
from .validate import run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3

OUT_ROOT_ENV = "CVTELEPORT_OUT_ROOT"

SWEEP_PARAMS = ("n_sq", "eta_bell", "eta_meas", "ff_gain_db")


class OutputError(Exception):
    pass


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def make_out_dir(command: str, out_dir: str | None) -> Path:
    if out_dir is not None:
        path = Path(out_dir)
    else:
        root = Path(os.environ.get(OUT_ROOT_ENV, "runs"))
        stamp = datetime.datetime.now().strftime("%Y%m%dT%H%M%S%f")
        path = root / f"{stamp}-{command}"
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OutputError(f"cannot write to output directory {path}: {exc}")
    return path


def write_csv(path: Path, header: list[str], columns) -> None:
    rows = zip(*columns)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}")


def write_json(path: Path, payload: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, command: str, config_snapshot: dict,
                   seed, started: str, outputs: list[Path]) -> Path:
    manifest = {
        "schema": 1,
        "command": command,
        "tool_version": __version__,
        "master_seed": seed,
        "config": config_snapshot,
        "started_utc": started,
        "finished_utc": _utc_now(),
        "outputs": {str(p.relative_to(out_dir)): f"sha256:{sha256_file(p)}"
                    for p in outputs},
    }
    final = out_dir / "manifest.json"
    tmp = out_dir / "manifest.json.tmp"
    write_json(tmp, manifest)
    os.replace(tmp, final)
    return final


def verify_manifest(out_dir: Path) -> bool:
    """True iff every digest recorded in the manifest matches its file."""
    manifest = json.loads((Path(out_dir) / "manifest.json").read_text())
    for name, digest in manifest["outputs"].items():
        if f"sha256:{sha256_file(Path(out_dir) / name)}" != digest:
            return False
    return True


def _report_payload(report, extra=None) -> dict:
    payload = {"schema": 1}
    payload.update(dataclasses.asdict(report))
    if extra:
        payload.update(extra)
    return payload


def _budget_payload(cfg: TeleporterConfig) -> dict:
    quantum = analytic_noise_budget(dataclasses.replace(cfg, regime=Regime.QUANTUM))
    classical = analytic_noise_budget(
        dataclasses.replace(cfg, regime=Regime.CLASSICAL))
    return {
        "schema": 1,
        "quantum": {"n_out": quantum.n_out, "n_out_db": quantum.n_out_db,
                    "fidelity_vacuum": quantum.fidelity_vacuum},
        "classical": {"n_out": classical.n_out, "n_out_db": classical.n_out_db,
                      "fidelity_vacuum": classical.fidelity_vacuum},
    }


def cmd_budget(args) -> int:
    cfg = load_config(args.config)
    payload = _budget_payload(cfg.teleporter)
    started = _utc_now()
    for regime in ("quantum", "classical"):
        entry = payload[regime]
        print(f"{regime:>9}: N_out = {entry['n_out']:.4f} "
              f"({entry['n_out_db']:+.3f} dB), vacuum fidelity "
              f"{entry['fidelity_vacuum']:.4f}")
    out_dir = make_out_dir("budget", args.out_dir)
    report = out_dir / "budget.json"
    write_json(report, payload)
    write_manifest(out_dir, "budget", cfg.raw, None, started, [report])
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    started = _utc_now()
    sp = cfg.spectrum
    grid = default_grid(sp.grid_points, sp.band_edge_thz)
    record = synthesize_spectrum(cfg.teleporter, sp.profile(), grid)
    record = apply_measurement_jitter(record, sp.jitter_sigma_db, seed=args.seed)
    report = spectrum_report(record, cfg.teleporter.eta_meas,
                             sp.exclude_below_thz, sp.band_edge_thz)
    out_dir = make_out_dir("spectrum", args.out_dir)
    csv_path = out_dir / "spectrum.csv"
    write_csv(csv_path, ["omega_thz", "vx_db", "vp_db"],
              [record.omega_thz, record.vx_db, record.vp_db])
    plateau = analytic_noise_budget(
        dataclasses.replace(cfg.teleporter, n_sq=sp.n_sq_center))
    json_path = out_dir / "report.json"
    write_json(json_path, _report_payload(report, {
        "regime": cfg.teleporter.regime.value,
        "plateau_model_db": plateau.n_out_db,
        "seed": args.seed,
        "jitter_sigma_db": sp.jitter_sigma_db,
    }))
    write_manifest(out_dir, "spectrum", cfg.raw, args.seed, started,
                   [csv_path, json_path])
    print(f"spectrum: raw ({report.vx_raw_db:+.3f}, {report.vp_raw_db:+.3f}) dB, "
          f"intrinsic ({report.vx_int_db:+.3f}, {report.vp_int_db:+.3f}) dB, "
          f"F_raw = {report.f_raw:.4f}, F_int = {report.f_int:.4f}")
    print(f"wrote {out_dir}")
    return EXIT_OK


def cmd_timetrace(args) -> int:
    cfg = load_config(args.config)
    started = _utc_now()
    tt = cfg.timetrace
    n_traces = args.traces if args.traces is not None else tt.n_traces
    if n_traces < 1:
        raise ConfigError("timetrace.n_traces: must be at least 1")
    try:
        tracks = synth_random_coherent(cfg.source, tt.duration_ns,
                                       seed=(args.seed, 2 ** 31),
                                       window_ps=tt.window_ps)
        traces = simulate_traces(cfg.teleporter, tracks, n_traces=n_traces,
                                 seed=args.seed, window_ps=tt.window_ps)
        if tt.enob > 0:
            traces = [quantize_trace(tr, tt.enob) for tr in traces]
        mode_sets = [extract_modes(tr, tt.window_ps) for tr in traces]
        modes = concatenate_modes(mode_sets)
        report = estimate_report(modes, cfg.teleporter.eta_meas)
    except ValueError as exc:
        raise ConfigError(f"timetrace: {exc}") from None

    out_dir = make_out_dir("timetrace", args.out_dir)
    outputs = []
    t_ps = np.arange(tracks.n_samples) * DT_PS
    trace_dir = out_dir / "traces"
    trace_dir.mkdir(exist_ok=True)
    for tr in traces:
        path = trace_dir / f"trace_{tr.trace_id:04d}.csv"
        write_csv(path, ["t_ps", "x", "p", "in_x", "in_p"],
                  [t_ps, tr.x_samples, tr.p_samples,
                   tr.input_mean_x, tr.input_mean_p])
        outputs.append(path)
    modes_path = out_dir / "modes.csv"
    write_csv(modes_path, ["k", "x_k", "p_k", "in_x_k", "in_p_k"],
              [modes.k, modes.x_k, modes.p_k, modes.in_x_k, modes.in_p_k])
    outputs.append(modes_path)
    budget = analytic_noise_budget(cfg.teleporter)
    json_path = out_dir / "report.json"
    write_json(json_path, _report_payload(report, {
        "regime": cfg.teleporter.regime.value,
        "n_traces": n_traces,
        "budget_n_out_db": budget.n_out_db,
        "seed": args.seed,
        "window_ps": tt.window_ps,
    }))
    outputs.append(json_path)
    write_manifest(out_dir, "timetrace", cfg.raw, args.seed, started, outputs)
    print(f"timetrace: {report.n_modes} modes, raw ({report.vx_raw_db:+.3f}, "
          f"{report.vp_raw_db:+.3f}) dB, intrinsic ({report.vx_int_db:+.3f}, "
          f"{report.vp_int_db:+.3f}) dB, F_raw = {report.f_raw:.4f}, "
          f"F_int = {report.f_int:.4f} (se {report.se_db:.3f} dB)")
    print(f"wrote {out_dir}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    started = _utc_now()
    if args.param not in SWEEP_PARAMS:
        raise ConfigError(f"unknown sweep parameter {args.param!r}; "
                          f"choose from {SWEEP_PARAMS}")
    lo, hi = args.range
    values = np.linspace(lo, hi, args.points)
    rows = {"value": [], "n_out": [], "n_out_db": [], "fidelity_vacuum": [],
            "circuit_n_out": [], "circuit_n_out_db": []}
    for value in values:
        try:
            tcfg = dataclasses.replace(cfg.teleporter, tap_reflectivity=None,
                                       **{args.param: float(value)})
        except ValueError as exc:
            raise ConfigError(f"teleporter.{args.param}: {exc}")
        budget = analytic_noise_budget(tcfg)
        out = run_teleport(tcfg, make_vacuum(1))
        _, _, vx, vp = quad_statistics(out, 0)
        circuit = 0.5 * (vx + vp)
        rows["value"].append(value)
        rows["n_out"].append(budget.n_out)
        rows["n_out_db"].append(budget.n_out_db)
        rows["fidelity_vacuum"].append(budget.fidelity_vacuum)
        rows["circuit_n_out"].append(circuit)
        rows["circuit_n_out_db"].append(10 * np.log10(circuit))
    out_dir = make_out_dir("sweep", args.out_dir)
    csv_path = out_dir / f"sweep_{args.param}.csv"
    write_csv(csv_path, list(rows), list(rows.values()))
    write_manifest(out_dir, "sweep", cfg.raw, None, started, [csv_path])
    print(f"swept {args.param} over [{lo}, {hi}] ({args.points} points); "
          f"wrote {csv_path}")
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.config is not None:
        load_config(args.config)  # config is only checked for validity here
    results = run_validation(args.level)
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"[{status}] {r.name} ({r.elapsed_s:.2f}s)"
        if not r.passed:
            line += f": {r.detail}"
        print(line)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed "
          f"(level={args.level})")
    return EXIT_OK if not failed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvteleport",
        description="Simulate broadband all-optical CV teleportation: noise "
                    "budgets, sideband spectra, and picosecond wavepacket "
                    "statistics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("budget", help="analytic noise budget and fidelities")
    p.add_argument("config")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("spectrum", help="sideband spectrum of teleported vacuum")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("timetrace", help="real-time wavepacket teleportation")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--traces", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_timetrace)

    p = sub.add_parser("sweep", help="noise budget across a parameter range")
    p.add_argument("config")
    p.add_argument("--param", required=True)
    p.add_argument("--range", nargs=2, type=float, required=True,
                   metavar=("MIN", "MAX"))
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="oracle cross-checks and invariants")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OutputError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
