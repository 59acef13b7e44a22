"""Command-line front end.

Subcommands: ``design-table``, ``simulate``, ``compare``, ``sweep``,
``validate``.  All commands honour ``--output-dir``, ``--quiet`` and
``--dry-run`` and never mutate the input configuration file.

Exit codes: 0 success; 1 validation-suite failures; 2 usage or configuration
error; 3 I/O error; 4 numerical failure (instability / non-convergence).
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, analysis, geometry, material, outputs, pipeline, plots
from .config import RunManifest, load_config
from .errors import (
    ConfigError,
    DomainError,
    InstabilityError,
    NoPeakError,
    PorosurfError,
    ResolutionError,
    SteadyStateError,
)
from .fdtd import check_band_resolution, run, sweep

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _say(args, *message) -> None:
    if not args.quiet:
        print(*message)


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(args, command: str, cfg: dict, extra: dict | None = None) -> RunManifest:
    return RunManifest(
        command=command,
        config_path=str(args.config) if args.config else None,
        resolved_config=cfg,
        extra=extra or {},
        output_dir=str(args.output_dir),
    )


def cmd_design_table(args) -> int:
    cfg = load_config(args.config)
    out = _outdir(args)
    _manifest(args, "design-table", cfg).write(out / "manifest.yaml")
    if args.dry_run:
        _say(args, f"dry run: wrote {out / 'manifest.yaml'}")
        return EXIT_OK

    s = cfg["surface"]
    delta = material.skin_depth(s["sigma_ground"], s["frequency"])
    rows = []
    ok_rows = []
    for m in range(6):
        w_l, w_h, interleaved = geometry.MODEL_PITCHES[m]
        rho = 0.0 if w_l is None else geometry.porosity_of(
            w_l, w_h, cfg["lattice"]["radius"], interleaved)
        eps_eff = material.effective_permittivity(s["eps_r"], rho)
        note = ""
        h_mm: float | str = ""
        try:
            h = material.solve_thickness(eps_eff, s["frequency"], delta, s["x_target"])
            h_mm = h * 1e3
            ok_rows.append((rho * 100.0, eps_eff, h_mm))
        except (DomainError, PorosurfError) as exc:
            note = f"infeasible: {exc}"
        rows.append((m,
                     "" if w_l is None else w_l * 1e3,
                     "" if w_h is None else w_h * 1e3,
                     rho * 100.0, eps_eff, h_mm, note))
    table = outputs.write_csv(
        out / "design_table.csv",
        ["model", "w_l_mm", "w_h_mm", "porosity_pct", "eps_eff", "h_mm", "note"],
        rows)
    _say(args, f"wrote {table}")
    if cfg["output"]["figures"] and ok_rows:
        p = np.array([r[0] for r in ok_rows])
        e = np.array([r[1] for r in ok_rows])
        h = np.array([r[2] for r in ok_rows])
        fig = plots.plot_design_table(p, e, h, out / "design_table.svg")
        _say(args, f"wrote {fig}")
    return EXIT_OK


def _simulate_one(cfg: dict, model_id: int, out: Path, args,
                  tag: str = "") -> tuple[pipeline.ModelDesign, analysis.AnalysisReport]:
    design = pipeline.design_model(cfg, model_id)
    lattice = pipeline.build_lattice(cfg, model_id)
    geometry.save_geometry(lattice, out / f"geometry{tag}.txt")
    if args.dry_run:
        return design, None

    sim_cfg = pipeline.simulation_config(cfg, design.n_background)
    record = run(sim_cfg, lattice)
    margin, window, ref_amp = pipeline.analysis_options(cfg, design)
    profile, report = analysis.analyze_record(record, margin, window, ref_amp)

    outputs.write_amplitude_map_csv(record, out / f"amplitude_map{tag}.csv")
    outputs.write_amplitude_map_pgm(record, out / f"amplitude_map{tag}.pgm")
    outputs.write_profile_csv(profile.x, profile.p_db, out / f"profile{tag}.csv")
    outputs.write_profile_csv(profile.x, profile.local_mean_db,
                              out / f"local_mean{tag}.csv", "local_mean_db")
    outputs.write_probe_series_csv(record, out / f"probes{tag}.csv")
    outputs.write_csv(out / f"report{tag}.csv",
                      ["model", "porosity_pct", "sigma_db", "path_loss_db_per_m"],
                      [(model_id, design.rho * 100.0, report.sigma_db,
                        report.path_loss_db_per_m)])
    if cfg["output"]["figures"]:
        plots.plot_amplitude_map(record, out / f"amplitude_map{tag}.svg")
        plots.plot_profile(profile, out / f"profile{tag}.svg",
                           title=f"Centreline profile, model {model_id}")
    return design, report


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    out = _outdir(args)
    _manifest(args, "simulate", cfg, {"model": args.model}).write(out / "manifest.yaml")
    design, report = _simulate_one(cfg, args.model, out, args)
    if args.dry_run:
        _say(args, f"dry run: wrote manifest and geometry to {out}")
        return EXIT_OK
    _say(args, f"model {args.model}: porosity {design.rho * 100:.2f} %, "
               f"sigma {report.sigma_db:.4f} dB, "
               f"path loss {report.path_loss_db_per_m:.3f} dB/m")
    _say(args, f"outputs in {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    models = args.models
    if len(models) < 2:
        raise ConfigError("compare needs at least two model ids")
    cfg = load_config(args.config)
    out = _outdir(args)
    _manifest(args, "compare", cfg, {"models": models}).write(out / "manifest.yaml")

    rows = []
    failed: str | None = None
    for m in models:
        try:
            design, report = _simulate_one(cfg, m, out, args, tag=f"_model{m}")
        except PorosurfError as exc:
            failed = f"model {m} failed: {exc}"
            break
        if args.dry_run:
            rows.append((m, design.rho * 100.0, "", ""))
        else:
            rows.append((m, design.rho * 100.0, report.sigma_db,
                         report.path_loss_db_per_m))
            _say(args, f"model {m}: sigma {report.sigma_db:.4f} dB, "
                       f"L {report.path_loss_db_per_m:.3f} dB/m")
    outputs.write_csv(out / "compare.csv",
                      ["model", "porosity_pct", "sigma_db", "path_loss_db_per_m"],
                      rows)
    if failed is not None:
        (out / "PARTIAL_RESULTS.txt").write_text(
            failed + "\ncompare.csv holds the models that completed.\n",
            encoding="ascii")
        print(f"error: {failed} (partial results in {out})", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.dry_run:
        _say(args, f"dry run: wrote manifest and geometries to {out}")
        return EXIT_OK
    if cfg["output"]["figures"]:
        plots.plot_sigma_vs_porosity([r[0] for r in rows], [r[1] for r in rows],
                                     [r[2] for r in rows], out / "compare.svg")
    _say(args, f"outputs in {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.points < 2:
        raise ConfigError("sweep needs at least 2 frequency points")
    try:
        lo_s, hi_s = args.band.split(":")
        band = (float(lo_s), float(hi_s))
    except ValueError as exc:
        raise ConfigError(f"band must be 'f_lo:f_hi' in Hz, got {args.band!r}") from exc

    cfg = load_config(args.config)
    out = _outdir(args)
    _manifest(args, "sweep", cfg,
              {"model": args.model, "band": list(band), "points": args.points}
              ).write(out / "manifest.yaml")

    design = pipeline.design_model(cfg, args.model)
    lattice = pipeline.build_lattice(cfg, args.model)
    geometry.save_geometry(lattice, out / "geometry.txt")
    sim_cfg = pipeline.simulation_config(cfg, design.n_background)
    check_band_resolution(sim_cfg, band[1])  # fail fast, before any long run
    if args.dry_run:
        _say(args, f"dry run: wrote manifest and geometry to {out}")
        return EXIT_OK

    result = sweep(sim_cfg, lattice, band, args.points)
    outputs.write_spectra_csv(result.freqs,
                              {"s21_db": result.s21_db, "s11_db": result.s11_db},
                              out / "spectra.csv")
    band_note = ""
    metrics = None
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            metrics = analysis.band_metrics(result.freqs, result.s21_db)
        for w in caught:
            band_note = str(w.message)
            print(f"warning: {band_note}", file=sys.stderr)
    except NoPeakError as exc:
        band_note = str(exc)
        print(f"warning: {band_note}", file=sys.stderr)

    if metrics is not None:
        outputs.write_csv(out / "band.csv",
                          ["f_peak_hz", "band_lo_hz", "band_hi_hz", "peak_db",
                           "truncated_low", "truncated_high"],
                          [(metrics.f_peak, metrics.band_3db[0], metrics.band_3db[1],
                            metrics.peak_db, metrics.truncated_low,
                            metrics.truncated_high)])
        _say(args, f"peak {metrics.f_peak / 1e9:.3f} GHz, 3-dB band "
                   f"{metrics.band_3db[0] / 1e9:.3f}-{metrics.band_3db[1] / 1e9:.3f} GHz")
    if cfg["output"]["figures"]:
        plots.plot_spectrum(result.freqs, result.s21_db, result.s11_db,
                            metrics, out / "spectrum.svg")
    _say(args, f"outputs in {out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import full_suite

    cfg = load_config(args.config)
    out = _outdir(args)
    _manifest(args, "validate", cfg, {"quick": args.quick}).write(out / "manifest.yaml")
    if args.dry_run:
        _say(args, f"dry run: wrote {out / 'manifest.yaml'}")
        return EXIT_OK

    results = full_suite(quick=args.quick)
    rows = []
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        detail = f" ({r.detail})" if r.detail else ""
        print(f"[{status}] {r.name}: measured {r.measured:.4g} "
              f"vs threshold {r.threshold:.4g}{detail}")
        rows.append((r.name, r.measured, r.threshold, status, r.detail))
    outputs.write_csv(out / "validation.csv",
                      ["check", "measured", "threshold", "status", "detail"], rows)
    return EXIT_OK if all_ok else EXIT_CHECKS_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="porosurf",
        description="Design and 2D time-domain simulation of porous "
                    "surface-wave channels.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, default=None,
                       help="YAML configuration file (defaults built in)")
        p.add_argument("--output-dir", type=Path, default=Path("porosurf-out"),
                       help="directory for all outputs")
        p.add_argument("--quiet", action="store_true", help="suppress progress text")
        p.add_argument("--dry-run", action="store_true",
                       help="write manifest/geometry only; no simulation")

    p = sub.add_parser("design-table", help="emit the six-model design table")
    common(p)
    p.set_defaults(fn=cmd_design_table)

    p = sub.add_parser("simulate", help="run one channel model end to end")
    common(p)
    p.add_argument("--model", type=int, required=True, choices=range(6))
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("compare", help="run several models under one config")
    common(p)
    p.add_argument("--models", type=lambda s: [int(v) for v in s.split(",")],
                   required=True, help="comma-separated model ids, e.g. 0,1,4")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("sweep", help="broadband transmission sweep of one model")
    common(p)
    p.add_argument("--model", type=int, required=True, choices=range(6))
    p.add_argument("--band", default="22e9:33e9", help="f_lo:f_hi in Hz")
    p.add_argument("--points", type=int, default=111)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("validate", help="run the built-in oracle suite")
    common(p)
    p.add_argument("--quick", action="store_true",
                   help="skip the long field-solver checks")
    p.set_defaults(fn=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"i/o error: cannot read {exc.filename}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InstabilityError, SteadyStateError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ResolutionError, DomainError, PorosurfError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
