"""Batch front end: mode solve, gap scans, loss fit, budget and trap reports.

Exit codes: 0 ok, 2 input validation, 3 no guided mode, 4 series convergence,
5 fit failure.  Reports go to stdout as `key=value` lines; tables are written
as CSV files under --out (written to a temporary name and renamed, so a
failed run never leaves a partial file).  All numbers are printed with 6
significant digits, which makes reruns byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile

from .cavity import (
    CavitySpec,
    fit_losses,
    quarter_wave_stack,
    stack_reflectivity,
)
from .config import ProjectConfig, load_config
from .constants import KB_J_PER_K
from .cqed import full_budget
from .errors import (
    ConfigError,
    FitDiverged,
    GridTooSmall,
    InsufficientData,
    NoGuidedMode,
    RidgecavError,
    SeriesNotConverged,
)
from .fields import field_to_csv_rows
from .gap import loss_spectrum, round_trip_phase_scan
from .trap import potential_profile, trap_analysis
from .waveguide import solve_fundamental_mode

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_MODE = 3
EXIT_CONVERGENCE = 4
EXIT_FIT = 5


def _fmt(x) -> str:
    return format(float(x), ".6g")


def _atomic_write_lines(path: str, lines) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _solve_mode(cfg: ProjectConfig):
    return solve_fundamental_mode(cfg.geometry, cfg.grid)


def cmd_mode(args) -> int:
    cfg = load_config(args.config)
    mode = _solve_mode(cfg)
    out_csv = os.path.join(args.out, "mode_field.csv")
    _atomic_write_lines(out_csv, field_to_csv_rows(mode.field))
    print(f"n_eff={_fmt(mode.n_eff)}")
    print(f"mode_area_um2={_fmt(mode.mode_area_um2)}")
    print(f"field_csv={out_csv}")
    return EXIT_OK


def cmd_gap_scan(args) -> int:
    cfg = load_config(args.config)
    if not args.phase_scan:
        # validate the scan range before paying for the mode solve
        if args.d_min < 0 or args.d_min >= args.d_max:
            raise ConfigError(f"need 0 <= d_min < d_max, got [{args.d_min}, {args.d_max}]")
        if args.steps < 2:
            raise ConfigError(f"need at least 2 steps, got {args.steps}")
    mode = _solve_mode(cfg)
    if args.phase_scan:
        phases, rrt = round_trip_phase_scan(mode, cfg.gap, n_phases=args.phase_steps)
        lines = ["phase_rad,r_rt"]
        lines += [f"{_fmt(p)},{_fmt(v)}" for p, v in zip(phases, rrt)]
        out_csv = os.path.join(args.out, "phase_scan.csv")
    else:
        rows = loss_spectrum(mode, args.d_min, args.d_max, args.steps, base_cfg=cfg.gap)
        lines = ["d_um,R,T,loss"]
        lines += [f"{_fmt(d)},{_fmt(r)},{_fmt(t)},{_fmt(l)}" for d, r, t, l in rows]
        out_csv = os.path.join(args.out, "gap_scan.csv")
    _atomic_write_lines(out_csv, lines)
    for line in lines:
        print(line)
    return EXIT_OK


def _read_finesse_csv(path):
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ConfigError(f"cannot read data: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError("data CSV is empty") from None
        header = [h.strip() for h in header]
        if header[:2] != ["length_um", "finesse"] or len(header) > 3 or (
            len(header) == 3 and header[2] != "sigma"
        ):
            raise ConfigError(
                "expected header 'length_um,finesse' or 'length_um,finesse,sigma', "
                f"got '{','.join(header)}'"
            )
        rows = []
        for i, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ConfigError(f"row {i}: expected {len(header)} columns, got {len(row)}")
            vals = []
            for j, cell in enumerate(row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ConfigError(
                        f"row {i}, column {j + 1} ('{header[j]}'): "
                        f"'{cell.strip()}' is not a number"
                    ) from None
            rows.append(tuple(vals))
    return rows


def cmd_fit(args) -> int:
    rows = _read_finesse_csv(args.data)
    result = fit_losses(rows)
    print(f"R_fit={_fmt(result.R_fit)}")
    print(f"alpha_fit_per_cm={_fmt(result.alpha_fit_per_cm)}")
    print(f"sigma_R={_fmt(result.sigma_R)}")
    print(f"sigma_alpha={_fmt(result.sigma_alpha)}")
    print(f"residual_norm={_fmt(result.residual_norm)}")
    print(f"rank_deficient={'true' if result.rank_deficient else 'false'}")
    return EXIT_OK


def cmd_budget(args) -> int:
    cfg = load_config(args.config)
    budget_cfg = cfg.budget
    need_mode = budget_cfg.mode_area_um2 is None or (
        not args.no_gap and budget_cfg.gap_amplitude is None
    )
    mode = _solve_mode(cfg) if need_mode else None
    area = (
        budget_cfg.mode_area_um2
        if budget_cfg.mode_area_um2 is not None
        else mode.mode_area_um2
    )
    if args.no_gap:
        gap_amp = None
    elif budget_cfg.gap_amplitude is not None:
        gap_amp = budget_cfg.gap_amplitude
    else:
        _, rrt = round_trip_phase_scan(mode, cfg.gap, n_phases=budget_cfg.phase_samples)
        gap_amp = float(rrt.min())  # constructive in-gap interference

    spec = CavitySpec(
        length_um=cfg.cavity.length_um,
        n_group=cfg.cavity.n_group,
        alpha_per_cm=cfg.cavity.alpha_per_cm,
        mirror_R_left=cfg.cavity.mirror_R_left,
        mirror_R_right=cfg.cavity.mirror_R_right,
        gap_round_trip_amplitude=gap_amp,
    )
    budget = full_budget(area, spec, None, cfg.atom, budget_cfg.enhancement)

    for pairs in sorted({3, 6, cfg.mirror.pairs}):
        stack = quarter_wave_stack(
            pairs,
            n_high=cfg.mirror.n_high,
            n_low=cfg.mirror.n_low,
            n_incident=cfg.geometry.n_core,
            n_exit=1.0,
            wavelength_nm=cfg.geometry.wavelength_nm,
        )
        refl = stack_reflectivity(stack, cfg.geometry.wavelength_nm)
        print(f"mirror_R_{pairs}pair_percent={_fmt(100.0 * refl)}")
    print(f"mode_area_um2={_fmt(area)}")
    if gap_amp is not None:
        print(f"gap_round_trip_amplitude={_fmt(gap_amp)}")
    print(f"finesse={_fmt(budget.finesse)}")
    print(f"fsr_GHz={_fmt(budget.fsr_GHz)}")
    print(f"kappa_intr_GHz={_fmt(budget.kappa_intr_over_2pi_GHz)}")
    print(f"kappa_T_GHz={_fmt(budget.kappa_T_over_2pi_GHz)}")
    print(f"g_MHz={_fmt(budget.g_over_2pi_MHz)}")
    print(f"kappa_total_GHz={_fmt(budget.kappa_total_over_2pi_GHz)}")
    print(f"C={_fmt(budget.cooperativity)}")
    print(f"enhancement={_fmt(budget.enhancement)}")
    print(f"divergent={'true' if budget.divergent else 'false'}")
    return EXIT_OK


def cmd_trap(args) -> int:
    cfg = load_config(args.config)
    trap_cfg = cfg.trap_config()
    z_um, u_J = potential_profile(trap_cfg)
    lines = ["z_um,U_J,U_uK"]
    lines += [
        f"{_fmt(z)},{_fmt(u)},{_fmt(u / KB_J_PER_K * 1e6)}" for z, u in zip(z_um, u_J)
    ]
    out_csv = os.path.join(args.out, "trap_profile.csv")
    _atomic_write_lines(out_csv, lines)
    result = trap_analysis(trap_cfg)
    print(f"profile_csv={out_csv}")
    print(f"has_minimum={'true' if result['has_minimum'] else 'false'}")
    print(f"barrier_uK={_fmt(result['barrier_height_uK'])}")
    print(f"barrier_J={_fmt(result['barrier_height_J'])}")
    if result["has_minimum"]:
        print(f"min_position_um={_fmt(result['min_position_um'])}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridgecav",
        description="Gapped ridge-waveguide Fabry-Perot cavity toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mode = sub.add_parser("mode", help="solve the fundamental mode")
    p_mode.add_argument("config")
    p_mode.add_argument("--out", default=".", help="output directory for artifacts")
    p_mode.set_defaults(func=cmd_mode)

    p_gap = sub.add_parser("gap-scan", help="loss vs gap width, or a phase scan")
    p_gap.add_argument("config")
    p_gap.add_argument("--d-min", type=float, default=0.3)
    p_gap.add_argument("--d-max", type=float, default=3.0)
    p_gap.add_argument("--steps", type=int, default=271)
    p_gap.add_argument(
        "--phase-scan",
        action="store_true",
        help="scan the arm phase at the configured gap width instead",
    )
    p_gap.add_argument("--phase-steps", type=int, default=360)
    p_gap.add_argument("--out", default=".")
    p_gap.set_defaults(func=cmd_gap_scan)

    p_fit = sub.add_parser("fit", help="fit (R, alpha) to finesse-vs-length data")
    p_fit.add_argument("data", help="CSV with header length_um,finesse[,sigma]")
    p_fit.set_defaults(func=cmd_fit)

    p_budget = sub.add_parser("budget", help="atom-cavity budget report")
    p_budget.add_argument("config")
    p_budget.add_argument(
        "--no-gap", action="store_true", help="intrinsic budget without the gap"
    )
    p_budget.add_argument("--out", default=".")
    p_budget.set_defaults(func=cmd_budget)

    p_trap = sub.add_parser("trap", help="trap potential profile and analysis")
    p_trap.add_argument("config")
    p_trap.add_argument("--out", default=".")
    p_trap.set_defaults(func=cmd_trap)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (GridTooSmall, InsufficientData, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NoGuidedMode as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_MODE
    except SeriesNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except FitDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT
    except RidgecavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
