"""Command-line front end: `lcse run | presets | validate`.

Dispatches validated scenario configs to the library, writes plot-ready CSV
and JSON artifacts at 17 significant digits, and emits a manifest for every
run. Exit codes: 0 success, 2 config problem, 3 domain violation,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ScenarioConfig, build_coupling, build_initial_state,
                     build_integrator, build_pendulum_state, build_pulse,
                     build_seed_spec, build_grid_spec, build_system_params,
                     config_to_dict, landscape_cases, parse_config)
from .core import classify_regime
from .cpt import run_transfer
from .dynamics import integrate
from .errors import ConfigError, DomainError, InvalidInputError, NumericalError
from .landscape import contour_portrait, default_start_grid, energy_grid
from .presets import load_preset, preset_description, preset_names
from .stochastic import EnsembleScenario, run_ensemble

_NOTES = [
    "time axis is scaled: tau = c0n * t",
    "populations are fractions of total atom number; molecules count twice",
    "couplings, detunings and q are in units of c0n",
]

# quality bounds for pulsed-transfer runs, fixed from the zero-loss-free
# baseline sweep at the standard pulse (seeds 1e-6 .. 1e-2, span [0, 150]):
# capture of a non-dark start costs ~5% of atoms at the pulse peak, after
# which the trapped state keeps the molecular fraction below 5e-3
_TRANSFER_NOTES = [
    "transfer bounds: surviving-atom transfer fraction >= 0.8, "
    "|n_plus - n_minus| < 1e-6, peak n_m < 0.12 during capture, "
    "n_m < 5e-3 for tau >= 30",
]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, comments: list[str], header: list[str],
               rows) -> None:
    with open(path, "w") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _drift(traj) -> dict:
    n = traj.monitors["total_n"]
    m = traj.monitors["magnetization"]
    out = {"max_total_n_drift": float(np.abs(n - n[0]).max()),
           "max_magnetization_drift": float(np.abs(m - m[0]).max())}
    if "energy" in traj.monitors:
        e = traj.monitors["energy"]
        out["max_energy_drift"] = float(np.abs(e - e[0]).max())
    return out


def _run_effective(cfg: ScenarioConfig, out: Path) -> tuple[list[str], dict]:
    params = build_system_params(cfg)
    coupling = build_coupling(cfg)
    initial = build_initial_state(cfg, resonant=False)
    integ = cfg.integration
    traj = integrate("effective", initial, params,
                     (integ["tau_start"], integ["tau_end"]),
                     coupling=coupling, config=build_integrator(cfg),
                     sampling=integ["samples"])
    pops = traj.populations()
    theta = traj.theta()
    rows = zip(traj.times, pops[0], pops[1], pops[2], theta,
               traj.monitors["total_n"], traj.monitors["magnetization"],
               traj.monitors["energy"])
    _write_csv(out / "trajectory.csv",
               ["off-resonant three-mode run",
                "columns: tau, n_plus, n_zero, n_minus, theta, total_n, "
                "magnetization, energy"],
               ["tau", "n_plus", "n_zero", "n_minus", "theta", "total_n",
                "magnetization", "energy"], rows)
    derived = {
        "omega_eff": coupling.omega_eff, "c_eff": coupling.c_eff,
        "lightshift_delta": coupling.lightshift_delta,
        "lightshift_p": coupling.lightshift_p,
        "regime": classify_regime(coupling.c_eff, params.c2n).value,
    }
    return ["trajectory.csv"], {"conservation": _drift(traj),
                                "derived": derived}


def _run_pendulum(cfg: ScenarioConfig, out: Path) -> tuple[list[str], dict]:
    params = build_system_params(cfg)
    coupling = build_coupling(cfg)
    initial = build_pendulum_state(cfg)
    integ = cfg.integration
    traj = integrate("pendulum", initial, params,
                     (integ["tau_start"], integ["tau_end"]),
                     coupling=coupling, config=build_integrator(cfg),
                     sampling=integ["samples"])
    rows = zip(traj.times, traj.values[0], traj.values[1],
               traj.monitors["energy"])
    _write_csv(out / "trajectory.csv",
               ["reduced (theta, n0) pendulum run at fixed magnetization "
                f"m = {initial.m_mag!r}",
                "columns: tau, theta, n_zero, energy"],
               ["tau", "theta", "n_zero", "energy"], rows)
    derived = {"c_eff": coupling.c_eff,
               "regime": classify_regime(coupling.c_eff, params.c2n).value}
    return ["trajectory.csv"], {"conservation": _drift(traj),
                                "derived": derived}


def _transfer_rows(traj, pulse):
    pops = traj.populations()
    theta = [pulse.theta_fn(t) for t in traj.times]
    omega_d = [pulse.omega_d_fn(t) for t in traj.times]
    return zip(traj.times, pops[0], pops[1], pops[2], pops[3],
               theta, omega_d)


_TRANSFER_COLS = ["tau", "n_plus", "n_zero", "n_minus", "n_m", "theta_big",
                  "omega_d"]


def _run_resonant(cfg: ScenarioConfig, out: Path,
                  variant: str) -> tuple[list[str], dict]:
    params = build_system_params(cfg)
    pulse = build_pulse(cfg)
    initial = build_initial_state(cfg, resonant=True)
    integ = cfg.integration
    span = (integ["tau_start"], integ["tau_end"])
    if cfg.mode == "cpt":
        result = run_transfer(initial, params, pulse, tau_span=span,
                              config=build_integrator(cfg),
                              sampling=integ["samples"], variant=variant)
        traj = result.trajectory
    else:
        traj = integrate("resonant", initial, params, span, pulse=pulse,
                         config=build_integrator(cfg),
                         sampling=integ["samples"], variant=variant)
        result = None
    _write_csv(out / "trajectory.csv",
               ["resonant four-mode run (molecular mode explicit)",
                "columns: tau, n_plus, n_zero, n_minus, n_m, theta_big "
                "(two-photon detuning), omega_d (dump Rabi)"],
               _TRANSFER_COLS, _transfer_rows(traj, pulse))
    outputs = ["trajectory.csv"]
    extra = {"conservation": _drift(traj),
             "derived": {"pulse": dict(pulse.meta), "variant": variant}}
    if result is not None:
        payload = result.to_dict()
        payload["tau_span"] = list(span)
        payload["variant"] = variant
        _write_json(out / "transfer.json", payload)
        outputs.append("transfer.json")
    return outputs, extra


def _run_landscape(cfg: ScenarioConfig, out: Path) -> tuple[list[str], dict]:
    g = cfg.grid
    gridspec = build_grid_spec(cfg)
    starts = default_start_grid(g["starts_n_theta"], g["starts_n_n0"],
                                g["starts_n0_min"], g["starts_n0_max"],
                                g["m_mag"])
    cases = landscape_cases(cfg)
    mults = list(dict.fromkeys(mult for mult, _s, _lp in cases))
    single = len(mults) == 1
    outputs: list[str] = []
    counts_echo = {}
    for k, mult in enumerate(mults, start=1):
        doc: dict = {"c_eff_over_c2": mult, "q": cfg.params["q"],
                     "m_mag": g["m_mag"]}
        grids = {}
        for m2, setting, lp in cases:
            if m2 != mult:
                continue
            summary = contour_portrait(lp, gridspec, starts,
                                       tau_max=g["tau_max"],
                                       eps_return=g["eps_return"],
                                       config=build_integrator(cfg))
            doc[f"shifts_{setting}"] = {
                "c_eff": lp.c_eff,
                "lightshift_delta": lp.lightshift_delta,
                "lightshift_p": lp.lightshift_p,
                **summary.to_dict(),
            }
            grids[setting] = energy_grid(lp, gridspec)
            counts_echo[f"{mult:g}/{setting}"] = summary.counts
        jname = "portrait.json" if single else f"portrait_{k}.json"
        _write_json(out / jname, doc)
        outputs.append(jname)

        settings = sorted(grids)
        cols = ["theta", "n_zero"]
        comment = ["energy surface over (theta, n0)"]
        for s in settings:
            cols += ([f"energy_shifts_{s}", f"mask_shifts_{s}"]
                     if len(settings) > 1 else ["energy", "mask"])
        eg0 = grids[settings[0]]
        rows = []
        for i, n0 in enumerate(eg0.n_zero):
            for j, th in enumerate(eg0.theta):
                row = [th, n0]
                for s in settings:
                    eg = grids[s]
                    val = eg.values[i, j]
                    row += [0.0 if np.isnan(val) else val,
                            1.0 if eg.mask[i, j] else 0.0]
                rows.append(row)
        comment.append("columns: " + ", ".join(cols)
                       + "; mask 1 marks cells outside (1-n0)^2 >= m^2 "
                       "(energy written as 0 there)")
        cname = "energy_grid.csv" if single else f"energy_grid_{k}.csv"
        _write_csv(out / cname, comment, cols, rows)
        outputs.append(cname)
    return outputs, {"derived": {"counts": counts_echo}}


def _run_ensemble(cfg: ScenarioConfig, out: Path,
                  variant: str) -> tuple[list[str], dict]:
    params = build_system_params(cfg)
    spec = build_seed_spec(cfg)
    integ = cfg.integration
    span = (integ["tau_start"], integ["tau_end"])
    kind = cfg.seeds["kind"]
    if kind == "cpt":
        scenario = EnsembleScenario(kind="cpt", params=params,
                                    pulse=build_pulse(cfg), tau_span=span,
                                    sampling=integ["samples"],
                                    config=build_integrator(cfg),
                                    variant=variant)
    else:
        scenario = EnsembleScenario(kind="effective", params=params,
                                    coupling=build_coupling(cfg),
                                    tau_span=span,
                                    sampling=integ["samples"],
                                    config=build_integrator(cfg))
    stats = run_ensemble(spec, scenario, int(cfg.seeds["runs"]))
    rows = [(r.run, r.seed_plus.real, r.seed_plus.imag, r.seed_minus.real,
             r.seed_minus.imag, *r.final_populations, r.final_side,
             r.tau_onset) for r in stats.records]
    _write_csv(out / "ensemble.csv",
               [f"{spec.mode} ensemble, kind = {kind}, "
                f"rng_seed = {spec.rng_seed}",
                "columns: run, seed_plus_re, seed_plus_im, seed_minus_re, "
                "seed_minus_im, n_plus_final, n_zero_final, n_minus_final, "
                "n_m_final, final_side, tau_onset",
                "tau_onset = first sampled tau with n_plus + n_minus > 0.1 "
                "(nan if never)"],
               ["run", "seed_plus_re", "seed_plus_im", "seed_minus_re",
                "seed_minus_im", "n_plus_final", "n_zero_final",
                "n_minus_final", "n_m_final", "final_side", "tau_onset"],
               rows)
    _write_json(out / "ensemble_stats.json", stats.to_dict())
    return (["ensemble.csv", "ensemble_stats.json"],
            {"derived": {"stats": stats.to_dict()}})


def _dispatch(cfg: ScenarioConfig, out: Path, variant: str) -> dict:
    t0 = time.perf_counter()
    if cfg.mode == "effective":
        outputs, extra = _run_effective(cfg, out)
    elif cfg.mode == "pendulum":
        outputs, extra = _run_pendulum(cfg, out)
    elif cfg.mode in ("resonant", "cpt"):
        outputs, extra = _run_resonant(cfg, out, variant)
    elif cfg.mode == "landscape":
        outputs, extra = _run_landscape(cfg, out)
    else:
        outputs, extra = _run_ensemble(cfg, out, variant)
    notes = list(_NOTES)
    if cfg.mode in ("cpt", "ensemble"):
        notes += _TRANSFER_NOTES
    manifest = {
        "config": config_to_dict(cfg),
        "library_version": __version__,
        "wall_clock_seconds": time.perf_counter() - t0,
        "outputs": outputs,
        "notes": notes,
    }
    manifest.update(extra)
    _write_json(out / "manifest.json", manifest)
    return manifest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lcse",
        description="laser-catalyzed spin-exchange simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="path to an INI scenario file")
    src.add_argument("--preset", help="name of a built-in scenario")
    p_run.add_argument("--out", help="output directory (default: config "
                       "[output] dir or the working directory)")
    p_run.add_argument("--seed", type=int,
                       help="override the ensemble rng_seed")
    p_run.add_argument("--variant", choices=["literal", "symmetrized"],
                       default="symmetrized",
                       help="resonant equation variant")

    sub.add_parser("presets", help="list built-in scenarios")

    p_val = sub.add_parser("validate", help="check a config without running")
    p_val.add_argument("--config", required=True)

    args = parser.parse_args(argv)
    try:
        return _execute(args)
    except ConfigError as exc:
        print(f"config error:\n{exc}", file=sys.stderr)
        return 2
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


def _execute(args) -> int:
    if args.command == "presets":
        for name in preset_names():
            print(f"{name:16s} {preset_description(name)}")
        return 0

    if args.command == "validate":
        cfg = parse_config(Path(args.config).read_text())
        print(f"OK: mode = {cfg.mode}")
        return 0

    if args.preset:
        cfg = load_preset(args.preset)
    else:
        cfg = parse_config(Path(args.config).read_text())
    if args.seed is not None:
        if cfg.mode != "ensemble":
            raise InvalidInputError("--seed only applies to ensemble runs")
        cfg.seeds["rng_seed"] = int(args.seed)
    if args.variant != "symmetrized" and cfg.mode not in (
            "resonant", "cpt", "ensemble"):
        raise InvalidInputError(
            "--variant only applies to resonant, cpt and ensemble runs")

    out = Path(args.out) if args.out else Path(cfg.output.get("dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    manifest = _dispatch(cfg, out, args.variant)
    print(f"wrote {', '.join(manifest['outputs'])} and manifest.json "
          f"to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
