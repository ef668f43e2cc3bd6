"""Command-line entry point: ``spinprop <mode> --config FILE [--set k=v ...]``.

Modes
-----
synthesize  angles and field F(t) of a pulse-defined trajectory
evolve      evolution operator entries (sech pulse, 2x2 or 4x4; or angles)
swap-prob   Swap probability curve P(t), t in ns
sweep       P at fixed time while sweeping omega, J, c or t
validate    run the self-check suite

Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import config as cfgmod
from . import four_level, oracle, sech, synthesis, validation
from .errors import ConfigError, DomainError

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_csv(header, rows, out):
    """Write rows with 17 significant digits to ``out`` (path) or stdout."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text


def _pulse(values, angle):
    prefix = angle + "."
    spec = {k[len(prefix):]: v for k, v in values.items() if k.startswith(prefix)}
    if not spec:
        raise ConfigError(f"missing pulse definition for {angle} ({angle}.family, {angle}.v0, ...)")
    try:
        return synthesis.pulse_from_dict(spec)
    except DomainError as exc:
        raise ConfigError(f"{angle}: {exc}") from None


def trajectory_from_values(values) -> synthesis.EulerTrajectory:
    return synthesis.EulerTrajectory(*(_pulse(values, a) for a in ("theta", "phi", "alpha")))


# ---------------------------------------------------------------- modes


def build_synthesize(cfg):
    traj = trajectory_from_values(cfg.values)
    t = cfgmod.time_grid(cfg.values).points()

    def run():
        s = synthesis.eval_trajectory(traj, t)
        f = synthesis.field_from_angles(traj, t)
        rows = zip(t, s.theta, s.phi, s.alpha, f.f1, f.f2, f.f3)
        return ["t", "theta", "phi", "alpha", "F1", "F2", "F3"], rows

    return run


def _matrix_header(n):
    return [f"u{i}{j}_{part}" for i in range(1, n + 1) for j in range(1, n + 1) for part in ("re", "im")]


def _matrix_row(m):
    flat = np.asarray(m).ravel()
    return [x for z in flat for x in (z.real, z.imag)]


def build_evolve(cfg):
    values = cfg.values
    source = values.get("field", "sech")
    if source == "angles":
        traj = trajectory_from_values(values)
        t = cfgmod.time_grid(values).points()

        def run_angles():
            rows = ([ti, *_matrix_row(synthesis.evolution(traj, ti, t[0]))] for ti in t)
            return ["t", *_matrix_header(2)], rows

        return run_angles
    if source != "sech":
        raise ConfigError(f"field must be 'sech' or 'angles', got {source!r}")
    p = cfgmod.sech_params(values)
    t = cfgmod.time_grid(values).points()
    system = cfgmod.get_int(values, "system", 2)
    if system not in (2, 4):
        raise ConfigError("system must be 2 or 4")
    b_plus = cfgmod.get_float(values, "Bplus_GHz", 0.0)

    spec = four_level.ParallelFieldSpec.from_angular(
        lambda s: b_plus, lambda s: p.c / np.cosh(p.omega * s), lambda s: p.a
    )

    def run():
        rows = []
        for ti in t:
            u = sech.evolution_u(p, ti)
            if system == 4:
                u = four_level.evolve_parallel(spec, ti, u).matrix
            rows.append([ti, *_matrix_row(u)])
        return ["t_ns", *_matrix_header(system)], rows

    return run


def _ode_swap_curve(p, times, rel_tol):
    """P(t) from the reference integrator, integrating outward from t = 0."""
    h = oracle.HamiltonianFn.from_field(p.field)
    out = np.empty(len(times))
    for sign in (1, -1):
        idx = [i for i, t in enumerate(times) if (t > 0 if sign > 0 else t < 0)]
        if not idx:
            continue
        ts = np.array([times[i] for i in idx])
        order = np.argsort(sign * ts)
        traj = oracle.integrate_state(h, [1, 0], 0.0, ts[order][-1], rel_tol, times=ts[order])
        out[np.array(idx)[order]] = np.abs(traj.states[:, 1]) ** 2
    out[np.asarray(times) == 0] = 0.0
    return out


def swap_curve(p, times, method="closed", rel_tol=1e-10):
    if method == "closed":
        return np.array([sech.swap_probability(p, t) for t in times])
    if method == "ode":
        return _ode_swap_curve(p, times, rel_tol)
    raise ConfigError(f"method must be 'closed' or 'ode', got {method!r}")


def build_swap_prob(cfg):
    p = cfgmod.sech_params(cfg.values)
    t = cfgmod.time_grid(cfg.values).points()
    method = cfg.values.get("method", "closed")
    if method not in ("closed", "ode"):
        raise ConfigError(f"method must be 'closed' or 'ode', got {method!r}")

    def run():
        return ["t_ns", "P"], zip(t, swap_curve(p, t, method, cfg.tolerance))

    return run


def _sweep_point(args):
    values, method, rel_tol = args
    p = cfgmod.sech_params(values)
    t = cfgmod.get_float(values, "t_ns")
    if t == 0:
        return 0.0
    return float(swap_curve(p, [t], method, rel_tol)[0])


def build_sweep(cfg):
    values = cfg.values
    var = values.get("sweep.var")
    if var not in cfgmod.SWEEP_KEYS:
        raise ConfigError(f"sweep.var must be one of {sorted(cfgmod.SWEEP_KEYS)}, got {var!r}")
    block = cfgmod.parameter_block(values)
    key = cfgmod.SWEEP_KEYS[var][block]
    start = cfgmod.get_float(values, "sweep.start")
    end = cfgmod.get_float(values, "sweep.end")
    samples = cfgmod.get_int(values, "sweep.samples")
    if samples < 1:
        raise ConfigError("sweep.samples must be >= 1")
    if samples > 1 and not end > start:
        raise ConfigError("sweep.end must be greater than sweep.start")
    grid = np.linspace(start, end, samples) if samples > 1 else np.array([start])
    method = values.get("method", "closed")
    workers = cfgmod.get_int(values, "workers", 1)
    base = {k: v for k, v in values.items() if not k.startswith("sweep.")}
    if "sweep.t_ns" in values:
        base["t_ns"] = values["sweep.t_ns"]
    if var != "t":
        cfgmod.get_float(base, "t_ns")
    points = []
    for x in grid:
        v = dict(base)
        v[key] = repr(float(x))
        if key == "Bminus_mT":
            for k in ("B1_mT", "B2_mT", "g1", "g2"):
                v.pop(k, None)
        points.append((v, method, cfg.tolerance))
    # validate every point before doing any work
    for v, _, _ in points:
        cfgmod.sech_params(v)

    def run():
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                probs = list(pool.map(_sweep_point, points))
        else:
            probs = [_sweep_point(pt) for pt in points]
        return [key, "P"], zip(grid, probs)

    return run


def run_validate(cfg, stream=None):
    stream = stream or sys.stdout
    perturbation = cfgmod.get_float(cfg.values, "inject_perturbation", 0.0)
    results = validation.run_suite(perturbation=perturbation, rel_tol=min(cfg.tolerance, 1e-11))
    lines = [r.line() for r in results]
    failed = [r.name for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        lines.append("failed: " + "; ".join(failed))
    report = "\n".join(lines) + "\n"
    stream.write(report)
    if cfg.out not in (None, "-"):
        with open(cfg.out, "w") as fh:
            fh.write(report)
    return EXIT_VALIDATION if failed else EXIT_OK


BUILDERS = {
    "synthesize": build_synthesize,
    "evolve": build_evolve,
    "swap-prob": build_swap_prob,
    "sweep": build_sweep,
}


def make_parser():
    parser = argparse.ArgumentParser(prog="spinprop", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in cfgmod.MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", help="config file, or a bundled recipe name (fig1, fig2a, fig2b, fig3)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key (repeatable)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--tolerance", type=float, help="relative tolerance of the reference integrator")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        values = cfgmod.load(args.config) if args.config else {}
        values = cfgmod.apply_overrides(values, args.set)
        cfg = cfgmod.RunConfig.from_values(values, mode=args.mode, out=args.out, tolerance=args.tolerance)
        if cfg.mode == "validate":
            return run_validate(cfg)
        run = BUILDERS[cfg.mode](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        header, rows = run()
        write_csv(header, rows, cfg.out)
    except (ArithmeticError, DomainError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
