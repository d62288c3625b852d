"""Command-line driver: ``regslep {spectrum,solve,experiment,kernels}``.

Flags mirror :class:`~regslep.experiment.ExperimentConfig`; values from a
``--config`` JSON file override the flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .csvio import write_csv
from .experiment import ExperimentConfig, emit_reports, generate_truth, run_experiment, sample_rhs
from .problems import problem_from_config
from .regularization import SHANNON, KernelEval, eval_kernel, scaling_solve, tsvd_solve

_PROBLEM_KEYS = {
    "identity": ("N", "region_nodes", "bounds", "rule"),
    "ill_posed": ("N", "region_nodes", "bounds", "rule"),
    "downward": ("L", "r_p", "r_s", "cap_angle", "n_theta", "n_phi"),
    "coupled": ("L", "L_external", "r_p", "r_s", "r_e", "cap_angle", "layout", "n_theta", "n_phi"),
}


def _add_problem_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("problem")
    g.add_argument("--problem", choices=sorted(_PROBLEM_KEYS), default="identity")
    g.add_argument("--N", type=int, help="circle bandlimit (default 50)")
    g.add_argument("--L", type=int, help="maximum spherical-harmonic degree")
    g.add_argument("--L-external", dest="L_external", type=int)
    g.add_argument("--r-p", dest="r_p", type=float, help="planet radius")
    g.add_argument("--r-s", dest="r_s", type=float, help="satellite (data) radius")
    g.add_argument("--r-e", dest="r_e", type=float, help="external source radius")
    g.add_argument("--cap-angle", dest="cap_angle", type=float, help="polar-cap angle in radians")
    g.add_argument("--n-theta", dest="n_theta", type=int)
    g.add_argument("--n-phi", dest="n_phi", type=int)
    g.add_argument("--bounds", nargs=2, type=float, metavar=("A", "B"), help="circle region [A, B]")
    g.add_argument("--region-nodes", dest="region_nodes", type=int, help="data grid size on R (odd)")
    g.add_argument("--rule", choices=("simpson", "gauss"))
    g.add_argument("--layout", choices=("concatenated", "interleaved"))
    p.add_argument("--threshold", dest="threshold_ratio", type=float, default=1e-3)
    p.add_argument("--config", type=Path, help="JSON file; its values override flags")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def _add_data_args(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-coeff-std", dest="noise_coeff_std", type=float, default=1.0)
    p.add_argument("--noise-data-amp", dest="noise_data_amp", type=float, default=0.01)
    p.add_argument("--eval-count", dest="eval_count", type=int, default=401)


def _problem_dict(args) -> dict:
    cfg = {"problem": args.problem}
    for key in _PROBLEM_KEYS[args.problem]:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = list(val) if key == "bounds" else val
    return cfg


def _settings(args) -> dict:
    """Flag values merged with the config file (file wins)."""
    s = {
        "problem": _problem_dict(args),
        "threshold_ratio": args.threshold_ratio,
    }
    for key in ("seed", "noise_coeff_std", "noise_data_amp", "eval_count", "scales"):
        if getattr(args, key, None) is not None:
            s[key] = getattr(args, key)
    if args.config is not None:
        try:
            file_cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config {args.config}: {exc}") from exc
        if "config" in file_cfg:
            # accept the echo written by ``experiment``
            file_cfg = file_cfg["config"]
        if isinstance(file_cfg.get("problem"), str):
            file_cfg = dict(file_cfg)
            s["problem"] = {"problem": file_cfg.pop("problem"), **file_cfg.pop("problem_params", {})}
        elif "problem" in file_cfg:
            s["problem"] = dict(file_cfg.pop("problem"))
        s.update(file_cfg)
    return s


def _experiment_config(s: dict) -> ExperimentConfig:
    keys = set(ExperimentConfig.__dataclass_fields__)
    return ExperimentConfig.from_dict({k: v for k, v in s.items() if k in keys})


def _make_out(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc.strerror or exc}") from exc
    return path


def cmd_spectrum(args) -> int:
    s = _settings(args)
    inst = problem_from_config(s["problem"])
    sysm = inst.build(s["threshold_ratio"])
    out = _make_out(args.out)
    sysm.write_spectrum(out / "spectrum.csv")
    if args.eigenvectors:
        sysm.write_eigenvectors(out / "eigenvectors.csv")
    print(f"{inst.name}: size {sysm.size}, kept {sysm.kept}, "
          f"rho_1 {sysm.rhos[0]:.10g}, tau_1/tau_kept {sysm.condition:.6g}")
    return 0


def cmd_solve(args) -> int:
    s = _settings(args)
    cfg = _experiment_config(s)
    inst = problem_from_config(cfg.problem)
    if inst.is_coupled:
        raise ValueError("solve needs a single-field problem")
    sysm = inst.build(cfg.threshold_ratio)
    F = generate_truth(inst.operator.size, cfg.seed, cfg.noise_coeff_std)
    G = sample_rhs(inst, F, cfg.noise_data_amp, cfg.seed)
    if args.tsvd is not None:
        sol = tsvd_solve(sysm, G, args.tsvd)
        tag = f"tsvd_{args.tsvd}"
    else:
        sol = scaling_solve(sysm, G, SHANNON, args.scale)
        tag = f"scale_{args.scale}"
    pts = inst.evaluation_points(cfg.eval_count)
    vals = inst.operator.u_basis.evaluate(pts)
    truth, approx = F @ vals, sol.u_coeffs @ vals
    out = _make_out(args.out)
    coords = pts[:, None] if pts.ndim == 1 else pts
    cols = ("x",) if pts.ndim == 1 else ("theta", "phi")
    write_csv(
        out / f"solution_{tag}.csv",
        cols + ("truth", "approx"),
        ((*coords[i], truth[i], approx[i]) for i in range(len(coords))),
    )
    write_csv(out / f"coeffs_{tag}.csv", ("k", "coeff"), enumerate(sol.coeffs, start=1))
    if args.filter_values and args.tsvd is None:
        ks = np.arange(1, sysm.kept + 1)
        write_csv(out / f"filter_{tag}.csv", ("k", "phi"), zip(ks, SHANNON.values(args.scale, ks)))
    inside = inst.region.contains(pts)
    rms = math.sqrt(float(np.mean((truth - approx)[inside] ** 2)))
    print(f"{tag}: kept {sysm.kept}, rms on R {rms:.6g}")
    return 0


def cmd_experiment(args) -> int:
    s = _settings(args)
    cfg = _experiment_config(s)
    report = run_experiment(cfg)
    emit_reports(report, args.out)
    print(f"kept {report.kept}")
    print("scale,rms")
    for J, r in zip(report.scales, report.rms):
        print(f"{J},{r:.6g}")
    return 0


def cmd_kernels(args) -> int:
    s = _settings(args)
    inst = problem_from_config(s["problem"])
    sysm = inst.build(s["threshold_ratio"])
    filt = SHANNON if args.scale is not None else None
    kernel = KernelEval(args.direction, sysm, filt, args.scale or 0)
    x = inst.evaluation_points(args.eval_count)
    if x.ndim != 1:
        raise ValueError("kernel tables are only written for circle problems")
    z = np.asarray(args.z, dtype=float)
    res = eval_kernel(kernel, x, z)
    out = _make_out(args.out)
    rows = ((x[i], z[j], res.values[i, j]) for j in range(z.size) for i in range(x.size))
    name = f"kernel_{args.direction}" + (f"_scale_{args.scale}" if filt else "") + ".csv"
    write_csv(out / name, ("x", "z", "value"), rows)
    print(f"{name}: tau_1/tau_kept {res.condition:.6g}")
    if res.unstable:
        print("warning: unfiltered downward kernel is numerically unstable", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regslep", description="Slepian-basis regularization of regional inverse problems"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="write the sorted eigenvalues (k, rho, tau)")
    _add_problem_args(p)
    p.add_argument("--eigenvectors", action="store_true", help="also write eigenvectors.csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("solve", help="one regularized solve on synthetic data")
    _add_problem_args(p)
    _add_data_args(p)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--scale", type=int, default=6, help="Shannon scale J")
    grp.add_argument("--tsvd", type=int, help="truncated SVD with this many modes")
    p.add_argument("--filter-values", action="store_true", help="write (k, phi) table")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment", help="multiscale experiment with RMS table")
    _add_problem_args(p)
    _add_data_args(p)
    p.add_argument("--scales", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6, 7])
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("kernels", help="tabulate D_up, D_down or Phi_J on the circle")
    _add_problem_args(p)
    p.add_argument("--direction", choices=("up", "down"), default="up")
    p.add_argument("--z", type=float, nargs="+", default=[math.pi])
    p.add_argument("--scale", type=int, help="apply the Shannon filter at this scale")
    p.add_argument("--eval-count", dest="eval_count", type=int, default=401)
    p.set_defaults(func=cmd_kernels)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, IndexError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
