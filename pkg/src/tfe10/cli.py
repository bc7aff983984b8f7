"""Command line surface binding the numerical modules into runs.

Subcommands: kernel | eigen | shoot | branch | lyapunov | unstable |
evolve | verify.  A flat ``key = value`` config file can preload any
flag; explicit flags win.  Exit codes: 0 success, 1 numerical failure
(diagnostics as JSON on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .core.grids import Grid
from . import reporting, spectral


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str = ""
    n: float = 1.0
    p: Optional[float] = None
    dim: int = 1
    k: int = 0
    ymax: float = 40.0
    points: int = 2048
    tol: float = 1e-10
    shoot_tol: float = 1e-8
    delta: float = 1e-12
    branch: int = 3
    n_start: float = 1e-3
    t: float = 1.0
    out: Optional[str] = None
    format: str = "csv"

    def validate(self) -> "RunConfig":
        if self.tol <= 0 or self.shoot_tol <= 0:
            raise ConfigError("tolerances must be > 0")
        if self.ymax <= 0:
            raise ConfigError("ymax must be > 0")
        if self.points < 64:
            raise ConfigError("points must be >= 64")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        return self

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def provenance(self) -> dict:
        # the output path is not part of the computation's identity
        return {k: v for k, v in self.as_dict().items() if k != "out"}


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}
_FLOAT_KEYS = {"n", "p", "ymax", "tol", "shoot_tol", "delta", "n_start", "t"}
_INT_KEYS = {"dim", "k", "points", "branch"}


def load_config(path: str) -> dict:
    """Parse a flat key = value file (# comments) into override values."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in _FIELD_TYPES or key == "subcommand":
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                if key in _FLOAT_KEYS:
                    out[key] = float(val)
                elif key in _INT_KEYS:
                    out[key] = int(val)
                else:
                    out[key] = val
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: cannot parse {val!r} for key {key!r}")
    return out


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tfe10",
        description="Self-similar profiles and spectral data of the "
                    "tenth-order thin film equation")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file with defaults")
    common.add_argument("--n", type=float)
    common.add_argument("--p", type=float)
    common.add_argument("--dim", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--ymax", type=float)
    common.add_argument("--points", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--shoot-tol", dest="shoot_tol", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--branch", type=int)
    common.add_argument("--n-start", dest="n_start", type=float)
    common.add_argument("--t", type=float)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"))
    for name in ("kernel", "eigen", "shoot", "branch", "lyapunov",
                 "unstable", "evolve", "verify"):
        sub.add_parser(name, parents=[common])
    return ap


def _assemble_config(args) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    overrides = load_config(args.config) if args.config else {}
    for key, val in overrides.items():
        setattr(cfg, key, val)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None and f.name != "subcommand":
            setattr(cfg, f.name, flag)
    return cfg.validate()


def _kernel(cfg: RunConfig):
    grid = Grid.uniform(0.0, cfg.ymax, cfg.points)
    kern = (spectral.kernel_1d(grid) if cfg.dim == 1
            else spectral.kernel_radial(cfg.dim, grid))
    mass = kern.mass()
    if cfg.out:
        jmax = kern.table.shape[0] - 1
        rows = np.column_stack([grid.points] + list(kern.table))
        header = ["y", "F"] + [f"F{j}" for j in range(1, jmax + 1)]
        reporting.write_csv(cfg.out, header, rows, "kernel",
                            cfg.provenance(),
                            footer={"integral_check": mass})
    print(f"kernel dim={cfg.dim}: mass={mass:.12f} "
          f"ode_residual={kern.ode_residual():.2e}")
    return 0 if abs(mass - 1.0) < 1e-6 else 1


def _eigen(cfg: RunConfig):
    from .similarity import solve_fk_linear
    grid = Grid.uniform(0.0, cfg.ymax, cfg.points)
    kern = spectral.kernel_1d(grid)
    eig = solve_fk_linear(cfg.k, cfg.dim, kernel=kern)
    if cfg.out:
        if cfg.format == "json":
            reporting.write_json(cfg.out, eig.as_dict(), "eigen",
                                 cfg.provenance())
        else:
            rows = reporting.profile_rows(eig.profile)
            header = ["y", "f"] + [f"f{j}" for j in range(1, 10)]
            reporting.write_csv(cfg.out, header, rows, "eigen",
                                cfg.provenance())
    resid = eig.diagnostics["interior_residual"]
    print(f"f_{cfg.k} (n=0): alpha={eig.alpha} equation_residual={resid:.2e}")
    return 0 if resid < 1e-5 else 1


def _shoot(cfg: RunConfig):
    from .similarity import solve_f0
    eig = solve_f0(cfg.n, cfg.dim, branch=cfg.branch, delta=cfg.delta,
                   shoot_tol=cfg.shoot_tol, ivp_tol=cfg.tol)
    record = eig.as_dict()
    record["diagnostics"] = eig.diagnostics
    if cfg.out:
        rows = reporting.profile_rows(eig.profile, jmax=1)
        header = ["y", "f", "f1"]
        reporting.write_csv(cfg.out, header, rows, "shoot", cfg.provenance())
        reporting.write_json(_sidecar(cfg.out), record, "shoot",
                             cfg.provenance())
    conv = eig.diagnostics["converged"]
    print(f"f0 n={cfg.n} branch={cfg.branch}: converged={conv} "
          f"y0={eig.y0:.6f} residual={eig.diagnostics['residual_norm']:.2e}")
    if not conv:
        json.dump(eig.diagnostics, sys.stderr, default=str)
        return 1
    return 0


def _branch(cfg: RunConfig):
    from .continuation import branch_report, trace_branch
    br = trace_branch(cfg.n_start, cfg.n, cfg.dim, branch=cfg.branch,
                      shoot_tol=cfg.shoot_tol, ivp_tol=cfg.tol)
    rows = branch_report(br)
    if cfg.out:
        header = ["n", "alpha0", "y0", "f2_0", "f4_0", "f6_0", "f8_0",
                  "iters", "residual"]
        data = [[r[h] for h in header] for r in rows]
        reporting.write_csv(cfg.out, header, data, "branch", cfg.provenance())
        reporting.write_json(_sidecar(cfg.out), {"points": rows,
                                                 "termination": br.termination},
                             "branch", cfg.provenance())
    print(f"branch: {len(rows)} points, termination={br.termination}")
    return 0 if br.termination == "reached n_max" and len(rows) >= 2 else 1


def _lyapunov(cfg: RunConfig):
    from . import branching
    grid = Grid.uniform(0.0, cfg.ymax, cfg.points)
    if cfg.k == 0:
        kern = (spectral.kernel_1d(grid) if cfg.dim == 1
                else spectral.kernel_radial(cfg.dim, grid))
        rep = branching.mu10(cfg.dim, kern)
        ok = abs(rep["mu10"] - rep["exact"]) < 4e-3
    elif cfg.k == 1:
        kern = spectral.kernel_radial(2, grid)
        sol = branching.dipole_solve(kern)
        rep = {"level": 1, "c1": sol.c1, "c2": sol.c2, "mu11": sol.mu11,
               "residual": sol.residual_norm, **sol.report}
        ok = sol.converged
    else:
        kern = spectral.kernel_radial(2, grid)
        rep = branching.assemble_conic_system(kern)
        rep["level"] = 2
        ok = True
    if cfg.out:
        reporting.write_json(cfg.out, rep, "lyapunov", cfg.provenance())
    print(json.dumps(reporting._jsonable(rep), indent=1, sort_keys=True))
    return 0 if ok else 1


def _unstable(cfg: RunConfig):
    from . import unstable
    p = cfg.p if cfg.p is not None else unstable.p_critical(cfg.n, cfg.dim)
    exps = unstable.exponents_unstable(cfg.n, p, cfg.dim)
    rep = exps.as_dict()
    if cfg.out:
        reporting.write_json(cfg.out, rep, "unstable", cfg.provenance())
    print(json.dumps(rep, indent=1, sort_keys=True))
    return 0 if rep["identities_ok"] else 1


def _evolve(cfg: RunConfig):
    grid = Grid.uniform(0.0, cfg.ymax, cfg.points)
    kern = spectral.kernel_1d(grid, jmax=1)
    prof = kern.profile()
    # give the diffusive spreading room beyond the input domain so the
    # sampled masses are comparable
    pad = 45.0 * (1.0 + cfg.t / 10.0) ** 0.1
    x_out = np.linspace(-(cfg.ymax + pad), cfg.ymax + pad,
                        2 * cfg.points + 1)
    out = spectral.evolve_linear(prof, cfg.t, x_out=x_out)
    if cfg.out:
        rows = np.column_stack([out.grid.points, out.values])
        reporting.write_csv(cfg.out, ["x", "u"], rows, "evolve",
                            cfg.provenance())
    y_in = np.concatenate([-prof.grid.points[::-1], prof.grid.points[1:]])
    f_in = np.concatenate([prof.values[::-1], prof.values[1:]])
    m_in = float(np.trapezoid(f_in, y_in))
    m_out = float(np.trapezoid(out.values, out.grid.points))
    print(f"evolved kernel to t={cfg.t}: mass {m_in:.10f} -> {m_out:.10f}")
    return 0 if abs(m_out - m_in) < 1e-6 else 1


def _sidecar(path: str) -> str:
    return (path.rsplit(".", 1)[0] if "." in path else path) + ".json"


def _verify(cfg: RunConfig):
    from .verify import run_verification
    table = run_verification()
    width = max(len(name) for name, *_ in table)
    ok_all = True
    for name, ok, detail in table:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
        ok_all &= ok
    print("overall:", "PASS" if ok_all else "FAIL")
    return 0 if ok_all else 1


_DISPATCH = {
    "kernel": _kernel, "eigen": _eigen, "shoot": _shoot, "branch": _branch,
    "lyapunov": _lyapunov, "unstable": _unstable, "evolve": _evolve,
    "verify": _verify,
}


def run(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _assemble_config(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _DISPATCH[cfg.subcommand](cfg)
    except Exception as exc:  # numerical failure: diagnostics to stderr
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr)
        sys.stderr.write("\n")
        return 1


def main() -> None:
    sys.exit(run())
