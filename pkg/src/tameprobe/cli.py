"""Command-line front end: demos, sweeps, and estimate checks.

Exit codes: 0 expected outcome, 2 unexpected sweep outcome, 64 config or
usage error, 65 precision budget exceeded, 66 unwritable output path.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .driver import (
    PrecisionBudgetError,
    ProbeParams,
    build_probe,
    estimate_residual_bound,
    fix_m,
    growth_sweep,
    _locate_anchor,
)
from .functions import (
    PERIODIC,
    UNIT_INTERVAL,
    Constant,
    GridSpec,
    SinusoidProbe,
    SmoothFunction,
    zero,
)
from .maps import CirclePullback, PostComposition
from .primitives import (
    TWO_PI,
    AffineMap,
    Cos,
    IdentityPlusExp,
    Polynomial,
    Sin,
)
from .tameness import PNormSpec, check_tame_estimate

EXIT_OK = 0
EXIT_UNEXPECTED = 2
EXIT_CONFIG = 64
EXIT_BUDGET = 65
EXIT_OUTPUT = 66

DEFAULT_M_LIST = tuple(2**e for e in range(4, 13))


class ConfigError(ValueError):
    pass


def parse_phi(descriptor: str):
    """Named outer-function registry: sin, cos, affine:a,b, poly:c0,..,
    t_plus_exp."""
    name, _, args = descriptor.partition(":")
    try:
        if name == "sin":
            return Sin(omega=TWO_PI)
        if name == "cos":
            return Cos(omega=TWO_PI)
        if name == "affine":
            a, b = (float(v) for v in args.split(","))
            return AffineMap(a, b)
        if name == "poly":
            return Polynomial([float(v) for v in args.split(",")])
        if name == "t_plus_exp":
            return IdentityPlusExp()
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad phi descriptor {descriptor!r}: {exc}") from None
    raise ConfigError(f"unknown phi {name!r} (known: sin, cos, affine:a,b, "
                      "poly:c0,..,ck, t_plus_exp)")


def parse_x(descriptor: str, domain: str) -> SmoothFunction:
    """Base-point registry: zero | const:c | sinusoid:amp,freq[,phase]."""
    name, _, args = descriptor.partition(":")
    try:
        if name == "zero":
            return zero(domain)
        if name == "const":
            return SmoothFunction(Constant(float(args)), domain)
        if name == "sinusoid":
            parts = [float(v) for v in args.split(",")]
            amp, freq = parts[0], parts[1]
            phase = parts[2] if len(parts) > 2 else 0.0
            return SmoothFunction(SinusoidProbe(amp, freq, phase), domain)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad x descriptor {descriptor!r}: {exc}") from None
    raise ConfigError(f"unknown base point {name!r} (known: zero, const:c, "
                      "sinusoid:amp,freq[,phase])")


@dataclass
class ScenarioConfig:
    variant: str = "ex2"
    phi: str = "sin"
    n: int = 1
    x: str = "zero"
    k: int = 3
    l: int = 8
    m_list: tuple = DEFAULT_M_LIST
    grid_factor: int = 64
    rho1: PNormSpec = field(default_factory=PNormSpec)
    rho2: PNormSpec = field(default_factory=PNormSpec)
    fmt: str = "csv"
    output: str | None = None

    def validate(self):
        if self.variant not in ("ex2", "ex4"):
            raise ConfigError(f"variant must be ex2 or ex4, got {self.variant!r}")
        if self.k % 2 != 1 or self.k < 1:
            raise ConfigError("k must be odd")
        if self.l < 1:
            raise ConfigError("l must be a positive integer")
        if self.variant == "ex2" and self.n == 0:
            raise ConfigError("n must be nonzero for ex2")
        if any(m < 1 for m in self.m_list) or \
                any(b <= a for a, b in zip(self.m_list, self.m_list[1:])):
            raise ConfigError("m values must be positive and ascending")
        if self.grid_factor < 1:
            raise ConfigError("grid factor must be positive")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("format must be csv or json")

    def build_map(self):
        phi = parse_phi(self.phi)
        try:
            if self.variant == "ex2":
                return CirclePullback(phi, self.n)
            return PostComposition(phi)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def build_x(self):
        domain = PERIODIC if self.variant == "ex2" else UNIT_INTERVAL
        try:
            return parse_x(self.x, domain)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def grid(self) -> GridSpec:
        return GridSpec(factor=self.grid_factor)


def _config_from_args(args) -> ScenarioConfig:
    cfg = ScenarioConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        for key in ("variant", "phi", "n", "x", "k", "l", "grid_factor"):
            if key in data:
                setattr(cfg, key, data[key])
        if "m_list" in data:
            cfg.m_list = tuple(int(m) for m in data["m_list"])
        for key, attr in (("rho1", "rho1"), ("rho2", "rho2")):
            if key in data:
                setattr(cfg, attr, PNormSpec.from_dict(data[key]))
        if "format" in data:
            cfg.fmt = data["format"]
        if "output" in data:
            cfg.output = data["output"]
    if getattr(args, "variant", None):
        cfg.variant = args.variant
    for key in ("phi", "n", "x", "k", "l", "grid_factor"):
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "m_list", None):
        try:
            cfg.m_list = tuple(int(v) for v in args.m_list.split(","))
        except ValueError:
            raise ConfigError(f"bad m list {args.m_list!r}") from None
    if getattr(args, "format", None):
        cfg.fmt = args.format
    if getattr(args, "output", None):
        cfg.output = args.output
    cfg.validate()
    return cfg


CSV_HEADER = "m,p_km1_z,rho1_z,rho1_u,top_deriv_s0,predicted,Tz_sup,rho2_v"


def _record_row(r) -> str:
    vals = [r.p_km1_z, r.rho1_z, r.rho1_u, r.top_deriv_s0, r.predicted,
            r.tz_sup, r.rho2_v]
    return ",".join([str(r.m)] + [format(v, ".17g") for v in vals])


def _print_table(result, out):
    print(CSV_HEADER.replace(",", "\t"), file=out)
    for r in result.records:
        print(_record_row(r).replace(",", "\t"), file=out)


def cmd_demo(cfg: ScenarioConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    map_spec = cfg.build_map()
    x = cfg.build_x()
    grid = cfg.grid()
    result = growth_sweep(map_spec, x, cfg.rho1, cfg.rho2, cfg.k, cfg.l,
                          cfg.m_list, grid)
    _print_table(result, out)
    print(f"t0 = {result.t0:.12g}  s0 = {result.s0:.12g}  "
          f"|phi_deriv(t0)| = {result.deriv_mag:.12g}", file=out)
    slope = "n/a" if result.slope is None else format(result.slope, ".6g")
    print(f"fitted slope = {slope}", file=out)
    print(f"estimate violated = {result.violation}", file=out)
    if result.degenerate:
        print("degenerate outer function: difference of directional "
              "derivatives vanishes identically", file=out)
        expected = not result.violation
    else:
        m_est = estimate_residual_bound(map_spec, x, cfg.k, cfg.l, grid=grid)
        m_star = fix_m(map_spec, cfg.k, cfg.l, m_est, result.deriv_mag)
        print(f"residual bound M = {m_est:.12g}; certified m = {m_star}",
              file=out)
        expected = result.violation
    return EXIT_OK if expected else EXIT_UNEXPECTED


def cmd_sweep(cfg: ScenarioConfig) -> int:
    if not cfg.output:
        raise ConfigError("sweep requires an output path")
    map_spec = cfg.build_map()
    x = cfg.build_x()
    result = growth_sweep(map_spec, x, cfg.rho1, cfg.rho2, cfg.k, cfg.l,
                          cfg.m_list, cfg.grid())
    if cfg.fmt == "csv":
        body = "\n".join([CSV_HEADER] + [_record_row(r) for r in result.records])
        body += "\n"
    else:
        body = json.dumps([r.as_dict() for r in result.records], indent=2)
        body += "\n"
    try:
        with open(cfg.output, "w") as fh:
            fh.write(body)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return EXIT_OK


def _load_probes(path: str, cfg: ScenarioConfig, map_spec, x):
    try:
        with open(path) as fh:
            entries = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read probe file: {exc}") from None
    if not isinstance(entries, list) or not entries:
        raise ConfigError("probe file must be a nonempty JSON list")
    domain = map_spec.domain_tag
    t0, s0, _, _ = _locate_anchor(map_spec, x)
    probes = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise ConfigError(f"bad probe entry {entry!r}")
        if "z" in entry and "u" in entry:
            zd, ud = entry["z"], entry["u"]
            try:
                z = SmoothFunction(SinusoidProbe(float(zd["amplitude"]),
                                                 float(zd["frequency"]),
                                                 float(zd.get("phase", 0.0))),
                                   domain)
                u = SmoothFunction(Constant(float(ud["constant"])), domain)
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad probe entry {entry!r}: {exc}") from None
        elif "m" in entry and "k" in entry:
            try:
                params = ProbeParams(k=int(entry["k"]), l=cfg.l,
                                     eps0=1.0 / cfg.l, m=int(entry["m"]),
                                     s0=float(entry.get("s0", s0)), t0=t0)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad probe entry {entry!r}: {exc}") from None
            z, u = build_probe(params, map_spec)
        else:
            raise ConfigError(f"probe entry needs (m, k) or (z, u): {entry!r}")
        probes.append((z, u))
    return probes


def cmd_check_tame(cfg: ScenarioConfig, probe_path: str, out=None) -> int:
    out = out if out is not None else sys.stdout
    map_spec = cfg.build_map()
    x = cfg.build_x()
    probes = _load_probes(probe_path, cfg, map_spec, x)
    report = check_tame_estimate(map_spec, x, cfg.rho1, cfg.rho2, probes,
                                 cfg.grid())
    print(f"satisfied = {report.satisfied}", file=out)
    print(f"probes checked = {report.samples_checked}, "
          f"skipped (rho1(z) > 1) = {report.skipped_large_z}, "
          f"domain exits = {len(report.domain_exits)}", file=out)
    for z, u, lhs, rhs in report.witnesses:
        node = z.node
        print(f"witness: z = sinusoid(amp={node.amplitude:.6g}, "
              f"freq={node.frequency:.6g}), lhs = {lhs:.12g} > rhs = {rhs:.12g}",
              file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tameprobe",
        description="Oscillatory-probe falsification of uniform "
                    "directional-derivative estimates on smooth-function spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("variant", nargs="?", choices=("ex2", "ex4"),
                       help="map variant")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--phi", help="outer function descriptor")
        p.add_argument("--n", type=int, help="winding number (ex2)")
        p.add_argument("--x", help="base point descriptor")
        p.add_argument("--k", type=int, help="odd derivative order")
        p.add_argument("--l", type=int, help="seminorm level for u (eps0 = 1/l)")
        p.add_argument("--m-list", help="comma-separated ascending m values")
        p.add_argument("--grid-factor", type=int, dest="grid_factor",
                       help="grid points per frequency unit")

    p = sub.add_parser("demo", help="run a sweep and report the outcome")
    add_common(p)

    p = sub.add_parser("sweep", help="run a sweep and write a table")
    add_common(p)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output", "-o", help="output path")

    p = sub.add_parser("check-tame", help="check the uniform estimate on probes")
    add_common(p)
    p.add_argument("--probes", required=True, help="JSON probe file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        cfg = _config_from_args(args)
        if args.command == "demo":
            return cmd_demo(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_check_tame(cfg, args.probes)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrecisionBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
