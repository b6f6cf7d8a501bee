"""Command-line front end.

    dirac-antidot figure1 --alpha 8 --b 10 --m-range -20:5
    dirac-antidot spectrum --regime rel --w 1 --b 10 --n-range 0:3 --m 0
    dirac-antidot verify --lambda1 0.0625 --lambda3 0.9375 --n-max 2

Exit status: 0 success, 2 bad arguments, 3 domain error, 4 I/O error. On
failure a one-line JSON error record is written to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

from .oracle import OracleError, verify_quantization, verify_relativistic
from .params import (
    DimensionlessConfig,
    ParameterError,
    PhysicalConfig,
    QuantumNumbers,
    build_dimensionless,
    derived_lambdas,
)
from .special import QuadratureError
from .spectrum import (
    ConvergenceError,
    NoBoundStateError,
    Regime,
    nonrel_energy,
    rel_energy,
    spectrum_table,
)
from .wavefunction import GridError, build_profile, default_grid

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4
MAX_ABS_M, MAX_N = 10**4, 10**3
THREADS_ENV = "DIRAC_ANTIDOT_THREADS"

COMMANDS = ("spectrum", "density", "figure1", "figure2", "figure3", "verify")
REGIMES = {"landau": Regime.LANDAU, "nonrel": Regime.NONRELATIVISTIC, "rel": Regime.RELATIVISTIC}
PHYSICAL_FLAGS = (
    "effective_mass",
    "magnetic_field",
    "oscillator_frequency",
    "antidot_strength",
    "ab_flux",
    "hbar",
    "light_speed",
    "charge",
)

COLUMNS = {
    "spectrum": ["n", "m", "regime", "value", "eta", "chi", "residual", "error"],
    "density": ["rho", "upper", "lower", "density"],
    "figure1": ["m", "landau", "shifted", "antidot"],
    "figure2": ["m", "eta_landau", "eta_full"],
    "figure3": ["rho", "density_no_antidot", "density_antidot"],
    "verify": ["n", "numeric", "analytic", "relative_error", "convergence_ratio"],
    "verify_rel": ["n", "m", "chi_claimed", "chi_numeric", "defect", "iterations"],
}


class UsageError(ValueError):
    pass


class EmitError(ValueError):
    pass


# ---------------------------------------------------------------- output


def _format(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _check_finite(records):
    for i, rec in enumerate(records):
        for key, value in rec.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise EmitError(f"non-finite value in record {i}, column {key!r}")


def render(records, columns, fmt="csv") -> str:
    _check_finite(records)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_format(rec.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        rows = [{c: rec.get(c) for c in columns} for rec in records]
        return json.dumps({"columns": list(columns), "records": rows}, allow_nan=False) + "\n"
    raise EmitError(f"unknown format {fmt!r}")


def emit(records, columns, fmt="csv", path=None) -> None:
    """Write records as CSV or JSON to ``path`` (stdout when None or '-')."""
    text = render(records, columns, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _parse_cell(text):
    if text == "":
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def read_csv(text: str):
    """Inverse of :func:`render` for CSV: returns (columns, records)."""
    rows = list(csv.reader(io.StringIO(text)))
    columns = rows[0]
    return columns, [dict(zip(columns, map(_parse_cell, row))) for row in rows[1:]]


# ---------------------------------------------------------------- config


@dataclass
class RunConfig:
    command: str
    dimensionless: Optional[DimensionlessConfig] = None
    physical: Optional[PhysicalConfig] = None
    n_values: list = field(default_factory=lambda: [0])
    m_values: list = field(default_factory=lambda: [0])
    regime: Regime = Regime.RELATIVISTIC
    grid: Optional[tuple] = None
    include_lower: bool = True
    fmt: str = "csv"
    out: Optional[str] = None
    lambda1: Optional[float] = None
    lambda3: Optional[float] = None
    n_max: int = 2
    nodes: int = 4000
    scheme: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        try:
            self.regime = REGIMES.get(self.regime) or Regime(self.regime)
        except ValueError:
            raise UsageError(f"unknown regime {self.regime!r}") from None
        if self.dimensionless is not None and self.physical is not None:
            raise UsageError("give either dimensionless or physical parameters, not both")
        if not self.n_values or not self.m_values:
            raise UsageError("quantum-number ranges must be non-empty")
        if max(self.n_values) > MAX_N or min(self.n_values) < 0:
            raise UsageError(f"n must lie in [0, {MAX_N}]")
        if max(abs(m) for m in self.m_values) > MAX_ABS_M:
            raise UsageError(f"|m| must not exceed {MAX_ABS_M}")

    def config(self) -> DimensionlessConfig:
        if self.physical is not None:
            return build_dimensionless(self.physical)
        if self.dimensionless is None:
            return DimensionlessConfig.reduced()
        return self.dimensionless


def _int_range(text):
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _grid(text):
    try:
        lo, hi, count = text.split(":")
        return float(lo), float(hi), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected min:max:count, got {text!r}")


def _flag(text):
    lowered = text.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


class _Parser(argparse.ArgumentParser):
    # let "--m-range -20:5" parse: negative ranges are values, not options
    _NEGATIVE = re.compile(r"^-\d+(:-?\d+)?$|^-\d*\.\d+([eE][-+]?\d+)?$|^-\d+[eE][-+]?\d+$")

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = self._NEGATIVE

    def error(self, message):
        _fail(EXIT_USAGE, "usage", message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirac-antidot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--w", type=float, help="hbar*omega/(m* c^2)")
    common.add_argument("--omega-c", type=float, help="cyclotron frequency in units of m* c^2/hbar")
    phys = common.add_argument_group("physical units (alternative to --alpha/--b/--w)")
    for name in PHYSICAL_FLAGS:
        phys.add_argument("--" + name.replace("_", "-"), type=float)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    states = _Parser(add_help=False)
    states.add_argument("--n", type=int)
    states.add_argument("--m", type=int)
    states.add_argument("--n-range", type=_int_range)
    states.add_argument("--m-range", type=_int_range)

    grid = _Parser(add_help=False)
    grid.add_argument("--grid", type=_grid, help="rho_min:rho_max:count")

    p = sub.add_parser("spectrum", parents=[common, states])
    p.add_argument("--regime", choices=sorted(REGIMES), default="rel")
    p = sub.add_parser("density", parents=[common, states, grid])
    p.add_argument("--include-lower", type=_flag, default=True)
    sub.add_parser("figure1", parents=[common, states])
    sub.add_parser("figure2", parents=[common, states])
    p = sub.add_parser("figure3", parents=[common, states, grid])
    p.add_argument("--include-lower", type=_flag, default=True)
    p = sub.add_parser("verify", parents=[common, states])
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda3", type=float)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--nodes", type=int, default=4000)
    p.add_argument(
        "--scheme",
        choices=("plain", "regularized"),
        help="finite-difference scheme (default: plain for --lambda1/--lambda3, regularized otherwise)",
    )
    return parser


def _values(single, many, default):
    if single is not None and many is not None:
        raise UsageError("give a single value or a range, not both")
    if single is not None:
        return [single]
    return many if many is not None else default


def config_from_args(ns) -> RunConfig:
    reduced = {k: getattr(ns, k) for k in ("alpha", "b", "w", "omega_c")}
    physical = {k: getattr(ns, k) for k in PHYSICAL_FLAGS}
    have_reduced = any(v is not None for v in reduced.values())
    have_physical = any(v is not None for v in physical.values())
    if have_reduced and have_physical:
        raise UsageError("give either --alpha/--b/--w or physical-unit flags, not both")

    if ns.command == "figure2" and not have_physical and ns.w is None:
        raise UsageError("figure2 requires --w")
    if ns.command == "figure3":
        missing = [f for f in ("n", "m") if getattr(ns, f) is None]
        if not have_physical and ns.w is None:
            missing.append("w")
        if missing:
            raise UsageError("figure3 requires " + ", ".join("--" + f for f in missing))

    dimensionless = phys_cfg = None
    if have_physical:
        if physical["effective_mass"] is None:
            raise UsageError("physical parameters need --effective-mass")
        phys_cfg = PhysicalConfig(**{k: v for k, v in physical.items() if v is not None})
    else:
        dimensionless = DimensionlessConfig.reduced(
            alpha=reduced["alpha"] or 0.0,
            b=reduced["b"] or 0.0,
            w=1.0 if reduced["w"] is None else reduced["w"],
            omega_c=reduced["omega_c"],
        )

    default_m = list(range(-20, 6)) if ns.command in ("figure1", "figure2") else [0]
    extra = {}
    if ns.command == "spectrum":
        extra["regime"] = REGIMES[ns.regime]
    if ns.command in ("density", "figure3"):
        extra["grid"] = ns.grid
        extra["include_lower"] = ns.include_lower
    if ns.command == "verify":
        if (ns.lambda1 is None) != (ns.lambda3 is None):
            raise UsageError("--lambda1 and --lambda3 go together")
        extra.update(
            lambda1=ns.lambda1, lambda3=ns.lambda3, n_max=ns.n_max, nodes=ns.nodes, scheme=ns.scheme
        )
    return RunConfig(
        command=ns.command,
        dimensionless=dimensionless,
        physical=phys_cfg,
        n_values=_values(ns.n, ns.n_range, [0]),
        m_values=_values(ns.m, ns.m_range, default_m),
        fmt=ns.format,
        out=ns.out,
        **extra,
    )


# ---------------------------------------------------------------- commands


def _workers():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _spectrum(rc: RunConfig):
    cfg = rc.config()
    records = []
    for entry in spectrum_table(cfg, rc.n_values, rc.m_values, rc.regime, _workers()):
        sol = entry.solution
        rec = {"n": entry.qn.n, "m": entry.qn.m, "regime": rc.regime.value, "error": entry.error}
        if sol is not None:
            value = sol.chi if sol.regime is Regime.RELATIVISTIC else sol.epsilon_over_homega
            rec.update(value=value, eta=sol.eta, chi=sol.chi, residual=sol.residual)
        records.append(rec)
    return records, COLUMNS["spectrum"]


def _density(rc: RunConfig):
    cfg = rc.config()
    qn = QuantumNumbers(rc.n_values[0], rc.m_values[0])
    prof = build_profile(cfg, qn, rel_energy(cfg, qn), rc.grid, rc.include_lower)
    records = [
        {"rho": float(r), "upper": float(f), "lower": float(g), "density": float(d)}
        for r, f, g, d in zip(prof.grid, prof.upper, prof.lower, prof.density)
    ]
    return records, COLUMNS["density"]


def _figure1(rc: RunConfig):
    cfg = rc.config()
    landau = DimensionlessConfig(0.0, 0.0, cfg.w, cfg.omega_c)
    shifted = DimensionlessConfig(cfg.alpha, 0.0, cfg.w, cfg.omega_c)
    n = rc.n_values[0]
    records = []
    for m in rc.m_values:
        qn = QuantumNumbers(n, m)
        records.append(
            {
                "m": m,
                "landau": nonrel_energy(landau, qn),
                "shifted": nonrel_energy(shifted, qn),
                "antidot": nonrel_energy(cfg, qn),
            }
        )
    return records, COLUMNS["figure1"]


def _figure2(rc: RunConfig):
    cfg = rc.config()
    landau = DimensionlessConfig(0.0, 0.0, cfg.w, cfg.omega_c)
    n = rc.n_values[0]
    records = []
    for m in rc.m_values:
        qn = QuantumNumbers(n, m)
        records.append(
            {"m": m, "eta_landau": rel_energy(landau, qn).eta, "eta_full": rel_energy(cfg, qn).eta}
        )
    return records, COLUMNS["figure2"]


def _figure3(rc: RunConfig):
    cfg = rc.config()
    bare = DimensionlessConfig(cfg.alpha, 0.0, cfg.w, cfg.omega_c)
    qn = QuantumNumbers(rc.n_values[0], rc.m_values[0])
    grid = rc.grid
    if grid is None:
        # the antidot state is the wider one; its support covers both
        lams = derived_lambdas(cfg, qn, rel_energy(cfg, qn).chi)
        grid = default_grid(lams, qn.n)
    profiles = [
        build_profile(c, qn, rel_energy(c, qn), grid, rc.include_lower) for c in (bare, cfg)
    ]
    records = [
        {"rho": float(r), "density_no_antidot": float(p0), "density_antidot": float(p1)}
        for r, p0, p1 in zip(profiles[0].grid, profiles[0].density, profiles[1].density)
    ]
    return records, COLUMNS["figure3"]


def _verify(rc: RunConfig):
    if rc.lambda1 is not None:
        rows = verify_quantization(rc.lambda1, rc.lambda3, rc.n_max, rc.nodes, rc.scheme or "plain")
        records = [
            {
                "n": r.n,
                "numeric": r.numeric,
                "analytic": r.analytic,
                "relative_error": float(r.relative_error),
                "convergence_ratio": r.convergence_ratio,
            }
            for r in rows
        ]
        return records, COLUMNS["verify"]
    cfg = rc.config()
    records = []
    for n in rc.n_values:
        for m in rc.m_values:
            qn = QuantumNumbers(n, m)
            check = verify_relativistic(
                cfg, qn, rel_energy(cfg, qn).chi, rc.nodes, scheme=rc.scheme or "regularized"
            )
            records.append(
                {
                    "n": n,
                    "m": m,
                    "chi_claimed": check.chi_claimed,
                    "chi_numeric": check.chi_numeric,
                    "defect": check.defect,
                    "iterations": check.iterations,
                }
            )
    return records, COLUMNS["verify_rel"]


HANDLERS = {
    "spectrum": _spectrum,
    "density": _density,
    "figure1": _figure1,
    "figure2": _figure2,
    "figure3": _figure3,
    "verify": _verify,
}

DOMAIN_ERRORS = (
    ParameterError,
    GridError,
    OracleError,
    NoBoundStateError,
    ConvergenceError,
    QuadratureError,
    EmitError,
)


def _report(status, kind, message):
    sys.stderr.write(json.dumps({"status": status, "error": kind, "message": str(message)}) + "\n")


def _fail(status, kind, message):
    _report(status, kind, message)
    sys.exit(status)


def run(rc: RunConfig) -> int:
    """Execute one command; returns the exit status."""
    try:
        records, columns = HANDLERS[rc.command](rc)
        emit(records, columns, rc.fmt, rc.out)
    except DOMAIN_ERRORS as exc:
        _report(EXIT_DOMAIN, type(exc).__name__, exc)
        return EXIT_DOMAIN
    except OSError as exc:
        _report(EXIT_IO, type(exc).__name__, exc)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        rc = config_from_args(ns)
    except UsageError as exc:
        _report(EXIT_USAGE, "usage", exc)
        return EXIT_USAGE
    except ParameterError as exc:
        _report(EXIT_DOMAIN, type(exc).__name__, exc)
        return EXIT_DOMAIN
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())
