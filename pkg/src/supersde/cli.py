"""Command-line driver: ``supersde <subcommand> [--config PATH] [--out PATH]``.

Config files hold one ``key = value`` per line with ``#`` comments. Recognised
keys: ``m, h, T_support, n_paths, seed, V.name, V.lambda, F.name, quad_tol,
eps_list`` (``F.name`` and ``eps_list`` are comma separated). Every check is
written as a CSV row ``check_id,quantity,value,std_err,reference,tolerance,pass``
and the exit status is 0 when all rows pass, 1 otherwise and 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from typing import Sequence

from .checks import SUITE_ORDER, MonteCarloSuite, Row, run_suite
from .sde.config import SimConfig
from .sde.models import OBSERVABLES

SUBCOMMANDS = SUITE_ORDER + ("all",)
HEADER = ("check_id", "quantity", "value", "std_err", "reference", "tolerance", "pass")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    sim: SimConfig
    observables: tuple[str, ...]


def _number(text: str) -> float:
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return float(base) ** float(exp)
    return float(text)


def _integer(text: str) -> int:
    value = _number(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


_KEYS = {
    "m": ("m", _number),
    "h": ("h", _number),
    "T_support": ("T_support", _number),
    "n_paths": ("n_paths", _integer),
    "seed": ("seed", _integer),
    "V.name": ("potential", str.strip),
    "V.lambda": ("potential_scale", _number),
    "quad_tol": ("quad_tol", _number),
    "eps_list": ("eps_list", lambda s: tuple(_number(x) for x in s.split(",") if x.strip())),
}


def parse_config(text: str) -> tuple[dict, tuple[str, ...] | None]:
    """Parse config text into ``SimConfig`` keyword arguments and observable names."""
    fields: dict = {}
    observables = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "F.name":
            observables = tuple(x.strip() for x in value.split(",") if x.strip())
            unknown = [x for x in observables if x not in OBSERVABLES]
            if unknown or not observables:
                raise ConfigError(f"line {lineno}: unknown observable(s) {unknown}; choose from {OBSERVABLES}")
            continue
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        name, conv = _KEYS[key]
        try:
            fields[name] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return fields, observables


def build_run_config(args: argparse.Namespace) -> RunConfig:
    fields, observables = {}, None
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from exc
        fields, observables = parse_config(text)
    if args.seed is not None:
        fields["seed"] = args.seed
    if args.workers is not None:
        fields["workers"] = args.workers
    try:
        sim = SimConfig(**fields)
        if args.fast:
            sim = sim.with_(n_paths=max(2, sim.n_paths // 4))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(args.subcommand, sim, observables or ("cos", "tanh", "step"))


def _fmt(x: float | None) -> str:
    return "" if x is None else "%.17g" % x


def rows_to_csv(rows: Sequence[Row]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in rows:
        writer.writerow([r.check_id, r.quantity, _fmt(r.value), _fmt(r.std_err), _fmt(r.reference),
                         _fmt(r.tolerance), "true" if r.passed else "false"])
    return buf.getvalue()


def summarize(rows: Sequence[Row]) -> str:
    lines = []
    for suite in dict.fromkeys(r.check_id for r in rows):
        sub = [r for r in rows if r.check_id == suite]
        failed = [r for r in sub if not r.passed]
        lines.append(f"{suite}: {len(sub) - len(failed)}/{len(sub)} rows pass")
        for r in failed:
            lines.append(f"  FAIL {r.quantity}: value={r.value:.6g} reference={r.reference:.6g} "
                         f"tolerance={r.tolerance:.3g}")
    return "\n".join(lines)


def run(run_config: RunConfig, output_path: str) -> int:
    mc = MonteCarloSuite(run_config.sim, run_config.observables)
    rows = run_suite(run_config.subcommand, run_config.sim, run_config.observables, mc)
    with open(output_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
    print(summarize(rows))
    ok = all(r.passed for r in rows)
    print(f"{'PASS' if ok else 'FAIL'}: {len(rows)} rows written to {output_path}")
    return 0 if ok else 1


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supersde", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--out", help="CSV output path (default: <subcommand>.csv)")
    parser.add_argument("--seed", type=_u64, help="master seed, overrides the config")
    parser.add_argument("--fast", action="store_true", help="quarter-size Monte Carlo runs")
    parser.add_argument("--workers", type=_positive_int, help="threads for path simulation")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run_config = build_run_config(args)
    except ConfigError as exc:
        print(f"supersde: config error: {exc}", file=sys.stderr)
        return 2
    return run(run_config, args.out or f"{args.subcommand}.csv")


if __name__ == "__main__":
    sys.exit(main())
