"""Command-line front end: simulate runs, compute humidity, plot, summarize.

Exit codes:
    0  success
    2  invalid flags or config
    3  device timeout during acquisition
    4  storage (output write) failure
    5  input log parse failure or empty input

Defaults can come from a `key = value` config file with [section] headers
(sections: run, chain, clock, psychro). Precedence is flags > file >
defaults; the file is named by --config or the PARALOQ_CONFIG environment
variable. Unknown sections or keys are hard errors.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from datetime import datetime

from . import acquisition, logstore, plotting, psychro
from .acquisition import Channel, Constant, Replay, RunConfig, Sine
from .adc0808 import ClockConfig
from .errors import (
    ConfigError,
    CsvParseError,
    DeviceTimeoutError,
    EmptyRunError,
    InconsistentReadingError,
    InvalidInputError,
    ParaloqError,
    RunAbortedError,
    StorageError,
)
from .signal_chain import ChainConfig

CONFIG_ENV_VAR = "PARALOQ_CONFIG"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TIMEOUT = 3
EXIT_STORAGE = 4
EXIT_PARSE = 5

# (section, key) -> parser; the whole schema the config file may use
_CONFIG_SCHEMA = {
    ("run", "sample_rate_hz"): float,
    ("run", "duration_s"): float,
    ("run", "filter_substeps"): int,
    ("run", "seed"): int,
    ("run", "pacer"): str,
    ("chain", "sensor_slope"): float,
    ("chain", "amp_gain"): float,
    ("chain", "clamp_volts"): float,
    ("chain", "filter_cutoff_hz"): float,
    ("chain", "vref"): float,
    ("clock", "r_ohms"): float,
    ("clock", "c_farads"): float,
    ("psychro", "psychrometer_coeff"): float,
    ("psychro", "pressure_hpa"): float,
    ("psychro", "magnus_a"): float,
    ("psychro", "magnus_b"): float,
    ("psychro", "magnus_c"): float,
}

PLOTTABLE_COLUMNS = (
    "dry_code",
    "dry_temp_c",
    "wet_code",
    "wet_temp_c",
    "rh_pct",
    "dew_point_c",
)


def load_config_file(path) -> dict:
    """Parse and validate a config file into {(section, key): value}."""
    parser = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            convert = _CONFIG_SCHEMA.get((section, key))
            if convert is None:
                raise ConfigError(f"unknown config key [{section}] {key}")
            try:
                values[(section, key)] = convert(raw)
            except ValueError:
                raise ConfigError(
                    f"bad value for [{section}] {key}: {raw!r}"
                ) from None
    return values


def _effective_config(args) -> dict:
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    return load_config_file(path) if path else {}


def _psychro_from(file_cfg: dict, pressure_flag=None) -> psychro.PsychroConfig:
    kwargs = {
        key: file_cfg[("psychro", key)]
        for key in ("psychrometer_coeff", "pressure_hpa", "magnus_a", "magnus_b", "magnus_c")
        if ("psychro", key) in file_cfg
    }
    if pressure_flag is not None:
        kwargs["pressure_hpa"] = pressure_flag
    return psychro.PsychroConfig(**kwargs)


def parse_stimulus(spec: str, flag: str, channel: Channel):
    """Parse 'constant:V' | 'sine:amp=A,freq=F,offset=O' | 'replay:PATH'."""
    kind, sep, body = spec.partition(":")
    if not sep:
        raise ConfigError(f"{flag}: expected KIND:ARGS, got {spec!r}")
    try:
        if kind == "constant":
            return Constant(float(body))
        if kind == "sine":
            params = {}
            for part in body.split(","):
                key, eq, value = part.partition("=")
                if not eq or key not in ("amp", "freq", "offset"):
                    raise ConfigError(f"{flag}: bad sine parameter {part!r}")
                params[key] = float(value)
            missing = {"amp", "freq", "offset"} - set(params)
            if missing:
                raise ConfigError(f"{flag}: sine needs {sorted(missing)}")
            return Sine(amplitude_c=params["amp"], freq_hz=params["freq"], offset_c=params["offset"])
        if kind == "replay":
            column = "dry_temp_c" if channel is Channel.DRY else "wet_temp_c"
            return Replay(body, column=column)
    except ValueError:
        raise ConfigError(f"{flag}: bad number in {spec!r}") from None
    raise ConfigError(f"{flag}: unknown stimulus kind {kind!r}")


def _print_table(stats: dict, humidity) -> None:
    dry = stats[Channel.DRY]
    wet = stats[Channel.WET]
    print(f"Dry Temp {dry.mean:.6f} (min={dry.min:.6f}, max={dry.max:.6f})")
    print(f"Wet Temp {wet.mean:.6f} (min={wet.min:.6f}, max={wet.max:.6f})")
    if humidity is None:
        print("Rel. Humidity -")
        print("Dew Point -")
    else:
        print(f"Rel. Humidity {humidity[0]:.6f}")
        print(f"Dew Point {humidity[1]:.6f}")


def cmd_simulate(args) -> int:
    file_cfg = _effective_config(args)

    rate = args.rate if args.rate is not None else file_cfg.get(("run", "sample_rate_hz"), 2.0)
    duration = (
        args.duration if args.duration is not None else file_cfg.get(("run", "duration_s"))
    )
    if duration is None:
        raise ConfigError("--duration is required (or [run] duration_s in the config file)")
    if rate <= 0:
        raise ConfigError(f"--rate must be > 0, got {rate}")
    if duration < 0:
        raise ConfigError(f"--duration must be >= 0, got {duration}")

    chain_kwargs = {
        key: file_cfg[("chain", key)]
        for key in ("sensor_slope", "amp_gain", "clamp_volts", "filter_cutoff_hz", "vref")
        if ("chain", key) in file_cfg
    }
    chain = ChainConfig(**chain_kwargs)
    clock = ClockConfig(
        r_ohms=file_cfg.get(("clock", "r_ohms"), acquisition.DEFAULT_CLOCK.r_ohms),
        c_farads=file_cfg.get(("clock", "c_farads"), acquisition.DEFAULT_CLOCK.c_farads),
    )

    stimuli = {}
    for channel, temp_flag, stim_flag, name in (
        (Channel.DRY, args.dry_temp, args.dry_stimulus, "--dry-stimulus"),
        (Channel.WET, args.wet_temp, args.wet_stimulus, "--wet-stimulus"),
    ):
        if stim_flag is not None:
            stimuli[channel] = parse_stimulus(stim_flag, name, channel)
        elif temp_flag is not None:
            stimuli[channel] = Constant(temp_flag)
        else:
            stimuli[channel] = Constant(25.0 if channel is Channel.DRY else 20.0)

    start_time = None
    if args.start_time is not None:
        try:
            start_time = datetime.fromisoformat(args.start_time)
        except ValueError:
            raise ConfigError(f"--start-time: not ISO-8601: {args.start_time!r}") from None

    cfg = RunConfig(
        duration_s=duration,
        sample_rate_hz=rate,
        clock=clock,
        chains={Channel.DRY: chain, Channel.WET: chain},
        stimuli=stimuli,
        psychro=_psychro_from(file_cfg),
        filter_substeps=args.filter_substeps
        if args.filter_substeps is not None
        else file_cfg.get(("run", "filter_substeps"), 0),
        pacer=args.pacer or file_cfg.get(("run", "pacer"), "simulated"),
        seed=args.seed if args.seed is not None else file_cfg.get(("run", "seed"), 0),
        start_time=start_time,
    )

    run = acquisition.run_acquisition(cfg)
    logstore.write_csv(run, args.out)
    n_rows = len(run.rows)
    print(f"wrote {args.out}: {n_rows} ticks, {2 * n_rows} samples, rate {rate:g} S/s")
    _print_table(acquisition.summarize(run), acquisition.humidity_summary(run))
    return EXIT_OK


def cmd_compute(args) -> int:
    file_cfg = _effective_config(args)
    cfg = _psychro_from(file_cfg, pressure_flag=args.pressure)
    result = psychro.reading(args.dry, args.wet, cfg)
    print(f"rh_pct={result.rh_pct:.6f}, dew_point_c={result.dew_point_c:.6f}")
    return EXIT_OK


def _plot_series(run, column: str):
    pairs = [
        (row.t_s, getattr(row, column))
        for row in run.rows
        if getattr(row, column) is not None
    ]
    if not pairs:
        raise EmptyRunError(f"no values to plot in column {column!r}")
    return [t for t, _ in pairs], [v for _, v in pairs]


def _read_input(path) -> logstore.RunLog:
    """Read an input log; a missing/unreadable input counts as a parse failure."""
    try:
        return logstore.read_csv(path)
    except StorageError as exc:
        raise CsvParseError(0, f"cannot read input: {exc}") from exc


def cmd_plot(args) -> int:
    if args.column not in PLOTTABLE_COLUMNS:
        raise ConfigError(
            f"--column must be one of {', '.join(PLOTTABLE_COLUMNS)}; got {args.column!r}"
        )
    run = _read_input(args.input)
    t_values, values = _plot_series(run, args.column)
    if args.format == "ascii":
        body = plotting.ascii_chart(t_values, values, args.column)
    else:
        body = plotting.svg_chart(t_values, values, args.column)
    if args.out is None or args.out == "-":
        print(body)
    else:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(body + "\n")
        except OSError as exc:
            raise StorageError(args.out, str(exc)) from exc
    return EXIT_OK


def cmd_summarize(args) -> int:
    run = _read_input(args.input)
    stats = acquisition.summarize(run)
    _print_table(stats, acquisition.humidity_summary(run))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paraloq",
        description="Parallel-port temperature/humidity logger simulator",
    )
    parser.add_argument(
        "--config",
        default=None,
        help=f"config file path (default: ${CONFIG_ENV_VAR} if set)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a simulated acquisition and write a CSV log")
    sim.add_argument("--rate", type=float, default=None, help="sample rate in S/s (default 2)")
    sim.add_argument("--duration", type=float, default=None, help="run length in seconds")
    dry = sim.add_mutually_exclusive_group()
    dry.add_argument("--dry-temp", type=float, default=None, help="constant dry-bulb degC")
    dry.add_argument("--dry-stimulus", default=None, help="dry stimulus spec (constant:|sine:|replay:)")
    wet = sim.add_mutually_exclusive_group()
    wet.add_argument("--wet-temp", type=float, default=None, help="constant wet-bulb degC")
    wet.add_argument("--wet-stimulus", default=None, help="wet stimulus spec")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--seed", type=int, default=None, help="noise/run-id seed")
    sim.add_argument("--start-time", default=None, help="ISO-8601 run start (default: now)")
    sim.add_argument("--filter-substeps", type=int, default=None, help="anti-alias filter steps per tick (0 = off)")
    sim.add_argument("--pacer", choices=("simulated", "wall"), default=None)
    sim.set_defaults(func=cmd_simulate)

    comp = sub.add_parser("compute", help="one psychrometric computation")
    comp.add_argument("--dry", type=float, required=True, help="dry-bulb degC")
    comp.add_argument("--wet", type=float, required=True, help="wet-bulb degC")
    comp.add_argument("--pressure", type=float, default=None, help="station pressure hPa")
    comp.set_defaults(func=cmd_compute)

    plot = sub.add_parser("plot", help="chart one column of a CSV log")
    plot.add_argument("--input", required=True, help="CSV log path")
    plot.add_argument("--column", required=True, help="column to plot")
    plot.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    plot.add_argument("--out", default=None, help="output path (default: stdout)")
    plot.set_defaults(func=cmd_plot)

    summ = sub.add_parser("summarize", help="print per-channel statistics of a CSV log")
    summ.add_argument("--input", required=True, help="CSV log path")
    summ.set_defaults(func=cmd_summarize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidInputError, InconsistentReadingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DeviceTimeoutError, RunAbortedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (CsvParseError, EmptyRunError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StorageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STORAGE
    except ParaloqError as exc:  # safety net for anything typed we missed
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
