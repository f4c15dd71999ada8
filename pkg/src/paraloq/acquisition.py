"""The application loop: schedule conversions, timestamp, decode, stream.

Each tick acquires every configured channel through the port handshake,
decodes code -> volts -> degC, streams immutable Sample values to the
attached sinks, and folds the dry/wet pair plus derived humidity into one
log row. Tick times are computed as k / rate (never accumulated), so the
schedule has zero floating drift.

Scheduling is simulated-time by default: runs are instantaneous and
deterministic. The wall-clock pacer sleeps toward absolute deadlines for
live demo runs.
"""

from __future__ import annotations

import math
import threading
import time
import warnings
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from random import Random
from statistics import fmean

from . import logstore, psychro
from .adc0808 import AdcConfig, ClockConfig, clock_frequency, decode_temp, decode_volts
from .errors import (
    DeviceTimeoutError,
    EmptyRunError,
    InconsistentReadingError,
    InvalidInputError,
    RunAbortedError,
    UndersamplingWarning,
)
from .pport import HandshakeMap, SimulatedPort, acquire_byte
from .signal_chain import ChainConfig, chain_voltage, lowpass_step


class Channel(Enum):
    """Sensor channels and their ADC mux inputs."""

    DRY = 0
    WET = 1


# -- stimulus descriptors ------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """Fixed temperature in degC."""

    value_c: float

    def temp_at(self, t_s: float) -> float:
        return self.value_c

    def max_freq_hz(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Sine:
    """offset + amplitude * sin(2 pi f t), all in degC."""

    amplitude_c: float
    freq_hz: float
    offset_c: float

    def __post_init__(self):
        if not (self.freq_hz >= 0):
            raise InvalidInputError(f"freq_hz must be >= 0, got {self.freq_hz}")

    def temp_at(self, t_s: float) -> float:
        return self.offset_c + self.amplitude_c * math.sin(2.0 * math.pi * self.freq_hz * t_s)

    def max_freq_hz(self) -> float:
        return self.freq_hz


@dataclass
class Replay:
    """Temperature replayed from a recorded log column (zero-order hold)."""

    path: str
    column: str = "dry_temp_c"
    _times: list = field(default=None, repr=False, compare=False)
    _temps: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.column not in ("dry_temp_c", "wet_temp_c"):
            raise InvalidInputError(f"column must be a temp column, got {self.column!r}")

    def _load(self):
        if self._times is None:
            run = logstore.read_csv(self.path)
            if not run.rows:
                raise EmptyRunError(f"replay source {self.path} has no rows")
            self._times = [row.t_s for row in run.rows]
            self._temps = [getattr(row, self.column) for row in run.rows]

    def temp_at(self, t_s: float) -> float:
        self._load()
        # small guard: logged t_s is rounded to 6 decimals and may sit just
        # above the exact tick time
        idx = bisect_right(self._times, t_s + 1e-6) - 1
        return self._temps[max(idx, 0)]

    def max_freq_hz(self) -> float:
        return 0.0  # spectral content of a recording is unknown; no warning


# -- run configuration ----------------------------------------------------

DEFAULT_CLOCK = ClockConfig(r_ohms=1420.5, c_farads=1e-9)  # ~640 kHz


def _default_chains():
    return {Channel.DRY: ChainConfig(), Channel.WET: ChainConfig()}


def _default_stimuli():
    return {Channel.DRY: Constant(25.0), Channel.WET: Constant(20.0)}


@dataclass
class RunConfig:
    """Everything one acquisition run needs.

    filter_substeps = 0 samples the stimulus directly (ideal pre-filtered
    input); N > 0 advances the first-order anti-alias filter N times per
    tick between samples, with state seeded at the tick-0 level.
    """

    duration_s: float
    sample_rate_hz: float = 2.0
    channels: tuple = (Channel.DRY, Channel.WET)
    clock: ClockConfig = DEFAULT_CLOCK
    chains: dict = field(default_factory=_default_chains)
    stimuli: dict = field(default_factory=_default_stimuli)
    adc: AdcConfig = AdcConfig()
    handshake: HandshakeMap = HandshakeMap()
    psychro: psychro.PsychroConfig = psychro.PsychroConfig()
    filter_substeps: int = 0
    pacer: str = "simulated"
    seed: int = 0
    start_time: datetime | None = None
    run_id: str | None = None

    def __post_init__(self):
        if not (self.sample_rate_hz > 0):
            raise InvalidInputError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        if not (self.duration_s >= 0) or not math.isfinite(self.duration_s):
            raise InvalidInputError(f"duration_s must be >= 0, got {self.duration_s}")
        if set(self.channels) != {Channel.DRY, Channel.WET} or len(self.channels) != 2:
            raise InvalidInputError(
                "channels must list DRY and WET exactly once (the log format is wide)"
            )
        if self.filter_substeps < 0:
            raise InvalidInputError(f"filter_substeps must be >= 0, got {self.filter_substeps}")
        if self.pacer not in ("simulated", "wall"):
            raise InvalidInputError(f"pacer must be 'simulated' or 'wall', got {self.pacer!r}")
        for ch in self.channels:
            if ch not in self.chains:
                raise InvalidInputError(f"missing chain config for channel {ch.name}")
            if ch not in self.stimuli:
                raise InvalidInputError(f"missing stimulus for channel {ch.name}")

    def tick_count(self) -> int:
        return math.floor(self.duration_s * self.sample_rate_hz) + 1

    def warn_if_undersampled(self) -> None:
        nyquist = self.sample_rate_hz / 2.0
        for ch in self.channels:
            f = self.stimuli[ch].max_freq_hz()
            if f > nyquist:
                warnings.warn(
                    f"{ch.name} stimulus at {f:g} Hz exceeds Nyquist {nyquist:g} Hz; "
                    f"it will alias to {abs(f - self.sample_rate_hz * round(f / self.sample_rate_hz)):g} Hz",
                    UndersamplingWarning,
                    stacklevel=2,
                )

    def fingerprint(self) -> str:
        text = "|".join(
            (
                f"rate={self.sample_rate_hz!r}",
                f"duration={self.duration_s!r}",
                f"channels={[ch.name for ch in self.channels]!r}",
                f"clock={self.clock!r}",
                f"chains={sorted((ch.name, repr(c)) for ch, c in self.chains.items())!r}",
                f"stimuli={sorted((ch.name, repr(s)) for ch, s in self.stimuli.items())!r}",
                f"adc={self.adc!r}",
                f"psychro={self.psychro!r}",
                f"substeps={self.filter_substeps!r}",
                f"seed={self.seed!r}",
            )
        )
        return logstore.fingerprint(text)


# -- samples and sinks -----------------------------------------------------


@dataclass(frozen=True)
class Sample:
    """One decoded conversion, immutable and safe to hand between threads."""

    seq: int
    t: float
    timestamp: str
    channel: Channel
    code: int
    volts: float
    temp_c: float

    def __post_init__(self):
        if self.seq < 0:
            raise InvalidInputError(f"seq must be >= 0, got {self.seq}")
        if not (0 <= self.code <= 255):
            raise InvalidInputError(f"code must be 0..255, got {self.code}")


class QueueSink:
    """Bounded FIFO sample sink.

    When full, the oldest sample is dropped and `dropped` incremented:
    logging must never stall acquisition.
    """

    def __init__(self, capacity: int = 1024):
        if capacity < 1:
            raise InvalidInputError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.dropped = 0
        self._lock = threading.Lock()
        self._queue: deque = deque()

    def __call__(self, sample: Sample) -> None:
        with self._lock:
            if len(self._queue) >= self.capacity:
                self._queue.popleft()
                self.dropped += 1
            self._queue.append(sample)

    def __len__(self) -> int:
        return len(self._queue)

    def drain(self) -> list:
        with self._lock:
            items = list(self._queue)
            self._queue.clear()
        return items


# -- the loop ---------------------------------------------------------------


def build_port(cfg: RunConfig) -> SimulatedPort:
    """Simulated backend for a run: ADC + clock + handshake + noise RNG."""
    return SimulatedPort(
        adc=cfg.adc,
        clock_hz=clock_frequency(cfg.clock),
        hs=cfg.handshake,
        rng=Random(cfg.seed),
    )


def _derive_meta(cfg: RunConfig, start_dt: datetime) -> logstore.RunMeta:
    run_id = cfg.run_id or f"{start_dt:%Y%m%dT%H%M%S}_{cfg.seed & 0xFFFFFFFF:08x}"
    return logstore.RunMeta(
        run_id=run_id,
        start=start_dt.isoformat(timespec="milliseconds"),
        sample_rate_hz=cfg.sample_rate_hz,
        channels={ch.name.lower(): ch.value for ch in cfg.channels},
        config_fingerprint=cfg.fingerprint(),
    )


class _FilteredChain:
    """Per-channel analog path with optional anti-alias filter dynamics."""

    def __init__(self, chain: ChainConfig, stimulus, substeps: int, rate_hz: float):
        self.chain = chain
        self.stimulus = stimulus
        self.substeps = substeps
        self.dt_sub = 1.0 / (rate_hz * substeps) if substeps else 0.0
        self.state = None

    def voltage_at_tick(self, k: int, rate_hz: float) -> float:
        t = k / rate_hz
        if not self.substeps:
            return chain_voltage(self.stimulus.temp_at(t), self.chain)
        if self.state is None:
            # circuit assumed settled at power-on
            self.state = chain_voltage(self.stimulus.temp_at(0.0), self.chain)
        if k > 0:
            t_prev = (k - 1) / rate_hz
            for j in range(1, self.substeps + 1):
                x = chain_voltage(
                    self.stimulus.temp_at(t_prev + j * self.dt_sub), self.chain
                )
                self.state = lowpass_step(self.state, x, self.dt_sub, self.chain)
        return self.state


def _tick_row(
    t: float, timestamp: str, by_channel: dict, cfg: RunConfig
) -> logstore.PsychroRow:
    dry = by_channel[Channel.DRY]
    wet = by_channel[Channel.WET]
    rh = dew = None
    try:
        result = psychro.reading(dry.temp_c, wet.temp_c, cfg.psychro)
        rh, dew = result.rh_pct, result.dew_point_c
    except (InvalidInputError, InconsistentReadingError):
        pass  # row keeps empty humidity fields
    return logstore.PsychroRow(
        t_s=t,
        timestamp=timestamp,
        dry_code=dry.code,
        dry_temp_c=dry.temp_c,
        wet_code=wet.code,
        wet_temp_c=wet.temp_c,
        rh_pct=rh,
        dew_point_c=dew,
    )


def run_acquisition(cfg: RunConfig, sinks=(), port: SimulatedPort | None = None) -> logstore.RunLog:
    """Execute one run and return its RunLog.

    Emits floor(duration * rate) + 1 ticks (t = 0 and t = duration are both
    included); every configured channel is acquired per tick, in order, all
    stamped with the tick time. Sinks are called synchronously with each
    Sample. A device timeout aborts the run and raises RunAbortedError
    carrying the partial RunLog.
    """
    cfg.warn_if_undersampled()
    if port is None:
        port = build_port(cfg)
    start_dt = cfg.start_time or datetime.now()
    meta = _derive_meta(cfg, start_dt)
    paths = {
        ch: _FilteredChain(cfg.chains[ch], cfg.stimuli[ch], cfg.filter_substeps, cfg.sample_rate_hz)
        for ch in cfg.channels
    }
    rows: list = []
    seq = 0
    wall_start = time.monotonic() if cfg.pacer == "wall" else 0.0
    try:
        for k in range(cfg.tick_count()):
            t = k / cfg.sample_rate_hz
            if cfg.pacer == "wall":
                # absolute deadline: immune to per-tick drift
                delay = wall_start + t - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
            timestamp = (start_dt + timedelta(seconds=t)).isoformat(timespec="milliseconds")
            by_channel = {}
            for ch in cfg.channels:
                port.set_input(ch.value, paths[ch].voltage_at_tick(k, cfg.sample_rate_hz))
                result = acquire_byte(port, cfg.handshake, ch.value)
                sample = Sample(
                    seq=seq,
                    t=t,
                    timestamp=timestamp,
                    channel=ch,
                    code=result.code,
                    volts=decode_volts(result.code, cfg.adc.vref),
                    temp_c=decode_temp(result.code),
                )
                seq += 1
                by_channel[ch] = sample
                for sink in sinks:
                    sink(sample)
            rows.append(_tick_row(t, timestamp, by_channel, cfg))
    except DeviceTimeoutError as exc:
        raise RunAbortedError(
            f"run aborted at tick {k}: {exc}", logstore.RunLog(meta=meta, rows=rows)
        ) from exc
    return logstore.RunLog(meta=meta, rows=rows)


# -- summaries ---------------------------------------------------------------


@dataclass(frozen=True)
class ChannelStats:
    mean: float
    min: float
    max: float


def summarize(run: logstore.RunLog) -> dict:
    """Per-channel mean/min/max temperature over a run."""
    if not run.rows:
        raise EmptyRunError("run has no samples to summarize")
    dry = [row.dry_temp_c for row in run.rows]
    wet = [row.wet_temp_c for row in run.rows]
    return {
        Channel.DRY: ChannelStats(fmean(dry), min(dry), max(dry)),
        Channel.WET: ChannelStats(fmean(wet), min(wet), max(wet)),
    }


def humidity_summary(run: logstore.RunLog):
    """(mean RH %, mean dew point degC) over rows where both were computed.

    Returns None when no row has humidity values.
    """
    rh = [row.rh_pct for row in run.rows if row.rh_pct is not None]
    dew = [row.dew_point_c for row in run.rows if row.dew_point_c is not None]
    if not rh or not dew:
        return None
    return fmean(rh), fmean(dew)
