"""Desk-scale simulator for a parallel-port temperature/humidity logger.

The pipeline mirrors the instrument it models: an LM35-style sensor chain
feeds an ADC0808 successive-approximation converter, read over an emulated
D25 parallel port, sampled on a fixed schedule, logged to CSV, and
post-processed into relative humidity and dew point.
"""

from .acquisition import (
    Channel,
    ChannelStats,
    Constant,
    QueueSink,
    Replay,
    RunConfig,
    Sample,
    Sine,
    build_port,
    humidity_summary,
    run_acquisition,
    summarize,
)
from .adc0808 import (
    AdcCode,
    AdcConfig,
    ClockConfig,
    clock_frequency,
    decode_temp,
    decode_volts,
    quantize,
    sar_convert,
)
from .errors import (
    ClockRangeError,
    ClockWindowWarning,
    ConfigError,
    CsvParseError,
    DeviceTimeoutError,
    EmptyRunError,
    InconsistentReadingError,
    InvalidInputError,
    ParaloqError,
    RunAbortedError,
    StorageError,
    UndersamplingWarning,
    UnsupportedModeError,
)
from .logstore import PsychroRow, RunLog, RunMeta, read_csv, write_csv
from .pport import HandshakeMap, PortBackend, PortRegisters, SimulatedPort, acquire_byte
from .psychro import (
    PsychroConfig,
    PsychroReading,
    dew_point,
    reading,
    relative_humidity,
    saturation_vapor_pressure,
)
from .signal_chain import (
    ChainConfig,
    alias_frequency,
    amplify_and_clamp,
    chain_voltage,
    is_undersampled,
    lowpass_step,
    sensor_voltage,
)

__version__ = "0.1.0"
