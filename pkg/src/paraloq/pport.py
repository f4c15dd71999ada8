"""D25 parallel port register emulation and the ADC handshake.

Register map follows the legacy PC port: data at base+0, status at base+1,
control at base+2. The port hardware inverts some lines between the
software register and the connector pins:

  * status bit S7 (BUSY) is inverted on read        -> mask 0x80
  * control bits C0, C1, C3 are inverted on write   -> mask 0x0B

``PortRegisters`` stores *wire* levels (what the device sees); the
read/write helpers translate between software bytes and wire levels, so
applying a helper twice cancels the inversion.

Backends expose exactly three primitives in software-byte space --
read_data, read_status, write_control -- which is all the polled handshake
needs. ``SimulatedPort`` implements them over an ADC0808 model with its
own simulated clock; a real-hardware backend would implement them with
port I/O instead.

Handshake wiring (the emulator's convention): C0 drives START+ALE, C1
drives OUTPUT ENABLE, S3 carries EOC, and the mux address rides on
control bits 4..6, latched at the ALE rising edge. In bidirectional mode
the data register reads the converter's output latch; an undriven bus
reads as the high-impedance sentinel 0xFF.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from random import Random

from . import adc0808
from .errors import DeviceTimeoutError, InvalidInputError, UnsupportedModeError

CONTROL_INVERT_MASK = 0x0B  # C0, C1, C3
STATUS_INVERT_MASK = 0x80  # S7
STATUS_READ_MASK = 0xF8  # S0..S2 are not pins; they read as zero

HIGH_Z = 0xFF  # undriven data bus

ADDRESS_SHIFT = 4  # mux address on control bits 4..6


@dataclass
class PortRegisters:
    """Wire-level state of the three port registers."""

    data: int = HIGH_Z
    status: int = 0
    control: int = 0
    base_addr: int = 0x378  # informational only

    def __post_init__(self):
        for name in ("data", "status", "control"):
            value = getattr(self, name)
            if not (0 <= value <= 255):
                raise InvalidInputError(f"{name} register must be a byte, got {value}")


def write_control(regs: PortRegisters, value: int) -> PortRegisters:
    """Write a software byte to the control register; wire gets it inverted."""
    if not (0 <= value <= 255):
        raise InvalidInputError(f"control value must be a byte, got {value}")
    regs.control = value ^ CONTROL_INVERT_MASK
    return regs


def read_control(regs: PortRegisters) -> int:
    """Software readback of the control register (inversion cancels)."""
    return regs.control ^ CONTROL_INVERT_MASK


def read_status(regs: PortRegisters) -> int:
    """Software view of the status register: S7 inverted, S0..S2 zero."""
    return (regs.status ^ STATUS_INVERT_MASK) & STATUS_READ_MASK


def read_data(regs: PortRegisters) -> int:
    """Software view of the data register (no inversion on data lines)."""
    return regs.data


@dataclass(frozen=True)
class HandshakeMap:
    """Which port lines carry the converter handshake."""

    start_ale: int = 0  # control bit: START+ALE pulse
    output_enable: int = 1  # control bit: OUTPUT ENABLE level
    eoc: int = 3  # status bit: END OF CONVERSION
    data_path: str = "bidirectional"  # or "nibble" (declared, not implemented)

    def __post_init__(self):
        if not (0 <= self.start_ale <= 3) or not (0 <= self.output_enable <= 3):
            raise InvalidInputError("control bit indices must be 0..3")
        if not (3 <= self.eoc <= 7):
            raise InvalidInputError("status bit index must be 3..7")
        if self.start_ale == self.output_enable:
            raise InvalidInputError("start_ale and output_enable must differ")
        if self.data_path not in ("bidirectional", "nibble"):
            raise InvalidInputError(f"unknown data_path {self.data_path!r}")


class PortBackend(ABC):
    """The three primitives any port backend must provide (software bytes),
    plus the time source the polled handshake paces itself against.

    A backend owns its clock: the simulated one counts in pure simulated
    seconds, a real-hardware one would report wall time and sleep.
    """

    @abstractmethod
    def read_data(self) -> int: ...

    @abstractmethod
    def read_status(self) -> int: ...

    @abstractmethod
    def write_control(self, value: int) -> None: ...

    @property
    @abstractmethod
    def now_s(self) -> float: ...

    @property
    @abstractmethod
    def latency_s(self) -> float: ...

    @abstractmethod
    def advance_to(self, t_s: float) -> None: ...


class SimulatedPort(PortBackend):
    """Port backend wired to the ADC0808 model.

    Owns the simulated clock (``now_s``): nothing here touches wall time,
    so handshake tests are deterministic. Analog channel inputs are plain
    settable levels (``set_input``); the converter samples the level at the
    ALE edge, which also gives the sample-and-hold behavior SAR conversion
    requires.

    Single-owner object: not safe for concurrent mutation.
    """

    def __init__(
        self,
        adc: adc0808.AdcConfig = adc0808.AdcConfig(),
        clock_hz: float = 640e3,
        hs: HandshakeMap = HandshakeMap(),
        rng: Random | None = None,
    ):
        self.adc = adc
        self.clock_hz = clock_hz
        self.hs = hs
        self.regs = PortRegisters()
        self.connected = True
        self._now = 0.0
        self._inputs = {ch: 0.0 for ch in range(8)}
        self._rng = rng or Random(0)
        self._prev_ale = 0
        self._oe = 0
        self._busy_until = -math.inf
        self._latched: adc0808.AdcCode | None = None

    # -- simulation controls -------------------------------------------

    def set_input(self, channel: int, volts: float) -> None:
        """Drive the analog level on one mux input."""
        if not (0 <= channel <= 7):
            raise InvalidInputError(f"channel must be 0..7, got {channel}")
        if not math.isfinite(volts):
            raise InvalidInputError(f"volts must be finite, got {volts}")
        self._inputs[channel] = volts

    def advance_to(self, t_s: float) -> None:
        """Move simulated time forward; time never runs backwards."""
        if t_s < self._now:
            raise InvalidInputError(f"time must not decrease: {t_s} < {self._now}")
        self._now = t_s

    @property
    def now_s(self) -> float:
        return self._now

    @property
    def latency_s(self) -> float:
        return self.adc.conversion_cycles / self.clock_hz

    def last_conversion(self) -> adc0808.AdcCode | None:
        return self._latched

    # -- backend primitives --------------------------------------------

    def write_control(self, value: int) -> None:
        write_control(self.regs, value)
        wire = self.regs.control
        ale = (wire >> self.hs.start_ale) & 1
        self._oe = (wire >> self.hs.output_enable) & 1
        if ale and not self._prev_ale:
            self._start_conversion((wire >> ADDRESS_SHIFT) & 0x07)
        self._prev_ale = ale

    def read_status(self) -> int:
        eoc = 1 if (self.connected and self._conversion_done()) else 0
        self.regs.status = eoc << self.hs.eoc
        return read_status(self.regs)

    def read_data(self) -> int:
        drives_bus = (
            self.connected
            and self._oe
            and self._latched is not None
            and self._conversion_done()
        )
        self.regs.data = self._latched.code if drives_bus else HIGH_Z
        return read_data(self.regs)

    # -- device model ---------------------------------------------------

    def _conversion_done(self) -> bool:
        return self._latched is not None and self.now_s >= self._busy_until

    def _start_conversion(self, channel: int) -> None:
        if not self.connected:
            return
        result = adc0808.sar_convert(
            self._inputs[channel], channel, self.clock_hz, self.adc
        )
        if self.adc.noise_sigma_lsb > 0:
            noisy = result.code + round(self._rng.gauss(0.0, self.adc.noise_sigma_lsb))
            noisy = min(max(noisy, 0), adc0808.CODE_MAX)
            result = adc0808.AdcCode(
                code=noisy,
                sar_trace=adc0808.code_bits(noisy),
                latency_s=result.latency_s,
                channel=channel,
            )
        self._latched = result
        self._busy_until = self.now_s + result.latency_s


def _software_byte_for_wire(wire: int) -> int:
    """Control byte to write so the wire shows the wanted levels."""
    return wire ^ CONTROL_INVERT_MASK


def acquire_byte(
    port: PortBackend,
    hs: HandshakeMap,
    channel: int,
    poll_divisor: int = 16,
    timeout_factor: float = 10.0,
) -> adc0808.AdcCode:
    """Run one conversion handshake and return the result.

    Sequence: drive the channel address, pulse START+ALE, poll EOC at
    latency/poll_divisor granularity until it asserts (giving up after
    timeout_factor * latency), assert OUTPUT ENABLE, read the data
    register, release the bus. Never returns without having seen EOC.
    """
    if not (0 <= channel <= 7):
        raise InvalidInputError(f"channel must be 0..7, got {channel}")
    if hs.data_path == "nibble":
        raise UnsupportedModeError("nibble data path is declared but not implemented")
    if poll_divisor < 1:
        raise InvalidInputError(f"poll_divisor must be >= 1, got {poll_divisor}")

    latency = port.latency_s
    poll_dt = latency / poll_divisor
    addr = channel << ADDRESS_SHIFT

    # Address first, then the ALE rising edge latches it and starts conversion.
    port.write_control(_software_byte_for_wire(addr))
    t_start = port.now_s
    port.write_control(_software_byte_for_wire(addr | (1 << hs.start_ale)))
    port.write_control(_software_byte_for_wire(addr))

    deadline = t_start + timeout_factor * latency
    polls = 0
    while True:
        polls += 1
        t_poll = t_start + polls * poll_dt
        if t_poll > deadline:
            raise DeviceTimeoutError(
                f"EOC not asserted on channel {channel} within "
                f"{timeout_factor:g} conversion times ({deadline - t_start:.6g} s)"
            )
        port.advance_to(t_poll)
        if (port.read_status() >> hs.eoc) & 1:
            break

    port.write_control(_software_byte_for_wire(addr | (1 << hs.output_enable)))
    code = port.read_data()
    port.write_control(_software_byte_for_wire(addr))
    return adc0808.AdcCode(
        code=code,
        sar_trace=adc0808.code_bits(code),
        latency_s=latency,
        channel=channel,
    )
