"""Relative humidity and dew point from dry-bulb / wet-bulb temperature pairs.

Uses the Magnus saturation curve es(T) = a * exp(b T / (c + T)) together
with the classical psychrometer equation

    e = es(T_wet) - gamma * P * (T_dry - T_wet)

where e is the actual vapor pressure, gamma the psychrometer coefficient
and P the station pressure. Relative humidity is 100 e / es(T_dry); the
dew point inverts the Magnus curve at e.

Temperatures below 0 degC are rejected: they are outside the logger's
operating range, which also sidesteps the ice-surface constant switch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InconsistentReadingError, InvalidInputError


@dataclass(frozen=True)
class PsychroConfig:
    """Psychrometer coefficient, station pressure, and Magnus constants."""

    psychrometer_coeff: float = 6.6e-4  # 1/K, ventilated psychrometer
    pressure_hpa: float = 1013.25
    magnus_a: float = 6.112  # hPa
    magnus_b: float = 17.62
    magnus_c: float = 243.12  # degC

    def __post_init__(self):
        for name in (
            "psychrometer_coeff",
            "pressure_hpa",
            "magnus_a",
            "magnus_b",
            "magnus_c",
        ):
            if not (getattr(self, name) > 0):
                raise InvalidInputError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class PsychroReading:
    """One computed humidity point."""

    dry_c: float
    wet_c: float
    rh_pct: float
    dew_point_c: float

    def __post_init__(self):
        if self.wet_c > self.dry_c:
            raise InvalidInputError(f"wet {self.wet_c} exceeds dry {self.dry_c}")
        if not (0.0 <= self.rh_pct <= 100.0):
            raise InvalidInputError(f"rh_pct must be 0..100, got {self.rh_pct}")
        if self.dew_point_c > self.dry_c + 1e-9:
            raise InvalidInputError(
                f"dew point {self.dew_point_c} exceeds dry bulb {self.dry_c}"
            )


def saturation_vapor_pressure(t_c: float, cfg: PsychroConfig = PsychroConfig()) -> float:
    """Saturation vapor pressure in hPa at t_c degC (Magnus form)."""
    if not math.isfinite(t_c) or t_c <= -cfg.magnus_c:
        raise InvalidInputError(f"temperature must be finite and > {-cfg.magnus_c} degC")
    return cfg.magnus_a * math.exp(cfg.magnus_b * t_c / (cfg.magnus_c + t_c))


def _vapor_pressure(dry_c: float, wet_c: float, cfg: PsychroConfig) -> float:
    """Actual vapor pressure from the psychrometer equation; validates the pair."""
    for name, value in (("dry_c", dry_c), ("wet_c", wet_c)):
        if not math.isfinite(value):
            raise InvalidInputError(f"{name} must be finite, got {value}")
        if value < 0.0:
            raise InvalidInputError(f"{name} below the 0..50 degC range: {value}")
    if wet_c > dry_c:
        raise InvalidInputError(f"wet bulb {wet_c} exceeds dry bulb {dry_c}")
    e = saturation_vapor_pressure(wet_c, cfg) - cfg.psychrometer_coeff * cfg.pressure_hpa * (
        dry_c - wet_c
    )
    if e <= 0.0:
        raise InconsistentReadingError(
            f"dry {dry_c} / wet {wet_c} degC gives vapor pressure {e:.4f} hPa <= 0"
        )
    return e


def relative_humidity(dry_c: float, wet_c: float, cfg: PsychroConfig = PsychroConfig()) -> float:
    """Relative humidity in percent, clamped to [0, 100]."""
    e = _vapor_pressure(dry_c, wet_c, cfg)
    rh = 100.0 * e / saturation_vapor_pressure(dry_c, cfg)
    return min(max(rh, 0.0), 100.0)


def dew_point(dry_c: float, wet_c: float, cfg: PsychroConfig = PsychroConfig()) -> float:
    """Dew point in degC: the Magnus curve inverted at the actual vapor pressure."""
    e = _vapor_pressure(dry_c, wet_c, cfg)
    return dew_point_from_vapor_pressure(e, cfg)


def dew_point_from_vapor_pressure(e_hpa: float, cfg: PsychroConfig = PsychroConfig()) -> float:
    """Temperature at which e_hpa would be the saturation pressure."""
    if not (e_hpa > 0) or not math.isfinite(e_hpa):
        raise InvalidInputError(f"vapor pressure must be > 0, got {e_hpa}")
    ratio = math.log(e_hpa / cfg.magnus_a)
    if ratio >= cfg.magnus_b:
        raise InvalidInputError(f"vapor pressure {e_hpa} hPa beyond the Magnus domain")
    return cfg.magnus_c * ratio / (cfg.magnus_b - ratio)


def reading(dry_c: float, wet_c: float, cfg: PsychroConfig = PsychroConfig()) -> PsychroReading:
    """Compute a full PsychroReading for one dry/wet pair."""
    return PsychroReading(
        dry_c=dry_c,
        wet_c=wet_c,
        rh_pct=relative_humidity(dry_c, wet_c, cfg),
        dew_point_c=dew_point(dry_c, wet_c, cfg),
    )
