import pytest

from paraloq import (
    InconsistentReadingError,
    InvalidInputError,
    PsychroConfig,
    PsychroReading,
    dew_point,
    reading,
    relative_humidity,
    saturation_vapor_pressure,
)

# Reference dry/wet pair from the instrument's recorded table, and the
# frozen oracle values this formula family produces for it (double-precision
# Magnus + Assmann psychrometer, verified against a 50-digit computation).
DRY_REF = 19.92858
WET_REF = 18.02167
RH_ORACLE = 83.29688547332444
DEW_ORACLE = 17.009288515905595
RH_TABLE = 85.183416
DEW_TABLE = 17.360743


class TestSaturationVaporPressure:
    def test_zero_returns_magnus_a(self):
        assert saturation_vapor_pressure(0.0) == 6.112

    def test_wet_reference_point(self):
        assert saturation_vapor_pressure(WET_REF) == pytest.approx(
            20.61933794283785, abs=1e-9
        )

    def test_dry_reference_point(self):
        assert saturation_vapor_pressure(DRY_REF) == pytest.approx(
            23.223078876199683, abs=1e-9
        )

    def test_domain_violation(self):
        with pytest.raises(InvalidInputError):
            saturation_vapor_pressure(-243.12)


class TestRelativeHumidity:
    def test_saturated_pair_reads_100(self):
        assert relative_humidity(20.0, 20.0) == 100.0

    def test_reference_pair_matches_frozen_oracle(self):
        assert relative_humidity(DRY_REF, WET_REF) == pytest.approx(RH_ORACLE, abs=1e-6)

    def test_reference_pair_within_recorded_table_tolerance(self):
        assert abs(relative_humidity(DRY_REF, WET_REF) - RH_TABLE) <= 3.0

    def test_impossible_depression_is_inconsistent(self):
        # es(10) ~ 12.28 hPa < gamma * P * 20 ~ 13.37 hPa
        with pytest.raises(InconsistentReadingError):
            relative_humidity(30.0, 10.0)

    def test_wet_above_dry_rejected(self):
        with pytest.raises(InvalidInputError):
            relative_humidity(10.0, 20.0)

    def test_below_operating_range_rejected(self):
        with pytest.raises(InvalidInputError):
            relative_humidity(5.0, -1.0)

    def test_monotone_increasing_in_wet_bulb(self):
        values = [relative_humidity(25.0, wet) for wet in (15.0, 18.0, 21.0, 24.0, 25.0)]
        assert values == sorted(values)
        assert values[-1] == 100.0

    def test_monotone_decreasing_in_dry_bulb(self):
        values = [relative_humidity(dry, 15.0) for dry in (15.0, 18.0, 21.0, 24.0)]
        assert values == sorted(values, reverse=True)

    def test_saturation_iff_equal_bulbs(self):
        assert relative_humidity(20.0, 20.0) == pytest.approx(100.0, abs=1e-9)
        assert relative_humidity(20.0, 19.99) < 100.0 - 1e-9


class TestDewPoint:
    def test_saturated_air_dew_equals_temperature(self):
        for t in range(0, 51, 5):
            assert dew_point(float(t), float(t)) == pytest.approx(t, abs=1e-9)

    def test_reference_pair_matches_frozen_oracle(self):
        assert dew_point(DRY_REF, WET_REF) == pytest.approx(DEW_ORACLE, abs=1e-6)

    def test_reference_pair_within_recorded_table_tolerance(self):
        assert abs(dew_point(DRY_REF, WET_REF) - DEW_TABLE) <= 1.0

    def test_vapor_pressure_at_magnus_a_gives_zero(self):
        from paraloq.psychro import dew_point_from_vapor_pressure

        assert dew_point_from_vapor_pressure(6.112) == 0.0

    def test_never_exceeds_dry_bulb(self):
        for dry in (5.0, 15.0, 25.0, 35.0, 45.0):
            for depression in (0.0, 0.5, 2.0, 4.0):
                wet = dry - depression
                if wet < 0:
                    continue
                try:
                    dew = dew_point(dry, wet)
                except InconsistentReadingError:
                    continue
                assert dew <= dry + 1e-9
                if depression == 0.0:
                    assert dew == pytest.approx(dry, abs=1e-9)
                else:
                    assert dew < dry


class TestConfigAndReading:
    def test_config_rejects_nonpositive_fields(self):
        with pytest.raises(InvalidInputError):
            PsychroConfig(pressure_hpa=0.0)
        with pytest.raises(InvalidInputError):
            PsychroConfig(magnus_b=-1.0)

    def test_reading_bundle(self):
        result = reading(DRY_REF, WET_REF)
        assert result.rh_pct == pytest.approx(RH_ORACLE, abs=1e-6)
        assert result.dew_point_c == pytest.approx(DEW_ORACLE, abs=1e-6)
        assert result.wet_c <= result.dry_c

    def test_reading_invariants_enforced(self):
        with pytest.raises(InvalidInputError):
            PsychroReading(dry_c=20.0, wet_c=21.0, rh_pct=50.0, dew_point_c=10.0)
        with pytest.raises(InvalidInputError):
            PsychroReading(dry_c=20.0, wet_c=19.0, rh_pct=101.0, dew_point_c=10.0)
        with pytest.raises(InvalidInputError):
            PsychroReading(dry_c=20.0, wet_c=19.0, rh_pct=50.0, dew_point_c=25.0)

    def test_custom_pressure_changes_result(self):
        sea_level = relative_humidity(DRY_REF, WET_REF)
        altitude = relative_humidity(DRY_REF, WET_REF, PsychroConfig(pressure_hpa=850.0))
        assert altitude > sea_level  # smaller psychrometer correction
