"""
Test the cooperativity and resolution figures
"""
import pytest

from app.core.exceptions import InvalidParameterError
from app.models import MeasuredMode
from app.services.figures_of_merit import (
    REFERENCE_KAPPA_HZ, REFERENCE_OPTICAL_FREQUENCY_HZ, loaded_quality_factor, mode_report,
    quantum_cooperativity, reference_modes, sideband_resolution, single_photon_cooperativity
)


class TestCooperativity:
    """Single-photon and quantum cooperativity"""

    def test_mode3(self):
        assert single_photon_cooperativity(452e3, 4.91e6, 2.47e9) == pytest.approx(6.74e-5, rel=0.01)

    def test_mode1(self):
        assert single_photon_cooperativity(231e3, 4.57e6, 2.47e9) == pytest.approx(1.89e-5, rel=0.01)

    def test_unit_independent(self):
        hz = single_photon_cooperativity(452e3, 4.91e6, 2.47e9)
        scaled = single_photon_cooperativity(6.2832 * 452e3, 6.2832 * 4.91e6, 6.2832 * 2.47e9)
        assert scaled == pytest.approx(hz, rel=1e-12)

    def test_quantum(self):
        assert quantum_cooperativity(1e4, 6.74e-5, 803.0) == pytest.approx(1e4 * 6.74e-5 / 803.0)

    def test_rejects_zero_linewidth(self):
        with pytest.raises(InvalidParameterError):
            single_photon_cooperativity(452e3, 0.0, 2.47e9)
        with pytest.raises(InvalidParameterError):
            quantum_cooperativity(1e4, 6.74e-5, 0.0)


class TestResolution:

    def test_sideband_resolution(self):
        assert sideband_resolution(7.65e9, REFERENCE_KAPPA_HZ) == pytest.approx(3.10, abs=0.01)

    def test_loaded_quality_factor(self):
        q = loaded_quality_factor(REFERENCE_OPTICAL_FREQUENCY_HZ, REFERENCE_KAPPA_HZ)
        assert q == pytest.approx(7.92e4, rel=0.001)


class TestModeReport:
    """Per-mode summaries"""

    def test_reference_modes(self):
        modes = reference_modes()
        assert [m.name for m in modes] == ["mode 1", "mode 2", "mode 3"]
        assert modes[1].g0_hz is None

    def test_report_without_coupling(self):
        report = mode_report(reference_modes()[1])
        assert report["single_photon_cooperativity"] is None
        assert report["sideband_resolution"] == pytest.approx(6.50e9 / 2.47e9)

    def test_report_mode3(self):
        report = mode_report(reference_modes()[2])
        assert report["single_photon_cooperativity"] == pytest.approx(6.74e-5, rel=0.01)
        assert report["mechanical_quality_factor"] == pytest.approx(7.65e9 / 4.91e6)
        assert report["loaded_quality_factor"] == pytest.approx(7.92e4, rel=0.001)

    def test_unresolvable_mode_rejected(self):
        with pytest.raises(ValueError):
            MeasuredMode(name="broad", frequency_hz=1e6, linewidth_hz=2e6)
