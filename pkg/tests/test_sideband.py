"""
Test steady-state sideband amplitudes
"""
import warnings

import numpy as np
import pytest

from app.core.constants import C, hz_to_angular
from app.core.exceptions import SidebandOverlapWarning
from app.models import Drive, Interferometer, MechanicalMode
from app.services.cavity import susceptibility
from app.services.sideband import check_sideband_overlap, steady_state, steady_state_shifted


@pytest.fixture
def offset_drive(backrefl_drive) -> Drive:
    """Calibration tone 100 MHz above the mechanics"""
    return backrefl_drive.model_copy(update={"omega_c": hz_to_angular(7.75e9)})


@pytest.fixture
def golden_drive(backrefl_drive) -> Drive:
    return backrefl_drive.model_copy(update={"phi0": 0.1})


@pytest.fixture
def golden_mech(backrefl_mech) -> MechanicalMode:
    return backrefl_mech.model_copy(update={"x_m_real": np.sqrt(803.0), "x_m_imag": 0.0})


class TestSteadyState:
    """Closed-form intracavity amplitudes"""

    def test_carrier(self, backrefl_cavity, offset_drive, backrefl_mech):
        delta = np.linspace(-4e10, 4e10, 11)
        amps = steady_state(backrefl_cavity, offset_drive, backrefl_mech, delta)
        expected = np.sqrt(backrefl_cavity.kappa_ex) * offset_drive.s0 * susceptibility(backrefl_cavity, delta)
        np.testing.assert_allclose(amps.a0, expected, rtol=1e-14)

    def test_calibration_sidebands_opposite_sign(self, backrefl_cavity, offset_drive, backrefl_mech):
        amps = steady_state(backrefl_cavity, offset_drive, backrefl_mech, 0.0)
        assert amps.a_minus_c == pytest.approx(-np.conj(amps.a_plus_c), rel=1e-14)

    def test_no_coupling_no_mechanical_sidebands(self, backrefl_cavity, offset_drive, backrefl_mech):
        mech = backrefl_mech.model_copy(update={"g0": 0.0})
        amps = steady_state(backrefl_cavity, offset_drive, mech, 1e10)
        assert amps.a_minus_m == 0
        assert amps.a_plus_m == 0

    def test_mechanical_sideband_relation(self, backrefl_cavity, offset_drive, backrefl_mech):
        """For real x_m, a_plus chi(Omega_m) = a_minus chi(-Omega_m)"""
        delta = np.linspace(-4e10, 4e10, 21)
        omega_m = backrefl_mech.omega_m
        amps = steady_state(backrefl_cavity, offset_drive, backrefl_mech, delta)
        lhs = amps.a_plus_m * susceptibility(backrefl_cavity, delta, omega_m)
        rhs = amps.a_minus_m * susceptibility(backrefl_cavity, delta, -omega_m)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-13)

    def test_mechanical_sideband_scales_with_coupling(self, backrefl_cavity, offset_drive, backrefl_mech):
        single = steady_state(backrefl_cavity, offset_drive, backrefl_mech, -backrefl_mech.omega_m)
        double = steady_state(
            backrefl_cavity, offset_drive, backrefl_mech.model_copy(update={"g0": 2 * backrefl_mech.g0}),
            -backrefl_mech.omega_m,
        )
        assert double.a_minus_m == pytest.approx(2 * single.a_minus_m, rel=1e-14)

    @pytest.mark.filterwarnings("ignore::app.core.exceptions.SidebandOverlapWarning")
    def test_golden_on_resonance(self, backrefl_cavity, golden_drive, golden_mech):
        """1 uW, phi0 = 0.1, x_m = sqrt(803), delta = 0"""
        amps = steady_state(backrefl_cavity, golden_drive, golden_mech, 0.0)
        expected = {
            "a0": 28.03773 + 0.0j,
            "a_minus_c": 0.0364561 + 0.223110j,
            "a_plus_c": -0.0364561 + 0.223110j,
            "a_minus_m": -0.0457232 + 0.0074711j,
            "a_plus_m": 0.0457232 + 0.0074711j,
        }
        for name, value in expected.items():
            assert getattr(amps, name) == pytest.approx(value, rel=2e-4)
        assert abs(amps.a0) ** 2 == pytest.approx(786.12, rel=1e-4)


class TestShiftedSteadyState:
    """Steady state behind the splitter"""

    def test_no_splitter_matches_bare(self, backrefl_cavity, offset_drive, backrefl_mech):
        delta = np.linspace(-1e10, 1e10, 5)
        bare = steady_state(backrefl_cavity, offset_drive, backrefl_mech, delta)
        shifted = steady_state_shifted(backrefl_cavity, offset_drive, backrefl_mech, Interferometer(), delta)
        for a, b in zip(bare.components(), shifted.components()):
            np.testing.assert_allclose(a, b, rtol=1e-14)

    def test_transmission_scaling(self, backrefl_cavity, offset_drive, backrefl_mech, backrefl_interferometer):
        bare = steady_state(backrefl_cavity, offset_drive, backrefl_mech, 1e9)
        shifted = steady_state_shifted(backrefl_cavity, offset_drive, backrefl_mech, backrefl_interferometer, 1e9)
        t = backrefl_interferometer.t
        for a, b in zip(bare.components(), shifted.components()):
            assert abs(b) == pytest.approx(t * abs(a), rel=1e-12)

    @pytest.mark.filterwarnings("ignore::app.core.exceptions.SidebandOverlapWarning")
    def test_golden_quarter_wave_tone_path(self, backrefl_cavity, golden_drive, golden_mech):
        """L2 chosen so that the calibration tone picks up pi/4 along the cavity path"""
        interf = Interferometer(r=0.2, n=3.05)
        interf = interf.model_copy(update={"L2": 0.25 * np.pi * C / (interf.n * golden_drive.omega_c)})
        bare = steady_state(backrefl_cavity, golden_drive, golden_mech, 0.0)
        shifted = steady_state_shifted(backrefl_cavity, golden_drive, golden_mech, interf, 0.0)

        assert abs(shifted.a0) == pytest.approx(np.sqrt(0.96) * 28.03773, rel=1e-4)
        assert shifted.a_minus_c / shifted.a0 == pytest.approx(-4.70737e-3 + 6.54622e-3j, rel=1e-4)
        lower = shifted.a_minus_c / bare.a_minus_c
        upper = shifted.a_plus_c / bare.a_plus_c
        assert lower / upper == pytest.approx(1j, abs=1e-12)
        assert shifted.a_minus_m / bare.a_minus_m == pytest.approx(shifted.a0 / bare.a0, rel=1e-12)


class TestSidebandOverlap:
    """Validity guard for single-frequency mechanical motion"""

    def test_warns_when_tones_coincide(self, backrefl_cavity, backrefl_drive, backrefl_mech):
        with pytest.warns(SidebandOverlapWarning):
            steady_state(backrefl_cavity, backrefl_drive, backrefl_mech, 0.0)

    def test_silent_when_separated(self, offset_drive, backrefl_mech):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert check_sideband_overlap(offset_drive, backrefl_mech) is False

    def test_silent_without_tone(self, backrefl_drive, backrefl_mech):
        drive = backrefl_drive.model_copy(update={"phi0": 0.0})
        assert check_sideband_overlap(drive, backrefl_mech) is False
