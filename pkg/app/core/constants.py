"""
Physical constants (CODATA 2018, exact SI values where defined)
"""
import math

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
C = 299792458.0  # m / s

TWO_PI = 2.0 * math.pi


def hz_to_angular(f):
    """Ordinary frequency (Hz) to angular frequency (rad/s)"""
    return TWO_PI * f


def angular_to_hz(omega):
    """Angular frequency (rad/s) to ordinary frequency (Hz)"""
    return omega / TWO_PI
