"""Physical constants and unchecked unit conversions.

Wavelengths are nanometres, frequencies terahertz, widths gigahertz.
"""

from scipy import constants

SPEED_OF_LIGHT = constants.c  # 299792458 m/s, exact
PLANCK = constants.h  # 6.62607015e-34 J s, exact
BOLTZMANN = constants.k  # 1.380649e-23 J/K, exact

# nm * THz product equal to c
C_NM_THZ = SPEED_OF_LIGHT / 1e3

WAVELENGTH_MIN_NM = 1000.0
WAVELENGTH_MAX_NM = 2000.0
FREQ_MIN_THZ = C_NM_THZ / WAVELENGTH_MAX_NM
FREQ_MAX_THZ = C_NM_THZ / WAVELENGTH_MIN_NM


def nm_to_thz(lambda_nm: float) -> float:
    return C_NM_THZ / lambda_nm


def thz_to_nm(nu_thz: float) -> float:
    return C_NM_THZ / nu_thz


def photon_energy_j(nu_thz: float) -> float:
    return PLANCK * nu_thz * 1e12
