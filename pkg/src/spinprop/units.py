"""Physical constants and conversions to the package's angular-frequency units.

Internally hbar = 1 and frequencies are in rad per time unit.  The CLI uses
nanoseconds as the time unit, so "GHz" there means 1e9 rad/s.
"""

MU_B_EV_PER_T = 5.7883818060e-5  # Bohr magneton, eV/T (CODATA 2018)
HBAR_EV_S = 6.582119569e-16  # reduced Planck constant, eV s (CODATA 2018)
NS = 1e-9


def energy_ev_to_angular(energy_ev: float, time_unit_s: float = NS) -> float:
    """Angular frequency ``E / hbar`` in rad per ``time_unit_s``."""
    return energy_ev / HBAR_EV_S * time_unit_s


def zeeman_to_angular(field_t: float, g: float = 1.0, time_unit_s: float = NS) -> float:
    """``g mu_B B / hbar`` in rad per ``time_unit_s``."""
    return g * MU_B_EV_PER_T * field_t / HBAR_EV_S * time_unit_s


def ratios_from_units(omega_ghz: float, j_ev: float, bminus_t: float):
    """``(a/omega, c/omega) = (J/(hbar omega), mu_B |B_-| / (hbar omega))``.

    ``bminus_t`` is the g-weighted field difference in tesla; ``omega_ghz``
    is in 1e9 rad/s.
    """
    omega_rad_s = omega_ghz * 1e9
    return j_ev / (HBAR_EV_S * omega_rad_s), MU_B_EV_PER_T * abs(bminus_t) / (HBAR_EV_S * omega_rad_s)
