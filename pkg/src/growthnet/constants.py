"""Physical constants (SI defining values), single source of truth."""

PLANCK_H = 6.62607015e-34  # J s, exact
ELEMENTARY_CHARGE = 1.602176634e-19  # C, exact
PHI_0 = PLANCK_H / (2.0 * ELEMENTARY_CHARGE)  # Wb, magnetic flux quantum
LIGHT_SPEED = 299_792_458.0  # m/s, exact
