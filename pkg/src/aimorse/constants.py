"""Physical constants (CODATA 2018), 12 significant digits.

h and c are exact by the SI definition; hbar is h / (2 pi) rounded to
12 digits.  These enter only the unit-reduction path and dominate its
uncertainty budget; the dimensionless solver never touches them.
"""

PLANCK_H_JS = 6.62607015e-34           # J s, exact
SPEED_OF_LIGHT_M_S = 2.99792458e8      # m / s, exact
HBAR_JS = 1.05457181765e-34            # J s
ATOMIC_MASS_KG = 1.66053906660e-27     # kg

# 1 cm^-1 of photon energy in joules: h * c * (100 m^-1).
WAVENUMBER_TO_JOULE = PLANCK_H_JS * SPEED_OF_LIGHT_M_S * 100.0

ANGSTROM_TO_METER = 1.0e-10
