"""Morse-oscillator reductions.

The chain implemented here: physical parameters (D_e, beta, x_e, mu) are
reduced to the single dimensionless well-depth Delta = D_e / (hbar omega0)
with omega0 = beta * sqrt(2 D_e / mu); the bound-state problem in the Morse
variable u = exp(-beta (x - x_e) / 2) becomes an AIM instance with

    lambda0(u) = 8 Delta u - (2 eps + 2) / u
    s0(u)      = (12 Delta - 32 Delta^2) + 8 Delta eps

whose quantization roots eps_n map to energies via
eps_hw0 = -(eps_n + 1/2)^2 / (16 Delta).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import constants
from .engine import AimProblem
from .errors import UnitsUnavailableError
from .polynomials import EpsPoly, LaurentPoly
from .scalars import (
    DEFAULT_PRECISION,
    EXACT,
    GUARD_DIGITS,
    NUMERIC,
    to_bigreal,
    to_rational,
    working_precision,
)

DELTA_FLOOR = Fraction(3, 8)  # below this the well holds no level at all


@dataclass(frozen=True)
class MorseParameters:
    """Physical Morse-potential parameters for a diatomic molecule."""

    de_cm1: float          # dissociation energy, cm^-1
    beta_per_angstrom: float
    xe_angstrom: float     # equilibrium separation
    mu_amu: float          # reduced mass, unified atomic mass units

    def __post_init__(self):
        for name in ("de_cm1", "beta_per_angstrom", "xe_angstrom", "mu_amu"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.beta_per_angstrom * self.xe_angstrom <= math.log(2):
            # V(0) is then non-positive; legal but physically odd for a bond
            warnings.warn(
                "beta * x_e <= ln 2: the potential is not positive at x = 0",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ReducedMorse:
    """Dimensionless Morse model: the well depth Delta in units of hbar*omega0.

    hbar_omega0_cm1 is carried only when the model came from physical
    parameters; a Delta-only model cannot produce cm^-1 energies.
    """

    delta: object                    # Fraction for the exact pipeline, else float/BigReal
    hbar_omega0_cm1: float | None = None

    def __post_init__(self):
        if not to_rational(self.delta) > DELTA_FLOOR:
            raise ValueError("delta must exceed 3/8 for at least one bound state")


def reduce_units(p: MorseParameters) -> ReducedMorse:
    """Reduce physical parameters to ReducedMorse.

    Delta = sqrt(mu * D_e / 2) / (hbar * beta) after unit conversion, which
    equals D_e / (hbar omega0) with omega0 = beta sqrt(2 D_e / mu).
    """
    de_joule = p.de_cm1 * constants.WAVENUMBER_TO_JOULE
    mu_kg = p.mu_amu * constants.ATOMIC_MASS_KG
    beta_per_meter = p.beta_per_angstrom / constants.ANGSTROM_TO_METER
    delta = math.sqrt(mu_kg * de_joule / 2.0) / (constants.HBAR_JS * beta_per_meter)
    return ReducedMorse(delta=delta, hbar_omega0_cm1=p.de_cm1 / delta)


def build_aim_problem(r: ReducedMorse, mode: str, u_star=1,
                      precision: int = DEFAULT_PRECISION) -> AimProblem:
    """The AIM instance for a reduced Morse model.

    In exact mode Delta is taken as an exact rational (a float Delta converts
    exactly, being a dyadic rational).  In numeric mode the coefficients are
    rounded at ``precision`` plus guard digits so downstream solvers at that
    precision never see construction round-off.
    """
    if mode == EXACT:
        delta = to_rational(r.delta)
        two = Fraction(2)
    elif mode == NUMERIC:
        delta = to_bigreal(r.delta, precision + GUARD_DIGITS)
        two = to_bigreal(2)
    else:
        raise ValueError(f"unknown scalar mode {mode!r}")
    with working_precision(precision + GUARD_DIGITS):
        lambda0 = LaurentPoly(
            {1: EpsPoly.constant(8 * delta, mode), -1: EpsPoly([-two, -two], mode)},
            mode,
        )
        s0 = LaurentPoly(
            {0: EpsPoly([12 * delta - 32 * delta * delta, 8 * delta], mode)},
            mode,
        )
        return AimProblem(
            lambda0=lambda0,
            s0=s0,
            u_star=u_star,
            mode=mode,
            label="morse",
            level_order="desc",
            search_window=eigenparameter_window(r.delta),
        )


def eigenparameter_window(delta) -> tuple:
    """Search window holding every bound-state root: eps in (-1/2, 4*Delta)."""
    d = to_rational(delta)
    return (Fraction(-1, 2), 4 * d + 2)


def epsilon_to_energy(epsilon_n, delta):
    """Energy in hbar*omega0 units: -(eps_n + 1/2)^2 / (16 Delta); exact for
    rational inputs."""
    if isinstance(epsilon_n, (Fraction, int)) and isinstance(delta, (Fraction, int)):
        e, d = to_rational(epsilon_n), to_rational(delta)
        return -((e + Fraction(1, 2)) ** 2) / (16 * d)
    e, d = to_bigreal(epsilon_n), to_bigreal(delta)
    return -((e + to_bigreal(1) / 2) ** 2) / (16 * d)


def bound_state_count(delta) -> int:
    """Number of bound levels: integers n >= 0 with n < 2*Delta - 1/2."""
    d = to_rational(delta)
    if not d > DELTA_FLOOR:
        raise ValueError("delta must exceed 3/8")
    threshold = 2 * d - Fraction(1, 2)
    n_max = threshold.numerator // threshold.denominator  # floor
    if n_max == threshold:  # strict inequality excludes the threshold state
        n_max -= 1
    return n_max + 1


def closed_form_spectrum(delta, n: int):
    """Closed-form level n in hbar*omega0 units:
    -(-2(2n+1) + 8 Delta)^2 / (64 Delta); exact for rational Delta."""
    if n < 0:
        raise ValueError("level index must be non-negative")
    if n >= bound_state_count(delta):
        raise ValueError(
            f"level {n} is beyond the bound-state count {bound_state_count(delta)}"
        )
    if isinstance(delta, Fraction) or isinstance(delta, int):
        d = to_rational(delta)
        return -((-2 * (2 * n + 1) + 8 * d) ** 2) / (64 * d)
    d = to_bigreal(delta)
    return -((-2 * (2 * n + 1) + 8 * d) ** 2) / (64 * d)


def closed_form_epsilon(delta, n: int):
    """The quantization root itself: eps_n = (8 Delta - 4n - 3) / 2."""
    d = to_rational(delta)
    return (8 * d - 4 * n - 3) / Fraction(2)


def potential_eval(x: float, p: MorseParameters) -> float:
    """V(x) in cm^-1: D_e (exp(-2 beta (x - x_e)) - 2 exp(-beta (x - x_e)))."""
    y = p.beta_per_angstrom * (x - p.xe_angstrom)
    return p.de_cm1 * (math.exp(-2.0 * y) - 2.0 * math.exp(-y))


def energy_to_wavenumbers(eps, r: ReducedMorse):
    """E_n in cm^-1 = eps_hw0 * (hbar omega0 in cm^-1)."""
    if r.hbar_omega0_cm1 is None:
        raise UnitsUnavailableError(
            "this reduced model was built from a bare Delta; no cm^-1 scale available"
        )
    return float(eps) * r.hbar_omega0_cm1
