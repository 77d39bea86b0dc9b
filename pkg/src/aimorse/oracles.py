"""Independent low-precision oracles for cross-checking the iteration engine.

``fd_spectrum`` diagonalizes a three-point finite-difference discretization
of the one-dimensional eigenvalue problem (symmetric tridiagonal matrix,
Dirichlet ends).  The grid may be smoothly graded (a sinh map clustering
points around the potential minimum, where the bound states live); the
scheme stays second order in the mesh parameter either way.  Everything
here runs in ordinary double precision: the oracle validates correctness,
not precision.

``oscillator_problem`` is the transformed harmonic oscillator
(psi = exp(-u^2/2) f turns psi'' = (u^2 - E) psi into f'' = 2u f' + (1-E) f),
whose spectrum E = 2n + 1 exercises the engine on a second closed-form case.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .engine import AimProblem
from .morse import MorseParameters, ReducedMorse, reduce_units
from .polynomials import EpsPoly, LaurentPoly
from .scalars import EXACT, NUMERIC

DEFAULT_GRADING = 6.0


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    num_points: int

    def __post_init__(self):
        if self.num_points < 100:
            raise ValueError("need at least 100 grid points")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")


class FdEnergies(list):
    """Eigenvalue list that can carry a grid-resolution warning."""

    warning: str | None = None


def _graded_grid(x_min, x_max, n, center, grading):
    """Uniform z in [0,1] mapped through x = center + s*sinh(c (z - z0)).

    grading = 0 gives the uniform grid.  Returns node positions and dx/dz.
    """
    z = np.linspace(0.0, 1.0, n)
    if grading == 0 or not (x_min < center < x_max):
        x = x_min + (x_max - x_min) * z
        xp = np.full(n, x_max - x_min)
        return x, xp
    c = float(grading)

    def endpoint_balance(z0):
        return (x_max - center) * math.sinh(c * z0) - (center - x_min) * math.sinh(c * (1 - z0))

    z0 = brentq(endpoint_balance, 1e-12, 1 - 1e-12)
    s = (x_max - center) / math.sinh(c * (1 - z0))
    x = center + s * np.sinh(c * (z - z0))
    xp = s * c * np.cosh(c * (z - z0))
    return x, xp


def fd_eigenvalues(grid: GridSpec, potential, kinetic_coeff: float, n_levels: int,
                   *, center=None, grading: float = DEFAULT_GRADING):
    """Lowest eigenvalues of -kinetic*psi'' + V(x) psi = E psi on the grid.

    Three-point flux-form Laplacian with Dirichlet ends; the weighted
    generalized problem of the graded grid is symmetrized by a diagonal
    similarity, so a standard symmetric-tridiagonal routine applies.
    """
    if center is None:
        center = 0.5 * (grid.x_min + grid.x_max)
    x, xp = _graded_grid(grid.x_min, grid.x_max, grid.num_points, center, grading)
    h = 1.0 / (grid.num_points - 1)
    v = np.asarray([potential(xi) for xi in x], dtype=float)
    flux = kinetic_coeff / (0.5 * (xp[1:] + xp[:-1])) / h**2
    diag = (flux[:-1] + flux[1:]) + xp[1:-1] * v[1:-1]
    off = -flux[1:-1]
    weight = xp[1:-1]
    diag = diag / weight
    off = off / np.sqrt(weight[:-1] * weight[1:])
    n_levels = min(n_levels, len(diag))
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_levels - 1))[0]
    return [float(e) for e in vals]


def fd_spectrum(problem, grid: GridSpec, n_levels: int, *,
                beta: float | None = None, x_e: float | None = None,
                grading: float = DEFAULT_GRADING) -> FdEnergies:
    """Finite-difference Morse spectrum in hbar*omega0 units.

    ``problem`` is a MorseParameters (beta and x_e taken from it) or a
    ReducedMorse (beta and x_e must then be supplied to place the grid).
    """
    if isinstance(problem, MorseParameters):
        if beta is not None or x_e is not None:
            raise ValueError("beta / x_e are implied by MorseParameters")
        beta = problem.beta_per_angstrom
        x_e = problem.xe_angstrom
        delta = float(reduce_units(problem).delta)
    elif isinstance(problem, ReducedMorse):
        if beta is None or x_e is None:
            raise ValueError("a ReducedMorse needs explicit beta and x_e for the grid")
        delta = float(problem.delta)
    else:
        raise TypeError("expected MorseParameters or ReducedMorse")
    if not grid.x_min < x_e < grid.x_max:
        raise ValueError("grid must straddle the potential minimum x_e")

    kinetic = 1.0 / (4.0 * delta * beta * beta)

    def v(x):
        y = beta * (x - x_e)
        return delta * (math.exp(-2.0 * y) - 2.0 * math.exp(-y))

    energies = FdEnergies(
        fd_eigenvalues(grid, v, kinetic, n_levels, center=x_e, grading=grading)
    )
    # resolution heuristic: the highest requested state must keep several
    # points per local de Broglie wavelength at the well bottom
    if energies:
        depth = energies[-1] + delta
        if depth > 0:
            wavelength = 2.0 * math.pi / math.sqrt(depth / kinetic)
            local_h = (grid.x_max - grid.x_min) / (grid.num_points - 1)
            if grading:
                local_h /= float(grading)  # graded mesh is finer near the well
            if local_h > wavelength / 10.0:
                energies.warning = (
                    f"only {wavelength / local_h:.1f} points per wavelength for "
                    f"level {n_levels - 1}; eigenvalues may be under-resolved"
                )
                warnings.warn(energies.warning, stacklevel=2)
    return energies


def oscillator_problem(mode: str = EXACT) -> AimProblem:
    """The transformed harmonic oscillator as an AIM instance.

    lambda0 = 2u and s0 = 1 - E; the evaluation point is u* = 1 because
    lambda0 vanishes at u = 0.  Levels ascend in E (E_n = 2n + 1).
    """
    if mode not in (EXACT, NUMERIC):
        raise ValueError(f"unknown scalar mode {mode!r}")
    lambda0 = LaurentPoly({1: EpsPoly.constant(2, mode)}, mode)
    s0 = LaurentPoly({0: EpsPoly([1, -1], mode)}, mode)
    return AimProblem(
        lambda0=lambda0,
        s0=s0,
        u_star=1,
        mode=mode,
        label="oscillator",
        level_order="asc",
    )
