"""Bound-state eigenfunctions from the terminating power series.

For a true eigenvalue the series solution of the reduced equation in u
terminates:  f_n(u) = sum_{m even} c_m u^m  with

    c_{m+2} = c_m (8 D m + 12 D + 8 D eps - 32 D^2) / ((m+2)(m + 2 eps + 3))

(D = Delta), the numerator vanishing exactly at m = 2n.  The full
wavefunction in the physical coordinate is

    Psi_n(x) = N u^(eps_n + 1/2) exp(-2 D u^2) f_n(u),
    u = exp(-beta (x - x_e) / 2),

with N fixed by quadrature normalization on the configured domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import QuadratureError, TerminationError
from .morse import MorseParameters
from .polynomials import EpsPoly
from .scalars import EXACT, NUMERIC, to_bigreal, to_rational, working_precision

HALF_LINE = "half-line"   # physical x in [0, inf)
FULL_LINE = "full-line"   # idealized x in (-inf, inf)


@dataclass(frozen=True)
class SeriesSolution:
    """Terminating series for level n: coefficients c_0 .. c_{2n} (odd ones zero)."""

    n: int
    coefficients: tuple
    epsilon_n: object
    delta: object
    mode: str

    def poly_in_u(self) -> EpsPoly:
        """f_n as a polynomial in u (EpsPoly reused as a plain polynomial)."""
        return EpsPoly(self.coefficients, self.mode)


def _recurrence_numerator(m: int, delta, epsilon):
    return 8 * delta * m + 12 * delta + 8 * delta * epsilon - 32 * delta * delta


def series_solve(epsilon_n, delta, n: int) -> SeriesSolution:
    """Construct the terminating series for level n.

    Raises TerminationError when epsilon_n is not the level-n eigenvalue
    (the recurrence then fails to cut off at degree 2n).
    """
    if n < 0:
        raise ValueError("level index must be non-negative")
    exact = isinstance(epsilon_n, (Fraction, int)) and isinstance(delta, (Fraction, int))
    if exact:
        eps, dlt = to_rational(epsilon_n), to_rational(delta)
        one, zero = Fraction(1), Fraction(0)
    else:
        eps, dlt = to_bigreal(epsilon_n), to_bigreal(delta)
        one, zero = mpf(1), mpf(0)
    mode = EXACT if exact else NUMERIC

    coeffs = [zero] * (2 * n + 1)
    coeffs[0] = one
    c = one
    for m in range(0, 2 * n, 2):
        num = _recurrence_numerator(m, dlt, eps)
        den = (m + 2) * (m + 2 * eps + 3)
        if den == 0:
            raise TerminationError(f"recurrence denominator vanishes at m = {m}")
        if not num:
            raise TerminationError(
                f"series terminated early at degree {m}; epsilon is not the "
                f"level-{n} eigenvalue"
            )
        c = c * num / den
        coeffs[m + 2] = c

    # cut-off test at m = 2n: exact zero, or zero to working precision
    tail = _recurrence_numerator(2 * n, dlt, eps)
    if exact:
        terminated = tail == 0
    else:
        scale = abs(32 * dlt * dlt) + abs(8 * dlt) * (2 * n + 1)
        terminated = abs(tail) <= scale * mpf(10) ** (-(mp.dps - 8))
    if not terminated:
        raise TerminationError(
            f"series does not terminate at degree {2 * n}; epsilon is not the "
            f"level-{n} eigenvalue"
        )
    if not coeffs[2 * n]:
        raise TerminationError("leading series coefficient vanished unexpectedly")
    return SeriesSolution(
        n=n, coefficients=tuple(coeffs), epsilon_n=eps, delta=dlt, mode=mode
    )


@dataclass(frozen=True)
class Wavefunction:
    """Normalized bound-state wavefunction Psi_n(x), x in Angstrom."""

    series: SeriesSolution
    beta: float
    x_e: float
    norm_constant: mpf
    domain: str = HALF_LINE
    dps: int = 40

    def _raw(self, x) -> mpf:
        """Un-normalized value at x, evaluated at this wavefunction's precision."""
        beta = to_bigreal(self.beta)
        xe = to_bigreal(self.x_e)
        dlt = to_bigreal(self.series.delta)
        expo = to_bigreal(to_rational(self.series.epsilon_n) + Fraction(1, 2))
        t = -beta * (to_bigreal(x) - xe) / 2  # u = exp(t)
        # float pre-screen of log|Psi|: quadrature rules probe absurdly deep
        # tails where the exponentials cannot (and need not) be evaluated
        tf = float(t)
        if 2 * tf > 700.0:
            return mpf(0)
        log_mag = float(expo) * tf - 2.0 * float(dlt) * math.exp(2 * tf)
        if log_mag < -1e5:
            return mpf(0)
        u = mpmath.exp(t)
        f = mpf(0)
        u2 = u * u
        for c in reversed(self.series.coefficients[0::2]):
            f = f * u2 + to_bigreal(c)
        return u**expo * mpmath.exp(-2 * dlt * u2) * f

    def __call__(self, x) -> mpf:
        with working_precision(self.dps):
            return self.norm_constant * self._raw(x)

    def nodes_polynomial_values(self, xs):
        """Values of the sign-carrying series factor f_n(u(x)) on a grid.

        The remaining factors of Psi are strictly positive, so sign changes
        of Psi are sign changes of f_n.
        """
        with working_precision(self.dps):
            beta, xe = to_bigreal(self.beta), to_bigreal(self.x_e)
            even = [to_bigreal(c) for c in self.series.coefficients[0::2]]
            out = []
            for x in xs:
                u2 = mpmath.exp(-beta * (to_bigreal(x) - xe)) # u^2
                f = mpf(0)
                for c in reversed(even):
                    f = f * u2 + c
                out.append(f)
            return out


def _integration_points(series: SeriesSolution, beta: float, x_e: float, domain: str):
    """Quadrature waypoints hugging the state's classically allowed region.

    The density u^(2 eps + 1) exp(-4 Delta u^2) f^2 is concentrated between
    the turning points u_-^2, u_+^2 = 1 -+ sqrt(1 - q^2), q = (eps + 1/2) /
    (4 Delta); waypoints at those radii (padded by a few Gaussian widths
    sigma_u = 1 / sqrt(8 Delta)) keep the adaptive quadrature honest.
    """
    delta = float(to_rational(series.delta))
    q = float(to_rational(series.epsilon_n) + Fraction(1, 2)) / (4.0 * delta)
    q = min(max(q, 1e-9), 1.0)
    wing = math.sqrt(max(1.0 - q * q, 0.0))
    sigma = 1.0 / math.sqrt(8.0 * delta)
    u_radii = [
        math.sqrt(max(1.0 - wing, 1e-12)) - 4 * sigma,
        math.sqrt(max(1.0 - wing, 1e-12)),
        1.0,
        math.sqrt(1.0 + wing),
        math.sqrt(1.0 + wing) + 4 * sigma,
    ]
    xs = sorted(x_e - (2.0 / beta) * math.log(u) for u in u_radii if u > 0)
    if domain == HALF_LINE:
        return [0.0] + [x for x in xs if x > 0] + [mpmath.inf]
    return [-mpmath.inf] + xs + [mpmath.inf]


def _magnitude_scale(w: Wavefunction, points) -> mpf:
    """Typical magnitude of the un-normalized wavefunction near its support.

    Integrands are divided by this before quadrature; without the rescaling
    their absolute size (often 1e-60 and below) falls under the quadrature
    rule's term-pruning floor and the result loses all accuracy.
    """
    finite = [p for p in points if mpmath.isfinite(mpf(p))]
    samples = list(finite)
    samples += [(x + y) / 2 for x, y in zip(finite, finite[1:])]
    peak = max((abs(w._raw(x)) for x in samples), default=mpf(1))
    return peak if peak > 0 else mpf(1)


def assemble(
    series: SeriesSolution,
    p: MorseParameters,
    domain: str = HALF_LINE,
    dps: int = 40,
) -> Wavefunction:
    """Attach physical coordinates and normalize by quadrature."""
    if domain not in (HALF_LINE, FULL_LINE):
        raise ValueError(f"unknown domain {domain!r}")
    w = Wavefunction(
        series=series,
        beta=p.beta_per_angstrom,
        x_e=p.xe_angstrom,
        norm_constant=mpf(1),
        domain=domain,
        dps=dps,
    )
    with working_precision(dps):
        points = _integration_points(series, w.beta, w.x_e, domain)
        scale = _magnitude_scale(w, points)
        scaled, err = mpmath.quad(
            lambda x: (w._raw(x) / scale) ** 2, points, error=True, maxdegree=8
        )
        if not scaled > 0 or err > abs(scaled) * mpf(10) ** -12:
            raise QuadratureError(
                "normalization integral did not converge", estimate=scaled * scale**2
            )
        norm = 1 / (scale * mpmath.sqrt(scaled))
    return Wavefunction(
        series=series,
        beta=w.beta,
        x_e=w.x_e,
        norm_constant=norm,
        domain=domain,
        dps=dps,
    )


def inner_product(a: Wavefunction, b: Wavefunction, domain: str | None = None,
                  rel_tol=1e-12) -> mpf:
    """Overlap integral of two wavefunctions on a shared domain."""
    if (a.beta, a.x_e) != (b.beta, b.x_e) or a.series.delta != b.series.delta:
        raise ValueError("wavefunctions live on different Morse models")
    domain = domain or a.domain
    dps = max(a.dps, b.dps)
    wider = a if a.series.n >= b.series.n else b
    with working_precision(dps):
        points = _integration_points(wider.series, a.beta, a.x_e, domain)
        scale = _magnitude_scale(a, points) * _magnitude_scale(b, points)
        raw, err = mpmath.quad(
            lambda x: a._raw(x) * b._raw(x) / scale, points, error=True, maxdegree=8
        )
        factor = a.norm_constant * b.norm_constant * scale
        value = factor * raw
        err = abs(factor) * err
        # scale errors against the unit diagonal, not against a vanishing overlap
        if err > to_bigreal(rel_tol) * max(abs(value), mpf(1)):
            raise QuadratureError(
                f"quadrature error estimate {err} above tolerance", estimate=value
            )
        return value


# 8th-order central second-derivative stencil
_D2_WEIGHTS = (
    (Fraction(-1, 560), 4),
    (Fraction(8, 315), 3),
    (Fraction(-1, 5), 2),
    (Fraction(8, 5), 1),
    (Fraction(-205, 72), 0),
    (Fraction(8, 5), -1),
    (Fraction(-1, 5), -2),
    (Fraction(8, 315), -3),
    (Fraction(-1, 560), -4),
)


def schrodinger_residual(w: Wavefunction, x_points, fd_step: float = 1e-3):
    """Pointwise relative residual of the eigenvalue equation.

    The second derivative is taken by an 8th-order finite-difference stencil
    with its own small step (independent of the reporting grid), in the
    wavefunction's working precision.  Energies are in hbar*omega0 units:
    kinetic coefficient 1/(4 Delta beta^2), V(x)/hbar*omega0 =
    Delta (exp(-2 beta y) - 2 exp(-beta y)) with y = x - x_e.
    """
    out = []
    with working_precision(w.dps):
        dlt = to_bigreal(w.series.delta)
        beta = to_bigreal(w.beta)
        xe = to_bigreal(w.x_e)
        kin = 1 / (4 * dlt * beta * beta)
        eps = to_bigreal(to_rational(w.series.epsilon_n))
        energy = -((eps + mpf(1) / 2) ** 2) / (16 * dlt)
        h = to_bigreal(fd_step)
        for x in x_points:
            x = to_bigreal(x)
            d2 = mpf(0)
            for weight, shift in _D2_WEIGHTS:
                d2 += to_bigreal(weight) * w._raw(x + shift * h)
            d2 /= h * h
            psi = w._raw(x)
            y = x - xe
            v = dlt * (mpmath.exp(-2 * beta * y) - 2 * mpmath.exp(-beta * y))
            residual = -kin * d2 + v * psi - energy * psi
            scale = max(abs(energy * psi), abs(v * psi))
            if scale == 0:
                scale = mpf(1)
            out.append(abs(residual) / scale)
    return out


def count_nodes(w: Wavefunction, x_lo: float, x_hi: float, n_points: int = 2000) -> int:
    """Sign changes of Psi on a uniform grid (Sturm oscillation count)."""
    xs = [x_lo + (x_hi - x_lo) * i / (n_points - 1) for i in range(n_points)]
    values = w.nodes_polynomial_values(xs)
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def wavefunction_table(w: Wavefunction, xs):
    """(x, Psi(x)) pairs for export."""
    return [(float(x), w(x)) for x in xs]
