"""High-precision asymptotic-iteration eigensolver for the Morse oscillator.

The package has two arithmetic modes sharing one code path: an exact mode
over arbitrary-size rationals that certifies every reported eigenvalue by
exact arithmetic, and a numeric mode over extended-precision floats for
models whose parameters are not rational.
"""

from .engine import (
    AimProblem,
    AimTrace,
    EigenvalueResult,
    aim_step,
    delta_poly,
    eigenvalue_numeric,
    eigenvalues_symbolic,
    iterate_aim,
    rho_function,
    rho_samples,
)
from .errors import (
    AimorseError,
    BracketError,
    ConvergenceError,
    DegenerateInputError,
    LevelCountError,
    ModeMismatchError,
    PoleError,
    QuadratureError,
    TerminationError,
    UnitsUnavailableError,
)
from .morse import (
    MorseParameters,
    ReducedMorse,
    bound_state_count,
    build_aim_problem,
    closed_form_epsilon,
    closed_form_spectrum,
    eigenparameter_window,
    energy_to_wavenumbers,
    epsilon_to_energy,
    potential_eval,
    reduce_units,
)
from .oracles import FdEnergies, GridSpec, fd_eigenvalues, fd_spectrum, oscillator_problem
from .polynomials import EpsPoly, LaurentPoly, poly_diff_u, poly_eval_u, poly_mul
from .roots import count_real_roots, real_roots, simplest_rational_between
from .scalars import (
    BigReal,
    DEFAULT_PRECISION,
    EXACT,
    NUMERIC,
    Rational,
    to_bigreal,
    to_rational,
    working_precision,
)
from .wavefunctions import (
    FULL_LINE,
    HALF_LINE,
    SeriesSolution,
    Wavefunction,
    assemble,
    count_nodes,
    inner_product,
    schrodinger_residual,
    series_solve,
    wavefunction_table,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
