"""The asymptotic-iteration engine.

Given a problem ``f'' = lambda0(u) f' + s0(u) f`` with Laurent-polynomial
coefficients, the engine generates the iterated coefficient pairs

    lambda_k = lambda_{k-1}' + s_{k-1} + lambda0 * lambda_{k-1}
    s_k      = s_{k-1}'      + s0 * lambda_{k-1}

and extracts eigenvalues from the quantization condition

    delta_k(u*) = s_k(u*) lambda_{k-1}(u*) - s_{k-1}(u*) lambda_k(u*) = 0,

accepting a root only once it is present in two consecutive iterations.
In exact mode roots are certified by exact rational arithmetic (a reported
rational eigenvalue is an exact common zero of delta_k and delta_{k-1});
in numeric mode stability is judged against a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm as int_lcm

from mpmath import mp, mpf

from .errors import (
    BracketError,
    ConvergenceError,
    LevelCountError,
    ModeMismatchError,
    PoleError,
)
from .polynomials import EpsPoly, LaurentPoly
from .roots import rational_candidates
from .scalars import (
    DEFAULT_PRECISION,
    EXACT,
    GUARD_DIGITS,
    NUMERIC,
    coerce_scalar,
    to_bigreal,
    to_rational,
    working_precision,
)

DEFAULT_K_MAX = 40


@dataclass(frozen=True)
class AimProblem:
    """One iteration instance: the pair (lambda0, s0) plus metadata.

    ``level_order`` states how physical level indices map onto the sorted
    roots: "desc" when the eigenparameter decreases with the level index
    (the Morse reduction), "asc" when it increases (e.g. the oscillator).
    ``search_window`` optionally bounds where eigenvalue roots live; without
    it a Cauchy bound of the quantization polynomial is used.
    """

    lambda0: LaurentPoly
    s0: LaurentPoly
    u_star: object
    mode: str
    label: str = ""
    level_order: str = "desc"
    search_window: tuple | None = None

    def __post_init__(self):
        if self.lambda0.is_zero:
            raise ValueError("lambda0 must not be identically zero")
        if self.lambda0.mode != self.mode or self.s0.mode != self.mode:
            raise ModeMismatchError("problem coefficients must match the declared mode")
        if self.level_order not in ("desc", "asc"):
            raise ValueError("level_order must be 'desc' or 'asc'")
        u = coerce_scalar(self.u_star, self.mode)
        if not u > 0:
            raise ValueError("u_star must be strictly positive")
        object.__setattr__(self, "u_star", u)
        if self.search_window is not None:
            lo, hi = self.search_window
            if not to_rational(lo) < to_rational(hi):
                raise ValueError("search_window must satisfy lo < hi")

    def denominator_hints(self) -> tuple[int, ...]:
        """Candidate denominators for exact eigenvalue roots.

        Every coefficient denominator of lambda0 and s0, times small powers
        of two; candidate testing tries them smallest first and exact
        certification rejects any wrong guess.
        """
        if self.mode != EXACT:
            return ()
        dens = {1}
        for poly in (self.lambda0, self.s0):
            for coeff in poly.terms.values():
                for c in coeff.coefficients:
                    dens.add(Fraction(c).denominator)
        hints = {m * d for d in dens for m in (1, 2, 4, 8, 16)}
        return tuple(sorted(hints))

    def to_mode(self, mode: str, dps: int | None = None) -> "AimProblem":
        if mode == self.mode:
            return self
        return AimProblem(
            lambda0=self.lambda0.to_mode(mode, dps),
            s0=self.s0.to_mode(mode, dps),
            u_star=to_bigreal(self.u_star, dps) if mode == NUMERIC else to_rational(self.u_star),
            mode=mode,
            label=self.label,
            level_order=self.level_order,
            search_window=self.search_window,
        )


@dataclass(frozen=True)
class AimTrace:
    """State after iteration k: the coefficient pair and delta_k at u*."""

    k: int
    lambda_k: LaurentPoly
    s_k: LaurentPoly
    delta_k_at_u: EpsPoly


@dataclass(frozen=True)
class EigenvalueResult:
    n: int
    epsilon: object  # Fraction in exact mode, BigReal otherwise
    k_converged: int
    residual: mpf
    stability_gap: mpf

    @property
    def is_exact(self) -> bool:
        return isinstance(self.epsilon, Fraction)


def aim_step(lambda_prev: LaurentPoly, s_prev: LaurentPoly,
             lambda0: LaurentPoly, s0: LaurentPoly):
    """One iteration of the coefficient recursion."""
    lambda_k = lambda_prev.derivative() + s_prev + lambda0 * lambda_prev
    s_k = s_prev.derivative() + s0 * lambda_prev
    return lambda_k, s_k


def delta_poly(trace_k: AimTrace, trace_k_minus_1: AimTrace, u_star) -> EpsPoly:
    """Quantization polynomial s_k(u*) lam_{k-1}(u*) - s_{k-1}(u*) lam_k(u*)."""
    if trace_k.k != trace_k_minus_1.k + 1:
        raise ValueError("delta_poly needs two consecutive iterations")
    sk = trace_k.s_k.eval_u(u_star)
    lk = trace_k.lambda_k.eval_u(u_star)
    sp = trace_k_minus_1.s_k.eval_u(u_star)
    lp = trace_k_minus_1.lambda_k.eval_u(u_star)
    return sk * lp - sp * lk


def iterate_aim(problem: AimProblem, k_max: int):
    """Yield AimTrace for k = 1 .. k_max (a pure fold over aim_step)."""
    lam, s = problem.lambda0, problem.s0
    lam_at, s_at = lam.eval_u(problem.u_star), s.eval_u(problem.u_star)
    for k in range(1, k_max + 1):
        lam_next, s_next = aim_step(lam, s, problem.lambda0, problem.s0)
        lam_next_at = lam_next.eval_u(problem.u_star)
        s_next_at = s_next.eval_u(problem.u_star)
        delta = s_next_at * lam_at - s_at * lam_next_at
        yield AimTrace(k=k, lambda_k=lam_next, s_k=s_next, delta_k_at_u=delta)
        lam, s = lam_next, s_next
        lam_at, s_at = lam_next_at, s_next_at


# ---------------------------------------------------------------------------
# root localization on a BigReal rendering of an EpsPoly


def _horner(coeffs, x):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _root_bound(coeffs) -> mpf:
    """Fujiwara bound on the modulus of every root; far tighter than the
    Cauchy bound when the coefficients span many orders of magnitude."""
    d = len(coeffs) - 1
    lead = abs(coeffs[-1])
    if d < 1 or lead == 0:
        return mpf(1)
    best = mpf(0)
    for i in range(d):
        ratio = abs(coeffs[i]) / lead
        if i == 0:
            ratio /= 2
        if ratio > 0:
            best = max(best, ratio ** (mpf(1) / (d - i)))
    return 2 * best + 1


def _localize_roots(coeffs, lo, hi, refine_width, n_samples):
    """Sign-change scan plus bisection; approximate real roots in [lo, hi]."""
    xs = [lo + (hi - lo) * i / (n_samples - 1) for i in range(n_samples)]
    vals = [_horner(coeffs, x) for x in xs]
    roots = []
    for i in range(n_samples - 1):
        a, b, fa, fb = xs[i], xs[i + 1], vals[i], vals[i + 1]
        if fa == 0:
            roots.append(a)
            continue
        if (fa < 0) == (fb < 0):
            continue
        for _ in range(max(64, mp.prec + 16)):
            if b - a < refine_width:
                break
            m = (a + b) / 2
            fm = _horner(coeffs, m)
            if fm == 0:
                a = b = m
                break
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        roots.append((a + b) / 2)
    if vals[-1] == 0:
        roots.append(xs[-1])
    return roots


def _localize_all(coeffs, lo, hi, refine_width):
    """Iterative-deepening localization: double the sample grid until the
    root count stabilizes, so clustered roots inside wide windows are not
    masked by paired sign changes."""
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    n_samples = max(257, 6 * deg + 1)
    previous = None
    for _ in range(6):
        roots = _localize_roots(coeffs, lo, hi, refine_width, n_samples)
        if len(roots) >= deg:
            return roots
        if previous is not None and len(previous) == len(roots):
            return roots
        previous = roots
        n_samples = 2 * n_samples - 1
    return previous


# ---------------------------------------------------------------------------
# eigenvalue extraction


def _exact_frac_to_mpf(coeffs):
    return [to_bigreal(c) for c in coeffs]


@dataclass
class _Accepted:
    epsilon: object
    k_converged: int
    residual: mpf
    stability_gap: mpf


def _relative_residual(poly: EpsPoly, root) -> mpf:
    """|p(root)| divided by the magnitude of the largest Horner term,
    evaluated at twice the working precision."""
    with working_precision(max(2 * mp.dps, 64)):
        x = to_bigreal(root)
        coeffs = [to_bigreal(c) for c in poly.coefficients]
        value = _horner(coeffs, x)
        scale = max((abs(c) * abs(x) ** i for i, c in enumerate(coeffs)), default=mpf(1))
        if scale == 0:
            scale = mpf(1)
        return abs(value) / scale


def eigenvalues_symbolic(
    problem: AimProblem,
    n_levels: int,
    k_max: int = DEFAULT_K_MAX,
    tol=None,
    search_window=None,
    precision: int = DEFAULT_PRECISION,
):
    """Extract the first ``n_levels`` eigenvalues by delta-root stability.

    A root is accepted once present in delta_k and delta_{k-1}: exactly (a
    certified common rational zero) in exact mode, within ``tol`` in numeric
    mode.  Results are ordered by the problem's level ordering.

    Raises ConvergenceError / LevelCountError carrying partial results when
    k_max is insufficient.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be at least 1")
    if k_max < n_levels + 2:
        raise ValueError("k_max must be at least n_levels + 2")
    exact = problem.mode == EXACT
    work_dps = int(precision) + GUARD_DIGITS
    if not exact:
        # the coefficient recursion loses roughly 1.3 decimal digits per
        # iteration to round-off; pad the working precision accordingly
        work_dps += (3 * k_max) // 2 + 2
    if tol is None:
        tol = mpf(10) ** -(min(30, precision // 2))
    hints = problem.denominator_hints()

    accepted: list[_Accepted] = []
    accepted_values_mpf: list[mpf] = []
    last_root_count = 0

    with working_precision(work_dps):
        tol_b = to_bigreal(tol)
        prev_delta = None
        prev_roots: list[mpf] = []
        work = problem if exact else problem.to_mode(NUMERIC, work_dps)

        for trace in iterate_aim(work, k_max):
            delta = trace.delta_k_at_u
            if delta.is_zero:
                prev_delta, prev_roots = delta, []
                continue
            coeffs_mpf = (
                _exact_frac_to_mpf(delta.coefficients) if exact else list(delta.coefficients)
            )
            window = search_window if search_window is not None else problem.search_window
            if window is not None:
                lo, hi = (to_bigreal(window[0]), to_bigreal(window[1]))
            else:
                bound = _root_bound(coeffs_mpf)
                lo, hi = -bound, bound
            window_width = hi - lo
            dedupe = max(1000 * tol_b, window_width * mpf(10) ** -9)
            if exact:
                refine_width = window_width * mpf(2) ** -70
            else:
                refine_width = min(window_width * mpf(10) ** -18, tol_b / 100)
            roots = _localize_all(coeffs_mpf, lo, hi, refine_width)
            last_root_count = len(roots)
            if prev_delta is not None and not prev_delta.is_zero:
                for r in roots:
                    if any(abs(r - v) < dedupe for v in accepted_values_mpf):
                        continue
                    if exact:
                        width = to_rational(8 * refine_width)
                        r_frac = to_rational(r)
                        for cand in rational_candidates(r_frac - width, r_frac + width, hints=hints):
                            if (
                                delta.evaluate(cand) == 0
                                and prev_delta.evaluate(cand) == 0
                            ):
                                accepted.append(
                                    _Accepted(cand, trace.k, mpf(0), mpf(0))
                                )
                                accepted_values_mpf.append(to_bigreal(cand))
                                break
                    else:
                        near = [p for p in prev_roots if abs(r - p) < tol_b]
                        if near:
                            gap = min(abs(r - p) for p in near)
                            accepted.append(
                                _Accepted(+r, trace.k, _relative_residual(delta, r), gap)
                            )
                            accepted_values_mpf.append(+r)
            prev_delta, prev_roots = delta, roots
            if len(accepted) >= n_levels:
                break

    reverse = problem.level_order == "desc"
    accepted.sort(key=lambda a: to_rational(a.epsilon), reverse=reverse)
    results = [
        EigenvalueResult(
            n=i,
            epsilon=a.epsilon,
            k_converged=a.k_converged,
            residual=a.residual,
            stability_gap=a.stability_gap,
        )
        for i, a in enumerate(accepted)
    ]
    if len(results) < n_levels:
        message = (
            f"found {len(results)} of {n_levels} requested levels "
            f"within k_max = {k_max}"
        )
        if last_root_count < n_levels:
            raise LevelCountError(message, partial=results)
        raise ConvergenceError(message, partial=results)
    return results[:n_levels]


def _bracketed_root(coeffs, lo, hi, tol_b):
    """Bisection-secant hybrid on a bracketing interval (never an open step)."""
    fa, fb = _horner(coeffs, lo), _horner(coeffs, hi)
    if fa == 0:
        return lo
    if fb == 0:
        return hi
    if (fa < 0) == (fb < 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    a, b = lo, hi
    for _ in range(20000):
        if b - a <= tol_b:
            break
        m = None
        if fa != fb:
            secant = (a * fb - b * fa) / (fb - fa)
            margin = (b - a) / 16
            if a + margin < secant < b - margin:
                m = secant
        if m is None:
            m = (a + b) / 2
        fm = _horner(coeffs, m)
        if fm == 0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return (a + b) / 2


def eigenvalue_numeric(
    problem: AimProblem,
    bracket,
    k_fixed: int,
    tol,
    precision: int = DEFAULT_PRECISION,
) -> EigenvalueResult:
    """Shooting mode: root-find delta_{k_fixed}(u*; eps) on a bracket.

    The bracket must enclose a sign change of delta_{k_fixed}.  The returned
    stability gap is the distance to the corresponding root of
    delta_{k_fixed - 1}; its absence is reported as a convergence failure
    (k_fixed too small for the sought level).
    """
    if k_fixed < 2:
        raise ValueError("k_fixed must be at least 2")
    # round-off amplification grows with the iteration depth; see
    # eigenvalues_symbolic for the padding rationale
    work_dps = int(precision) + GUARD_DIGITS + (3 * k_fixed) // 2 + 2
    with working_precision(work_dps):
        tol_b = to_bigreal(tol)
        lo, hi = to_bigreal(bracket[0]), to_bigreal(bracket[1])
        if not lo < hi:
            raise ValueError("bracket must satisfy lo < hi")
        work = problem.to_mode(NUMERIC, work_dps)
        deltas = {}
        for trace in iterate_aim(work, k_fixed):
            if trace.k >= k_fixed - 1:
                deltas[trace.k] = trace.delta_k_at_u
        coeffs = list(deltas[k_fixed].coefficients)
        root = _bracketed_root(coeffs, lo, hi, tol_b)
        prev_coeffs = list(deltas[k_fixed - 1].coefficients)
        try:
            prev_root = _bracketed_root(prev_coeffs, lo, hi, tol_b)
        except BracketError as exc:
            raise ConvergenceError(
                f"delta at k = {k_fixed - 1} has no root in the bracket; "
                f"k_fixed = {k_fixed} is too small for a stable level"
            ) from exc
        gap = abs(root - prev_root)
        residual = _relative_residual(deltas[k_fixed], root)
        result = EigenvalueResult(
            n=0,
            epsilon=to_bigreal(root, precision),
            k_converged=k_fixed,
            residual=residual,
            stability_gap=gap,
        )
    if result.residual > 10 * to_bigreal(tol):
        raise ConvergenceError(
            f"relative residual {result.residual} exceeds 10*tol; "
            "raise the working precision or k_fixed",
            partial=[result],
        )
    return result


def rho_function(problem: AimProblem, epsilon_n, k: int):
    """The pair (s_k, lambda_k) with the eigenparameter substituted.

    Their ratio is the logarithmic-derivative function of the converged
    solution; use :func:`rho_samples` to evaluate it pointwise.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    lam = problem.lambda0.specialize_eps(epsilon_n)
    s = problem.s0.specialize_eps(epsilon_n)
    lam0, s0 = lam, s
    for _ in range(k):
        lam, s = aim_step(lam, s, lam0, s0)
    return s, lam


def rho_samples(problem: AimProblem, epsilon_n, k: int, points):
    """Values of s_k/lambda_k at the given u points; PoleError where
    lambda_k vanishes."""
    s, lam = rho_function(problem, epsilon_n, k)
    out = []
    for u in points:
        denom = lam.eval_point(u, 0)
        if denom == 0:
            raise PoleError(f"lambda_k vanishes at u = {u}")
        out.append(s.eval_point(u, 0) / denom)
    return out
