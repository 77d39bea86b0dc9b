"""Polynomials in the eigenparameter and Laurent polynomials in u.

``EpsPoly`` is a dense univariate polynomial in the unknown eigenparameter
(called ``eps`` throughout), with coefficients all in one scalar mode.
``LaurentPoly`` is a finite Laurent polynomial in the independent variable u
(integer exponents, possibly negative) whose coefficients are ``EpsPoly``
values; it is the working representation of the iteration coefficient
functions of the solver.

All values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ModeMismatchError, PoleError
from .scalars import EXACT, NUMERIC, coerce_scalar, require_same_mode, to_bigreal


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class EpsPoly:
    """Dense polynomial in the eigenparameter, ascending coefficient order."""

    __slots__ = ("_coeffs", "_mode")

    def __init__(self, coefficients, mode: str):
        if mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown scalar mode {mode!r}")
        coeffs = [coerce_scalar(c, mode) for c in coefficients]
        self._coeffs = _strip(coeffs)
        self._mode = mode

    @classmethod
    def zero(cls, mode: str) -> "EpsPoly":
        return cls((), mode)

    @classmethod
    def constant(cls, value, mode: str) -> "EpsPoly":
        return cls((value,), mode)

    @classmethod
    def eps(cls, mode: str) -> "EpsPoly":
        """The polynomial ``eps`` itself."""
        return cls((0, 1), mode)

    @property
    def coefficients(self) -> tuple:
        return self._coeffs

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, power: int):
        if 0 <= power < len(self._coeffs):
            return self._coeffs[power]
        return coerce_scalar(0, self._mode)

    def _check(self, other: "EpsPoly") -> None:
        if not isinstance(other, EpsPoly):
            raise TypeError("expected an EpsPoly")
        require_same_mode(self._mode, other._mode)

    def __add__(self, other: "EpsPoly") -> "EpsPoly":
        self._check(other)
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._wrap(out)

    def __sub__(self, other: "EpsPoly") -> "EpsPoly":
        return self + (-other)

    def __neg__(self) -> "EpsPoly":
        return self._wrap([-c for c in self._coeffs])

    def __mul__(self, other):
        if isinstance(other, EpsPoly):
            self._check(other)
            a, b = self._coeffs, other._coeffs
            if not a or not b:
                return EpsPoly.zero(self._mode)
            out = [coerce_scalar(0, self._mode)] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        if bj:
                            out[i + j] += ai * bj
            return self._wrap(out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor) -> "EpsPoly":
        factor = coerce_scalar(factor, self._mode)
        return self._wrap([c * factor for c in self._coeffs])

    def evaluate(self, x):
        """Horner evaluation; ``x`` is coerced into this polynomial's mode."""
        x = coerce_scalar(x, self._mode)
        acc = coerce_scalar(0, self._mode)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def evaluate_bigreal(self, x):
        """Horner evaluation with coefficients rounded to the working precision."""
        x = to_bigreal(x)
        acc = to_bigreal(0)
        for c in reversed(self._coeffs):
            acc = acc * x + to_bigreal(c)
        return acc

    def derivative(self) -> "EpsPoly":
        return self._wrap([i * c for i, c in enumerate(self._coeffs)][1:])

    def to_mode(self, mode: str, dps: int | None = None) -> "EpsPoly":
        if mode == self._mode:
            return self
        if mode == NUMERIC:
            return EpsPoly([to_bigreal(c, dps) for c in self._coeffs], NUMERIC)
        return EpsPoly(self._coeffs, EXACT)

    def _wrap(self, coeffs: list) -> "EpsPoly":
        new = EpsPoly.__new__(EpsPoly)
        new._coeffs = _strip(coeffs)
        new._mode = self._mode
        return new

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpsPoly):
            return NotImplemented
        return self._mode == other._mode and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._mode, self._coeffs))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __repr__(self) -> str:
        return f"EpsPoly({list(self._coeffs)!r}, mode={self._mode!r})"


class LaurentPoly:
    """Finite Laurent polynomial in u with EpsPoly coefficients.

    Stored as a map from integer exponent to a nonzero EpsPoly; no zero
    coefficients are ever kept.
    """

    __slots__ = ("_terms", "_mode")

    def __init__(self, terms, mode: str):
        if mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown scalar mode {mode!r}")
        clean: dict[int, EpsPoly] = {}
        for exp, coeff in dict(terms).items():
            exp = int(exp)
            if not isinstance(coeff, EpsPoly):
                coeff = (
                    EpsPoly(coeff, mode)
                    if isinstance(coeff, (list, tuple))
                    else EpsPoly.constant(coeff, mode)
                )
            elif coeff.mode != mode:
                raise ModeMismatchError(
                    f"coefficient at exponent {exp} is {coeff.mode}, expected {mode}"
                )
            if not coeff.is_zero:
                clean[exp] = coeff
        self._terms = clean
        self._mode = mode

    @classmethod
    def zero(cls, mode: str) -> "LaurentPoly":
        return cls({}, mode)

    @property
    def terms(self) -> dict[int, EpsPoly]:
        return dict(self._terms)

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no exponent range")
        return min(self._terms)

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no exponent range")
        return max(self._terms)

    def coefficient(self, exp: int) -> EpsPoly:
        return self._terms.get(exp, EpsPoly.zero(self._mode))

    def _check(self, other: "LaurentPoly") -> None:
        if not isinstance(other, LaurentPoly):
            raise TypeError("expected a LaurentPoly")
        require_same_mode(self._mode, other._mode)

    def _wrap(self, terms: dict[int, EpsPoly]) -> "LaurentPoly":
        new = LaurentPoly.__new__(LaurentPoly)
        new._terms = {e: c for e, c in terms.items() if not c.is_zero}
        new._mode = self._mode
        return new

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self._terms)
        for exp, coeff in other._terms.items():
            cur = out.get(exp)
            out[exp] = coeff if cur is None else cur + coeff
        return self._wrap(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return self._wrap({e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            out: dict[int, EpsPoly] = {}
            for ea, ca in self._terms.items():
                for eb, cb in other._terms.items():
                    e = ea + eb
                    prod = ca * cb
                    cur = out.get(e)
                    out[e] = prod if cur is None else cur + prod
            return self._wrap(out)
        if isinstance(other, EpsPoly):
            require_same_mode(self._mode, other.mode)
            return self._wrap({e: c * other for e, c in self._terms.items()})
        return self._wrap({e: c.scale(other) for e, c in self._terms.items()})

    __rmul__ = __mul__

    def derivative(self) -> "LaurentPoly":
        """d/du: lowers every exponent by 1 and multiplies by the old exponent."""
        return self._wrap(
            {e - 1: c.scale(e) for e, c in self._terms.items() if e != 0}
        )

    def eval_u(self, u_star) -> EpsPoly:
        """Substitute u = u_star, collecting an EpsPoly; exact in exact mode."""
        u_star = coerce_scalar(u_star, self._mode)
        if not u_star:
            if any(e < 0 for e in self._terms):
                raise PoleError("evaluation at u = 0 with negative exponents present")
            return self._terms.get(0, EpsPoly.zero(self._mode))
        acc = EpsPoly.zero(self._mode)
        for exp, coeff in self._terms.items():
            acc = acc + coeff.scale(u_star**exp)
        return acc

    def specialize_eps(self, eps_value) -> "LaurentPoly":
        """Substitute a value for the eigenparameter, leaving a function of u."""
        out = {}
        for exp, coeff in self._terms.items():
            out[exp] = EpsPoly.constant(coeff.evaluate(eps_value), self._mode)
        return self._wrap(out)

    def eval_point(self, u_star, eps_value):
        """Scalar value at (u, eps)."""
        return self.eval_u(u_star).evaluate(eps_value)

    def to_mode(self, mode: str, dps: int | None = None) -> "LaurentPoly":
        if mode == self._mode:
            return self
        new = LaurentPoly.__new__(LaurentPoly)
        new._terms = {e: c.to_mode(mode, dps) for e, c in self._terms.items()}
        new._mode = mode
        return new

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._mode == other._mode and self._terms == other._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        items = ", ".join(f"u^{e}: {c!r}" for e, c in sorted(self._terms.items()))
        return f"LaurentPoly({{{items}}}, mode={self._mode!r})"


def poly_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact product of two Laurent polynomials (same scalar mode required)."""
    return a * b


def poly_diff_u(a: LaurentPoly) -> LaurentPoly:
    """Term-wise derivative with respect to u."""
    return a.derivative()


def poly_eval_u(a: LaurentPoly, u_star) -> EpsPoly:
    """Substitute u = u_star; raises PoleError for u_star = 0 with poles."""
    return a.eval_u(u_star)
