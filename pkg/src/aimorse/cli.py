"""Command-line front end: solve, compare, wavefunction.

Exit codes: 0 success, 2 partial convergence, 3 comparison failure,
64 usage / input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .engine import AimProblem, eigenvalues_symbolic
from .errors import AimorseError, ConvergenceError
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
    reduce_units,
)
from .oracles import oscillator_problem
from .scalars import DEFAULT_PRECISION, EXACT, NUMERIC, to_rational
from .wavefunctions import assemble, series_solve, wavefunction_table

EXIT_OK = 0
EXIT_PARTIAL = 2
EXIT_COMPARE_FAILED = 3
EXIT_USAGE = 64

CSV_HEADER = "n,epsilon,eps_hw0,E_cm1,closed_form,abs_diff,k_converged"
SIGNIFICANT_DIGITS = 19


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic fixed-point formatting


def format_compact(value, sig: int = 6) -> str:
    """Scientific notation for diff columns; deterministic via float repr."""
    f = float(value)
    if f == 0:
        return "0"
    return f"{f:.{sig - 1}e}"


def format_sci(value, sig: int = 17) -> str:
    """Scientific notation with exact integer rounding (beyond float width)."""
    q = to_rational(value)
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    if q.numerator >= q.denominator:
        e = len(str(q.numerator // q.denominator)) - 1
    else:
        e = -1
        t = q * 10
        while t < 1:
            t *= 10
            e -= 1
    scaled = q * Fraction(10) ** (sig - 1 - e)
    digits_int, rem = divmod(scaled.numerator, scaled.denominator)
    rem2 = 2 * rem
    if rem2 > scaled.denominator or (rem2 == scaled.denominator and digits_int % 2):
        digits_int += 1
    digits = str(digits_int)
    if len(digits) > sig:
        e += 1
        digits = digits[:sig]
    return f"{sign}{digits[0]}.{digits[1:]}e{e:+03d}"


def format_fixed(value, sig: int = SIGNIFICANT_DIGITS) -> str:
    """Fixed-point decimal with ``sig`` significant digits, round half even.

    Exact integer arithmetic throughout, so output is deterministic and
    independent of any float formatting quirks.
    """
    q = to_rational(value)
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    if q.numerator >= q.denominator:
        e = len(str(q.numerator // q.denominator)) - 1
    else:
        e = -1
        t = q * 10
        while t < 1:
            t *= 10
            e -= 1
    scaled = q * Fraction(10) ** (sig - 1 - e)
    digits_int, rem = divmod(scaled.numerator, scaled.denominator)
    rem2 = 2 * rem
    if rem2 > scaled.denominator or (rem2 == scaled.denominator and digits_int % 2):
        digits_int += 1
    digits = str(digits_int)
    if len(digits) > sig:
        e += 1
        digits = digits[:sig]
    if e >= sig - 1:
        s = digits + "0" * (e - sig + 1)
    elif e >= 0:
        s = digits[: e + 1] + "." + digits[e + 1 :]
    else:
        s = "0." + "0" * (-e - 1) + digits
    return sign + s


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    problem: str = "morse"
    delta: str | None = None
    de_cm1: float | None = None
    beta_per_angstrom: float | None = None
    xe_angstrom: float | None = None
    mu_amu: float | None = None
    levels: int = 25
    mode: str = EXACT
    precision: int = DEFAULT_PRECISION
    k_max: int | None = None
    u_star: str = "1"
    output: str = "pretty"
    reference_table: str | None = None
    reference_column: str = "eps_aim"
    tol: float = 1e-15
    out: str | None = None
    workers: int = 1

    def molecule_given(self) -> bool:
        fields = (self.de_cm1, self.beta_per_angstrom, self.xe_angstrom, self.mu_amu)
        if any(f is not None for f in fields) and not all(f is not None for f in fields):
            raise UsageError(
                "a molecule needs all four of De_cm1, beta_per_angstrom, "
                "xe_angstrom, mu_amu"
            )
        return all(f is not None for f in fields)


CONFIG_KEYS = {
    "problem": str,
    "delta": str,
    "De_cm1": float,
    "beta_per_angstrom": float,
    "xe_angstrom": float,
    "mu_amu": float,
    "levels": int,
    "mode": str,
    "precision": int,
    "kmax": int,
    "u_star": str,
    "output": str,
    "reference": str,
    "column": str,
    "tol": float,
    "out": str,
    "workers": int,
}

_KEY_TO_ATTR = {
    "De_cm1": "de_cm1",
    "kmax": "k_max",
    "reference": "reference_table",
    "column": "reference_column",
}


def parse_config_file(path: str) -> dict:
    """Flat ``key = value`` document; values may be bare or quoted."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, _, text = line.partition("=")
            key, text = key.strip(), text.strip()
            if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
                text = text[1:-1]
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = CONFIG_KEYS[key](text)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    file_values = parse_config_file(args.config) if getattr(args, "config", None) else {}
    for key, value in file_values.items():
        setattr(cfg, _KEY_TO_ATTR.get(key, key), value)
    flag_map = {
        "problem": "problem",
        "delta": "delta",
        "De_cm1": "de_cm1",
        "beta_per_angstrom": "beta_per_angstrom",
        "xe_angstrom": "xe_angstrom",
        "mu_amu": "mu_amu",
        "levels": "levels",
        "mode": "mode",
        "precision": "precision",
        "kmax": "k_max",
        "u_star": "u_star",
        "output": "output",
        "reference": "reference_table",
        "column": "reference_column",
        "tol": "tol",
        "out": "out",
        "workers": "workers",
    }
    for flag, attr in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    return cfg


# ---------------------------------------------------------------------------
# solving


@dataclass
class LevelRecord:
    n: int
    epsilon: str
    eps_hw0: str
    e_cm1: str
    closed_form: str
    abs_diff: str
    k_converged: int
    epsilon_fraction: str | None = None
    eps_hw0_fraction: str | None = None


@dataclass
class SolveReport:
    records: list
    partial: bool
    exact: bool


def _parse_delta_text(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse delta {text!r}: {exc}") from exc


def _morse_context(cfg: RunConfig):
    """(ReducedMorse, exact delta as Fraction) from config."""
    molecule = cfg.molecule_given()
    if cfg.delta is not None and molecule:
        raise UsageError("give either delta or a molecule, not both")
    if cfg.delta is None and not molecule:
        raise UsageError("a Morse run needs delta or a molecule")
    if molecule:
        params = MorseParameters(
            de_cm1=cfg.de_cm1,
            beta_per_angstrom=cfg.beta_per_angstrom,
            xe_angstrom=cfg.xe_angstrom,
            mu_amu=cfg.mu_amu,
        )
        reduced = reduce_units(params)
        return reduced, to_rational(reduced.delta)
    delta = _parse_delta_text(cfg.delta)
    return ReducedMorse(delta=delta), delta


def run_solve(cfg: RunConfig) -> tuple[SolveReport, int]:
    if cfg.problem not in ("morse", "oscillator"):
        raise UsageError(f"unknown problem {cfg.problem!r}")
    if cfg.mode not in (EXACT, NUMERIC):
        raise UsageError(f"unknown mode {cfg.mode!r}")
    if cfg.levels < 1:
        raise UsageError("levels must be at least 1")
    if cfg.output not in ("csv", "json", "pretty"):
        raise UsageError(f"unknown output format {cfg.output!r}")
    u_star = _parse_delta_text(cfg.u_star)

    reduced = None
    if cfg.problem == "morse":
        reduced, delta = _morse_context(cfg)
        if cfg.levels > bound_state_count(delta):
            raise UsageError(
                f"levels = {cfg.levels} exceeds the bound-state count "
                f"{bound_state_count(delta)} at delta = {delta}"
            )
        problem = build_aim_problem(
            ReducedMorse(delta=delta, hbar_omega0_cm1=reduced.hbar_omega0_cm1),
            cfg.mode,
            u_star=u_star,
        )
        window = eigenparameter_window(delta)
    else:
        delta = None
        problem = oscillator_problem(cfg.mode)
        if u_star != 1:
            problem = AimProblem(
                lambda0=problem.lambda0,
                s0=problem.s0,
                u_star=u_star,
                mode=problem.mode,
                label=problem.label,
                level_order=problem.level_order,
            )
        window = None

    k_max = cfg.k_max if cfg.k_max is not None else max(40, 2 * cfg.levels + 4)
    partial = False
    try:
        results = eigenvalues_symbolic(
            problem,
            n_levels=cfg.levels,
            k_max=k_max,
            search_window=window,
            precision=cfg.precision,
        )
    except ConvergenceError as exc:
        results = exc.partial
        partial = True

    exact = cfg.mode == EXACT

    def make_record(res):
        eps = res.epsilon
        if cfg.problem == "morse":
            energy = epsilon_to_energy(eps, delta if exact else float(delta))
            closed = closed_form_spectrum(delta, res.n)
        else:
            energy = to_rational(eps) if exact else eps
            closed = Fraction(2 * res.n + 1)
        diff = abs(to_rational(energy) - to_rational(closed))
        e_cm1 = ""
        if reduced is not None and reduced.hbar_omega0_cm1 is not None:
            e_cm1 = format_fixed(energy_to_wavenumbers(energy, reduced), 12)
        return LevelRecord(
            n=res.n,
            epsilon=format_fixed(eps),
            eps_hw0=format_fixed(energy),
            e_cm1=e_cm1,
            closed_form=format_fixed(closed),
            abs_diff=format_compact(diff),
            k_converged=res.k_converged,
            epsilon_fraction=str(to_rational(eps)) if res.is_exact else None,
            eps_hw0_fraction=str(to_rational(energy)) if exact and res.is_exact else None,
        )

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(make_record, results))
    else:
        records = [make_record(r) for r in results]
    report = SolveReport(records=records, partial=partial, exact=exact)
    return report, (EXIT_PARTIAL if partial else EXIT_OK)


def render_report(report: SolveReport, output: str) -> str:
    if output == "csv":
        lines = [CSV_HEADER]
        for r in report.records:
            lines.append(
                f"{r.n},{r.epsilon},{r.eps_hw0},{r.e_cm1},{r.closed_form},"
                f"{r.abs_diff},{r.k_converged}"
            )
        return "\n".join(lines) + "\n"
    if output == "json":
        objs = []
        for r in report.records:
            obj = {
                "n": r.n,
                "epsilon": r.epsilon,
                "eps_hw0": r.eps_hw0,
                "E_cm1": r.e_cm1,
                "closed_form": r.closed_form,
                "abs_diff": r.abs_diff,
                "k_converged": r.k_converged,
            }
            if r.epsilon_fraction is not None:
                obj["epsilon_fraction"] = r.epsilon_fraction
            if r.eps_hw0_fraction is not None:
                obj["eps_hw0_fraction"] = r.eps_hw0_fraction
            objs.append(obj)
        return json.dumps(objs, indent=2) + "\n"
    # pretty
    widths = (4, 24, 24, 16, 24, 12, 6)
    header = ("n", "epsilon", "eps_hw0", "E_cm1", "closed_form", "abs_diff", "k")
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for r in report.records:
        row = (
            str(r.n),
            r.epsilon,
            r.eps_hw0,
            r.e_cm1 or "-",
            r.closed_form,
            r.abs_diff,
            str(r.k_converged),
        )
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    if report.partial:
        lines.append("(partial: convergence incomplete within k_max)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# comparison


def bundled_reference_path() -> str:
    return str(resources.files("aimorse").joinpath("data/li2_reference.csv"))


def parse_reference_table(path: str, column: str) -> dict[int, Fraction]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read reference table: {exc}") from exc
    if not lines:
        raise UsageError(f"{path}:1: empty reference table")
    header = [h.strip() for h in lines[0].split(",")]
    if "n" not in header:
        raise UsageError(f"{path}:1: header must contain an 'n' column")
    if column not in header:
        raise UsageError(f"{path}:1: no column {column!r} (have {', '.join(header)})")
    n_idx, c_idx = header.index("n"), header.index(column)
    table = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != len(header):
            raise UsageError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(parts)}"
            )
        try:
            n = int(parts[n_idx])
            value = Fraction(parts[c_idx])
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
        table[n] = value
    return table


def run_compare(cfg: RunConfig) -> tuple[str, int]:
    path = cfg.reference_table or bundled_reference_path()
    reference = parse_reference_table(path, cfg.reference_column)
    report, _ = run_solve(cfg)
    tol = Fraction(str(cfg.tol))
    lines = ["n,eps_hw0,reference,abs_diff,rel_diff"]
    max_abs = Fraction(0)
    max_rel = Fraction(0)
    for record in report.records:
        if record.n not in reference:
            raise UsageError(
                f"{path}: reference table has no row for level n = {record.n}"
            )
        ours = Fraction(record.eps_hw0)
        ref = reference[record.n]
        abs_diff = abs(ours - ref)
        rel_diff = abs_diff / abs(ref) if ref else abs_diff
        max_abs = max(max_abs, abs_diff)
        max_rel = max(max_rel, rel_diff)
        lines.append(
            f"{record.n},{record.eps_hw0},{format_fixed(ref)},"
            f"{format_compact(abs_diff)},{format_compact(rel_diff)}"
        )
    passed = max_rel <= tol
    lines.append(
        f"# max_abs_diff = {format_compact(max_abs)}; "
        f"max_rel_diff = {format_compact(max_rel)}; "
        f"tol = {cfg.tol}; {'PASS' if passed else 'FAIL'}"
    )
    return "\n".join(lines) + "\n", (EXIT_OK if passed else EXIT_COMPARE_FAILED)


# ---------------------------------------------------------------------------
# wavefunction export


def run_wavefunction(cfg: RunConfig, level: int, x_min, x_max, points: int) -> str:
    if cfg.problem != "morse":
        raise UsageError("wavefunction export is defined for the morse problem")
    molecule = cfg.molecule_given()
    if molecule:
        params = MorseParameters(
            de_cm1=cfg.de_cm1,
            beta_per_angstrom=cfg.beta_per_angstrom,
            xe_angstrom=cfg.xe_angstrom,
            mu_amu=cfg.mu_amu,
        )
        delta = to_rational(reduce_units(params).delta)
    elif cfg.delta is not None:
        # bare-delta run: dimensionless coordinate with beta = 1, minimum at x = 1
        delta = _parse_delta_text(cfg.delta)
        params = MorseParameters(
            de_cm1=float(delta), beta_per_angstrom=1.0, xe_angstrom=1.0, mu_amu=1.0
        )
    else:
        raise UsageError("wavefunction export needs delta or a molecule")
    if level < 0 or level >= bound_state_count(delta):
        raise UsageError(
            f"level {level} out of range (bound states: {bound_state_count(delta)})"
        )
    epsilon = closed_form_epsilon(delta, level)
    series = series_solve(epsilon, delta, level)
    wave = assemble(series, params)
    if x_min is None:
        x_min = params.xe_angstrom - 1.5 / params.beta_per_angstrom
    if x_max is None:
        x_max = params.xe_angstrom + 4.0 / params.beta_per_angstrom
    if points < 2:
        raise UsageError("need at least 2 grid points")
    xs = [x_min + (x_max - x_min) * i / (points - 1) for i in range(points)]
    pairs = wavefunction_table(wave, xs)
    lines = [f"{format_fixed(x, 12)} {format_sci(psi, 17)}" for x, psi in pairs]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_common(parser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--problem", choices=("morse", "oscillator"))
    parser.add_argument("--delta", help="dimensionless well depth, e.g. 34997/1000")
    parser.add_argument("--De", dest="De_cm1", type=float, help="dissociation energy, cm^-1")
    parser.add_argument("--beta", dest="beta_per_angstrom", type=float,
                        help="range parameter, 1/Angstrom")
    parser.add_argument("--xe", dest="xe_angstrom", type=float,
                        help="equilibrium separation, Angstrom")
    parser.add_argument("--mu", dest="mu_amu", type=float, help="reduced mass, u")
    parser.add_argument("--levels", type=int)
    parser.add_argument("--mode", choices=(EXACT, NUMERIC))
    parser.add_argument("--precision", type=int, help="decimal digits (numeric mode)")
    parser.add_argument("--kmax", type=int)
    parser.add_argument("--u-star", dest="u_star", help="evaluation point, default 1")
    parser.add_argument("--output", choices=("csv", "json", "pretty"))
    parser.add_argument("--tol", type=float)
    parser.add_argument("--out", help="write output to this file instead of stdout")
    parser.add_argument("--workers", type=int)


def make_parser() -> _Parser:
    parser = _Parser(prog="aimorse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute the eigenvalue table")
    _add_common(p_solve)

    p_cmp = sub.add_parser("compare", help="compare against a reference table")
    _add_common(p_cmp)
    p_cmp.add_argument("--reference", help="reference CSV (default: bundled table)")
    p_cmp.add_argument("--column", help="reference column name (default eps_aim)")

    p_wf = sub.add_parser("wavefunction", help="export (x, Psi_n(x)) pairs")
    _add_common(p_wf)
    p_wf.add_argument("--level", type=int, default=0)
    p_wf.add_argument("--x-min", dest="x_min", type=float)
    p_wf.add_argument("--x-max", dest="x_max", type=float)
    p_wf.add_argument("--points", type=int, default=200)
    return parser


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        cfg = build_config(args)
        if args.command == "solve":
            report, code = run_solve(cfg)
            _emit(render_report(report, cfg.output), cfg.out)
            return code
        if args.command == "compare":
            text, code = run_compare(cfg)
            _emit(text, cfg.out)
            return code
        if args.command == "wavefunction":
            text = run_wavefunction(cfg, args.level, args.x_min, args.x_max, args.points)
            _emit(text, cfg.out)
            return EXIT_OK
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AimorseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


if __name__ == "__main__":
    sys.exit(main())
