import time
from fractions import Fraction

import pytest

import aimorse as am

TABLE_DELTA = Fraction(34997, 1000)


@pytest.fixture(scope="session")
def li2_params():
    return am.MorseParameters(
        de_cm1=8940.0,
        beta_per_angstrom=0.616,
        xe_angstrom=3.10821,
        mu_amu=3.5080,
    )


@pytest.fixture(scope="session")
def exact_problem():
    return am.build_aim_problem(am.ReducedMorse(delta=TABLE_DELTA), am.EXACT)


@pytest.fixture(scope="session")
def exact_solve_25(exact_problem):
    """(results, elapsed seconds) for the 25-level exact solve."""
    t0 = time.perf_counter()
    results = am.eigenvalues_symbolic(exact_problem, n_levels=25, k_max=52)
    return results, time.perf_counter() - t0


@pytest.fixture(scope="session")
def numeric_problem():
    return am.build_aim_problem(
        am.ReducedMorse(delta=TABLE_DELTA), am.NUMERIC, precision=64
    )


@pytest.fixture(scope="session")
def numeric_solve_25(numeric_problem):
    return am.eigenvalues_symbolic(
        numeric_problem, n_levels=25, k_max=52, tol=1e-30, precision=64
    )


@pytest.fixture(scope="session")
def reference_table():
    """Bundled reference eigenvalues: {n: (eps_morse, eps_leykoo, eps_aim)}."""
    from aimorse.cli import bundled_reference_path

    rows = {}
    with open(bundled_reference_path(), encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        assert header == ["n", "eps_morse", "eps_leykoo", "eps_aim"]
        for line in fh:
            n, *values = line.strip().split(",")
            rows[int(n)] = tuple(Fraction(v) for v in values)
    return rows
