import math
from fractions import Fraction

import pytest

import aimorse as am
from aimorse.polynomials import EpsPoly, LaurentPoly

from conftest import TABLE_DELTA


class TestParameters:
    def test_positivity_enforced(self):
        with pytest.raises(ValueError):
            am.MorseParameters(-1.0, 0.6, 3.0, 3.5)
        with pytest.raises(ValueError):
            am.MorseParameters(8940.0, 0.6, 3.0, 0.0)

    def test_shallow_bond_warns_only(self):
        # beta * x_e below ln 2 is flagged, not rejected
        with pytest.warns(UserWarning):
            p = am.MorseParameters(100.0, 0.1, 1.0, 1.0)
        assert p.de_cm1 == 100.0

    def test_delta_floor(self):
        with pytest.raises(ValueError):
            am.ReducedMorse(delta=Fraction(3, 8))
        am.ReducedMorse(delta=Fraction(2, 5))  # just above: fine


class TestReduceUnits:
    def test_li2_delta(self, li2_params):
        r = am.reduce_units(li2_params)
        assert abs(r.delta - 34.997) < 0.1
        assert abs(r.hbar_omega0_cm1 - 8940.0 / r.delta) < 1e-9

    def test_delta_scales_as_sqrt_de(self, li2_params):
        r1 = am.reduce_units(li2_params)
        r4 = am.reduce_units(
            am.MorseParameters(
                4 * li2_params.de_cm1,
                li2_params.beta_per_angstrom,
                li2_params.xe_angstrom,
                li2_params.mu_amu,
            )
        )
        assert abs(r4.delta - 2 * r1.delta) < 1e-9

    def test_delta_scales_as_sqrt_mu(self, li2_params):
        r1 = am.reduce_units(li2_params)
        r4 = am.reduce_units(
            am.MorseParameters(
                li2_params.de_cm1,
                li2_params.beta_per_angstrom,
                li2_params.xe_angstrom,
                4 * li2_params.mu_amu,
            )
        )
        assert abs(r4.delta - 2 * r1.delta) < 1e-9


class TestBuildProblem:
    def test_unit_delta_coefficients(self):
        p = am.build_aim_problem(am.ReducedMorse(delta=Fraction(1)), am.EXACT)
        assert p.lambda0 == LaurentPoly(
            {1: EpsPoly.constant(8, am.EXACT), -1: EpsPoly([-2, -2], am.EXACT)},
            am.EXACT,
        )
        assert p.s0 == LaurentPoly({0: EpsPoly([-20, 8], am.EXACT)}, am.EXACT)

    def test_table_delta_structure(self, exact_problem):
        # coefficient at u^+1 is the constant 8*Delta; s0 is constant in u
        lam_plus = exact_problem.lambda0.coefficient(1)
        assert lam_plus == EpsPoly.constant(8 * TABLE_DELTA, am.EXACT)
        assert exact_problem.s0.min_exp == exact_problem.s0.max_exp == 0
        assert exact_problem.u_star == 1


class TestEnergyMaps:
    def test_ground_state_energy_matches_reference_to_print_accuracy(
        self, reference_table
    ):
        energy = am.epsilon_to_energy(Fraction("138.488"), TABLE_DELTA)
        printed = reference_table[0][2]
        assert abs(energy - printed) / abs(printed) < Fraction(2, 10**16)

    def test_zero_at_minus_half(self):
        assert am.epsilon_to_energy(Fraction(-1, 2), TABLE_DELTA) == 0
        assert am.epsilon_to_energy(Fraction(-1, 2), Fraction(7)) == 0

    def test_level_24_matches_reference_to_print_accuracy(self, reference_table):
        eps24 = am.closed_form_epsilon(TABLE_DELTA, 24)
        energy = am.epsilon_to_energy(eps24, TABLE_DELTA)
        printed = reference_table[24][2]
        assert abs(energy - printed) / abs(printed) < Fraction(2, 10**16)

    def test_closed_form_examples(self, reference_table):
        for n in (0, 12):
            value = am.closed_form_spectrum(TABLE_DELTA, n)
            printed = reference_table[n][2]
            assert abs(value - printed) / abs(printed) < Fraction(2, 10**16)

    def test_closed_form_zero_crossing(self):
        # 2(2n+1) = 8*Delta zeroes the formula; that n is the dissociation
        # threshold, one past the last bound level, so the guarded operation
        # rejects it and the zero is checked on the raw expression
        delta = Fraction(9, 4)  # 8*Delta = 18 -> n = 4
        n = 4
        raw = -((-2 * (2 * n + 1) + 8 * delta) ** 2) / (64 * delta)
        assert raw == 0
        assert am.bound_state_count(delta) == 4
        with pytest.raises(ValueError):
            am.closed_form_spectrum(delta, n)
        assert am.closed_form_spectrum(delta, n - 1) < 0

    def test_closed_form_domain_error(self):
        with pytest.raises(ValueError):
            am.closed_form_spectrum(Fraction(1), 2)
        with pytest.raises(ValueError):
            am.closed_form_spectrum(TABLE_DELTA, 70)

    def test_spectrum_identity_symbolically_in_delta(self):
        # -(eps_n + 1/2)^2/(16 D) with eps_n = (8D - 4n - 3)/2 equals
        # -(-2(2n+1) + 8D)^2/(64 D) as rational functions of D: compare
        # numerator polynomials after clearing the common denominator
        d = EpsPoly.eps(am.EXACT)  # reuse as the variable Delta
        for n in range(6):
            c = EpsPoly.constant
            eps_plus_half = 4 * d - c(2 * n + 1, am.EXACT)  # = eps_n + 1/2
            lhs = eps_plus_half * eps_plus_half * c(4, am.EXACT)
            arg = 8 * d - c(2 * (2 * n + 1), am.EXACT)
            rhs = arg * arg
            assert lhs == rhs


class TestBoundStateCount:
    def test_table_delta(self):
        assert am.bound_state_count(TABLE_DELTA) == 70

    def test_unit_delta(self):
        assert am.bound_state_count(Fraction(1)) == 2

    def test_floor_rejected(self):
        with pytest.raises(ValueError):
            am.bound_state_count(Fraction(3, 8))

    def test_threshold_state_excluded(self):
        # 2*Delta - 1/2 integral: the threshold state is not normalizable
        delta = Fraction(5, 4)  # 2D - 1/2 = 2 exactly -> n in {0, 1}
        assert am.bound_state_count(delta) == 2


class TestPotential:
    def test_minimum_value(self, li2_params):
        assert am.potential_eval(li2_params.xe_angstrom, li2_params) == pytest.approx(
            -li2_params.de_cm1
        )

    def test_minimum_is_a_minimum(self, li2_params):
        v0 = am.potential_eval(li2_params.xe_angstrom, li2_params)
        for h in (1e-3, 1e-2, 0.1):
            assert am.potential_eval(li2_params.xe_angstrom + h, li2_params) > v0
            assert am.potential_eval(li2_params.xe_angstrom - h, li2_params) > v0

    def test_far_tail_vanishes(self, li2_params):
        assert abs(am.potential_eval(60.0, li2_params)) < 1e-12 * li2_params.de_cm1

    def test_origin_value(self, li2_params):
        b, xe, de = (
            li2_params.beta_per_angstrom,
            li2_params.xe_angstrom,
            li2_params.de_cm1,
        )
        expected = de * (math.exp(2 * b * xe) - 2 * math.exp(b * xe))
        assert am.potential_eval(0.0, li2_params) == pytest.approx(expected)
        assert expected > 0  # beta * x_e > ln 2 for Li2


class TestWavenumbers:
    def test_ground_state_cm1(self):
        # exact: eps0 * (8940 / Delta)
        reduced = am.ReducedMorse(delta=TABLE_DELTA, hbar_omega0_cm1=8940.0 / 34.997)
        eps0 = am.epsilon_to_energy(Fraction("138.488"), TABLE_DELTA)
        value = am.energy_to_wavenumbers(eps0, reduced)
        exact = eps0 * Fraction(8940) / TABLE_DELTA
        assert value == pytest.approx(float(exact), abs=1e-6)
        assert value == pytest.approx(-8812.731, abs=1e-2)

    def test_zero_maps_to_zero(self):
        reduced = am.ReducedMorse(delta=TABLE_DELTA, hbar_omega0_cm1=255.45)
        assert am.energy_to_wavenumbers(0, reduced) == 0.0

    def test_minus_delta_maps_to_minus_de(self, li2_params):
        reduced = am.reduce_units(li2_params)
        value = am.energy_to_wavenumbers(-reduced.delta, reduced)
        assert value == pytest.approx(-li2_params.de_cm1, rel=1e-12)

    def test_units_unavailable(self):
        reduced = am.ReducedMorse(delta=TABLE_DELTA)
        with pytest.raises(am.UnitsUnavailableError):
            am.energy_to_wavenumbers(Fraction(-1), reduced)


class TestSpectrumShape:
    def test_second_difference_constant(self):
        energies = [am.closed_form_spectrum(TABLE_DELTA, n) for n in range(26)]
        second = [
            energies[n + 2] - 2 * energies[n + 1] + energies[n] for n in range(24)
        ]
        assert all(s == second[0] for s in second)
        assert second[0] == energies[2] - 2 * energies[1] + energies[0]
        assert second[0] == -Fraction(1, 2) / TABLE_DELTA  # -1/(2 Delta) exactly

    def test_harmonic_limit_of_ground_state(self):
        # depth-measured ground level approaches hbar*omega0/2
        for delta in (Fraction(10), Fraction(100), Fraction(2000)):
            gap = am.closed_form_spectrum(delta, 0) + delta - Fraction(1, 2)
            assert abs(gap) < Fraction(1, 2 * delta)
            assert gap == -Fraction(1, 16 * delta)  # the exact correction


def test_closed_form_equals_aim_pipeline_exactly(exact_solve_25):
    results, _ = exact_solve_25
    for r in results:
        via_root = am.epsilon_to_energy(r.epsilon, TABLE_DELTA)
        direct = am.closed_form_spectrum(TABLE_DELTA, r.n)
        assert via_root == direct  # zero rational difference
