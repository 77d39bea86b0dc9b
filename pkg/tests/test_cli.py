import io
import json
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction

import pytest

from aimorse.cli import (
    CSV_HEADER,
    EXIT_COMPARE_FAILED,
    EXIT_OK,
    EXIT_PARTIAL,
    EXIT_USAGE,
    bundled_reference_path,
    format_fixed,
    format_sci,
    main,
)


def run_cli(args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(args)
    return code, out.getvalue(), err.getvalue()


SOLVE_5 = [
    "solve", "--problem", "morse", "--delta", "34997/1000",
    "--levels", "5", "--mode", "exact", "--output", "csv",
]


class TestFormatting:
    def test_fixed_point_19_digits(self):
        assert format_fixed(Fraction("-34.4987858673600556")) == "-34.49878586736005560"
        assert format_fixed(Fraction(1, 3), 5) == "0.33333"
        assert format_fixed(Fraction(0)) == "0"
        assert format_fixed(Fraction(12345), 3) == "12300"

    def test_round_half_even(self):
        assert format_fixed(Fraction(25, 1000), 1) == "0.02"
        assert format_fixed(Fraction(35, 1000), 1) == "0.04"

    def test_rounding_overflow_carries(self):
        assert format_fixed(Fraction(999999, 1000), 3) == "1000"

    def test_scientific(self):
        assert format_sci(Fraction(1, 3), 5) == "3.3333e-01"
        assert format_sci(Fraction(-125), 3) == "-1.25e+02"
        assert format_sci(0) == "0"


class TestSolve:
    def test_csv_shape_and_values(self):
        code, out, _ = run_cli(SOLVE_5)
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 6
        first = lines[1].split(",")
        assert first[0] == "0"
        assert first[1] == "138.4880000000000000"
        assert first[5] == "0"  # exact pipeline: zero difference column

    def test_json_round_trip(self):
        code, out, _ = run_cli(SOLVE_5[:-1] + ["json"])
        assert code == EXIT_OK
        objs = json.loads(out)
        assert len(objs) == 5
        assert objs[0]["epsilon_fraction"] == "17311/125"
        assert list(objs[0])[:7] == CSV_HEADER.split(",")
        # re-render from parsed content must reproduce the document
        assert json.dumps(objs, indent=2) + "\n" == out

    def test_csv_round_trip(self):
        code, out, _ = run_cli(SOLVE_5)
        lines = out.strip().splitlines()
        rebuilt = "\n".join(lines) + "\n"
        assert rebuilt == out

    def test_deterministic_output(self):
        _, first, _ = run_cli(SOLVE_5)
        _, second, _ = run_cli(SOLVE_5)
        assert first == second

    def test_oscillator(self):
        code, out, _ = run_cli(
            ["solve", "--problem", "oscillator", "--levels", "3", "--output", "csv"]
        )
        assert code == EXIT_OK
        values = [line.split(",")[1] for line in out.strip().splitlines()[1:]]
        assert values == [
            "1.000000000000000000",
            "3.000000000000000000",
            "5.000000000000000000",
        ]

    def test_molecule_pipeline_emits_wavenumbers(self):
        code, out, _ = run_cli(
            [
                "solve", "--De", "8940", "--beta", "0.616", "--xe", "3.10821",
                "--mu", "3.5080", "--levels", "2", "--output", "csv",
            ]
        )
        assert code == EXIT_OK
        e_cm1 = out.strip().splitlines()[1].split(",")[3]
        assert e_cm1 != ""
        assert abs(float(e_cm1) + 8812.7) < 5.0  # constants-level tolerance

    def test_both_delta_and_molecule_rejected(self):
        code, _, err = run_cli(
            SOLVE_5 + ["--De", "8940", "--beta", "0.6", "--xe", "3.1", "--mu", "3.5"]
        )
        assert code == EXIT_USAGE
        assert "either delta or a molecule" in err

    def test_neither_rejected(self):
        code, _, err = run_cli(["solve", "--problem", "morse", "--levels", "2"])
        assert code == EXIT_USAGE

    def test_levels_beyond_bound_count_rejected(self):
        code, _, err = run_cli(["solve", "--delta", "1", "--levels", "5"])
        assert code == EXIT_USAGE
        assert "bound-state count" in err

    def test_partial_convergence_exit_code(self):
        code, out, _ = run_cli(
            [
                "solve", "--delta", "34997/1000", "--levels", "25",
                "--kmax", "40", "--output", "csv",
            ]
        )
        assert code == EXIT_PARTIAL
        rows = out.strip().splitlines()[1:]
        assert 0 < len(rows) < 25

    def test_unknown_flag_usage_error(self):
        code, _, _ = run_cli(["solve", "--no-such-flag", "1"])
        assert code == EXIT_USAGE

    def test_out_file(self, tmp_path):
        target = tmp_path / "report.csv"
        code, out, _ = run_cli(SOLVE_5 + ["--out", str(target)])
        assert code == EXIT_OK
        assert out == ""
        assert target.read_text().startswith(CSV_HEADER)

    def test_workers_flag_matches_serial(self):
        _, serial, _ = run_cli(SOLVE_5)
        _, parallel, _ = run_cli(SOLVE_5 + ["--workers", "4"])
        assert serial == parallel


class TestConfigFile:
    def test_file_plus_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# comment line\n"
            "problem = morse\n"
            'delta = "34997/1000"\n'
            "levels = 4\n"
            "mode = exact\n"
            "output = csv\n"
        )
        code, out, _ = run_cli(["solve", "--config", str(cfg), "--levels", "2"])
        assert code == EXIT_OK
        assert len(out.strip().splitlines()) == 3  # header + 2 rows

    def test_unknown_key_named_with_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("problem = morse\nwibble = 3\n")
        code, _, err = run_cli(["solve", "--config", str(cfg)])
        assert code == EXIT_USAGE
        assert ":2:" in err


class TestCompare:
    def test_bundled_aim_column_passes_at_1e15(self):
        code, out, _ = run_cli(
            [
                "compare", "--delta", "34997/1000", "--levels", "25",
                "--mode", "exact", "--tol", "1e-15",
            ]
        )
        assert code == EXIT_OK
        assert out.strip().splitlines()[-1].endswith("PASS")

    def test_morse_column_fails_at_1e15(self):
        code, out, _ = run_cli(
            [
                "compare", "--delta", "34997/1000", "--levels", "25",
                "--mode", "exact", "--tol", "1e-15", "--column", "eps_morse",
            ]
        )
        assert code == EXIT_COMPARE_FAILED
        summary = out.strip().splitlines()[-1]
        assert "FAIL" in summary
        # the two columns differ in the 7th decimal: max diff around 2e-6
        max_abs = float(summary.split("max_abs_diff = ")[1].split(";")[0])
        assert 5e-7 < max_abs < 5e-6

    def test_missing_row_is_parse_error(self, tmp_path):
        ref = tmp_path / "ref.csv"
        ref.write_text("n,eps_aim\n0,-34.4987858673600556\n")
        code, _, err = run_cli(
            [
                "compare", "--delta", "34997/1000", "--levels", "2",
                "--reference", str(ref), "--column", "eps_aim",
            ]
        )
        assert code == EXIT_USAGE
        assert "no row for level" in err

    def test_malformed_row_names_line_number(self, tmp_path):
        ref = tmp_path / "ref.csv"
        ref.write_text("n,eps_aim\n0,-34.49878\n1,not-a-number\n")
        code, _, err = run_cli(
            [
                "compare", "--delta", "34997/1000", "--levels", "2",
                "--reference", str(ref),
            ]
        )
        assert code == EXIT_USAGE
        assert ":3:" in err

    def test_field_count_mismatch_names_line_number(self, tmp_path):
        ref = tmp_path / "ref.csv"
        ref.write_text("n,eps_aim\n0,-34.49878,extra\n")
        code, _, err = run_cli(
            ["compare", "--delta", "34997/1000", "--levels", "1", "--reference", str(ref)]
        )
        assert code == EXIT_USAGE
        assert ":2:" in err

    def test_missing_column_rejected(self):
        code, _, err = run_cli(
            [
                "compare", "--delta", "34997/1000", "--levels", "1",
                "--column", "no_such",
            ]
        )
        assert code == EXIT_USAGE
        assert "no_such" in err


class TestWavefunctionCommand:
    def test_export_format(self):
        code, out, _ = run_cli(
            [
                "wavefunction", "--De", "8940", "--beta", "0.616",
                "--xe", "3.10821", "--mu", "3.5080",
                "--level", "1", "--points", "11",
            ]
        )
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert len(lines) == 11
        for line in lines:
            x_text, psi_text = line.split(" ")
            float(x_text), float(psi_text)  # both parse as numbers

    def test_level_validation(self):
        code, _, err = run_cli(
            ["wavefunction", "--delta", "1", "--level", "7", "--points", "5"]
        )
        assert code == EXIT_USAGE
        assert "out of range" in err


def test_bundled_reference_is_complete():
    with open(bundled_reference_path(), encoding="utf-8") as fh:
        lines = fh.read().strip().splitlines()
    assert lines[0] == "n,eps_morse,eps_leykoo,eps_aim"
    assert len(lines) == 26
    assert lines[1].startswith("0,") and lines[25].startswith("24,")
