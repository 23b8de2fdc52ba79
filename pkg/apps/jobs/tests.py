import csv
import io
import json
import tempfile
from contextlib import redirect_stderr
from fractions import Fraction
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from apps.core.exceptions import SpecificationError
from apps.jobs.management.commands.invariants import Command
from apps.jobs.pipelines import parse_job


FIXTURES = Path(__file__).resolve().parent / "fixtures"


def fixture(name):
    return str(FIXTURES / f"{name}.json")


class InvariantsCommandMixin:

    def invoke(self, subcommand, config, *extra):
        out = io.StringIO()
        call_command("invariants", subcommand, "--config", config, *extra, stdout=out)
        return out.getvalue()

    def invoke_json(self, subcommand, config, *extra):
        return json.loads(self.invoke(subcommand, config, "--format", "json", *extra))

    def write_job(self, payload):
        handle = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False)
        with handle:
            json.dump(payload, handle)
        self.addCleanup(Path(handle.name).unlink)
        return handle.name

    def assertExitCode(self, code, subcommand, config, *extra):
        with self.assertRaises(CommandError) as ctx:
            self.invoke(subcommand, config, *extra)
        self.assertEqual(ctx.exception.returncode, code)
        return str(ctx.exception)


class SwCommandTests(InvariantsCommandMixin, SimpleTestCase):

    def test_dolgachev_classes(self):
        document = self.invoke_json("sw", fixture("dolgachev_2_3"))
        self.assertEqual(document["command"], "sw")
        self.assertEqual(
            [row["coords"][0] for row in document["rows"]],
            ["-7/6", "-1/2", "-1/6", "1/6", "1/2", "7/6"],
        )
        self.assertTrue(all(row["sw"] == "1/1" and row["km"] == "1/1" for row in document["rows"]))

    def test_rows_carry_enumeration_labels(self):
        config = self.write_job({"surface": {"variant": "elliptic", "p_g": 1, "multiplicities": [3, 3]}})
        rows = self.invoke_json("sw", config)["rows"]
        self.assertEqual(len(rows), 9)
        self.assertEqual(sorted(tuple(row["label"]) for row in rows), [
            (0, a, b) for a in range(3) for b in range(3)
        ])
        self.assertEqual(len({row["class"] for row in rows}), 5)

    def test_general_type_signs(self):
        document = self.invoke_json("sw", fixture("general_type_minimal"), "--check")
        self.assertEqual({row["class"]: row["sw"] for row in document["rows"]}, {"-K_min": "1/1", "K_min": "-1/1"})
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))

    def test_table_output(self):
        output = self.invoke("sw", fixture("dolgachev_2_3"))
        self.assertTrue(output.startswith("# sw\n"))
        self.assertIn("-7/6F", output)
        self.assertIn("witten_factor", output)

    def test_csv_output(self):
        rows = list(csv.reader(io.StringIO(self.invoke("sw", fixture("dolgachev_2_3"), "--format", "csv"))))
        self.assertEqual(rows[0][:2], ["class", "coords"])
        self.assertEqual(len(rows), 7)

    def test_output_is_deterministic(self):
        first = self.invoke("sw", fixture("dolgachev_2_3"), "--format", "json")
        second = self.invoke("sw", fixture("dolgachev_2_3"), "--format", "json")
        self.assertEqual(first, second)


class SeriesCommandTests(InvariantsCommandMixin, SimpleTestCase):

    def test_k3_polarized_values(self):
        document = self.invoke_json("series", fixture("k3"), "--check")
        polarized = {row["monomial"]: row["polarized"] for row in document["rows"]}
        self.assertEqual(polarized["1"], "1/1")
        self.assertEqual(polarized["H^2"], "2/1")
        self.assertEqual(polarized["H^4"], "12/1")
        self.assertEqual(polarized["H^6"], "120/1")
        self.assertEqual(document["parity"], 0)
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))

    def test_exports_series(self):
        document = self.invoke_json("series", fixture("dolgachev_2_3"))
        exported = document["series"]
        self.assertEqual(exported["basis"], ["F", "H", "W"])
        self.assertEqual(len(exported["quotients"]), 2)
        self.assertEqual(len(exported["exponential_form"]["exp_terms"]), 6)

    def test_dolgachev_checks(self):
        document = self.invoke_json("series", fixture("dolgachev_2_3"), "--check")
        names = {check["name"]: check["result"] for check in document["checks"]}
        self.assertEqual(names["sinh ratio = exponential sum"], "PASS")
        self.assertEqual(names["structure theorem = closed form"], "PASS")


class EvaluateCommandTests(InvariantsCommandMixin, SimpleTestCase):

    def test_k3_degree_six(self):
        document = self.invoke_json("evaluate", fixture("k3"), "--check")
        self.assertEqual(document["rows"][0]["value"], "120/1")
        self.assertEqual(document["rows"][0]["d"], 6)
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))

    def test_decimal_places(self):
        document = self.invoke_json("evaluate", fixture("k3"), "--decimal", "2")
        self.assertEqual(document["rows"][0]["value_decimal"], "~120.00")

    def test_point_class(self):
        payload = json.loads(Path(fixture("k3")).read_text())
        payload["evaluate"] = {"arguments": [{"probe": "H", "multiplicity": 2}], "point_power": 2, "k": 3}
        document = self.invoke_json("evaluate", self.write_job(payload), "--check")
        self.assertEqual(document["rows"][0]["value"], "8/1")
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))

    def test_missing_request(self):
        message = self.assertExitCode(1, "evaluate", fixture("dolgachev_2_3"))
        self.assertIn("evaluate", message)

    def test_above_truncation(self):
        payload = json.loads(Path(fixture("k3")).read_text())
        payload["truncation"] = 4
        self.assertExitCode(2, "evaluate", self.write_job(payload))


class BoundsCommandTests(InvariantsCommandMixin, SimpleTestCase):

    def test_general_type(self):
        document = self.invoke_json("bounds", fixture("general_type_minimal"), "--check")
        row = document["rows"][0]
        self.assertEqual((row["order_n"], row["d_upper"], row["k_at_bound"]), (0, 2, 3))
        self.assertEqual(document["wall"], "good")
        self.assertEqual(document["wall_after_blowup"], "good")
        self.assertTrue(document["assumptions"])

    def test_k3_fails_closed_bound_check(self):
        message = self.assertExitCode(3, "bounds", fixture("k3"), "--check")
        self.assertIn("closed bound", message)

    def test_order_undetermined(self):
        payload = json.loads(Path(fixture("general_type_minimal")).read_text())
        payload.update(L=["0", "0"], truncation=0)
        self.assertExitCode(2, "bounds", self.write_job(payload))


class TauCommandTests(InvariantsCommandMixin, SimpleTestCase):

    def test_general_type(self):
        document = self.invoke_json("tau", fixture("general_type_minimal"), "--check")
        row = document["rows"][0]
        self.assertEqual((row["d"], row["e_divisors"], row["rank"]), (2, 0, 1))
        self.assertEqual(row["certificate_value"], "2/1")
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))

    def test_dolgachev(self):
        document = self.invoke_json("tau", fixture("dolgachev_2_3"), "--check")
        self.assertEqual(document["rows"][0]["rank"], 3)
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))

    def test_needs_k(self):
        self.assertExitCode(1, "tau", fixture("k3"))


class BlowupCommandTests(InvariantsCommandMixin, SimpleTestCase):

    def test_odd_general_type(self):
        document = self.invoke_json("blowup", fixture("general_type_minimal"), "--check")
        self.assertEqual(document["probes"], ["K_min", "E1", "H"])
        self.assertEqual(document["series"]["metadata"]["L"], ["1/1", "-1/1", "0/1", "0/1"])
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))

    def test_even_elliptic(self):
        payload = json.loads(Path(fixture("dolgachev_2_3")).read_text())
        payload.update(parity="even", truncation=4)
        document = self.invoke_json("blowup", self.write_job(payload), "--check")
        self.assertTrue(all(check["result"] == "PASS" for check in document["checks"]))


class UsageErrorTests(InvariantsCommandMixin, SimpleTestCase):

    def test_unknown_format(self):
        message = self.assertExitCode(1, "sw", fixture("k3"), "--format", "xml")
        self.assertIn("--format", message)

    def test_unknown_subcommand(self):
        self.assertExitCode(1, "nope", fixture("k3"))

    def test_command_line_usage_error_exits_with_one(self):
        parser = Command().create_parser("manage.py", "invariants")
        parser.called_from_command_line = True
        with redirect_stderr(io.StringIO()) as err, self.assertRaises(SystemExit) as ctx:
            parser.parse_args(["sw", "--config", fixture("k3"), "--decimal", "many"])
        self.assertEqual(ctx.exception.code, 1)
        self.assertIn("--decimal", err.getvalue())


class JobValidationTests(InvariantsCommandMixin, SimpleTestCase):

    def test_gcd_rule(self):
        message = self.assertExitCode(1, "sw", fixture("bad_gcd"))
        self.assertIn("gcd rule", message)
        self.assertIn("surface.multiplicities", message)

    def test_missing_file(self):
        self.assertExitCode(1, "sw", str(FIXTURES / "missing.json"))

    def test_invalid_json(self):
        handle = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False)
        with handle:
            handle.write("{not json")
        self.addCleanup(Path(handle.name).unlink)
        self.assertExitCode(1, "sw", handle.name)

    @override_settings(INVARIANTS_MAX_TRUNCATION=8)
    def test_truncation_limit(self):
        message = self.assertExitCode(1, "series", fixture("k3"))
        self.assertIn("truncation", message)

    def test_division_by_vanishing_quotient(self):
        payload = json.loads(Path(fixture("dolgachev_2_3")).read_text())
        payload["probes"] = [{"name": "F"}]
        self.assertExitCode(3, "series", self.write_job(payload))

    def test_parse_job_errors_name_fields(self):
        with self.assertRaises(SpecificationError) as ctx:
            parse_job({"surface": {"variant": "general_type", "p_g": 0}, "L": ["x"]})
        self.assertIn("surface.p_g", str(ctx.exception))

    def test_float_rationals_rejected(self):
        with self.assertRaises(SpecificationError) as ctx:
            parse_job({"surface": {"variant": "general_type", "p_g": 2, "K_min_sq": 1}, "w": "0.5"})
        self.assertIn("w", str(ctx.exception))

    def test_explicit_probe_coordinates(self):
        job = parse_job({
            "surface": {"variant": "general_type", "p_g": 2, "K_min_sq": 1},
            "probes": [{"name": "S", "coords": ["1", "1/2"]}],
        })
        name, cls = job.probes[0]
        self.assertEqual(name, "S")
        # (K_min + H/2)^2 = 1 + 1 + 1/4
        self.assertEqual(job.surface.self_int(cls), Fraction(9, 4))
