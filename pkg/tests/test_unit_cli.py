import csv
import io
import json
import pathlib
import tempfile
import unittest
from typing import Any

from utils import run_cli


class CliTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def path(self, name: str) -> pathlib.Path:
        return pathlib.Path(self.directory.name, name)

    def ground_only_config(self) -> str:
        path = self.path("ground.toml")
        path.write_text("[topology]\nmultilayer = false\n", encoding="utf-8")
        return str(path)

    def run_json(self, *argv: str) -> Any:
        status, out, err = run_cli(argv)
        self.assertEqual(status, 0, err)
        return json.loads(out)

    def run_csv(self, *argv: str) -> list[list[str]]:
        status, out, err = run_cli(argv)
        self.assertEqual(status, 0, err)
        self.assertTrue(out.endswith("\n") and "\r" not in out)
        return list(csv.reader(io.StringIO(out)))

    def assertFails(self, status: int, kind: str, *argv: str) -> str:
        actual, out, err = run_cli(argv)
        self.assertEqual(actual, status, err)
        self.assertEqual(out, "")
        self.assertTrue(err.startswith(f"splitric: error: {kind}: "), err)
        self.assertEqual(err.count("\n"), 1, err)
        return err


class TestScalarCommands(CliTestCase):
    def test_cost(self) -> None:
        data = self.run_json("cost", "--scenario", "s2")
        self.assertAlmostEqual(data["energy"]["total"], 2300.5)
        self.assertAlmostEqual(data["latency"]["total"], 1230.15)
        self.assertEqual(data["energy"]["units"], "J")

    def test_cost_with_override(self) -> None:
        data = self.run_json(
            "cost", "--scenario", "s2", "--set", "links.feeder.wait_time=0 s"
        )
        self.assertAlmostEqual(data["latency"]["total"], 30.15)

    def test_loop(self) -> None:
        data = self.run_json("loop", "--scenario", "s1")
        self.assertFalse(data["deadline_met"])
        data = self.run_json("loop", "--scenario", "s3")
        self.assertTrue(data["deadline_met"])

    def test_boundary(self) -> None:
        data = self.run_json("boundary", "--condition", "continuity")
        self.assertTrue(data["holds"])
        self.assertAlmostEqual(data["lhs"], 0.82)

    def test_classify(self) -> None:
        self.assertEqual(
            self.run_json("classify", "--objective", "latency")["winner"], "s3"
        )
        data = self.run_json(
            "classify", "--objective", "latency", "--config", self.ground_only_config()
        )
        self.assertEqual(data["winner"], "s2")
        self.assertTrue(data["partial"])
        wait = "links.feeder.wait_time=45 min"
        data = self.run_json("classify", "--objective", "latency", "--set", wait)
        self.assertEqual(data["winner"], "s3")

    def test_recommend(self) -> None:
        data = self.run_json("recommend", "--deadline", "1 min")
        self.assertEqual((data["region"], data["scenario"]), ("III", "s3"))
        data = self.run_json(
            "recommend",
            "--deadline",
            "1 h",
            "--workload-preset",
            "traffic-prediction",
        )
        self.assertEqual((data["region"], data["scenario"]), ("I", "s1"))

    def test_power(self) -> None:
        data = self.run_json("power", "--node", "leo", "--rate", "100 Hz")
        self.assertTrue(data["passes"])
        data = self.run_json("power", "--node", "leo", "--rate", "2000 Hz")
        self.assertFalse(data["passes"])


class TestCrossoverCommand(CliTestCase):
    def test_per_operation(self) -> None:
        data = self.run_json(
            "crossover",
            "--axis",
            "input-size",
            "--pair",
            "s1:s2",
            "--objective",
            "energy",
            "--per-op",
        )
        self.assertTrue(data["bracketed"])
        self.assertEqual(data["method"], "closed_form")
        self.assertAlmostEqual(data["value"] / 666666.6666666666, 1.0, places=9)
        self.assertEqual(data["search_range"], [8e4, 4e8])
        self.assertNotIn("oracle", data)

    def test_amortized_with_verification(self) -> None:
        data = self.run_json(
            "crossover",
            "--axis",
            "longevity",
            "--pair",
            "s1:s2",
            "--objective",
            "energy",
            "--amortized",
            "--verify",
        )
        self.assertEqual(data["method"], "bisection")
        self.assertAlmostEqual(data["value"], 300.5 / 1.18, delta=1e-6)
        self.assertTrue(data["oracle"]["passed"])

    def test_range_and_bisection(self) -> None:
        data = self.run_json(
            "crossover",
            "--axis",
            "links.feeder.wait_time",
            "--pair",
            "s1:s2",
            "--objective",
            "latency",
            "--range",
            "0 s",
            "6 h",
            "--bisection",
        )
        self.assertEqual(data["axis"], "wait_time")
        self.assertAlmostEqual(data["value"], 9990.0, delta=1e-5)

    def test_not_bracketed(self) -> None:
        data = self.run_json(
            "crossover",
            "--axis",
            "wait_time",
            "--pair",
            "s2:s3",
            "--objective",
            "latency",
        )
        self.assertFalse(data["bracketed"])
        self.assertIsNone(data["value"])
        self.assertEqual(data["sign"], 1)

    def test_errors(self) -> None:
        base = ("crossover", "--objective", "energy", "--axis", "input_size")
        self.assertFails(2, "usage", *base, "--pair", "s1")
        self.assertFails(2, "usage", *base, "--pair", "s2:s2")
        self.assertFails(
            2, "usage", *base, "--pair", "s1:s2", "--per-op", "--amortized"
        )
        self.assertFails(
            2, "quantity", *base, "--pair", "s1:s2", "--range", "1 W", "2 W"
        )
        self.assertFails(
            2, "value", *base, "--pair", "s1:s2", "--range", "2 MB", "1 MB"
        )
        self.assertFails(
            2,
            "usage",
            "crossover",
            "--objective",
            "energy",
            "--axis",
            "links.isl.rtt",
            "--pair",
            "s1:s3",
        )
        self.assertFails(
            2,
            "config",
            "crossover",
            "--objective",
            "energy",
            "--axis",
            "altitude",
            "--pair",
            "s1:s2",
            "--range",
            "1",
            "2",
        )


class TestTableCommands(CliTestCase):
    def test_sweep_csv(self) -> None:
        rows = self.run_csv("sweep", "--axis", "wait_time", "--points", "5")
        self.assertEqual(len(rows), 6)
        self.assertEqual(rows[0][0], "wait_time_s")
        self.assertIn("s3_latency_s", rows[0])
        self.assertEqual(rows[1][0], "0.0000000000000000e+00")
        self.assertEqual(rows[5][0], "3.6000000000000000e+03")

    def test_sweep_json(self) -> None:
        data = self.run_json(
            "sweep",
            "--axis",
            "input_size",
            "--range",
            "10 kB",
            "50 MB",
            "--points",
            "3",
            "--spacing",
            "linear",
            "--scenarios",
            "s1,s2",
            "--output",
            "json",
        )
        self.assertEqual(len(data["rows"]), 3)
        self.assertEqual(data["columns"][1:3], ["s1_energy_J", "s2_energy_J"])
        self.assertEqual(data["rows"][0][0], 80000.0)
        self.assertEqual(data["skipped"], [])

    def test_sweep_without_multilayer(self) -> None:
        config = self.ground_only_config()
        rows = self.run_csv(
            "sweep", "--axis", "complexity", "--points", "2", "--config", config
        )
        self.assertNotIn("s3_energy_J", rows[0])
        self.assertFails(
            1,
            "evaluation",
            "sweep",
            "--axis",
            "complexity",
            "--scenarios",
            "s1,s3",
            "--config",
            config,
        )

    def test_energy_map(self) -> None:
        rows = self.run_csv(
            "map",
            "--kind",
            "energy",
            "--x-points",
            "3",
            "--y-points",
            "2",
            "--include-geo",
        )
        self.assertEqual(
            rows[0],
            [
                "input_size_bits",
                "complexity_FLOP",
                "s1_energy_J",
                "s2_energy_J",
                "s3_energy_J",
                "winner",
            ],
        )
        self.assertEqual(len(rows), 7)

    def test_latency_map(self) -> None:
        rows = self.run_csv(
            "map",
            "--kind",
            "latency",
            "--x-range",
            "0 s",
            "1 h",
            "--x-points",
            "2",
            "--y-range",
            "5 s",
            "1 min",
            "--y-points",
            "2",
        )
        self.assertEqual(rows[0][:2], ["wait_time_s", "update_deadline_s"])
        winners = [row[-1] for row in rows[1:]]
        self.assertEqual(winners, ["infeasible", "infeasible", "s2", "s3"])
        self.assertFails(
            2, "usage", "map", "--kind", "latency", "--y-axis", "complexity"
        )

    def test_output_path(self) -> None:
        target = self.path("sweep.csv")
        status, out, err = run_cli(
            [
                "sweep",
                "--axis",
                "uplink_rate",
                "--points",
                "4",
                "--output-path",
                str(target),
            ]
        )
        self.assertEqual((status, out), (0, ""), err)
        lines = target.read_text(encoding="utf-8").splitlines()
        self.assertEqual(len(lines), 5)
        self.assertTrue(lines[0].startswith("uplink_rate_bps,"))


class TestOtherCommands(CliTestCase):
    def test_preset(self) -> None:
        status, out, _ = run_cli(["preset", "--paper-defaults"])
        self.assertEqual(status, 0)
        path = self.path("defaults.toml")
        path.write_text(out, encoding="utf-8")
        data = self.run_json("cost", "--scenario", "s1", "--config", str(path))
        self.assertAlmostEqual(data["energy"]["total"], 120300.0, delta=1e-6)
        self.assertFails(2, "usage", "preset")
        self.assertFails(2, "usage", "preset", "--paper-defaults", "--output", "json")

    def test_validate(self) -> None:
        status, out, err = run_cli(["validate"])
        self.assertEqual(status, 0, out + err)
        self.assertEqual(out.splitlines()[-1], "all 9 checks passed")

    def test_verbose_logging(self) -> None:
        argv = ["sweep", "-vv", "--axis", "wait_time", "--points", "2"]
        status, _, err = run_cli(argv)
        self.assertEqual(status, 0)
        self.assertIn("DEBUG splitric._sweep: Sweep of links.feeder.wait_time", err)

    def test_help(self) -> None:
        status, out, _ = run_cli(["--help"])
        self.assertEqual(status, 0)
        self.assertIn("crossover", out)


class TestErrors(CliTestCase):
    def test_usage(self) -> None:
        self.assertFails(2, "usage")
        self.assertFails(2, "usage", "teleport")
        self.assertFails(2, "usage", "cost")
        self.assertFails(2, "usage", "cost", "--scenario", "s4")
        self.assertFails(2, "usage", "cost", "--scenario", "s1", "--output", "csv")
        self.assertFails(2, "usage", "recommend", "--deadline", "60 W")

    def test_config(self) -> None:
        self.assertFails(2, "config", "cost", "--scenario", "s1", "--set", "nonsense")
        self.assertFails(
            2,
            "config",
            "cost",
            "--scenario",
            "s1",
            "--config",
            str(self.path("no.toml")),
        )
        self.assertFails(
            2,
            "config",
            "power",
            "--node",
            "geo",
            "--rate",
            "1 Hz",
            "--config",
            self.ground_only_config(),
        )
        self.assertFails(
            2, "usage", "cost", "--scenario", "s1", "--workload-preset", "video"
        )

    def test_unavailable_scenario(self) -> None:
        err = self.assertFails(
            1,
            "evaluation",
            "cost",
            "--scenario",
            "s3",
            "--config",
            self.ground_only_config(),
        )
        self.assertIn("GEO", err)

    def test_unwritable_output(self) -> None:
        target = self.path("missing-directory/out.json")
        self.assertFails(
            1, "output", "cost", "--scenario", "s1", "--output-path", str(target)
        )
