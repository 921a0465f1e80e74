import math
import unittest
from dataclasses import replace

import splitric as sr
from splitric import Scenario, Objective

S1, S2, S3 = Scenario


class LifecycleTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.topology, self.workload = sr.paper_defaults()


class TestLifecycleEnergy(LifecycleTestCase):
    def test_reference_totals(self) -> None:
        expected = {S1: 120300.0, S2: 2300.5, S3: 17004.02}
        for scenario, total in expected.items():
            with self.subTest(scenario=scenario):
                breakdown = sr.lifecycle_energy(scenario, self.topology, self.workload)
                self.assertAlmostEqual(breakdown.total, total, delta=1e-6)

    def test_components(self) -> None:
        s1 = sr.lifecycle_energy(S1, self.topology, self.workload)
        self.assertAlmostEqual(s1.training_offload, 300.0)
        self.assertEqual(s1.model_transfer, 0.0)
        self.assertEqual(s1.geo_training_compute, 0.0)
        s3 = sr.lifecycle_energy(S3, self.topology, self.workload)
        self.assertAlmostEqual(s3.training_offload, 2.0)
        self.assertAlmostEqual(s3.geo_training_compute, 15000.0)
        self.assertAlmostEqual(s3.geo_dataset_rx, 2.0)
        self.assertAlmostEqual(s3.geo_model_tx, 0.01)

    def test_total_is_sum_of_components(self) -> None:
        for scenario in Scenario:
            for objective in Objective:
                with self.subTest(scenario=scenario, objective=objective):
                    breakdown = sr.lifecycle(
                        scenario, objective, self.topology, self.workload
                    )
                    self.assertEqual(
                        breakdown.total, math.fsum(breakdown.components().values())
                    )

    def test_schema_is_shared(self) -> None:
        keys = {
            tuple(sr.lifecycle_energy(s, self.topology, self.workload).components())
            for s in Scenario
        }
        self.assertEqual(len(keys), 1)

    def test_split_energy_does_not_depend_on_input_size(self) -> None:
        totals = set()
        for input_size in (8e4, 4e7, 4e8):
            _, workload = sr.with_parameter(
                self.topology, self.workload, "input_size", input_size
            )
            totals.add(sr.lifecycle_energy(S2, self.topology, workload).total)
        self.assertEqual(len(totals), 1)

    def test_longevity_override(self) -> None:
        breakdown = sr.lifecycle_energy(S2, self.topology, self.workload, 0.0)
        self.assertEqual(breakdown.inference_total, 0.0)
        self.assertEqual(breakdown.total, 300.5)
        for longevity in (-1.0, float("nan"), float("inf")):
            with self.subTest(longevity=longevity):
                with self.assertRaises(ValueError):
                    sr.lifecycle_energy(S2, self.topology, self.workload, longevity)

    def test_multilayer_needs_geo(self) -> None:
        topology = replace(self.topology, isl=None)
        with self.assertRaises(sr.ScenarioUnavailable):
            sr.lifecycle_energy(S3, topology, self.workload)
        with self.assertRaises(sr.ScenarioUnavailable):
            sr.lifecycle_latency(S3, topology, self.workload)
        # The other scenarios do not need it
        sr.lifecycle_energy(S2, topology, self.workload)

    def test_as_dict(self) -> None:
        data = sr.lifecycle_energy(S2, self.topology, self.workload).as_dict()
        self.assertEqual(data["scenario"], "s2")
        self.assertEqual(data["units"], "J")
        self.assertEqual(
            list(data["components"]),
            [
                "training_offload",
                "model_transfer",
                "inference_total",
                "geo_training_compute",
                "geo_dataset_rx",
                "geo_model_tx",
            ],
        )


class TestLifecycleLatency(LifecycleTestCase):
    def test_reference_totals(self) -> None:
        expected = {
            S1: (10620.15, 620.15),
            S2: (1230.15, 1220.15),
            S3: (11.99, 1.99),
        }
        for scenario, (total, learning_total) in expected.items():
            with self.subTest(scenario=scenario):
                breakdown = sr.lifecycle_latency(scenario, self.topology, self.workload)
                self.assertAlmostEqual(breakdown.total, total, delta=1e-9)
                self.assertAlmostEqual(
                    breakdown.learning_total, learning_total, delta=1e-9
                )

    def test_waits(self) -> None:
        wait = self.topology.feeder.wait_time
        waits = {
            s: sr.lifecycle_latency(s, self.topology, self.workload).wait
            for s in Scenario
        }
        self.assertEqual(waits, {S1: wait, S2: 2 * wait, S3: 0.0})

    def test_split_latency_is_affine_in_wait_time(self) -> None:
        # T_S2(w) = 2 w + 30.15 with the reference parameters
        for wait in (0.0, 60.0, 3600.0):
            with self.subTest(wait=wait):
                topology, workload = sr.with_parameter(
                    self.topology, self.workload, "wait_time", wait
                )
                total = sr.lifecycle_latency(S2, topology, workload).total
                self.assertAlmostEqual(total, 2 * wait + 30.15, delta=1e-9)

    def test_model_download_is_zero(self) -> None:
        for scenario in Scenario:
            breakdown = sr.lifecycle_latency(scenario, self.topology, self.workload)
            self.assertEqual(breakdown.model_download, 0.0)

    def test_as_dict(self) -> None:
        data = sr.lifecycle_latency(S3, self.topology, self.workload).as_dict()
        self.assertEqual(data["objective"], "latency")
        self.assertAlmostEqual(data["components"]["propagation"], 0.24)
        self.assertIn("learning_total", data)


class TestOverheadAndAmortization(LifecycleTestCase):
    def test_update_overhead(self) -> None:
        overhead = sr.update_overhead(
            S1, Objective.ENERGY, self.topology, self.workload
        )
        self.assertAlmostEqual(overhead, 300.0)
        overhead = sr.update_overhead(
            S3, Objective.ENERGY, self.topology, self.workload
        )
        self.assertAlmostEqual(overhead, 15004.02, delta=1e-6)
        overhead = sr.update_overhead(
            S2, Objective.LATENCY, self.topology, self.workload
        )
        self.assertAlmostEqual(overhead, 1220.15, delta=1e-9)

    def test_amortized_energy_approaches_inference_cost(self) -> None:
        per_inference = 0.02
        previous = math.inf
        for longevity in (1.0, 1e3, 1e6, 1e9):
            workload = replace(self.workload, longevity=longevity)
            amortized = sr.amortized_energy_per_inference(
                S2, self.topology, workload
            )
            self.assertLess(amortized, previous)
            previous = amortized
        self.assertAlmostEqual(previous, per_inference, delta=1e-6)


class TestControlLoop(LifecycleTestCase):
    def test_ground_loop_misses_deadline(self) -> None:
        loop = sr.control_loop_latency(S1, self.topology, self.workload)
        self.assertAlmostEqual(loop.latency, 0.09 + 1e-6 + 0.01 + 1.6e-6, delta=1e-12)
        self.assertFalse(loop.deadline_met)

    def test_on_board_loop_meets_deadline(self) -> None:
        for scenario in (S2, S3):
            with self.subTest(scenario=scenario):
                loop = sr.control_loop_latency(scenario, self.topology, self.workload)
                self.assertAlmostEqual(loop.latency, 1e-4)
                self.assertTrue(loop.deadline_met)
                self.assertEqual(loop.as_dict()["deadline"], 0.01)

    def test_multilayer_loop_needs_geo(self) -> None:
        topology = replace(self.topology, geo=None)
        with self.assertRaises(sr.ScenarioUnavailable):
            sr.control_loop_latency(S3, topology, self.workload)


class TestFeederRateSensitivity(LifecycleTestCase):
    def test_values(self) -> None:
        self.assertAlmostEqual(
            sr.feeder_rate_sensitivity(S1, self.topology, self.workload) / 1e13,
            6.015,
        )
        self.assertEqual(
            sr.feeder_rate_sensitivity(S3, self.topology, self.workload), 0.0
        )

    def test_matches_energy_change(self) -> None:
        # Energies are affine in 1/R_ul, so a finite difference is exact
        rates = (2.5e8, 5e8)
        for scenario in (S1, S2):
            energies = [
                sr.lifecycle_energy(
                    scenario,
                    *sr.with_parameter(
                        self.topology, self.workload, "uplink_rate", rate
                    ),
                ).total
                for rate in rates
            ]
            slope = (energies[0] - energies[1]) / (1 / rates[0] - 1 / rates[1])
            sensitivity = sr.feeder_rate_sensitivity(
                scenario, self.topology, self.workload
            )
            self.assertAlmostEqual(slope / sensitivity, 1.0, places=9)


class TestScenario(unittest.TestCase):
    def test_order_and_titles(self) -> None:
        self.assertEqual([s.rank for s in Scenario], [0, 1, 2])
        self.assertEqual(S1.title, "Ground-Centric")
        self.assertEqual(S2.title, "Ground-LEO Split")
        self.assertEqual(S3.title, "GEO-LEO Multi-Layer")
        self.assertEqual(Objective.LATENCY.units, "s")
