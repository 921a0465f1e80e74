import math
import random
import unittest

import splitric as sr
from splitric import Scenario, Objective, CostBasis, Direction, Role

S1, S2, S3 = Scenario

DRAWS = 50


class RandomPointsTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.topology, self.workload = sr.paper_defaults()
        self.rng = random.Random(20240517)

    def log_uniform(self, lo: float, hi: float) -> float:
        return math.exp(self.rng.uniform(math.log(lo), math.log(hi)))

    def points(self) -> list[tuple[sr.Topology, sr.WorkloadProfile]]:
        return [
            sr.draw_parameters(self.rng, self.topology, self.workload)
            for _ in range(DRAWS)
        ]


class TestCostPrimitives(RandomPointsTestCase):
    def test_compute_costs_are_linear_in_operations(self) -> None:
        for node in (self.topology.ground, self.topology.leo, self.topology.geo):
            assert node is not None
            for _ in range(DRAWS):
                a, b = self.log_uniform(1e6, 1e15), self.log_uniform(1e6, 1e15)
                k = self.log_uniform(1e-3, 1e3)
                for cost in (sr.compute_energy, sr.compute_latency):
                    self.assertEqual(cost(0.0, node), 0.0)
                    self.assertAlmostEqual(
                        cost(a + b, node) / (cost(a, node) + cost(b, node)),
                        1.0,
                        places=12,
                    )
                    self.assertAlmostEqual(
                        cost(k * a, node) / (k * cost(a, node)), 1.0, places=12
                    )

    def test_co_located_transport_is_free(self) -> None:
        links = [self.topology.feeder, self.topology.isl, self.topology.internal]
        for link in links:
            assert link is not None
            for _ in range(DRAWS):
                data = self.log_uniform(1.0, 1e12)
                for direction in Direction:
                    self.assertEqual(
                        sr.comm_latency(data, link, direction, co_located=True), 0.0
                    )
                    for role in Role:
                        self.assertEqual(
                            sr.comm_energy(data, link, direction, role, True), 0.0
                        )
        data = self.log_uniform(1.0, 1e12)
        internal = self.topology.internal
        self.assertEqual(sr.comm_latency(data, internal, Direction.UPLINK), 0.0)
        self.assertEqual(
            sr.comm_energy(data, internal, Direction.UPLINK, Role.TRANSMIT), 0.0
        )

    def test_serialization_delay(self) -> None:
        for link in (self.topology.feeder, self.topology.isl):
            assert link is not None
            for _ in range(DRAWS):
                data = self.log_uniform(1.0, 1e12)
                for direction in Direction:
                    base = sr.comm_latency(0.0, link, direction)
                    self.assertEqual(base, link.rtt / 2)
                    delay = sr.comm_latency(data, link, direction) - base
                    expected = data / link.rate(direction)
                    self.assertAlmostEqual(
                        delay, expected, delta=1e-12 * (expected + link.rtt)
                    )


class TestDominanceConditions(RandomPointsTestCase):
    def test_margin_and_verdict(self) -> None:
        conditions = (sr.edge_advantage, sr.link_efficiency, sr.continuity_gain)
        for topology, workload in self.points():
            for condition in conditions:
                verdict = condition(topology, workload)
                self.assertEqual(verdict.margin, verdict.rhs - verdict.lhs)
                self.assertEqual(verdict.holds, verdict.margin > 0)

    def test_edge_advantage_decides_per_operation_energy(self) -> None:
        for topology, workload in self.points():
            holds = sr.edge_advantage(topology, workload).holds
            label = sr.classify(
                topology, workload, Objective.ENERGY, (S1, S2), CostBasis.PER_OPERATION
            )
            self.assertIs(label.winner, S2 if holds else S1)


class TestCrossoverProperties(RandomPointsTestCase):
    cases = [
        ("input_size", Objective.ENERGY, CostBasis.PER_OPERATION, (8e4, 4e8)),
        ("complexity", Objective.ENERGY, CostBasis.PER_OPERATION, (1e8, 5e11)),
        ("wait_time", Objective.LATENCY, CostBasis.LIFECYCLE, (0.0, 3600.0)),
    ]

    def test_difference_changes_sign_at_crossover(self) -> None:
        bracketed = 0
        for topology, workload in self.points():
            for axis, objective, basis, search_range in self.cases:
                result = sr.crossover(
                    axis, objective, (S1, S2), topology, workload, search_range, basis
                )
                if result.value is None:
                    continue
                lo, hi = search_range
                step = 1e-6 * (hi - lo)
                if not lo < result.value - step < result.value + step < hi:
                    continue
                bracketed += 1
                f = sr.difference_function(
                    axis, objective, (S1, S2), topology, workload, basis
                )
                below, above = f(result.value - step), f(result.value + step)
                self.assertLess(below * above, 0.0, (axis, result.value))
        self.assertGreater(bracketed, DRAWS // 5)


class TestWinnerSelection(RandomPointsTestCase):
    def test_scale_invariance(self) -> None:
        for _ in range(DRAWS):
            totals = {s: self.log_uniform(1e-6, 1e9) for s in Scenario}
            scale = self.log_uniform(1e-6, 1e6)
            scaled = {s: scale * total for s, total in totals.items()}
            self.assertIs(sr.select_winner(scaled), sr.select_winner(totals))

    def test_energy_map_switches_once_near_edge_boundary(self) -> None:
        x = sr.AxisSpec("input_size", 8e4, 4e8, 20, sr.Spacing.LOGARITHMIC)
        y = sr.AxisSpec("complexity", 1e8, 5e11, 8, sr.Spacing.LOGARITHMIC)
        ratio = (x.hi / x.lo) ** (1 / (x.points - 1))
        for _ in range(5):
            rate = self.log_uniform(5e7, 1e9)
            topology, workload = sr.with_parameter(
                self.topology, self.workload, "uplink_rate", rate
            )
            energy_map = sr.run_energy_map(topology, workload, x, y)
            for y_value in y.values():
                row = [cell for cell in energy_map.cells if cell.y == y_value]
                winners = [cell.label.winner for cell in row]
                # Streaming wins for small inputs, on-board inference for large
                self.assertEqual(
                    winners, [S1] * winners.count(S1) + [S2] * winners.count(S2)
                )
                feeder = topology.feeder
                boundary = (
                    y_value
                    * topology.leo.energy_per_flop
                    * feeder.uplink_rate
                    / feeder.tx_power
                )
                if S1 in winners and S2 in winners:
                    switch = winners.index(S2)
                    self.assertLessEqual(row[switch - 1].x / ratio, boundary)
                    self.assertLessEqual(boundary, row[switch].x * ratio)
                elif S1 in winners:
                    self.assertGreaterEqual(boundary, x.hi / ratio)
                else:
                    self.assertLessEqual(boundary, x.lo * ratio)


class TestInvariantCheck(unittest.TestCase):
    def test_every_draw_is_checked(self) -> None:
        report = sr.run_validation({7})
        self.assertTrue(report.passed, "\n".join(report.lines()))
        (check,) = report.checks
        self.assertIn("latency map monotonicity: 0 violations", check.details)
        self.assertIn("sweep determinism: 0 violations", check.details)
        self.assertIn(
            "1000 random parameter draws, each with a 4 x 4 latency map"
            " and a repeated sweep",
            check.details,
        )
