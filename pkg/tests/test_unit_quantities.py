import unittest

import splitric as sr
from splitric import Dimension


class TestParseQuantity(unittest.TestCase):
    """Unit conversion into the canonical unit of each dimension."""

    def test_byte_units_are_decimal(self) -> None:
        self.assertEqual(sr.parse_quantity("1 kB").value, 8000.0)
        self.assertEqual(sr.parse_quantity("20 MB").value, 1.6e8)
        self.assertEqual(sr.parse_quantity("100 B").value, 800.0)
        self.assertEqual(sr.parse_quantity("50 Mbit").value, 5e7)

    def test_dimensions(self) -> None:
        cases = {
            "500 Mbit/s": (5e8, Dimension.BIT_RATE),
            "10 min": (600.0, Dimension.SECONDS),
            "2 h": (7200.0, Dimension.SECONDS),
            "20 ms": (0.02, Dimension.SECONDS),
            "15 W": (15.0, Dimension.WATTS),
            "10 TFLOPS": (1e13, Dimension.FLOP_RATE),
            "150 TFLOP": (1.5e14, Dimension.FLOP),
            "400 MHz": (4e8, Dimension.HERTZ),
            "2 kJ": (2000.0, Dimension.JOULES),
            "1e5": (1e5, Dimension.DIMENSIONLESS),
        }
        for text, (value, dimension) in cases.items():
            with self.subTest(text=text):
                quantity = sr.parse_quantity(text)
                self.assertEqual(quantity.value, value)
                self.assertIs(quantity.dimension, dimension)

    def test_whitespace_is_optional(self) -> None:
        self.assertEqual(sr.parse_quantity("  85kB ").value, 680000.0)

    def test_expected_dimension(self) -> None:
        self.assertEqual(sr.parse_quantity("3 s", Dimension.SECONDS).value, 3.0)
        with self.assertRaises(sr.QuantityError):
            sr.parse_quantity("3 W", Dimension.SECONDS)
        with self.assertRaises(sr.QuantityError):
            sr.parse_quantity("3 s", Dimension.DIMENSIONLESS)

    def test_invalid_texts(self) -> None:
        invalid = ("", "kB", "x kB", "-5 kB", "inf s", "nan", "1e400 MB", "3 furlong")
        for text in invalid:
            with self.subTest(text=text):
                with self.assertRaises(sr.QuantityError):
                    sr.parse_quantity(text)

    def test_quantity_error_is_value_error(self) -> None:
        with self.assertRaises(ValueError):
            sr.parse_quantity("3 parsec")

    def test_negative_zero(self) -> None:
        self.assertEqual(str(sr.parse_quantity("-0 s").value), "0.0")


class TestQuantity(unittest.TestCase):
    def test_invariants(self) -> None:
        with self.assertRaises(ValueError):
            sr.Quantity(-1.0, Dimension.BITS)
        with self.assertRaises(ValueError):
            sr.Quantity(float("inf"), Dimension.BITS)

    def test_format_reads_back(self) -> None:
        for text in ("85 kB", "0.1 s", "20 pJ/FLOP", "1e5", "333 Mbit/s"):
            with self.subTest(text=text):
                quantity = sr.parse_quantity(text)
                self.assertEqual(sr.parse_quantity(str(quantity)), quantity)

    def test_column_suffixes(self) -> None:
        self.assertEqual(Dimension.BITS.column_suffix, "bits")
        self.assertEqual(Dimension.JOULES_PER_FLOP.column_suffix, "J_per_FLOP")
        self.assertEqual(Dimension.DIMENSIONLESS.column_suffix, "")
