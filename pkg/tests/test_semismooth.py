"""
🧪 SEMISMOOTHNESS TESTS
Monte-Carlo estimates, the tabulated asymptotics and the weakness report used for parameter selection.
"""

import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from services.semismooth import (
    SEMISMOOTH_TABLE,
    _is_semismooth,
    semismooth_mc,
    tabulated_log2_probability,
    weakness_probability,
)
from utils.errors import DomainError

FULL_SCALE = os.getenv("UOG_FULL_SCALE") == "1"
TRIALS = 100_000 if FULL_SCALE else 1000
TOLERANCE = 0.03 if FULL_SCALE else 0.05


class TestSemismoothPredicate:
    """Exact comparisons against x^(1/u) and x^(2/u)."""

    def test_examples(self):
        """Hand-checked factorisations."""
        assert _is_semismooth(1000, [2, 2, 2, 5, 5, 5], Fraction(2))
        assert _is_semismooth(998, [2, 499], Fraction(2))
        assert not _is_semismooth(993, [3, 331], Fraction(4))
        assert _is_semismooth(10403, [101, 103], Fraction(2))
        assert not _is_semismooth(10403, [101, 103], Fraction(21, 10))


class TestMonteCarlo:
    """semismooth_mc."""

    def test_reference_values(self):
        """64-bit estimates sit near the asymptotic G(1/u, 2/u)."""
        for u, expected in ((Fraction(21, 10), 0.9488), (Fraction(3), 0.4473)):
            estimate = semismooth_mc(u, 64, TRIALS, b"reference")
            assert abs(estimate.fraction - expected) <= TOLERANCE
            low, high = estimate.interval
            assert low <= estimate.fraction <= high

    def test_monotone_in_u(self):
        """With shared samples, larger u can only lose hits."""
        hits = [semismooth_mc(u, 48, 1000, b"mono").hits for u in (2.1, 2.9, 3.0, 6.0)]
        assert hits == sorted(hits, reverse=True)
        assert hits[0] > hits[-1]

    def test_size_stability(self):
        """32- and 64-bit estimates for u = 2.1 agree."""
        small = semismooth_mc(2.1, 32, 1000, b"size").fraction
        large = semismooth_mc(2.1, 64, 1000, b"size").fraction
        assert abs(small - large) <= 0.05

    def test_deterministic_and_parallel(self):
        """Per-trial seeding makes results independent of the worker count."""
        one = semismooth_mc(Fraction(5, 2), 32, 1000, b"par", workers=1)
        again = semismooth_mc(Fraction(5, 2), 32, 1000, b"par", workers=1)
        two = semismooth_mc(Fraction(5, 2), 32, 1000, b"par", workers=2)
        assert one.hits == again.hits == two.hits

    def test_record(self):
        """Records carry the estimate and its interval."""
        record = semismooth_mc(3, 32, 1000, b"rec").as_record()
        assert set(record) == {"u", "bits", "trials", "estimate", "ci_low", "ci_high", "retries"}
        assert float(record["ci_low"]) <= float(record["estimate"]) <= float(record["ci_high"])

    def test_rejects_bad_arguments(self):
        """u > 1, bits in [2, max] and at least 1000 trials."""
        for args in ((1, 64, 1000), (0.5, 64, 1000), (3, 1, 1000), (3, 97, 1000), (3, 64, 999)):
            with pytest.raises(DomainError):
                semismooth_mc(*args, b"bad")


class TestTabulatedProbability:
    """Log-space interpolation of the table."""

    def test_table_points(self):
        """Rows are reproduced exactly and u <= 2 is certain."""
        for u, log2p in SEMISMOOTH_TABLE:
            assert tabulated_log2_probability(u) == pytest.approx(log2p)
        assert tabulated_log2_probability(1.5) == 0.0
        assert tabulated_log2_probability(3.0) == pytest.approx(math.log2(0.4473))

    def test_monotone(self):
        """Probability falls as u grows, including past the last row."""
        grid = [2 + 0.25 * i for i in range(120)]
        values = [tabulated_log2_probability(u) for u in grid]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert tabulated_log2_probability(30.0) < -128


class TestWeaknessReport:
    """weakness_probability."""

    def test_reference_points(self):
        """Known (lambda, groupBits) pairs."""
        report = weakness_probability(128, 128, 914)
        assert report.u == pytest.approx(7.14, abs=0.01)
        assert report.log2_probability == pytest.approx(-14.3, abs=1.0)
        assert not report.meets_target

        report = weakness_probability(64, 40, 914)
        assert report.u == pytest.approx(14.28, abs=0.01)
        assert report.log2_probability == pytest.approx(-50.4, abs=1.5)
        assert report.meets_target

        report = weakness_probability(128, 40, 1920)
        assert report.u == 15.0
        assert report.log2_probability == pytest.approx(-54.75, abs=1.0)
        assert report.meets_target

    def test_record_and_monte_carlo(self):
        """The optional Monte-Carlo check is attached to the record."""
        report = weakness_probability(20, 40, 48, mc_trials=1000)
        record = report.as_record()
        assert record["meets_rho"] in ("true", "false")
        assert "mc_estimate" in record
        assert report.mc_estimate.bits == 48

    def test_rejects_bad_sizes(self):
        """lambda and group size must be positive."""
        with pytest.raises(DomainError):
            weakness_probability(0, 40, 914)
