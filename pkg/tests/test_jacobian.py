"""
🧪 JACOBIAN TESTS
Mumford divisors on genus-3 curves: validation, Cantor arithmetic, sampling and the zeta oracle.
"""

import itertools
import math
import os
import sys
from pathlib import Path
from unittest.mock import patch

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from config import settings
from services.jacobian import (
    HyperCurve,
    MumfordDivisor,
    add,
    curve_from_coefficients,
    double,
    hasse_weil_interval,
    identity,
    negate,
    order_oracle,
    point_counts,
    sample_divisor,
    scalar_mul,
    validate,
)
from utils.bytestream import ByteStream
from utils.errors import DomainError, InternalError, ResourceLimitError
from utils.polynomials import PrimeField, poly_is_irreducible, poly_is_squarefree

FULL_SCALE = os.getenv("UOG_FULL_SCALE") == "1"
ORACLE_PRIMES = (31, 101, 127)
ORACLE_CURVES = 10 if FULL_SCALE else 2
ORACLE_DIVISORS = 20 if FULL_SCALE else 5
LAW_CURVES = 10 if FULL_SCALE else 1
LAW_TRIPLES = 1000 if FULL_SCALE else 30


def _example_curve():
    """y^2 = x^7 + 1 over F_11."""
    return curve_from_coefficients(11, [1, 0, 0, 0, 0, 0, 0, 1])


def _random_curve(p: int, seed: bytes, irreducible: bool = False) -> HyperCurve:
    field = PrimeField(p)
    stream = ByteStream(seed)
    while True:
        f = field.poly([stream.field_element(p) for _ in range(7)] + [1])
        if not poly_is_squarefree(f):
            continue
        if irreducible and not poly_is_irreducible(f):
            continue
        return HyperCurve(field, f)


class TestCurve:
    """Curve validation."""

    def test_rejects_bad_polynomials(self):
        """f must be monic, of degree 7 and squarefree."""
        with pytest.raises(DomainError):
            curve_from_coefficients(11, [1, 0, 0, 0, 0, 0, 1])
        with pytest.raises(DomainError):
            curve_from_coefficients(11, [1, 0, 0, 0, 0, 0, 0, 2])
        with pytest.raises(DomainError):
            curve_from_coefficients(11, [0, 0, 1, 0, 0, 0, 0, 1])

    def test_trustless_predicate(self):
        """Irreducible f marks a trustless curve."""
        assert _random_curve(31, b"irr", irreducible=True).is_trustless
        assert not curve_from_coefficients(11, [0, 1, 0, 0, 0, 0, 0, 1]).is_trustless


class TestValidation:
    """Mumford pair checks."""

    def test_examples(self):
        """<x, 1> lies on y^2 = x^7 + 1, <x, 2> does not."""
        curve = _example_curve()
        field = curve.field
        assert validate(curve, MumfordDivisor(field.x(), field.poly([1])))
        assert not validate(curve, MumfordDivisor(field.x(), field.poly([2])))
        assert validate(curve, identity(curve))

    def test_structural_failures(self):
        """Non-monic u, deg v >= deg u and deg u > 3 are invalid."""
        curve = _example_curve()
        field = curve.field
        assert not validate(curve, MumfordDivisor(field.poly([0, 2]), field.poly([1])))
        assert not validate(curve, MumfordDivisor(field.x(), field.x()))
        assert not validate(curve, MumfordDivisor(field.poly([0, 0, 0, 0, 1]), field.zero()))
        other = PrimeField(13)
        assert not validate(curve, MumfordDivisor(other.x(), other.poly([1])))

    def test_operations_reject_invalid_input(self):
        """Arithmetic refuses divisors that are not on the curve."""
        curve = _example_curve()
        bad = MumfordDivisor(curve.field.x(), curve.field.poly([2]))
        with pytest.raises(DomainError):
            add(curve, bad, identity(curve))
        with pytest.raises(DomainError):
            scalar_mul(curve, 3, bad)


class TestGroupLaw:
    """Cantor composition and reduction."""

    def test_order_seven_divisor(self):
        """<x, 1> on y^2 = x^7 + 1 has order exactly 7."""
        curve = _example_curve()
        d = MumfordDivisor(curve.field.x(), curve.field.poly([1]))
        assert scalar_mul(curve, 7, d).is_identity
        for k in range(1, 7):
            assert not scalar_mul(curve, k, d).is_identity

    def test_identity_and_inverse(self):
        """D + 0 = D and D + (-D) = 0."""
        curve = _random_curve(101, b"inv")
        for i in range(5):
            d = sample_divisor(curve, f"d{i}".encode())
            assert add(curve, d, identity(curve)) == d
            assert add(curve, d, negate(curve, d)).is_identity
            assert double(curve, d) == add(curve, d, d)

    def test_associative_and_commutative(self):
        """Group axioms on sampled divisors."""
        curve = _random_curve(101, b"axioms")
        divisors = [sample_divisor(curve, f"a{i}".encode()) for i in range(4)]
        for a, b in itertools.product(divisors, repeat=2):
            ab = add(curve, a, b)
            assert validate(curve, ab)
            assert ab == add(curve, b, a)
        for a, b, c in itertools.combinations(divisors, 3):
            assert add(curve, add(curve, a, b), c) == add(curve, a, add(curve, b, c))

    @pytest.mark.parametrize("p", ORACLE_PRIMES)
    def test_random_triples(self, p):
        """Associativity, commutativity, identity and inverses on random triples over small fields."""
        for i in range(LAW_CURVES):
            seed = f"laws-{p}-{i}".encode()
            curve = _random_curve(p, seed)
            pool = [sample_divisor(curve, seed + k.to_bytes(2, "big")) for k in range(24)]
            pool += [add(curve, pool[k], pool[k + 1]) for k in range(0, 24, 2)]
            stream = ByteStream(seed + b"/triples")
            for _ in range(LAW_TRIPLES):
                a, b, c = (pool[stream.integer(16) % len(pool)] for _ in range(3))
                assert add(curve, add(curve, a, b), c) == add(curve, a, add(curve, b, c))
                assert add(curve, a, b) == add(curve, b, a)
                assert add(curve, a, identity(curve)) == a
                assert add(curve, a, negate(curve, a)).is_identity

    def test_scalar_laws(self):
        """[m + n]D = [m]D + [n]D and [-n]D = -[n]D."""
        curve = _random_curve(1_000_003, b"scalar")
        d = sample_divisor(curve, b"base")
        m, n = 12345, 67890
        assert scalar_mul(curve, m + n, d) == add(curve, scalar_mul(curve, m, d), scalar_mul(curve, n, d))
        assert scalar_mul(curve, -n, d) == negate(curve, scalar_mul(curve, n, d))
        assert scalar_mul(curve, 0, d).is_identity


class TestSampling:
    """Seeded divisors."""

    def test_valid_and_deterministic(self):
        """Samples are valid degree-3 divisors and reproducible."""
        curve = _random_curve(1_000_003, b"sample")
        for i in range(10):
            seed = f"s{i}".encode()
            d = sample_divisor(curve, seed)
            assert validate(curve, d)
            assert d.degree == 3
            assert sample_divisor(curve, seed) == d

    def test_coverage(self):
        """Sampling reaches at least half of a small Jacobian."""
        curve = _example_curve()
        order = order_oracle(curve)
        seen = {sample_divisor(curve, i.to_bytes(8, "big")) for i in range(10 * order)}
        assert len(seen) >= order // 2


class TestZetaOracle:
    """Point counting and #J."""

    def test_hasse_weil_interval(self):
        """Integer bounds bracket the real ones."""
        for p in (11, 31, 101):
            lower, upper = hasse_weil_interval(p)
            assert lower == math.ceil((math.sqrt(p) - 1) ** 6)
            assert upper == math.floor((math.sqrt(p) + 1) ** 6)

    def test_example_order(self):
        """#J of y^2 = x^7 + 1 over F_11 is divisible by 7."""
        curve = _example_curve()
        order = order_oracle(curve)
        lower, upper = hasse_weil_interval(11)
        assert lower <= order <= upper
        assert order % 7 == 0

    @pytest.mark.parametrize("p", ORACLE_PRIMES)
    def test_order_annihilates_samples(self, p):
        """#J sits in the Hasse-Weil interval, kills random divisors, and is odd when f is irreducible."""
        lower, upper = hasse_weil_interval(p)
        curves = 50 if FULL_SCALE and p == 101 else ORACLE_CURVES
        for i in range(curves):
            seed = f"zeta-{p}-{i}".encode()
            curve = _random_curve(p, seed)
            order = order_oracle(curve)
            assert lower <= order <= upper
            for j in range(ORACLE_DIVISORS):
                d = sample_divisor(curve, seed + bytes([j]))
                assert scalar_mul(curve, order, d).is_identity
            if poly_is_irreducible(curve.f):
                assert order % 2 == 1

    def test_irreducible_curve_has_odd_order(self):
        """No rational 2-torsion when f is irreducible."""
        curve = _random_curve(31, b"odd", irreducible=True)
        assert order_oracle(curve) % 2 == 1

    def test_point_counts_consistent(self):
        """N1 matches a direct count of affine points plus infinity."""
        curve = _random_curve(31, b"n1")
        n1, _, _ = point_counts(curve)
        direct = 1
        for x in range(31):
            fx = curve.f(x)
            direct += 1 if fx == 0 else (2 if pow(fx, 15, 31) == 1 else 0)
        assert n1 == direct

    def test_refuses_large_primes(self):
        """Point counting is bounded by settings."""
        with patch.object(settings, "order_oracle_max_prime", 7):
            with pytest.raises(ResourceLimitError):
                order_oracle(_example_curve())

    def test_order_outside_hasse_weil_raises(self):
        """Inconsistent point counts surface as an internal error, not a bogus order."""
        with patch("services.jacobian.point_counts", return_value=(0, 0, 0)):
            with pytest.raises(InternalError):
                order_oracle(_example_curve())

    def test_chunked_character_sums(self):
        """Batch size does not change the counts."""
        curve = _random_curve(31, b"chunks")
        expected = point_counts(curve)
        with patch("services.jacobian.CHARACTER_SUM_CHUNK", 7):
            assert point_counts(curve) == expected
