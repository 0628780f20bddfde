"""
🧪 GROUP GENERATION TESTS
Security parameter tables, seeded generation with transcripts, and the known-order curve family.
"""

import dataclasses
import os
import sys
from pathlib import Path
from unittest.mock import patch

import pytest
from pydantic import ValidationError

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from config import settings
from services.groupapi import class_group_adapter, jacobian_adapter, mult_mod_adapter
from services.groupgen import (
    GROUP_SIZE_TABLE,
    SecurityParams,
    cofactor_S,
    default_cofactor_bound,
    find_known_order_curve,
    gen_classgroup,
    gen_jacobian,
    group_size_for,
    known_order_curve,
    smoothness_for_rho,
    verify_generation,
)
from services.jacobian import order_oracle, scalar_mul, validate
from utils.errors import DomainError, GenerationError, NotSquarefreeError
from utils.numtheory import is_probable_prime, primes_up_to
from utils.polynomials import PrimeField, poly_is_irreducible

FULL_SCALE = os.getenv("UOG_FULL_SCALE") == "1"


@pytest.fixture(scope="module")
def generated():
    return gen_jacobian(55, 40, b"test-seed")


class TestParameterTable:
    """Group sizes for (lambda, rho)."""

    def test_table_examples(self):
        """Tabulated sizes."""
        assert group_size_for(128, 55) == 1920
        assert group_size_for(128, 128) == 3392
        assert group_size_for(55, 40) == 660
        assert sum(len(row) for row in GROUP_SIZE_TABLE.values()) == 24

    def test_off_grid(self):
        """Off-grid levels use the u(rho) map and round up to whole bytes."""
        assert group_size_for(64, 55) == 960
        assert group_size_for(128, 70) == 2192
        assert group_size_for(90, 40) % 8 == 0
        assert smoothness_for_rho(72) == pytest.approx(17.5)

    def test_rejects_weak_levels(self):
        """Levels below 40 bits are unsupported."""
        with pytest.raises(DomainError):
            group_size_for(32, 55)
        with pytest.raises(DomainError):
            group_size_for(128, 20)
        with pytest.raises(ValidationError):
            SecurityParams(lam=30, rho=55, u_smooth=1.0, group_bits=30)

    def test_security_params(self):
        """for_level fills u = bits / lambda; models are frozen."""
        params = SecurityParams.for_level(128, 55)
        assert params.u_smooth == 15.0
        assert params.group_bits == 1920
        with pytest.raises(ValidationError):
            params.lam = 64


class TestJacobianGeneration:
    """gen_jacobian and its replay."""

    def test_output_shape(self, generated):
        """A 220-bit field, an irreducible monic septic and a valid divisor."""
        assert generated.p.bit_length() == 220
        assert is_probable_prime(generated.p)
        f = generated.curve.f
        assert f.degree == 7 and f.is_monic
        assert poly_is_irreducible(f)
        assert validate(generated.curve, generated.P)
        assert generated.P.degree == 3
        assert generated.params.group_bits == 660

    def test_transcript(self, generated):
        """Every draw has a verdict; curve rejections are logged four coefficients at a time."""
        transcript = generated.transcript
        assert transcript.count("pending") == 0
        assert transcript.entries[-1].verdict == "accepted"
        curve_rejections = transcript.count("rejected:not-squarefree") + transcript.count("rejected:reducible")
        assert curve_rejections == 4 * generated.rejections
        assert [e.purpose for e in transcript.entries[-4:]] == ["w0", "w1", "w2", "w3"]

    def test_deterministic(self, generated):
        """Same seed, same curve, point and transcript."""
        again = gen_jacobian(55, 40, b"test-seed")
        assert again.curve == generated.curve
        assert again.P == generated.P
        assert again.transcript.render() == generated.transcript.render()

    def test_verify_generation(self, generated):
        """Replay accepts the honest output and rejects a swapped seed."""
        assert verify_generation(generated)
        assert not verify_generation(dataclasses.replace(generated, seed=b"other-seed"))

    def test_bail_out(self):
        """A zero iteration budget raises GenerationError."""
        with patch.object(settings, "gen_max_iterations", 0):
            with pytest.raises(GenerationError):
                gen_jacobian(55, 40, b"bail")

    def test_generated_point_usable(self, generated):
        """The published point works through the group API."""
        group = jacobian_adapter(generated.curve)
        P = group.wrap(generated.P)
        assert group.equal(group.scalar(P, 5), group.op(group.scalar(P, 2), group.scalar(P, 3)))

    @pytest.mark.skipif(not FULL_SCALE, reason="full-size generation runs with UOG_FULL_SCALE=1")
    def test_full_size(self):
        """(128, 128) gives a 1131-bit field."""
        output = gen_jacobian(128, 128, b"full")
        assert output.p.bit_length() == 1131
        assert verify_generation(output)


class TestClassGroupGeneration:
    """gen_classgroup."""

    def test_prime_discriminant(self):
        """D = -q with q = 3 mod 4 prime of 2 * group_bits bits."""
        output = gen_classgroup(55, 40, b"cg-seed")
        d = output.discriminant
        assert d.bits == 1320
        assert d.value % 4 == 1
        assert d.is_trustless
        assert output.generator.discriminant == d.value
        assert output.generator.is_reduced
        assert output.transcript.entries[-1].verdict == "accepted"
        assert gen_classgroup(55, 40, b"cg-seed").generator == output.generator


class TestKnownOrderCurves:
    """y^2 = x^7 + c(x)^2 with a rational 7-torsion divisor."""

    def test_example(self):
        """c = 1 over F_11 is y^2 = x^7 + 1 with <x, 1> of order 7."""
        field = PrimeField(11)
        curve, divisor = known_order_curve(field, field.poly([1]))
        assert curve.f == field.poly([1, 0, 0, 0, 0, 0, 0, 1])
        assert scalar_mul(curve, 7, divisor).is_identity
        assert not scalar_mul(curve, 1, divisor).is_identity
        assert order_oracle(curve) % 7 == 0

    def test_rejects_bad_c(self):
        """c(0) = 0 is never squarefree and deg c is at most 3."""
        field = PrimeField(11)
        with pytest.raises(NotSquarefreeError):
            known_order_curve(field, field.poly([0, 1]))
        with pytest.raises(DomainError):
            known_order_curve(field, field.poly([1, 0, 0, 0, 1]))

    def test_family(self):
        """Random c over assorted primes: the divisor has order exactly 7."""
        primes = [p for p in primes_up_to(10_000) if p > 7][::60]
        count = len(primes) if FULL_SCALE else 20
        for p in primes[:count]:
            field = PrimeField(p)
            curve, divisor, c = find_known_order_curve(field, f"fam-{p}".encode())
            assert validate(curve, divisor)
            assert scalar_mul(curve, 7, divisor).is_identity
            for k in range(1, 7):
                assert not scalar_mul(curve, k, divisor).is_identity


class TestCofactors:
    """S = lcm(1..bound) and per-backend defaults."""

    def test_values(self):
        """Sizes of the usual cofactors."""
        assert cofactor_S(1) == 1
        assert cofactor_S(10) == 2520
        assert cofactor_S(60).bit_length() == 84

    def test_defaults(self):
        """60 for Jacobians, 1 for prime discriminants, 2 otherwise."""
        jac = jacobian_adapter(known_order_curve(PrimeField(11), PrimeField(11).poly([1]))[0])
        assert default_cofactor_bound(jac) == 60
        assert default_cofactor_bound(class_group_adapter(-23)) == 1
        assert default_cofactor_bound(class_group_adapter(-84)) == 2
        with pytest.raises(DomainError):
            default_cofactor_bound(mult_mod_adapter(101))
