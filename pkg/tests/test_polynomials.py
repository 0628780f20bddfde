"""
🧪 POLYNOMIAL TESTS
F_p[x] helpers used by the Jacobian arithmetic and the divisor codec.
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from utils.errors import DomainError
from utils.polynomials import (
    PrimeField,
    fq_sqrt,
    poly_crt,
    poly_factor_squarefree,
    poly_gcd,
    poly_is_irreducible,
    poly_is_squarefree,
    poly_sqrt_mod,
)


def _linear(field, root):
    return field.poly([-root, 1])


class TestPrimeField:
    """Field construction and element encoding."""

    def test_rejects_bad_moduli(self):
        """Only odd primes make a field here."""
        for p in (2, 9, 1, 0):
            with pytest.raises(DomainError):
                PrimeField(p)

    def test_element_encoding(self):
        """Fixed width, big-endian, range checked on decode."""
        field = PrimeField(257)
        assert field.element_width == 2
        assert field.encode_element(256) == b"\x01\x00"
        assert field.decode_element(b"\x01\x00") == 256
        with pytest.raises(DomainError):
            field.decode_element(b"\x01\x01")


class TestPolynomialPredicates:
    """Squarefreeness, irreducibility and factoring."""

    def test_examples(self):
        """Reference predicates."""
        f11 = PrimeField(11)
        assert poly_is_squarefree(f11.poly([1, 0, 0, 0, 0, 0, 0, 1]))
        assert not poly_is_squarefree(f11.poly([0, 0, 1]))
        assert poly_is_irreducible(PrimeField(3).poly([1, 0, 1]))
        assert not poly_is_irreducible(PrimeField(5).poly([1, 0, 1]))

    def test_zero_polynomial_rejected(self):
        """Predicates on 0 are undefined."""
        field = PrimeField(7)
        with pytest.raises(DomainError):
            poly_is_squarefree(field.zero())
        with pytest.raises(DomainError):
            poly_gcd(field.zero(), field.zero())

    def test_factor_distinct_roots(self):
        """A product of distinct linears factors back into them."""
        field = PrimeField(101)
        u = _linear(field, 1) * _linear(field, 2) * _linear(field, 5)
        factors = poly_factor_squarefree(u)
        assert len(factors) == 3
        assert {g(0) for g in factors} == {100, 99, 96}

    def test_gcd_is_monic(self):
        """gcd(f, 0) is f made monic."""
        field = PrimeField(7)
        f = field.poly([2, 4])
        assert poly_gcd(f, field.zero()) == field.poly([4, 1])


class TestSquareRoots:
    """Square roots in residue fields and modulo squarefree u."""

    def test_extension_field_root(self):
        """A root in F_9 = F_3[x]/(x^2 + 1) squares back."""
        field = PrimeField(3)
        modulus = field.poly([1, 0, 1])
        r = field.poly([1, 1])
        a = (r * r) % modulus
        s = fq_sqrt(a, modulus)
        assert s is not None
        assert (s * s) % modulus == a

    def test_non_residue(self):
        """2 is not a square mod 11."""
        field = PrimeField(11)
        assert fq_sqrt(field.poly([2]), field.x()) is None
        assert poly_sqrt_mod(field.poly([2, 0, 0, 0, 0, 0, 0, 1]), field.x()) is None

    def test_canonical_root_example(self):
        """x^7 + 1 mod x over F_11: the canonical root of 1 is 1."""
        field = PrimeField(11)
        f = field.poly([1, 0, 0, 0, 0, 0, 0, 1])
        assert poly_sqrt_mod(f, field.x()) == field.poly([1])
        assert poly_sqrt_mod(f, field.x(), signs=1) == field.poly([10])

    def test_all_sign_choices(self):
        """Every sign pattern yields a distinct root of f mod u."""
        field = PrimeField(101)
        u = _linear(field, 1) * _linear(field, 2) * _linear(field, 5)
        v = field.poly([11, 7, 3])
        f = v * v + u * field.poly([2, 0, 0, 0, 1])
        roots = set()
        for signs in range(8):
            root = poly_sqrt_mod(f, u, signs)
            assert root is not None
            assert root.degree < 3
            assert ((root * root) - f) % u == field.zero()
            roots.add(root)
        assert len(roots) == 8

    def test_modulus_checks(self):
        """u must be monic, squarefree and of degree at most 3."""
        field = PrimeField(7)
        f = field.poly([1, 1])
        with pytest.raises(DomainError):
            poly_sqrt_mod(f, field.poly([0, 2]))
        with pytest.raises(DomainError):
            poly_sqrt_mod(f, field.poly([0, 0, 1]))
        with pytest.raises(DomainError):
            poly_sqrt_mod(f, field.poly([1, 0, 0, 0, 1]))
        assert poly_sqrt_mod(f, field.one()) == field.zero()


class TestPolynomialCRT:
    """Chinese remaindering over coprime moduli."""

    def test_crt_matches_residues(self):
        """The result reduces to each residue."""
        field = PrimeField(7)
        moduli = [field.x(), _linear(field, 6), field.poly([3, 0, 1])]
        residues = [field.poly([1]), field.poly([2]), field.poly([4, 5])]
        r = poly_crt(residues, moduli)
        assert r.degree < 4
        for residue, modulus in zip(residues, moduli):
            assert r % modulus == residue

    def test_crt_rejects_common_factor(self):
        """Moduli sharing a factor cannot be glued."""
        field = PrimeField(7)
        with pytest.raises(DomainError):
            poly_crt([field.one(), field.zero()], [field.x(), field.poly([0, 0, 1])])
