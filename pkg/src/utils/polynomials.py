"""
Prime fields and univariate polynomials over them.

Arithmetic delegates to sympy's dense galoistools routines. FpPoly stores
coefficients low degree first and trims high zeros, so the last stored
coefficient is nonzero unless the polynomial is zero.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_diff,
    gf_div,
    gf_eval,
    gf_factor_sqf,
    gf_gcd,
    gf_gcdex,
    gf_irreducible_p,
    gf_monic,
    gf_mul,
    gf_neg,
    gf_pow_mod,
    gf_rem,
    gf_sqf_p,
    gf_sub,
)

from utils.errors import DomainError
from utils.numtheory import is_probable_prime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 3 or not is_probable_prime(self.p):
            raise DomainError(f"Field modulus must be an odd prime, got {self.p}")

    @property
    def element_width(self) -> int:
        """Bytes per fixed-width element encoding."""
        return (self.p.bit_length() + 7) // 8

    def encode_element(self, value: int) -> bytes:
        return (value % self.p).to_bytes(self.element_width, "big")

    def decode_element(self, data: bytes) -> int:
        value = int.from_bytes(data, "big")
        if value >= self.p:
            raise DomainError(f"Field element {value} out of range for p = {self.p}")
        return value

    def poly(self, coeffs: Sequence[int]) -> "FpPoly":
        """Polynomial from low-to-high coefficients."""
        return FpPoly.from_coeffs(self, coeffs)

    def zero(self) -> "FpPoly":
        return FpPoly(self, ())

    def one(self) -> "FpPoly":
        return FpPoly(self, (1,))

    def x(self) -> "FpPoly":
        return FpPoly(self, (0, 1))


def _trim(coeffs: Sequence[int], p: int) -> tuple[int, ...]:
    out = [int(c) % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class FpPoly:
    field: PrimeField
    coeffs: tuple[int, ...]

    @classmethod
    def from_coeffs(cls, field: PrimeField, coeffs: Sequence[int]) -> "FpPoly":
        return cls(field, _trim(coeffs, field.p))

    @classmethod
    def _from_dense(cls, field: PrimeField, dense) -> "FpPoly":
        return cls(field, _trim(list(reversed(dense)), field.p))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dense(self) -> list:
        """High-to-low coefficient list as used by galoistools."""
        return [ZZ(c) for c in reversed(self.coeffs)]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.lc == 1

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _check(self, other: "FpPoly") -> None:
        if not isinstance(other, FpPoly) or other.field != self.field:
            raise DomainError("Polynomials over different fields")

    def __add__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        return FpPoly._from_dense(self.field, gf_add(self.dense, other.dense, self.p, ZZ))

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        return FpPoly._from_dense(self.field, gf_sub(self.dense, other.dense, self.p, ZZ))

    def __neg__(self) -> "FpPoly":
        return FpPoly._from_dense(self.field, gf_neg(self.dense, self.p, ZZ))

    def __mul__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        return FpPoly._from_dense(self.field, gf_mul(self.dense, other.dense, self.p, ZZ))

    def __divmod__(self, other: "FpPoly") -> tuple["FpPoly", "FpPoly"]:
        self._check(other)
        if other.is_zero:
            raise DomainError("Polynomial division by zero")
        q, r = gf_div(self.dense, other.dense, self.p, ZZ)
        return FpPoly._from_dense(self.field, q), FpPoly._from_dense(self.field, r)

    def __floordiv__(self, other: "FpPoly") -> "FpPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        if other.is_zero:
            raise DomainError("Polynomial reduction modulo zero")
        return FpPoly._from_dense(self.field, gf_rem(self.dense, other.dense, self.p, ZZ))

    def scale(self, c: int) -> "FpPoly":
        return FpPoly.from_coeffs(self.field, [a * c for a in self.coeffs])

    def monic(self) -> "FpPoly":
        if self.is_zero:
            raise DomainError("Zero polynomial has no monic associate")
        _, f = gf_monic(self.dense, self.p, ZZ)
        return FpPoly._from_dense(self.field, f)

    def derivative(self) -> "FpPoly":
        return FpPoly._from_dense(self.field, gf_diff(self.dense, self.p, ZZ))

    def gcdex(self, other: "FpPoly") -> tuple["FpPoly", "FpPoly", "FpPoly"]:
        """(h, s, t) with s*self + t*other = h, h monic gcd."""
        self._check(other)
        s, t, h = gf_gcdex(self.dense, other.dense, self.p, ZZ)
        return (FpPoly._from_dense(self.field, h),
                FpPoly._from_dense(self.field, s),
                FpPoly._from_dense(self.field, t))

    def pow_mod(self, n: int, modulus: "FpPoly") -> "FpPoly":
        self._check(modulus)
        return FpPoly._from_dense(self.field, gf_pow_mod(self.dense, n, modulus.dense, self.p, ZZ))

    def __call__(self, x: int) -> int:
        return int(gf_eval(self.dense, x % self.p, self.p, ZZ))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(f"{coef}{'*' if coef and mono else ''}{mono}")
        return " + ".join(terms)


def poly_gcd(f: FpPoly, g: FpPoly) -> FpPoly:
    """Monic gcd; gcd(f, 0) = monic(f)."""
    f._check(g)
    if f.is_zero and g.is_zero:
        raise DomainError("gcd of two zero polynomials")
    return FpPoly._from_dense(f.field, gf_gcd(f.dense, g.dense, f.p, ZZ))


def poly_is_squarefree(f: FpPoly) -> bool:
    if f.is_zero:
        raise DomainError("Squarefreeness of the zero polynomial")
    return bool(gf_sqf_p(f.dense, f.p, ZZ))


def poly_is_irreducible(f: FpPoly) -> bool:
    if f.degree < 1:
        raise DomainError("Irreducibility needs a polynomial of positive degree")
    return bool(gf_irreducible_p(f.dense, f.p, ZZ))


def poly_factor_squarefree(f: FpPoly) -> list[FpPoly]:
    """Monic irreducible factors of a squarefree polynomial, in sympy's sorted order."""
    if not poly_is_squarefree(f):
        raise DomainError(f"Polynomial {f} is not squarefree")
    _, factors = gf_factor_sqf(f.dense, f.p, ZZ)
    return [FpPoly._from_dense(f.field, g) for g in factors]


def poly_crt(residues: Sequence[FpPoly], moduli: Sequence[FpPoly]) -> FpPoly:
    """Unique r with deg r < deg prod(moduli) and r = residues[i] mod moduli[i] (coprime moduli)."""
    field = moduli[0].field
    result, modulus = field.zero(), field.one()
    for r, m in zip(residues, moduli):
        h, s, _ = modulus.gcdex(m)
        if h.degree != 0:
            raise DomainError("Polynomial CRT moduli are not coprime")
        # result + modulus * k with k = (r - result) / modulus mod m
        k = ((r - result) * s) % m
        result = result + modulus * k
        modulus = modulus * m
        result = result % modulus
    return result


def _element_key(value: FpPoly, degree: int) -> bytes:
    """Fixed-width big-endian encoding, highest coefficient first."""
    return b"".join(value.field.encode_element(value.coefficient(i)) for i in range(degree - 1, -1, -1))


def fq_sqrt(a: FpPoly, modulus: FpPoly) -> Optional[FpPoly]:
    """Square root of a in F_p[x]/(modulus) for irreducible modulus; None for non-residues.

    Tonelli-Shanks over the residue field of size q = p^k.
    """
    a = a % modulus
    if a.is_zero:
        return a
    field = a.field
    one = field.one()
    q = field.p ** modulus.degree
    if a.pow_mod((q - 1) // 2, modulus) != one:
        return None

    m, s = q - 1, 0
    while m % 2 == 0:
        m //= 2
        s += 1

    # deterministic non-residue search: c, then x + c for extension fields
    minus_one = FpPoly.from_coeffs(field, [field.p - 1])
    z = None
    for c in range(1, field.p):
        for candidate in (FpPoly.from_coeffs(field, [c]), FpPoly.from_coeffs(field, [c, 1]) % modulus):
            if candidate.is_zero:
                continue
            if candidate.pow_mod((q - 1) // 2, modulus) == minus_one:
                z = candidate
                break
        if z is not None:
            break
    if z is None:
        raise DomainError(f"No quadratic non-residue found modulo {modulus}")

    big_m = s
    c = z.pow_mod(m, modulus)
    t = a.pow_mod(m, modulus)
    r = a.pow_mod((m + 1) // 2, modulus)
    while t != one:
        i, t2 = 0, t
        while t2 != one:
            t2 = (t2 * t2) % modulus
            i += 1
            if i == big_m:
                return None
        b = c.pow_mod(1 << (big_m - i - 1), modulus)
        big_m = i
        c = (b * b) % modulus
        t = (t * c) % modulus
        r = (r * b) % modulus
    return r


def canonical_roots(f: FpPoly, u: FpPoly) -> Optional[list[tuple[FpPoly, FpPoly, FpPoly]]]:
    """For each irreducible factor g of u: (g, canonical root, other root) of f mod g.

    The canonical root has the lexicographically smaller byte encoding.
    Returns None when f is a non-residue modulo some factor.
    """
    out = []
    for g in poly_factor_squarefree(u):
        root = fq_sqrt(f, g)
        if root is None:
            return None
        other = (-root) % g
        if _element_key(other, g.degree) < _element_key(root, g.degree):
            root, other = other, root
        out.append((g, root, other))
    return out


def poly_sqrt_mod(f: FpPoly, u: FpPoly, signs: int = 0) -> Optional[FpPoly]:
    """Some v with deg v < deg u and v^2 = f mod u, or None.

    Bit i of signs picks the non-canonical root modulo the i-th factor of u.
    """
    if not u.is_monic:
        raise DomainError(f"Modulus {u} must be monic")
    if u.degree > 3:
        raise DomainError(f"Modulus degree {u.degree} exceeds 3")
    if not poly_is_squarefree(u):
        raise DomainError(f"Modulus {u} is not squarefree")
    if u.degree == 0:
        return u.field.zero()
    roots = canonical_roots(f, u)
    if roots is None:
        return None
    residues = [other if (signs >> i) & 1 else root for i, (_, root, other) in enumerate(roots)]
    return poly_crt(residues, [g for g, _, _ in roots])
