"""
Form class groups Cl(D) of imaginary quadratic discriminants.

Elements are reduced positive definite binary quadratic forms (a, b, c) with
b^2 - 4ac = D. Composition is Gauss composition solved through linear
congruences, followed by reduction.
"""

import logging
import math
from dataclasses import dataclass

import gmpy2
from sympy import factorint
from sympy.ntheory import sqrt_mod

from config import settings
from utils.bytestream import ByteStream
from utils.errors import CorruptEncodingError, DomainError, ResourceLimitError
from utils.numtheory import crt_pair, int_sqrt, is_probable_prime, jacobi

logger = logging.getLogger(__name__)

FORM_PREFIX = "qf1:"


@dataclass(frozen=True)
class Discriminant:
    value: int

    def __post_init__(self):
        if self.value >= 0 or self.value % 4 not in (0, 1):
            raise DomainError(f"Not an imaginary quadratic discriminant: {self.value}")

    @property
    def is_trustless(self) -> bool:
        """D = 1 mod 4 with |D| prime: the class number is unknown to everyone."""
        return self.value % 4 == 1 and is_probable_prime(-self.value)

    @property
    def is_fundamental(self) -> bool:
        """D = 1 mod 4 squarefree, or D = 4m with m = 2, 3 mod 4 squarefree."""
        d = self.value
        if d % 4 == 1:
            return all(e == 1 for e in factorint(-d).values())
        m = d // 4
        return m % 4 in (2, 3) and all(e == 1 for e in factorint(-m).values())

    @property
    def bits(self) -> int:
        return (-self.value).bit_length()


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if a <= 0 or abs(b) > a or a > c:
            return False
        if b < 0 and (-b == a or a == c):
            return False
        return True

    @property
    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def _as_disc(disc) -> Discriminant:
    return disc if isinstance(disc, Discriminant) else Discriminant(int(disc))


def identity(disc) -> QuadForm:
    """Principal form of discriminant D."""
    d = _as_disc(disc).value
    if d % 4 == 0:
        return QuadForm(1, 0, -d // 4)
    return QuadForm(1, 1, (1 - d) // 4)


def _normalize(a, b, c):
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce(form: QuadForm) -> QuadForm:
    """Unique reduced representative of the class of form."""
    if form.a <= 0:
        raise DomainError(f"Form {form} is not positive definite")
    if form.discriminant >= 0:
        raise DomainError(f"Form {form} has nonnegative discriminant")
    a, b, c = gmpy2.mpz(form.a), gmpy2.mpz(form.b), gmpy2.mpz(form.c)
    a, b, c = _normalize(a, b, c)
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        a, b, c = _normalize(a, b, c)
    return QuadForm(int(a), int(b), int(c))


def _solve_linmod(a, b, m):
    """Solve a*x = b (mod m): returns (x0, step) describing all solutions."""
    g, d, _ = gmpy2.gcdext(a, m)
    q, r = gmpy2.f_divmod(b, g)
    if r:
        raise DomainError(f"No solution to {a}*x = {b} mod {m}")
    return (q * d) % m, m // g


def compose(x: QuadForm, y: QuadForm) -> QuadForm:
    """Reduced product of two classes."""
    disc = x.discriminant
    if y.discriminant != disc:
        raise DomainError(f"Discriminant mismatch: {disc} vs {y.discriminant}")
    a1, b1, c1 = (gmpy2.mpz(v) for v in (x.a, x.b, x.c))
    a2, b2 = gmpy2.mpz(y.a), gmpy2.mpz(y.b)
    g = (b1 + b2) // 2
    h = -(b1 - b2) // 2
    w = gmpy2.gcd(gmpy2.gcd(a1, a2), g)
    j = w
    s = a1 // w
    t = a2 // w
    u = g // w
    mu, nu = _solve_linmod(t * u, h * u + s * c1, s * t)
    lam, _ = _solve_linmod(t * nu, h - t * mu, s)
    k = mu + nu * lam
    l = (k * t - h) // s
    m = (t * u * k - h * u - c1 * s) // (s * t)
    product = QuadForm(int(s * t), int(j * u - (k * t + l * s)), int(k * l - j * m))
    return reduce(product)


def invert(form: QuadForm) -> QuadForm:
    return reduce(QuadForm(form.a, -form.b, form.c))


def pow(form: QuadForm, n: int) -> QuadForm:
    """Left-to-right binary exponentiation; negative n goes through invert."""
    if n < 0:
        return pow(invert(form), -n)
    result = identity(form.discriminant)
    base = reduce(form)
    for bit in bin(n)[2:] if n else "":
        result = compose(result, result)
        if bit == "1":
            result = compose(result, base)
    return result


def sample_element(disc, seed: bytes) -> QuadForm:
    """Deterministic prime form drawn from the seed stream."""
    d = _as_disc(disc).value
    stream = ByteStream(seed)
    bits = max(8, (-d).bit_length() // 4)
    top = 1 << (bits - 1)
    while True:
        a = stream.integer(bits) | top | 1
        if jacobi(d, a) != 1 or not is_probable_prime(a):
            continue
        root = int(sqrt_mod(d % a, a))
        b = crt_pair(root, a, d % 2, 2)
        return reduce(QuadForm(a, b, (b * b - d) // (4 * a)))


def enumerate_class_group(disc) -> frozenset:
    """All reduced primitive forms of discriminant D (desk scale only)."""
    d = _as_disc(disc).value
    if -d > settings.class_enumeration_max_disc:
        raise ResourceLimitError(
            f"|D| = {-d} exceeds enumeration bound {settings.class_enumeration_max_disc}"
        )
    forms = set()
    a_max = int_sqrt(-d // 3)[0]
    for a in range(1, a_max + 1):
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            form = QuadForm(a, b, c)
            if form.is_reduced and form.is_primitive:
                forms.add(form)
    logger.debug(f"📊 Enumerated h({d}) = {len(forms)}")
    return frozenset(forms)


def class_number_bits_estimate(disc) -> float:
    """Average-case size of log2 h(D), which is about log2 sqrt|D|."""
    return math.log2(-_as_disc(disc).value) / 2


def encode_form(form: QuadForm) -> str:
    sign = "-" if form.b < 0 else ""
    return f"{FORM_PREFIX}{-form.discriminant:x}:{form.a:x}:{sign}{abs(form.b):x}"


def parse_form(text: str) -> QuadForm:
    """Inverse of encode_form; c is recomputed from D, a and b."""
    text = text.strip()
    if not text.startswith(FORM_PREFIX):
        raise CorruptEncodingError(f"Missing {FORM_PREFIX} prefix")
    try:
        disc_hex, a_hex, b_hex = text[len(FORM_PREFIX):].split(":")
        d = -int(disc_hex, 16)
        a = int(a_hex, 16)
        b = -int(b_hex[1:], 16) if b_hex.startswith("-") else int(b_hex, 16)
    except ValueError as e:
        raise CorruptEncodingError(f"Malformed form encoding: {e}")
    if d >= 0 or a <= 0 or (b * b - d) % (4 * a):
        raise CorruptEncodingError(f"Form fields do not match discriminant {d}")
    form = QuadForm(a, b, (b * b - d) // (4 * a))
    if not form.is_primitive:
        raise CorruptEncodingError(f"Form {form} is not primitive")
    return form
