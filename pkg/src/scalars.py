"""
Exact scalar arithmetic in characteristic two.
Covers GF(2^k), the polynomial ring GF(2)[t], the rational function field
K = GF(2)(t) and the inseparable quadratic extension K' = K[s]/(s^2 - t).

Every field object exposes the same small surface (zero, one, from_int,
parse, format, random, sqrt) so that matrices and quadratic forms can be
parameterised by the field they live over.
"""

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Tuple, Union

from config import LOG_LEVEL

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

# Bit i is the coefficient of x^i. k=1 is never used for reduction.
IRREDUCIBLE_POLYNOMIALS = {
    1: 0b11,          # x + 1
    2: 0b111,         # x^2 + x + 1
    3: 0b1011,        # x^3 + x + 1
    4: 0b10011,       # x^4 + x + 1
    5: 0b100101,      # x^5 + x^2 + 1
    6: 0b1000011,     # x^6 + x + 1
    7: 0b10000011,    # x^7 + x + 1
    8: 0b100011011,   # x^8 + x^4 + x^3 + x + 1
}


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-packed GF(2) polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _pdivmod(a: int, b: int) -> Tuple[int, int]:
    """Quotient and remainder of bit-packed GF(2) polynomials."""
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    quotient = 0
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        quotient ^= 1 << shift
        a ^= b << shift
    return quotient, a


# ---------------------------------------------------------------------------
# GF(2^k)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gf2kField:
    """The finite field GF(2^k) modulo a fixed irreducible polynomial."""

    k: int
    modulus: int

    @property
    def name(self) -> str:
        return f"gf2^{self.k}"

    @property
    def order(self) -> int:
        return 1 << self.k

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def zero(self) -> "Gf2kElement":
        return Gf2kElement(self, 0)

    @property
    def one(self) -> "Gf2kElement":
        return Gf2kElement(self, 1)

    def element(self, value: int) -> "Gf2kElement":
        if not 0 <= value < self.order:
            raise ValueError(f"value {value} out of range for {self.name}")
        return Gf2kElement(self, value)

    def from_int(self, n: int) -> "Gf2kElement":
        return Gf2kElement(self, n & 1)

    def generator(self) -> "Gf2kElement":
        """The class of x (for GF(4) this is omega)."""
        return self.element(2 % self.order) if self.k > 1 else self.one

    def elements(self) -> Iterator["Gf2kElement"]:
        for value in range(self.order):
            yield Gf2kElement(self, value)

    def random(self, rng: random.Random) -> "Gf2kElement":
        return Gf2kElement(self, rng.randrange(self.order))

    def parse(self, literal: str) -> "Gf2kElement":
        """Parse a bit-string of length k, lowest degree first ("01" is omega in GF(4))."""
        text = literal.strip()
        if len(text) != self.k or any(ch not in "01" for ch in text):
            raise ValueError(f"invalid {self.name} literal: {literal!r}")
        return Gf2kElement(self, sum(1 << i for i, ch in enumerate(text) if ch == "1"))

    def format(self, x: "Gf2kElement") -> str:
        return "".join("1" if (x.value >> i) & 1 else "0" for i in range(self.k))

    def multiply(self, a: int, b: int) -> int:
        return _pdivmod(_clmul(a, b), self.modulus)[1] if self.k > 1 else a & b

    def sqrt(self, x: "Gf2kElement") -> "Gf2kElement":
        return x.sqrt()


@lru_cache(maxsize=None)
def gf2k(k: int) -> Gf2kField:
    """Return GF(2^k) with the documented irreducible polynomial."""
    if k not in IRREDUCIBLE_POLYNOMIALS:
        raise ValueError(f"GF(2^{k}) is not supported (1 <= k <= 8)")
    return Gf2kField(k, IRREDUCIBLE_POLYNOMIALS[k])


@dataclass(frozen=True)
class Gf2kElement:
    """Element of GF(2^k); bit i of value is the coordinate on x^i."""

    field: Gf2kField
    value: int

    def _coerce(self, other: "Gf2kElement") -> int:
        if not isinstance(other, Gf2kElement) or other.field != self.field:
            raise ValueError(f"cannot combine {self.field.name} element with {other!r}")
        return other.value

    def __add__(self, other: "Gf2kElement") -> "Gf2kElement":
        return Gf2kElement(self.field, self.value ^ self._coerce(other))

    __sub__ = __add__

    def __neg__(self) -> "Gf2kElement":
        return self

    def __mul__(self, other: "Gf2kElement") -> "Gf2kElement":
        return Gf2kElement(self.field, self.field.multiply(self.value, self._coerce(other)))

    def __pow__(self, exponent: int) -> "Gf2kElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.field.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "Gf2kElement":
        if self.value == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self.field.name}")
        return self ** (self.field.order - 2)

    def __truediv__(self, other: "Gf2kElement") -> "Gf2kElement":
        self._coerce(other)
        return self * other.inverse()

    def __bool__(self) -> bool:
        return self.value != 0

    def frobenius(self) -> "Gf2kElement":
        return self * self

    def sqrt(self) -> "Gf2kElement":
        """The unique y with y^2 = self, i.e. self^(2^(k-1))."""
        y = self
        for _ in range(self.field.k - 1):
            y = y * y
        return y

    def __str__(self) -> str:
        return self.field.format(self)

    def __repr__(self) -> str:
        return f"Gf2kElement({self.field.name}, {self.field.format(self)})"


GF2 = gf2k(1)
GF4 = gf2k(2)


# ---------------------------------------------------------------------------
# GF(2)[t]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gf2Polynomial:
    """Polynomial over GF(2) packed into an int; bit i is the coefficient of t^i."""

    bits: int = 0

    @classmethod
    def from_coefficients(cls, coefficients) -> "Gf2Polynomial":
        return cls(sum(1 << i for i, c in enumerate(coefficients) if c & 1))

    @classmethod
    def parse(cls, literal: str) -> "Gf2Polynomial":
        """Parse an ascending-degree bit-string ("01" is t, "101" is 1+t^2)."""
        text = literal.strip()
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"invalid polynomial literal: {literal!r}")
        return cls(sum(1 << i for i, ch in enumerate(text) if ch == "1"))

    @classmethod
    def random(cls, rng: random.Random, max_degree: int) -> "Gf2Polynomial":
        return cls(rng.getrandbits(max_degree + 1))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def coefficient(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: "Gf2Polynomial") -> "Gf2Polynomial":
        return Gf2Polynomial(self.bits ^ other.bits)

    __sub__ = __add__

    def __neg__(self) -> "Gf2Polynomial":
        return self

    def __mul__(self, other: "Gf2Polynomial") -> "Gf2Polynomial":
        return Gf2Polynomial(_clmul(self.bits, other.bits))

    def __pow__(self, exponent: int) -> "Gf2Polynomial":
        result, base = Gf2Polynomial(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other: "Gf2Polynomial") -> Tuple["Gf2Polynomial", "Gf2Polynomial"]:
        q, r = _pdivmod(self.bits, other.bits)
        return Gf2Polynomial(q), Gf2Polynomial(r)

    def __floordiv__(self, other: "Gf2Polynomial") -> "Gf2Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Gf2Polynomial") -> "Gf2Polynomial":
        return divmod(self, other)[1]

    def __bool__(self) -> bool:
        return self.bits != 0

    @staticmethod
    def gcd(a: "Gf2Polynomial", b: "Gf2Polynomial") -> "Gf2Polynomial":
        """Greatest common divisor; always monic over GF(2)."""
        x, y = a.bits, b.bits
        while y:
            x, y = y, _pdivmod(x, y)[1]
        return Gf2Polynomial(x)

    def derivative(self) -> "Gf2Polynomial":
        # d/dt t^i = i t^(i-1), which survives only for odd i
        result = 0
        for i in range(1, self.bits.bit_length(), 2):
            if (self.bits >> i) & 1:
                result |= 1 << (i - 1)
        return Gf2Polynomial(result)

    def is_square(self) -> bool:
        return self.derivative().is_zero()

    def split_even_odd(self) -> Tuple["Gf2Polynomial", "Gf2Polynomial"]:
        """Return (E, O) with self = E^2 + t * O^2."""
        even, odd = 0, 0
        for i in range(self.bits.bit_length()):
            if (self.bits >> i) & 1:
                if i % 2 == 0:
                    even |= 1 << (i // 2)
                else:
                    odd |= 1 << (i // 2)
        return Gf2Polynomial(even), Gf2Polynomial(odd)

    def sqrt(self) -> "Gf2Polynomial":
        even, odd = self.split_even_odd()
        if odd:
            raise ValueError(f"{self} is not a square in GF(2)[t]")
        return even

    def frobenius(self) -> "Gf2Polynomial":
        result = 0
        for i in range(self.bits.bit_length()):
            if (self.bits >> i) & 1:
                result |= 1 << (2 * i)
        return Gf2Polynomial(result)

    def literal(self) -> str:
        if self.bits == 0:
            return "0"
        return "".join(str(self.coefficient(i)) for i in range(self.degree + 1))

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for i in range(self.degree + 1):
            if self.coefficient(i):
                terms.append("1" if i == 0 else "t" if i == 1 else f"t^{i}")
        return "+".join(terms)


POLY_ZERO = Gf2Polynomial(0)
POLY_ONE = Gf2Polynomial(1)
POLY_T = Gf2Polynomial(0b10)


# ---------------------------------------------------------------------------
# K = GF(2)(t)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFunction:
    """Element of GF(2)(t), kept reduced: gcd(numerator, denominator) = 1."""

    numerator: Gf2Polynomial
    denominator: Gf2Polynomial = POLY_ONE

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if self.numerator.is_zero():
            object.__setattr__(self, "denominator", POLY_ONE)
            return
        g = Gf2Polynomial.gcd(self.numerator, self.denominator)
        if g != POLY_ONE:
            object.__setattr__(self, "numerator", self.numerator // g)
            object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def parse(cls, literal: str) -> "RationalFunction":
        """Parse "num/den" ("01/11" is t/(1+t)); a bare polynomial literal has denominator 1."""
        text = literal.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            denominator = Gf2Polynomial.parse(den)
            if denominator.is_zero():
                raise ValueError(f"zero denominator in rational literal: {literal!r}")
            return cls(Gf2Polynomial.parse(num), denominator)
        return cls(Gf2Polynomial.parse(text))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __bool__(self) -> bool:
        return not self.numerator.is_zero()

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __sub__ = __add__

    def __neg__(self) -> "RationalFunction":
        return self

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse in GF(2)(t)")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RationalFunction(self.numerator ** exponent, self.denominator ** exponent)

    def frobenius(self) -> "RationalFunction":
        return RationalFunction(self.numerator.frobenius(), self.denominator.frobenius())

    def literal(self) -> str:
        return f"{self.numerator.literal()}/{self.denominator.literal()}"

    def __str__(self) -> str:
        if self.denominator == POLY_ONE:
            return str(self.numerator)
        return f"{_wrap(str(self.numerator))}/{_wrap(str(self.denominator))}"


def _wrap(text: str) -> str:
    return f"({text})" if "+" in text else text


RATIONAL_ZERO = RationalFunction(POLY_ZERO)
RATIONAL_ONE = RationalFunction(POLY_ONE)
RATIONAL_T = RationalFunction(POLY_T)


class RationalField:
    """The rational function field K = GF(2)(t)."""

    name = "rational"
    order = None
    is_finite = False
    zero = RATIONAL_ZERO
    one = RATIONAL_ONE

    def t(self) -> RationalFunction:
        return RATIONAL_T

    def from_int(self, n: int) -> RationalFunction:
        return RATIONAL_ONE if n & 1 else RATIONAL_ZERO

    def parse(self, literal: str) -> RationalFunction:
        return RationalFunction.parse(literal)

    def format(self, x: RationalFunction) -> str:
        return x.literal()

    def random(self, rng: random.Random, max_degree: int = 8) -> RationalFunction:
        numerator = Gf2Polynomial.random(rng, max_degree)
        denominator = Gf2Polynomial.random(rng, max_degree)
        while denominator.is_zero():
            denominator = Gf2Polynomial.random(rng, max_degree)
        return RationalFunction(numerator, denominator)

    def elements(self):
        raise ValueError("GF(2)(t) is infinite and cannot be enumerated")

    def sqrt(self, x: RationalFunction) -> Optional[RationalFunction]:
        return is_square(x)[1]

    def __repr__(self) -> str:
        return "RationalField()"


RATIONAL = RationalField()


# ---------------------------------------------------------------------------
# K' = K[s]/(s^2 - t)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TowerElement:
    """Element a + b*s of K' with s^2 = t."""

    a: RationalFunction
    b: RationalFunction = RATIONAL_ZERO

    def __add__(self, other: "TowerElement") -> "TowerElement":
        return TowerElement(self.a + other.a, self.b + other.b)

    __sub__ = __add__

    def __neg__(self) -> "TowerElement":
        return self

    def __mul__(self, other: "TowerElement") -> "TowerElement":
        # (a + bs)(c + ds) = (ac + bd t) + (ad + bc) s
        return TowerElement(
            self.a * other.a + self.b * other.b * RATIONAL_T,
            self.a * other.b + self.b * other.a,
        )

    def norm(self) -> RationalFunction:
        """a^2 + t b^2, which equals the square of self."""
        return self.a * self.a + self.b * self.b * RATIONAL_T

    def inverse(self) -> "TowerElement":
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisionError("zero has no inverse in K'")
        # (a + bs)^2 = n, so (a + bs)^-1 = (a + bs) / n
        return TowerElement(self.a / n, self.b / n)

    def __truediv__(self, other: "TowerElement") -> "TowerElement":
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "TowerElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = TOWER_ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def frobenius(self) -> "TowerElement":
        return TowerElement(self.norm())

    def in_base_field(self) -> bool:
        return self.b.is_zero()

    def literal(self) -> str:
        return f"{self.a.literal()} + s*{self.b.literal()}"

    def __str__(self) -> str:
        parts = []
        if self.a:
            parts.append(str(self.a))
        if self.b:
            parts.append("s" if self.b == RATIONAL_ONE else f"{_wrap(str(self.b))}*s")
        return " + ".join(parts) if parts else "0"


TOWER_ZERO = TowerElement(RATIONAL_ZERO)
TOWER_ONE = TowerElement(RATIONAL_ONE)
TOWER_S = TowerElement(RATIONAL_ZERO, RATIONAL_ONE)


class TowerField:
    """The inseparable quadratic extension K' = K[s]/(s^2 - t)."""

    name = "tower"
    order = None
    is_finite = False
    zero = TOWER_ZERO
    one = TOWER_ONE

    def s(self) -> TowerElement:
        return TOWER_S

    def t(self) -> TowerElement:
        return TowerElement(RATIONAL_T)

    def embed(self, x: RationalFunction) -> TowerElement:
        return TowerElement(x)

    def from_int(self, n: int) -> TowerElement:
        return TOWER_ONE if n & 1 else TOWER_ZERO

    def parse(self, literal: str) -> TowerElement:
        """Parse "a + s*b" with rational-function literals a and b."""
        text = literal.replace(" ", "")
        if "+s*" in text:
            a, b = text.split("+s*", 1)
            return TowerElement(RationalFunction.parse(a), RationalFunction.parse(b))
        if text.startswith("s*"):
            return TowerElement(RATIONAL_ZERO, RationalFunction.parse(text[2:]))
        return TowerElement(RationalFunction.parse(text))

    def format(self, x: TowerElement) -> str:
        return x.literal()

    def random(self, rng: random.Random, max_degree: int = 8) -> TowerElement:
        return TowerElement(RATIONAL.random(rng, max_degree), RATIONAL.random(rng, max_degree))

    def elements(self):
        raise ValueError("K' is infinite and cannot be enumerated")

    def sqrt(self, x: TowerElement) -> Optional[TowerElement]:
        """
        Square root in K'.

        Squares of K' all lie in K, and every element of K is a square in K':
        writing p*q = E^2 + t*O^2 gives p/q = (E/q)^2 + t*(O/q)^2 = (E/q + (O/q)s)^2.
        """
        if not x.in_base_field():
            return None
        p, q = x.a.numerator, x.a.denominator
        even, odd = (p * q).split_even_odd()
        root = TowerElement(RationalFunction(even, q), RationalFunction(odd, q))
        if root * root != x:
            raise ArithmeticError(f"square root reconstruction failed for {x}")
        return root

    def __repr__(self) -> str:
        return "TowerField()"


TOWER = TowerField()

Scalar = Union[Gf2kElement, Gf2Polynomial, RationalFunction, TowerElement]
Field = Union[Gf2kField, RationalField, TowerField]


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def frobenius(x: Scalar) -> Scalar:
    """Return x^2; additive in characteristic two."""
    return x * x


def sqrt(x: Gf2kElement) -> Gf2kElement:
    """Return the unique square root of x in GF(2^k)."""
    return x.sqrt()


def is_square(x: RationalFunction) -> Tuple[bool, Optional[RationalFunction]]:
    """
    Decide whether x is a square in K = GF(2)(t).

    A reduced p/q is a square iff both p and q have only even-degree terms.

    Args:
        x: Element of K, possibly zero

    Returns:
        (True, c) with c^2 = x, or (False, None)
    """
    if x.is_zero():
        return True, RATIONAL_ZERO
    if x.numerator.is_square() and x.denominator.is_square():
        witness = RationalFunction(x.numerator.sqrt(), x.denominator.sqrt())
        return True, witness
    return False, None


def parse_field(name: str) -> Field:
    """
    Resolve a field name as used in form files and CLI flags.

    Args:
        name: "gf2^k", "rational" or "tower"

    Returns:
        The field object
    """
    text = name.strip().lower()
    if text.startswith("gf2^"):
        try:
            return gf2k(int(text[4:]))
        except ValueError as e:
            raise ValueError(f"unknown field {name!r}: {e}")
    if text == "rational":
        return RATIONAL
    if text == "tower":
        return TOWER
    raise ValueError(f"unknown field {name!r}")


def field_of(x: Scalar) -> Field:
    """Return the field a scalar belongs to."""
    if isinstance(x, Gf2kElement):
        return x.field
    if isinstance(x, RationalFunction):
        return RATIONAL
    if isinstance(x, TowerElement):
        return TOWER
    raise ValueError(f"{x!r} does not belong to a supported field")
