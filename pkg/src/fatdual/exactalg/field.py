"""
Exact ground fields.

GroundField wraps the two sympy domains fatdual computes over: the rationals
QQ (characteristic 0) and the prime fields GF(p). It owns every conversion
between wire strings ("num/den"), Python integers and domain elements, and the
seeded sampling of random scalars. No floating point value ever enters here.
"""

import random
from fractions import Fraction
from functools import lru_cache
from typing import Any

from pydantic import BaseModel, ConfigDict, field_validator
from sympy import isprime, nextprime
from sympy.polys.domains import GF, QQ

from ..errors import FatDualError

# Integer box for random rationals: large enough that generic behaviour is
# attained with overwhelming probability.
RATIONAL_SAMPLE_BOX = 10**6


class ExactAlgebraError(FatDualError):
    """Exception raised for exact-algebra errors (bad field data, failed splittings)."""

    pass


@lru_cache(maxsize=64)
def _domain(characteristic: int) -> Any:
    if characteristic == 0:
        return QQ
    return GF(characteristic)


class GroundField(BaseModel):
    """
    An exact field: QQ when characteristic is 0, otherwise GF(p).

    The instance is immutable and hashable, so it can key caches and travel
    between threads.
    """

    model_config = ConfigDict(frozen=True)

    characteristic: int = 0

    @field_validator("characteristic")
    @classmethod
    def _check_characteristic(cls, v: int) -> int:
        if v != 0 and not isprime(v):
            raise ValueError(f"characteristic must be 0 or a prime, got {v}")
        return v

    @classmethod
    def rationals(cls) -> "GroundField":
        return cls(characteristic=0)

    @classmethod
    def prime(cls, p: int) -> "GroundField":
        return cls(characteristic=p)

    @classmethod
    def large_prime(cls, rng: random.Random, floor: int = 2**31) -> "GroundField":
        """
        Pick a prime field of size at least `floor`, reproducibly from `rng`.

        Args:
            rng: Seeded generator deciding the offset above the floor
            floor: Lower bound for the prime

        Returns:
            GroundField over GF(p) with p >= floor
        """
        return cls(characteristic=int(nextprime(floor + rng.randrange(1 << 20))))

    @property
    def domain(self) -> Any:
        """The sympy domain (QQ or GF(p))."""
        return _domain(self.characteristic)

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int | None:
        """Number of elements, or None for QQ."""
        return self.characteristic or None

    @property
    def zero(self) -> Any:
        return self.domain.zero

    @property
    def one(self) -> Any:
        return self.domain.one

    def __str__(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def from_int(self, n: int) -> Any:
        return self.domain(n)

    def from_fraction(self, num: int, den: int = 1) -> Any:
        """
        Convert num/den into the field.

        Raises:
            ExactAlgebraError: If den is zero in this field
        """
        if self.characteristic == 0:
            if den == 0:
                raise ExactAlgebraError("zero denominator")
            return QQ(num, den)
        p = self.characteristic
        if den % p == 0:
            raise ExactAlgebraError(f"denominator {den} vanishes in GF({p})")
        return self.domain(num) / self.domain(den)

    def convert(self, x: Any, source: "GroundField | None" = None) -> Any:
        """
        Convert an element of another ground field (or a Python number) into this one.

        Rationals are reduced modulo p when this field is GF(p); elements of a
        prime field are only accepted by the same prime field.
        """
        if source is not None and source.is_prime_field:
            if source.characteristic != self.characteristic:
                raise ExactAlgebraError(f"cannot convert from {source} to {self}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x.numerator, x.denominator)
        # gmpy2 / python rationals from QQ
        num, den = QQ.numer(QQ.convert(x)), QQ.denom(QQ.convert(x))
        return self.from_fraction(int(num), int(den))

    def to_int(self, x: Any) -> int:
        """Canonical integer representative: 0..p-1 over GF(p); exact integers over QQ."""
        if self.characteristic:
            return int(x) % self.characteristic
        q = QQ.convert(x)
        if QQ.denom(q) != 1:
            raise ExactAlgebraError(f"{self.format(x)} is not an integer")
        return int(QQ.numer(q))

    def parse(self, text: str | int) -> Any:
        """
        Parse a wire scalar: an integer or a "num/den" string.

        Raises:
            ExactAlgebraError: If the text is not an exact scalar (floats included)
        """
        if isinstance(text, bool):
            raise ExactAlgebraError(f"not an exact scalar: {text!r}")
        if isinstance(text, int):
            return self.from_int(text)
        if not isinstance(text, str):
            raise ExactAlgebraError(f"not an exact scalar: {text!r}")
        raw = text.strip()
        try:
            if "/" in raw:
                num_s, den_s = raw.split("/", 1)
                return self.from_fraction(int(num_s), int(den_s))
            return self.from_int(int(raw))
        except ValueError as e:
            raise ExactAlgebraError(f"not an exact scalar: {text!r}") from e

    def format(self, x: Any) -> str:
        """Render an element as "n" or "num/den" (canonical representative over GF(p))."""
        if self.characteristic:
            return str(int(x) % self.characteristic)
        q = QQ.convert(x)
        num, den = int(QQ.numer(q)), int(QQ.denom(q))
        return str(num) if den == 1 else f"{num}/{den}"

    def random_element(self, rng: random.Random) -> Any:
        """Uniform over GF(p); uniform over an integer box for QQ."""
        if self.characteristic:
            return self.domain(rng.randrange(self.characteristic))
        return QQ(rng.randint(-RATIONAL_SAMPLE_BOX, RATIONAL_SAMPLE_BOX))

    def random_nonzero(self, rng: random.Random) -> Any:
        while True:
            x = self.random_element(rng)
            if x != self.zero:
                return x
