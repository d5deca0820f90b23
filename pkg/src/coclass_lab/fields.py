"""Exact scalar arithmetic over odd prime fields F_p and the rationals.

Scalars are plain Python values: canonical residues (``int`` in ``[0, p)``)
for prime fields, :class:`fractions.Fraction` for the rationals.  A
:class:`FieldSpec` bundles the arithmetic so matrices, subspaces and
structure constants never have to special-case the field kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]

MAX_PRIME = 1 << 16


class FieldError(ValueError):
    """Rejected field specification (p = 2, composite p, oversized p)."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either F_p for an odd prime p, or the field of rationals.

    Characteristic 2 is rejected outright: every closure statement this
    package checks assumes 1/2 exists, and a silently wrong verdict is
    worse than an error.
    """

    p: int = 0  # 0 encodes the rationals

    def __post_init__(self):
        if self.p == 0:
            return
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not _is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.p >= MAX_PRIME:
            raise FieldError(f"prime {self.p} exceeds the 2^16 cap")

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        if p == 0:
            raise FieldError("prime field needs p >= 3")
        return FieldSpec(p)

    @staticmethod
    def rational() -> "FieldSpec":
        return FieldSpec(0)

    @property
    def is_prime(self) -> bool:
        return self.p != 0

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime else Fraction(1)

    def canon(self, x) -> Scalar:
        """Canonical form of an int/Fraction (residue or reduced fraction)."""
        if self.is_prime:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
                x = x.numerator
            return x % self.p
        return x if isinstance(x, Fraction) else Fraction(x)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a + b) % self.p if self.is_prime else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a - b) % self.p if self.is_prime else a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return (a * b) % self.p if self.is_prime else a * b

    def neg(self, a: Scalar) -> Scalar:
        return (-a) % self.p if self.is_prime else -a

    def inv(self, a: Scalar) -> Scalar:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.is_prime else 1 / a

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def parse(self, text) -> Scalar:
        """Scalar from catalog-file form: int, or "num/den" for rationals."""
        if isinstance(text, int):
            return self.canon(text)
        if isinstance(text, str):
            if "/" in text:
                num, den = text.split("/", 1)
                return self.canon(Fraction(int(num), int(den)))
            return self.canon(int(text))
        raise ValueError(f"bad scalar literal {text!r}")

    def unparse(self, x: Scalar):
        """Catalog-file form: plain int when possible, else "num/den"."""
        if self.is_prime:
            return int(x)
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __str__(self) -> str:
        return f"F{self.p}" if self.is_prime else "Q"
