"""Exact arithmetic in the field Q(sqrt(d)).

A :class:`Surd` stores (a + b*sqrt(d)) / den with plain integers, so sums,
integer multiples, comparisons and floors are decided without any floating
point.  This matters for rotation words: n*alpha mod 1 can land arbitrarily
close to an interval endpoint, and a float comparison there would flip
letters.  Perfect-square radicands are folded away on construction, so a
value is rational exactly when its ``b`` part is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


@dataclass(frozen=True)
class Surd:
    """(a + b*sqrt(d)) / den with integer a, b, den > 0 and integer d >= 0."""

    a: int
    b: int = 0
    den: int = 1
    d: int = 0

    def __post_init__(self):
        a, b, den, d = self.a, self.b, self.den, self.d
        if den == 0:
            raise ValidationError("den: denominator must be nonzero")
        if d < 0:
            raise ValidationError("d: radicand must be non-negative")
        if den < 0:
            a, b, den = -a, -b, -den
        if b == 0:
            d = 0
        else:
            root = math.isqrt(d)
            if root * root == d:
                a, b, d = a + b * root, 0, 0
        g = math.gcd(math.gcd(abs(a), abs(b)), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "d", d)

    @classmethod
    def rational(cls, p: int, q: int = 1) -> "Surd":
        return cls(p, 0, q, 0)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _common_d(self, other: "Surd") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0:
            return self.d
        if self.d != other.d:
            raise ValidationError("d: operands live in different quadratic fields")
        return self.d

    def __add__(self, other):
        other = _coerce(other)
        d = self._common_d(other)
        return Surd(
            self.a * other.den + other.a * self.den,
            self.b * other.den + other.b * self.den,
            self.den * other.den,
            d,
        )

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.den, self.d)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        d = self._common_d(other)
        return Surd(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            self.den * other.den,
            d,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return _sign(a)
        if a == 0:
            return _sign(b)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Mixed signs: compare a^2 against b^2 * d.
        lhs, rhs = a * a, b * b * self.d
        if lhs == rhs:
            return 0
        if a > 0:
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1

    def __eq__(self, other):
        if not isinstance(other, (Surd, int)):
            return NotImplemented
        return (self - other).sign() == 0

    def __hash__(self):
        return hash((self.a, self.b, self.den, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return (self.a + self.b * math.sqrt(self.d)) / self.den

    def floor(self) -> int:
        """Largest integer <= self, decided exactly."""
        k = math.floor(float(self))
        while (self - k).sign() < 0:
            k -= 1
        while (self - (k + 1)).sign() >= 0:
            k += 1
        return k

    def frac(self) -> "Surd":
        """self mod 1, in [0, 1)."""
        return self - self.floor()

    def __repr__(self):
        if self.b == 0:
            core = f"{self.a}"
        else:
            core = f"{self.a}{self.b:+d}*sqrt({self.d})"
        return core if self.den == 1 else f"({core})/{self.den}"


def _coerce(x) -> Surd:
    if isinstance(x, Surd):
        return x
    if isinstance(x, int):
        return Surd(x)
    raise TypeError(f"cannot mix Surd with {type(x).__name__}")
