"""Physical dimensions as exponent vectors over five base quantities."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

BASES = ("length", "mass", "time", "charge", "amount")
_SYMBOLS = {"length": "L", "mass": "M", "time": "T", "charge": "Q", "amount": "N"}
_TOKEN = re.compile(r"^([a-z]+)(?:\^([+-]?\d+(?:/\d+)?))?$")


@dataclass(frozen=True, repr=False)
class Dimension:
    length: Fraction = Fraction(0)
    mass: Fraction = Fraction(0)
    time: Fraction = Fraction(0)
    charge: Fraction = Fraction(0)
    amount: Fraction = Fraction(0)

    def __post_init__(self):
        for name in BASES:
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(getattr(self, b) for b in BASES)

    @property
    def is_dimensionless(self) -> bool:
        return not any(self.exponents)

    def __mul__(self, other: Dimension) -> Dimension:
        return Dimension(*(a + b for a, b in zip(self.exponents, other.exponents)))

    def __truediv__(self, other: Dimension) -> Dimension:
        return Dimension(*(a - b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, power) -> Dimension:
        p = Fraction(power)
        return Dimension(*(a * p for a in self.exponents))

    def __repr__(self):
        return f"Dimension.parse({self.to_text()!r})"

    def __str__(self):
        if self.is_dimensionless:
            return "1"
        parts = []
        for base, exp in zip(BASES, self.exponents):
            if exp:
                sym = _SYMBOLS[base]
                parts.append(sym if exp == 1 else f"{sym}^{exp}")
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> Dimension:
        """Parse e.g. ``"mass length^2 time^-2 amount^-1"``; empty means dimensionless."""
        exps = dict.fromkeys(BASES, Fraction(0))
        for token in (text or "").split():
            m = _TOKEN.match(token)
            if not m or m.group(1) not in exps:
                raise ValueError(f"bad dimension token {token!r}")
            exps[m.group(1)] += Fraction(m.group(2) or 1)
        return cls(**exps)

    def to_text(self) -> str:
        parts = []
        for base, exp in zip(BASES, self.exponents):
            if exp:
                parts.append(base if exp == 1 else f"{base}^{exp}")
        return " ".join(parts)


DIMENSIONLESS = Dimension()
LENGTH = Dimension(length=1)
MASS = Dimension(mass=1)
CHARGE = Dimension(charge=1)
# molar energy; the time unit is implied by kcal/mol, u and angstrom
ENERGY = Dimension(mass=1, length=2, time=-2, amount=-1)
