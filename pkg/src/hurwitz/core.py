"""Shared arithmetic and parameter types.

A double Hurwitz number H_g(mu, nu) counts degree-d branched covers of the
sphere by genus-g curves with ramification profile mu over 0, nu over infinity,
and r = 2g - 2 + m + n further simple branch points (m = len(mu), n = len(nu)).
Everything downstream works with exact rationals; there is no floating-point
mode anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class HurwitzError(Exception):
    """Base class for all domain errors raised by this package."""


class DegreeMismatch(HurwitzError):
    """sum(mu) != sum(nu)."""


class NegativeR(HurwitzError):
    """2g - 2 + m + n < 0 (no such cover exists)."""


class RZero(HurwitzError):
    """A graph-based method was asked for an r = 0 family it cannot represent."""


class DivisionByZero(HurwitzError):
    """Rational division by zero."""


class NonIntegerGenus(HurwitzError):
    """V - E + F is odd, so the object is not a map on a closed surface."""


class NonterminatingTrace(HurwitzError):
    """A traffic-rule trace closed up without meeting a tick mark."""


class InvalidChain(HurwitzError):
    """Consecutive quotients of a permutation chain are not transpositions,
    or the chain admits no ribbon-graph realization."""


class InconsistentFiber(HurwitzError):
    """Two weightings of one skeleton tropicalized to different tropical
    skeletons; this would falsify the claimed linearity of tropicalization."""


class OnWall(HurwitzError):
    """A parameter point lies on a wall, so its chamber is undefined."""


class FitFailed(HurwitzError):
    """An interpolated chamber polynomial failed exact hold-out validation."""


class InsufficientSamples(HurwitzError):
    """Not enough in-chamber integer points to determine the polynomial."""


class Partition:
    """An ordered tuple of positive integers (mu_1, ..., mu_m).

    The order matters: part i is the label of the i-th marked preimage, so
    (2, 1) and (1, 2) are different partitions for our purposes.
    """

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be >= 1, got {parts}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash(("Partition", self.parts))

    def __repr__(self):
        return f"Partition({self.parts})"

    def sorted_desc(self) -> tuple:
        """The underlying multiset, as a descending tuple."""
        return tuple(sorted(self.parts, reverse=True))

    def serialize(self) -> str:
        """Comma-separated parts, e.g. "2,1"."""
        return ",".join(str(p) for p in self.parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        try:
            return cls(int(p) for p in text.split(","))
        except ValueError as exc:
            raise ValueError(f"cannot parse partition from {text!r}") from exc


# Exact rational arithmetic is delegated to the standard library; Fraction
# already keeps values in lowest terms with a positive denominator, which is
# exactly the invariant we need.
Rational = Fraction


def rational_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    """Apply one of '+', '-', '*', '/' to two exact rationals."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise DivisionByZero("rational division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def format_rational(q: Fraction) -> str:
    """Serialize as "p/q", or just "p" when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class HurwitzParams:
    """Validated parameter triple (g, mu, nu) with the derived quantities.

    Invariants: sum(mu) == sum(nu) == d and r == 2g - 2 + m + n >= 0.
    r == 0 is legal here (the case g = 0, mu = nu = (d)); the graph-based
    counting methods reject it separately because a graph with zero vertices
    is degenerate.
    """

    g: int
    mu: Partition
    nu: Partition
    d: int = field(init=False)
    m: int = field(init=False)
    n: int = field(init=False)
    r: int = field(init=False)

    def __post_init__(self):
        if self.g < 0:
            raise ValueError(f"genus must be >= 0, got {self.g}")
        if self.mu.size != self.nu.size:
            raise DegreeMismatch(
                f"sum(mu) = {self.mu.size} != sum(nu) = {self.nu.size}"
            )
        object.__setattr__(self, "d", self.mu.size)
        object.__setattr__(self, "m", len(self.mu))
        object.__setattr__(self, "n", len(self.nu))
        r = 2 * self.g - 2 + self.m + self.n
        if r < 0:
            raise NegativeR(f"r = 2g-2+m+n = {r} < 0")
        object.__setattr__(self, "r", r)

    def describe(self) -> dict:
        return {
            "g": self.g,
            "mu": self.mu.serialize(),
            "nu": self.nu.serialize(),
            "d": self.d,
            "m": self.m,
            "n": self.n,
            "r": self.r,
        }


def hurwitz_params(g: int, mu, nu) -> HurwitzParams:
    """Build validated parameters; raises DegreeMismatch or NegativeR."""
    if not isinstance(mu, Partition):
        mu = Partition(mu)
    if not isinstance(nu, Partition):
        nu = Partition(nu)
    return HurwitzParams(g, mu, nu)
