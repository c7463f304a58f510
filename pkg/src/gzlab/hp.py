"""High-precision complex carrier and precision configuration.

ComplexHP wraps a pair of MPFR reals together with the precision they were
rounded to.  All analytic evaluations in this package produce ComplexHP
values; the heavy series code works on raw gmpy2 objects internally and wraps
results on the way out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .errors import DomainError

DEFAULT_PRECISION_BITS = 256

# Extra working bits used by series evaluations on top of the requested
# precision; absorbs partial-sum magnitudes and shift-recurrence noise.
GUARD_BITS = 48

_REAL_TYPES = (int, float, Fraction, type(gmpy2.mpfr(0)), type(gmpy2.mpz(0)))


def context(bits: int) -> "gmpy2.context":
    return gmpy2.context(precision=bits)


def digits_for_bits(bits: int) -> int:
    """Decimal digit count carried by textual output at a given precision."""
    return max(4, int(bits * math.log10(2)) + 1)


def to_decimal(x, ndigits: int) -> str:
    """Deterministic scientific-notation decimal string for an mpfr value."""
    if not gmpy2.is_finite(x):
        raise DomainError("cannot render a non-finite value")
    if x == 0:
        return "0"
    mant, exp, _ = x.digits(10, ndigits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+03d}"


class ComplexHP:
    """Complex number with explicit working precision.

    Arithmetic between two ComplexHP values is carried out (and the result
    rounded) at the larger of the two operand precisions.
    """

    __slots__ = ("re", "im", "bits")

    def __init__(self, re=0, im=0, bits: int | None = None):
        if isinstance(re, ComplexHP) or isinstance(im, ComplexHP):
            raise TypeError("pass raw real components, not ComplexHP")
        if isinstance(re, complex):
            if im != 0:
                raise TypeError("complex re with separate im is ambiguous")
            re, im = re.real, re.imag
        if bits is None:
            bits = DEFAULT_PRECISION_BITS
        if bits < 2:
            raise DomainError(f"precision_bits must be >= 2, got {bits}")
        with context(bits):
            r = gmpy2.mpfr(re)
            i = gmpy2.mpfr(im)
        if not (gmpy2.is_finite(r) and gmpy2.is_finite(i)):
            raise DomainError("ComplexHP components must be finite")
        object.__setattr__(self, "re", r)
        object.__setattr__(self, "im", i)
        object.__setattr__(self, "bits", int(bits))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexHP is immutable")

    @classmethod
    def from_mpc(cls, z, bits: int) -> "ComplexHP":
        return cls(z.real, z.imag, bits=bits)

    def mpc(self):
        """Raw gmpy2.mpc view (components keep their precision)."""
        return gmpy2.mpc(self.re, self.im)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ComplexHP):
            return other
        if isinstance(other, _REAL_TYPES) or isinstance(other, complex):
            return ComplexHP(other, bits=self.bits)
        return NotImplemented

    def _binop(self, other, fn):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        bits = max(self.bits, other.bits)
        with context(bits):
            return ComplexHP.from_mpc(fn(self.mpc(), other.mpc()), bits)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        with context(self.bits):
            return ComplexHP.from_mpc(self.mpc() ** n, self.bits)

    def __neg__(self):
        return ComplexHP(-self.re, -self.im, bits=self.bits)

    def conjugate(self) -> "ComplexHP":
        return ComplexHP(self.re, -self.im, bits=self.bits)

    def __abs__(self):
        with context(self.bits):
            return abs(self.mpc())

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self, tol=0) -> bool:
        return abs(self.im) <= tol

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        nd = digits_for_bits(self.bits)
        return {
            "re": to_decimal(self.re, nd),
            "im": to_decimal(self.im, nd),
            "bits": self.bits,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ComplexHP":
        return cls(obj["re"], obj["im"], bits=int(obj["bits"]))

    def __repr__(self):
        return (
            f"ComplexHP({to_decimal(self.re, 20)!r}, "
            f"{to_decimal(self.im, 20)!r}, bits={self.bits})"
        )


def exp(z: ComplexHP) -> ComplexHP:
    with context(z.bits):
        return ComplexHP.from_mpc(gmpy2.exp(z.mpc()), z.bits)


def log(z: ComplexHP) -> ComplexHP:
    with context(z.bits):
        return ComplexHP.from_mpc(gmpy2.log(z.mpc()), z.bits)


def cos(z: ComplexHP) -> ComplexHP:
    with context(z.bits):
        return ComplexHP.from_mpc(gmpy2.cos(z.mpc()), z.bits)


def sqrt(z: ComplexHP) -> ComplexHP:
    with context(z.bits):
        return ComplexHP.from_mpc(gmpy2.sqrt(z.mpc()), z.bits)


@dataclass(frozen=True)
class PrecisionConfig:
    """Evaluation contract: precision, error target and series limits.

    target_abs_error defaults to 2**(16 - precision_bits), comfortably above
    the representable floor 2**(1 - precision_bits) demanded of any target.
    shift_threshold is the minimum modulus before asymptotic series are
    trusted; the effective shift radius grows with the precision and is never
    below this value.
    """

    precision_bits: int = DEFAULT_PRECISION_BITS
    target_abs_error: object = None
    max_series_terms: int = 4096
    shift_threshold: float = 16.0

    def __post_init__(self):
        if self.precision_bits < 8:
            raise DomainError("precision_bits must be at least 8")
        if self.max_series_terms < 1:
            raise DomainError("max_series_terms must be positive")
        if self.shift_threshold < 8:
            raise DomainError("shift_threshold must be >= 8")
        if self.target_abs_error is None:
            with context(64):
                target = gmpy2.exp2(16 - self.precision_bits)
        else:
            with context(64):
                target = gmpy2.mpfr(self.target_abs_error)
        if target <= 0:
            raise DomainError("target_abs_error must be positive")
        with context(64):
            floor = gmpy2.exp2(1 - self.precision_bits)
        if target < floor:
            raise DomainError(
                "target_abs_error below the representable floor "
                f"2^(1-{self.precision_bits})"
            )
        object.__setattr__(self, "target_abs_error", target)

    @property
    def working_bits(self) -> int:
        need = int(-gmpy2.log2(self.target_abs_error)) + 24
        return max(self.precision_bits + GUARD_BITS, need)

    @property
    def budget_log2(self) -> float:
        """log2 of the series truncation budget (below the stated target)."""
        return float(gmpy2.log2(self.target_abs_error)) - 8.0

    def with_bits(self, bits: int) -> "PrecisionConfig":
        """Same limits at a different precision with the default target."""
        return PrecisionConfig(
            precision_bits=bits,
            max_series_terms=self.max_series_terms,
            shift_threshold=self.shift_threshold,
        )

    def oracle(self, factor: int = 4) -> "PrecisionConfig":
        """Cross-check configuration at a multiple of the precision."""
        return self.with_bits(self.precision_bits * factor)


DEFAULT_CONFIG = PrecisionConfig()
