"""Numeric verification of the asymptotic ladder attached to the ratio
polynomials R_n = Gamma^(n)/Gamma.

Writing H = f'/f^2, every R_n factors as f^n [1 + H (c_n + eps_n)] with
c_n = n(n-1)/2 and a correction eps_n that vanishes at infinity like
K_n / (z log z), K_n = -n(n-1)(n-2)/6.  This module measures eps_n from the
exact polynomial ladder and the digamma jets, compares against the predicted
leading term, and checks the companion limits

    H(z) z (log z)^2 -> 1,        (f''/(f f')) z log z -> -1,

together with the modulus law |Gamma(3/4+iy)| ~ e^{-pi y/2} y^{1/4} sqrt(2pi).

Tolerances for the "-> 1" claims are encoded as monotone-improvement
assertions plus a final band, since no convergence rate is guaranteed beyond
the leading term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from . import diffpoly, specfun
from .errors import DivisionNearZero, DomainError, SectorError
from .hp import ComplexHP, DEFAULT_CONFIG, PrecisionConfig, context

# admissible sector: |arg z| <= pi/2 with a whisker of slack, |z| >= 10
_MIN_MODULUS = 10.0
_ARG_SLACK = 1e-12


def _check_admissible(z: ComplexHP) -> None:
    x, y = float(z.re), float(z.im)
    if math.hypot(x, y) < _MIN_MODULUS:
        raise SectorError(f"|z| must be >= {_MIN_MODULUS}")
    if abs(math.atan2(y, x)) > math.pi / 2 + _ARG_SLACK:
        raise SectorError("z outside the sector |arg z| <= pi/2")


def _as_hp(z, bits) -> ComplexHP:
    if isinstance(z, ComplexHP):
        return z
    if isinstance(z, complex):
        return ComplexHP(z.real, z.imag, bits=bits)
    return ComplexHP(z, bits=bits)


def epsilon_leading(n: int) -> Fraction:
    """K_n with eps_n(z) = K_n/(z log z) (1 + o(1)); zero for n <= 2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(-n * (n - 1) * (n - 2), 6)


def _epsilon_raw(z: ComplexHP, n: int, cfg: PrecisionConfig):
    hi = cfg.with_bits(cfg.working_bits)
    jet = specfun.digamma_jet(z, max(n - 1, 1), hi)
    f, fp = jet[0], jet[1]
    floor_log2 = -(cfg.precision_bits // 2)
    for name, v in (("f", f), ("f'", fp)):
        a = abs(v)
        if a == 0 or gmpy2.log2(a) < floor_log2:
            raise DivisionNearZero(f"{name}(z) below the precision floor")
    ratio = diffpoly.gamma_log_ratio(n).evaluate(jet)
    c_n = n * (n - 1) // 2
    eps = (ratio / f ** n - 1) * f * f / fp - c_n
    return eps, jet, ratio


def epsilon_n(z, n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> ComplexHP:
    """Correction eps_n(z) from the exact factorization of Gamma^(n)/Gamma."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = _as_hp(z, cfg.precision_bits)
    _check_admissible(z)
    eps, _, _ = _epsilon_raw(z, n, cfg)
    return ComplexHP(eps.re, eps.im, bits=cfg.precision_bits)


def recompose_ratio(z, n: int, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """(f^n [1 + H (c_n + eps_n)], direct R_n value): a wiring guard.

    Both entries are the same analytic quantity; they differ only by
    round-off, so their relative gap bounds implementation error.
    """
    z = _as_hp(z, cfg.precision_bits)
    _check_admissible(z)
    eps, jet, ratio = _epsilon_raw(z, n, cfg)
    f, fp = jet[0], jet[1]
    h = fp / (f * f)
    c_n = n * (n - 1) // 2
    recomposed = f ** n * (1 + h * (c_n + eps))
    return recomposed, ratio


@dataclass(frozen=True)
class AsymptoticReport:
    """Measured vs predicted values of eps_n along a modulus-sorted grid."""

    n: int
    sample_points: tuple
    measured: tuple
    predicted: tuple
    ratios: tuple
    converging: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "points": [z.to_json() for z in self.sample_points],
            "measured": [v.to_json() for v in self.measured],
            "predicted": [v.to_json() for v in self.predicted],
            "ratios": [v.to_json() for v in self.ratios],
            "converging": self.converging,
        }


def verify_epsilon(
    n: int, zs, cfg: PrecisionConfig = DEFAULT_CONFIG
) -> AsymptoticReport:
    """Measure eps_n along zs and compare with K_n/(z log z)."""
    bits = cfg.precision_bits
    points = [_as_hp(z, bits) for z in zs]
    if not points:
        raise DomainError("need at least one sample point")
    moduli = [abs(z) for z in points]
    if any(b < a for a, b in zip(moduli, moduli[1:])):
        raise DomainError("sample points must be sorted by increasing modulus")

    k_n = epsilon_leading(n)
    vanish_tol = gmpy2.exp2(20 - bits)
    measured, predicted, ratios = [], [], []
    for z in points:
        eps = epsilon_n(z, n, cfg)
        measured.append(eps)
        if k_n == 0:
            predicted.append(ComplexHP(0, bits=bits))
            ratios.append(ComplexHP(0, bits=bits))
        else:
            with context(cfg.working_bits):
                p = gmpy2.mpfr(k_n) / (z.mpc() * gmpy2.log(z.mpc()))
                r = eps.mpc() / p
            predicted.append(ComplexHP.from_mpc(p, bits))
            ratios.append(ComplexHP.from_mpc(r, bits))

    if k_n == 0:
        converging = all(abs(m) < vanish_tol for m in measured)
    else:
        devs = [abs(r - 1) for r in ratios]
        mags = [abs(m) for m in measured]
        converging = (
            all(b <= a for a, b in zip(devs, devs[1:]))
            and devs[-1] < 0.3
            and all(b < a for a, b in zip(mags, mags[1:]))
        )
    return AsymptoticReport(
        n=n,
        sample_points=tuple(points),
        measured=tuple(measured),
        predicted=tuple(predicted),
        ratios=tuple(ratios),
        converging=converging,
    )


def h_limits(z, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """(H(z) z (log z)^2, (f''/(f f'))(z) z log z); limits are (1, -1)."""
    z = _as_hp(z, cfg.precision_bits)
    _check_admissible(z)
    hi = cfg.with_bits(cfg.working_bits)
    jet = specfun.digamma_jet(z, 2, hi)
    f, fp, fpp = (v.mpc() for v in jet)
    with context(hi.precision_bits):
        zm = z.mpc()
        lg = gmpy2.log(zm)
        first = fp / (f * f) * zm * lg * lg
        second = fpp / (f * fp) * zm * lg
    bits = cfg.precision_bits
    return ComplexHP.from_mpc(first, bits), ComplexHP.from_mpc(second, bits)


def stirling_modulus_ratio(
    y, cfg: PrecisionConfig = DEFAULT_CONFIG
) -> ComplexHP:
    """|Gamma(3/4+iy)| over its modulus law, computed in the log domain.

    e^{-pi y/2} underflows fixed-format floats near y ~ 465; working with
    Re log Gamma directly keeps the ratio finite for y up to 1e6 and beyond.
    """
    y = float(y)
    if y < 1:
        raise DomainError("y must be >= 1")
    hi = cfg.with_bits(cfg.working_bits)
    lg = specfun.log_gamma(ComplexHP(0.75, y, bits=hi.precision_bits), hi)
    with context(hi.precision_bits):
        yv = gmpy2.mpfr(y)
        log_law = (
            -gmpy2.const_pi() * yv / 2
            + gmpy2.log(yv) / 4
            + gmpy2.log(2 * gmpy2.const_pi()) / 2
        )
        ratio = gmpy2.exp(lg.re - log_law)
    return ComplexHP(ratio, 0, bits=cfg.precision_bits)
