"""Empirical density probe of the zeta jet curve on a vertical line.

For fixed x in (1/2, 1) the curve y -> (zeta(x+iy), zeta'(x+iy), ...,
zeta^(m)(x+iy)) is dense in C^{m+1}; this module samples it on a grid and
hunts for near-approaches to a target vector.  Distances use the Euclidean
norm on C^{m+1} viewed as R^{2(m+1)} (the density statement is topological,
so any norm would do).  Observed approach distances are evidence only: no
rate is guaranteed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2

from . import specfun
from .errors import DomainError, LimitExceeded
from .hp import ComplexHP, DEFAULT_CONFIG, PrecisionConfig, context

MAX_DERIVATIVES = 6  # desk-scale cap on the jet length

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_REFINE_STEPS = 60


@dataclass(frozen=True)
class CurveSample:
    """One curve point: height y and the jet values at x + iy."""

    y: float
    values: tuple

    def to_json(self) -> dict:
        return {
            "y": repr(self.y),
            "values": [v.to_json() for v in self.values],
        }


@dataclass(frozen=True)
class ApproachResult:
    """Best sampled approach to a target within a height range."""

    best_y: float
    distance: ComplexHP
    samples_scanned: int
    range: tuple

    def to_json(self) -> dict:
        return {
            "best_y": repr(self.best_y),
            "distance": self.distance.to_json(),
            "samples_scanned": self.samples_scanned,
            "range": [repr(self.range[0]), repr(self.range[1])],
        }


def _check_x(x: float) -> None:
    if not (0.5 < x < 1.0):
        raise DomainError("x must lie strictly inside (1/2, 1)")


def gamma_curve(
    y: float,
    m: int = 0,
    x: float = 0.75,
    cfg: PrecisionConfig = DEFAULT_CONFIG,
) -> CurveSample:
    """Jet of zeta at x + iy, the curve point at height y."""
    _check_x(x)
    if m < 0:
        raise DomainError("m must be non-negative")
    if m > MAX_DERIVATIVES:
        raise LimitExceeded(f"m capped at {MAX_DERIVATIVES}")
    y = float(y)
    z = ComplexHP(x, y, bits=cfg.precision_bits)
    return CurveSample(y=y, values=tuple(specfun.zeta_jet(z, m, cfg)))


def _distance(values, target, bits):
    with context(bits + 16):
        acc = gmpy2.mpfr(0)
        for v, t in zip(values, target):
            acc += gmpy2.norm(v.mpc() - t.mpc())
        return gmpy2.sqrt(acc)


def _coerce_target(target, m, bits):
    out = []
    for t in target:
        if isinstance(t, ComplexHP):
            out.append(t)
        elif isinstance(t, complex):
            out.append(ComplexHP(t.real, t.imag, bits=bits))
        else:
            out.append(ComplexHP(t, bits=bits))
    if len(out) != m + 1:
        raise DomainError(f"target must have {m + 1} entries for m={m}")
    return tuple(out)


def nearest_approach(
    target,
    y_range,
    step: float,
    m: int = 0,
    x: float = 0.75,
    cfg: PrecisionConfig = DEFAULT_CONFIG,
) -> ApproachResult:
    """Grid scan over [lo, hi] plus one golden-section refinement pass.

    The grid is anchored at integer multiples of the step (endpoints always
    included), so scans over nested ranges sample nested point sets.  Ties
    break toward smaller y; the refinement never discards the grid optimum.
    """
    _check_x(x)
    if m < 0 or m > MAX_DERIVATIVES:
        raise LimitExceeded(f"m must be within 0..{MAX_DERIVATIVES}")
    lo, hi = float(y_range[0]), float(y_range[1])
    if hi < lo:
        raise DomainError("empty y range")
    step = float(step)
    if step <= 0:
        raise DomainError("step must be positive")
    bits = cfg.precision_bits
    target = _coerce_target(target, m, bits)

    grid = {lo, hi}
    k = math.ceil(lo / step - 1e-9)
    while True:
        y = k * step
        if y > hi + 1e-9 * max(1.0, abs(hi)):
            break
        if lo <= y <= hi:
            grid.add(y)
        k += 1
    ys = sorted(grid)

    def measure(y):
        sample = gamma_curve(y, m, x, cfg)
        return _distance(sample.values, target, bits)

    scanned = 0
    best_y, best_d = None, None
    for y in ys:
        d = measure(y)
        scanned += 1
        if best_d is None or d < best_d:
            best_y, best_d = y, d

    # one golden-section pass on the best grid cell
    a = max(lo, best_y - step)
    b = min(hi, best_y + step)
    if b > a:
        c = b - _INVPHI * (b - a)
        d_pt = a + _INVPHI * (b - a)
        fc, fd = measure(c), measure(d_pt)
        scanned += 2
        for _, (y, dist) in zip(range(2), ((c, fc), (d_pt, fd))):
            if dist < best_d or (dist == best_d and y < best_y):
                best_y, best_d = y, dist
        for _ in range(_REFINE_STEPS):
            if fc < fd:
                b, d_pt, fd = d_pt, c, fc
                c = b - _INVPHI * (b - a)
                fc = measure(c)
                y_new, d_new = c, fc
            else:
                a, c, fc = c, d_pt, fd
                d_pt = a + _INVPHI * (b - a)
                fd = measure(d_pt)
                y_new, d_new = d_pt, fd
            scanned += 1
            if d_new < best_d or (d_new == best_d and y_new < best_y):
                best_y, best_d = y_new, d_new

    return ApproachResult(
        best_y=best_y,
        distance=ComplexHP(best_d, 0, bits=bits),
        samples_scanned=scanned,
        range=(lo, hi),
    )


def density_trend(
    target,
    ranges,
    step: float,
    m: int = 0,
    x: float = 0.75,
    cfg: PrecisionConfig = DEFAULT_CONFIG,
) -> list[ApproachResult]:
    """nearest_approach over an expanding sequence of nested ranges.

    Each scan inherits the previous best point as an extra sample (it lies
    inside the larger range), so reported minima are exactly non-increasing
    even though refinement paths differ between ranges.
    """
    ranges = [(float(a), float(b)) for a, b in ranges]
    for (a0, b0), (a1, b1) in zip(ranges, ranges[1:]):
        if a1 > a0 or b1 < b0:
            raise DomainError("ranges must be nested and expanding")
    out: list[ApproachResult] = []
    prev: ApproachResult | None = None
    for rng in ranges:
        cur = nearest_approach(target, rng, step, m, x, cfg)
        if prev is not None:
            better = abs(prev.distance) < abs(cur.distance) or (
                abs(prev.distance) == abs(cur.distance)
                and prev.best_y < cur.best_y
            )
            if better:
                cur = ApproachResult(
                    best_y=prev.best_y,
                    distance=prev.distance,
                    samples_scanned=cur.samples_scanned,
                    range=rng,
                )
        out.append(cur)
        prev = cur
    return out
