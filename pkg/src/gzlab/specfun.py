"""High-precision gamma, log-gamma, digamma jets, zeta jets.

All four evaluators follow the same scheme: shift the argument with the
defining recurrence until the asymptotic series is accurate, run the series
with exact Bernoulli coefficients, undo the shift.  Truncation orders and
shift radii are selected per call from a float-domain bound on the first
omitted term (with a sector penalty sec(arg/2)^terms), so accuracy scales
with the requested precision; the 4x-precision oracle tests pin this down.

    log Gamma(w) = (w - 1/2) log w - w + log(2 pi)/2
                   + sum_j B_{2j} / (2j (2j-1) w^{2j-1})

    psi(w)      = log w - 1/(2w) - sum_j B_{2j} / (2j w^{2j})
    psi^(k)(w)  = (-1)^(k-1) [ (k-1)!/w^k + k!/(2 w^{k+1})
                   + sum_j B_{2j} (2j+1)...(2j+k-1) w^{-2j-k} ]

    zeta^(k)(s) = sum_{n<N} (-log n)^k n^{-s}  +  d^k/ds^k of the tail
                  N^{1-s}/(s-1) + N^{-s}/2
                  + sum_j B_{2j}/(2j)! (s)_{2j-1} N^{1-s-2j}

Derivatives of the zeta tail are taken with exact jet (Leibniz) arithmetic,
never finite differences.
"""

from __future__ import annotations

import math

import gmpy2

from . import diffpoly
from .bernoulli import bernoulli_mpfr, log2_abs_bernoulli
from .errors import (
    ExponentOverflow,
    PoleError,
    PrecisionUnreachable,
)
from .hp import ComplexHP, DEFAULT_CONFIG, PrecisionConfig, context

_LN2 = math.log(2)

# exp() overflows the MPFR exponent range near |argument| ~ 7.4e8
_EXP_ARG_LIMIT = 7.0e8

_SHIFT_STEP_LIMIT = 10**7


def _lgfac2(n: int) -> float:
    """log2 n! for truncation planning."""
    return math.lgamma(n + 1) / _LN2


def _as_mpc(z):
    """Coerce to gmpy2.mpc under the current context."""
    if isinstance(z, ComplexHP):
        return z.mpc()
    if isinstance(z, complex):
        return gmpy2.mpc(z.real, z.imag)
    return gmpy2.mpc(z)


def _check_gamma_pole(z, tol):
    if abs(z.imag) <= tol:
        nearest = math.floor(float(z.real) + 0.5)
        if nearest <= 0 and abs(z - nearest) <= tol:
            raise PoleError(f"gamma pole at {nearest} within tolerance")


# ----------------------------------------------------------------------------
# Stirling-series planning


def _lg_bound_log2(j: int, log2w: float, log2sec: float) -> float:
    # first omitted log-gamma series term, index j
    return (
        log2_abs_bernoulli(2 * j)
        - math.log2(2 * j * (2 * j - 1))
        - (2 * j - 1) * log2w
        + 2 * j * log2sec
    )


def _psi_bound_log2(j: int, k: int, log2w: float, log2sec: float) -> float:
    # first omitted psi^(k) series term, index j
    t = log2_abs_bernoulli(2 * j) - (2 * j + k) * log2w
    if k == 0:
        t -= math.log2(2 * j)
    else:
        t += _lgfac2(2 * j + k - 1) - _lgfac2(2 * j)
    return t + (2 * j + 2 + k) * log2sec


def _stirling_plan(cfg: PrecisionConfig, kmax: int, is_loggamma: bool):
    """Truncation cap and shift radius meeting the series budget."""
    budget = cfg.budget_log2
    j_cap = max(12, int(0.21 * -budget) + kmax + 6)
    if j_cap > cfg.max_series_terms:
        j_cap = cfg.max_series_terms
    # Radius that lets j_cap terms meet the budget even at arg = pi/2
    # (log2 sec(pi/4) = 0.5); solved from the bound formulas above.
    lo, hi = 1.0, 64.0
    bound = _lg_bound_log2 if is_loggamma else (
        lambda j, lw, ls: _psi_bound_log2(j, kmax, lw, ls)
    )
    while bound(j_cap + 1, hi, 0.5) > budget:
        hi *= 2.0
        if hi > 1e12:
            raise PrecisionUnreachable(
                "series cap too small for the requested target"
            )
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bound(j_cap + 1, mid, 0.5) > budget:
            lo = mid
        else:
            hi = mid
    radius = max(cfg.shift_threshold, 2.0 ** hi)
    return j_cap, radius


def _shift_count(z, radius: float) -> int:
    x, y = float(z.real), float(z.imag)
    if abs(y) >= radius and x > 0.5:
        return 0
    need = math.sqrt(max(radius * radius - y * y, 0.0))
    k = max(0, math.ceil(need - x), math.ceil(0.5 - x))
    if k > _SHIFT_STEP_LIMIT:
        raise PrecisionUnreachable("argument shift count beyond sane limits")
    return k


def _select_terms(j_cap, budget, bound) -> int:
    for j in range(1, j_cap + 1):
        if bound(j + 1) <= budget:
            return j
    raise PrecisionUnreachable("series cannot meet the target")


def _sector_log2sec(w) -> float:
    theta = abs(math.atan2(float(w.imag), float(w.real)))
    # sector is restricted to |arg| < pi/2 after shifting
    return -math.log2(max(math.cos(0.5 * theta), 1e-12))


# ----------------------------------------------------------------------------
# log-gamma and gamma


def _log_gamma_raw(z, cfg: PrecisionConfig, wp: int):
    """Principal-branch log-gamma at working precision (context caller-set)."""
    _check_gamma_pole(z, cfg.target_abs_error)
    j_cap, radius = _stirling_plan(cfg, 0, is_loggamma=True)
    shifts = _shift_count(z, radius)
    w = z + shifts
    log2w = math.log2(abs(complex(float(w.real), float(w.imag))))
    log2sec = _sector_log2sec(w)
    nterms = _select_terms(
        j_cap, cfg.budget_log2, lambda j: _lg_bound_log2(j, log2w, log2sec)
    )
    logw = gmpy2.log(w)
    half = gmpy2.mpfr(1) / 2
    acc = (w - half) * logw - w + half * gmpy2.log(2 * gmpy2.const_pi())
    winv = 1 / w
    w2inv = winv * winv
    p = winv
    for j in range(1, nterms + 1):
        acc += bernoulli_mpfr(2 * j, wp) / (2 * j * (2 * j - 1)) * p
        p *= w2inv
    for r in range(shifts):
        acc -= gmpy2.log(z + r)
    return acc


def log_gamma(z, cfg: PrecisionConfig = DEFAULT_CONFIG) -> ComplexHP:
    """log Gamma on the principal branch (absolute error within target)."""
    wp = cfg.working_bits
    with context(wp):
        out = _log_gamma_raw(_as_mpc(z), cfg, wp)
    return ComplexHP.from_mpc(out, cfg.precision_bits)


def gamma(z, cfg: PrecisionConfig = DEFAULT_CONFIG) -> ComplexHP:
    wp = cfg.working_bits
    with context(wp):
        lg = _log_gamma_raw(_as_mpc(z), cfg, wp)
        if abs(lg.real) > _EXP_ARG_LIMIT:
            raise ExponentOverflow("|Re log Gamma| exceeds the exponent range")
        out = gmpy2.exp(lg)
    return ComplexHP.from_mpc(out, cfg.precision_bits)


# ----------------------------------------------------------------------------
# digamma jets


def _digamma_jet_raw(z, n_max: int, cfg: PrecisionConfig, wp: int):
    _check_gamma_pole(z, cfg.target_abs_error)
    j_cap, radius = _stirling_plan(cfg, n_max, is_loggamma=False)
    shifts = _shift_count(z, radius)
    w = z + shifts
    log2w = math.log2(abs(complex(float(w.real), float(w.imag))))
    log2sec = _sector_log2sec(w)
    budget = cfg.budget_log2
    nterms = _select_terms(
        j_cap, budget, lambda j: _psi_bound_log2(j, n_max, log2w, log2sec)
    )

    winv = 1 / w
    w2inv = winv * winv
    wpow = [gmpy2.mpc(1)]
    for _ in range(n_max + 1):
        wpow.append(wpow[-1] * winv)

    sums = [gmpy2.mpc(0) for _ in range(n_max + 1)]
    base = w2inv
    for j in range(1, nterms + 1):
        b = bernoulli_mpfr(2 * j, wp)
        sums[0] += b / (2 * j) * base
        ratio = 1
        for k in range(1, n_max + 1):
            sums[k] += b * ratio * base * wpow[k]
            ratio *= 2 * j + k
        base *= w2inv

    jet = [gmpy2.log(w) - winv / 2 - sums[0]]
    for k in range(1, n_max + 1):
        val = (
            math.factorial(k - 1) * wpow[k]
            + gmpy2.mpfr(math.factorial(k)) / 2 * wpow[k + 1]
            + sums[k]
        )
        jet.append(-val if k % 2 == 0 else val)

    if shifts:
        corr = [gmpy2.mpc(0) for _ in range(n_max + 1)]
        for r in range(shifts):
            inv = 1 / (z + r)
            p = inv
            for k in range(n_max + 1):
                corr[k] += math.factorial(k) * p
                p *= inv
        for k in range(n_max + 1):
            jet[k] -= corr[k] if k % 2 == 0 else -corr[k]
    return jet


def digamma_jet(
    z, n_max: int, cfg: PrecisionConfig = DEFAULT_CONFIG
) -> list[ComplexHP]:
    """(f(z), f'(z), ..., f^(n_max)(z)) with f the digamma function."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    wp = cfg.working_bits
    with context(wp):
        jet = _digamma_jet_raw(_as_mpc(z), n_max, cfg, wp)
    return [ComplexHP.from_mpc(v, cfg.precision_bits) for v in jet]


def gamma_deriv(z, n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> ComplexHP:
    """Gamma^(n)(z) through the exact ratio ladder Gamma^(n) = Gamma * R_n."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    if n == 0:
        return gamma(z, cfg)
    hi = cfg.with_bits(cfg.working_bits)
    jet = digamma_jet(z, max(n - 1, 0), hi)
    ratio = diffpoly.gamma_log_ratio(n).evaluate(jet)
    out = gamma(z, hi) * ratio
    return ComplexHP(out.re, out.im, bits=cfg.precision_bits)


# ----------------------------------------------------------------------------
# zeta jets


def _zeta_params(s, cfg: PrecisionConfig, m_max: int):
    sigma, t = float(s.real), abs(float(s.imag))
    budget = cfg.budget_log2
    j_min = max(1, math.ceil((1.5 - sigma) / 2))
    j_cap = max(j_min + 2, int(0.18 * -budget) + m_max + 8)
    if j_cap > cfg.max_series_terms:
        raise PrecisionUnreachable("zeta tail cap exceeds max_series_terms")
    n_floor = max(20, math.ceil(2 * t))

    # cumulative log2 |s| |s+1| ... so each (j, n) probe is O(1); the clamp
    # keeps non-positive integer s (where the product legitimately hits 0)
    # from poisoning the bound
    prefix = [0.0]
    for i in range(2 * j_cap + 2):
        prefix.append(
            prefix[-1] + math.log2(max(math.hypot(sigma + i, t), 1e-280))
        )

    def bound(j, lo2n):
        tail = (
            log2_abs_bernoulli(2 * j + 2)
            - _lgfac2(2 * j + 2)
            + prefix[2 * j + 1]
            - (sigma + 2 * j + 1) * lo2n
            + math.log2(math.hypot(sigma + 2 * j + 1, t) / (sigma + 2 * j + 1))
        )
        if m_max:
            infl = math.log2(2 * j + 2 + lo2n / _LN2 * 1.45 + 4) + 1.0
            tail += m_max * infl
        return tail + 2.0

    def smallest_j(n):
        lo2n = math.log2(n)
        for j in range(j_min, j_cap + 1):
            if bound(j, lo2n) <= budget:
                return j
        return None

    best = None
    n = n_floor
    while n <= (1 << 24):
        j = smallest_j(n)
        if j is not None:
            cost = n + 6 * j * (m_max + 1)
            if best is None or cost < best[0]:
                best = (cost, n, j)
            elif cost > 1.2 * best[0]:
                break
        n = int(n * 1.3) + 8
    if best is None:
        raise PrecisionUnreachable("Euler-Maclaurin cannot meet the target")
    return best[1], best[2]


def _jet_leibniz(a, b, m):
    return [
        sum(math.comb(k, i) * a[i] * b[k - i] for i in range(k + 1))
        for k in range(m + 1)
    ]


def _jet_linear_mul(a, s, const, m):
    """Jet of a(s) * (s + const) in derivative form."""
    g = s + const
    out = [a[0] * g]
    for k in range(1, m + 1):
        out.append(a[k] * g + k * a[k - 1])
    return out


def _power_jet(v, minus_log, m):
    """Jet of c * b^{-s} given value v and -log b."""
    out = [v]
    for _ in range(m):
        v = v * minus_log
        out.append(v)
    return out


def _zeta_jet_raw(s, m_max: int, cfg: PrecisionConfig):
    if abs(s - 1) <= cfg.target_abs_error:
        raise PoleError("zeta pole at s = 1 within tolerance")
    n_cut, j_terms = _zeta_params(s, cfg, m_max)
    # extra bits: partial sums reach N^(1+|min(sigma,0)|)
    sigma = float(s.real)
    extra = int((max(0.0, -sigma) + 1.0) * math.log2(n_cut)) + 8
    wp = cfg.working_bits + extra

    with context(wp):
        s = +s
        acc = [gmpy2.mpc(1) if k == 0 else gmpy2.mpc(0) for k in range(m_max + 1)]
        for n in range(2, n_cut):
            mlog = -gmpy2.log(gmpy2.mpfr(n))
            v = gmpy2.exp(s * mlog)
            acc[0] += v
            for k in range(1, m_max + 1):
                v = v * mlog
                acc[k] += v

        log_n = gmpy2.log(gmpy2.mpfr(n_cut))
        mlog_n = -log_n
        # N^{1-s}/(s-1)
        pw = _power_jet(gmpy2.exp((1 - s) * log_n), mlog_n, m_max)
        sm1_inv = 1 / (s - 1)
        inv = [sm1_inv]
        for k in range(1, m_max + 1):
            inv.append(-k * inv[k - 1] * sm1_inv)
        for k, v in enumerate(_jet_leibniz(pw, inv, m_max)):
            acc[k] += v
        # N^{-s}/2
        half_pw = _power_jet(gmpy2.exp(-s * log_n) / 2, mlog_n, m_max)
        for k in range(m_max + 1):
            acc[k] += half_pw[k]
        # Bernoulli tail: sum_j B_{2j}/(2j)! (s)_{2j-1} N^{1-s-2j}
        rising = [s if k == 0 else (gmpy2.mpc(1) if k == 1 else gmpy2.mpc(0))
                  for k in range(m_max + 1)]
        npow = _power_jet(gmpy2.exp((-1 - s) * log_n), mlog_n, m_max)
        n2inv = gmpy2.mpfr(n_cut) ** -2
        fac = gmpy2.mpfr(2)
        for j in range(1, j_terms + 1):
            coeff = bernoulli_mpfr(2 * j, wp) / fac
            for k, v in enumerate(_jet_leibniz(rising, npow, m_max)):
                acc[k] += coeff * v
            if j < j_terms:
                rising = _jet_linear_mul(rising, s, 2 * j - 1, m_max)
                rising = _jet_linear_mul(rising, s, 2 * j, m_max)
                npow = [v * n2inv for v in npow]
                fac *= (2 * j + 1) * (2 * j + 2)
        return acc


def zeta_jet(
    s, m_max: int = 0, cfg: PrecisionConfig = DEFAULT_CONFIG
) -> list[ComplexHP]:
    """(zeta(s), zeta'(s), ..., zeta^(m_max)(s)) by Euler-Maclaurin."""
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    with context(cfg.working_bits):
        sm = _as_mpc(s)
    jet = _zeta_jet_raw(sm, m_max, cfg)
    return [ComplexHP.from_mpc(v, cfg.precision_bits) for v in jet]


# ----------------------------------------------------------------------------
# functional-equation residual


def functional_eq_residual(
    z, cfg: PrecisionConfig = DEFAULT_CONFIG
) -> ComplexHP:
    """|zeta(1-z) - 2^{1-z} pi^{-z} cos(pi z/2) Gamma(z) zeta(z)|.

    The two sides agree identically; the returned magnitude is pure
    numerical error and stays within an order of magnitude of the target.
    """
    hi = cfg.with_bits(cfg.working_bits)
    bits = hi.precision_bits
    with context(bits):
        zm = _as_mpc(z)
    zc = ComplexHP.from_mpc(zm, bits)
    lhs = zeta_jet(1 - zc, 0, hi)[0]
    zv = zeta_jet(zc, 0, hi)[0]
    gv = gamma(zc, hi)
    with context(bits):
        pi = gmpy2.const_pi()
        ln2 = gmpy2.log(gmpy2.mpfr(2))
        lnpi = gmpy2.log(pi)
        m = zc.mpc()
        rhs = (
            gmpy2.exp((1 - m) * ln2)
            * gmpy2.exp(-m * lnpi)
            * gmpy2.cos(pi * m / 2)
            * gv.mpc()
            * zv.mpc()
        )
        res = abs(lhs.mpc() - rhs)
    return ComplexHP(res, 0, bits=cfg.precision_bits)
