"""Triple-graded decomposition and the dominance-based falsifier.

A candidate identity is a polynomial P(u_0..u_m; v_0, v_n, v_l) with constant
complex coefficients, where the u's stand for zeta and its derivatives and
the v's for Gamma, Gamma^(n), Gamma^(l).  Each v-monomial carries a triple
exponent lambda = (l0, ln, ll) with three gradings:

    |lambda|   = l0 + ln + ll          (total v-degree, "p")
    |lambda|*  = n ln + l ll           (derivative weight, "q")
    |lambda|** = ln + ll               (derivative count, "j")

Because det [[1,1,1],[0,n,l],[0,1,1]] = n - l is nonzero, (p, q, j) pins
lambda down uniquely (Cramer), which turns the homogeneous part P_p, divided
by Gamma^p and expanded in H = f'/f^2, into a doubly indexed family b_{q,t}.
In the large-|z| limit the epsilon corrections drop out and

    b_hat(q, t)(u) = sum_j a_{lambda(p,q,j)}(u)
                     sum_{i+i'=t} C(ln,i) c_n^i C(ll,i') c_l^{i'}

with c_k = k(k-1)/2.  The first nonzero b_hat in the scan order (t ascending,
q descending within each t) predicts the growth envelope
|log z|^(q0-2t0) / |z|^t0 of |P_p| along z = 3/4 + iy; the falsifier samples
that line and reports whether the measured magnitudes track the prediction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import gmpy2

from . import diffpoly, specfun
from .errors import DomainError, ZeroPolynomial
from .hp import ComplexHP, DEFAULT_CONFIG, PrecisionConfig, context

NONZERO_THRESHOLD_LOG10 = -30  # |b_hat| above 1e-30 at any sample counts

VERDICT_EVIDENCE = "NONVANISHING_EVIDENCE"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class LambdaTriple:
    """Exponent triple (l0, ln, ll) of a monomial v0^l0 vn^ln vl^ll."""

    l0: int
    ln: int
    ll: int

    def __post_init__(self):
        if min(self.l0, self.ln, self.ll) < 0:
            raise DomainError("lambda entries must be non-negative")

    def total_degree(self) -> int:
        return self.l0 + self.ln + self.ll

    def deriv_weight(self, spec: "VarSpec") -> int:
        return spec.n * self.ln + spec.l * self.ll

    def deriv_count(self) -> int:
        return self.ln + self.ll


@dataclass(frozen=True)
class VarSpec:
    """Variable shape: zeta derivatives 0..m, Gamma derivatives {0, n, l}."""

    m: int
    n: int
    l: int

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("m must be non-negative")
        if not (1 <= self.n < self.l):
            raise DomainError("need 1 <= n < l")


def gradings(lam: LambdaTriple, spec: VarSpec):
    """(p, q, j) = (|lambda|, |lambda|*, |lambda|**)."""
    return lam.total_degree(), lam.deriv_weight(spec), lam.deriv_count()


def index_matrix_det(spec: VarSpec) -> int:
    """Exact cofactor determinant of the grading system's matrix."""
    b = ((1, 1, 1), (0, spec.n, spec.l), (0, 1, 1))
    return (
        b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0])
    )


def lambda_from_pqj(p: int, q: int, j: int, spec: VarSpec):
    """Invert the gradings; None when no lambda maps to (p, q, j).

    Uniqueness is Cramer's rule: the grading matrix has determinant n - l,
    nonzero by the VarSpec invariant.
    """
    num = q - spec.n * j
    den = spec.l - spec.n
    if num % den:
        return None
    ll = num // den
    ln = j - ll
    l0 = p - j
    if min(l0, ln, ll) < 0:
        return None
    return LambdaTriple(l0, ln, ll)


class PolySpec:
    """Candidate polynomial with constant complex coefficients.

    terms maps (u_exponents, LambdaTriple) -> ComplexHP with u_exponents a
    tuple of length m+1; zero coefficients are never stored.
    """

    __slots__ = ("spec", "_terms")

    def __init__(self, spec: VarSpec, terms: dict):
        clean = {}
        for (u_exps, lam), coeff in terms.items():
            u_exps = tuple(int(e) for e in u_exps)
            if len(u_exps) != spec.m + 1:
                raise DomainError(
                    f"u-exponent vector must have length {spec.m + 1}"
                )
            if any(e < 0 for e in u_exps):
                raise DomainError("u exponents must be non-negative")
            if not isinstance(coeff, ComplexHP):
                coeff = ComplexHP(coeff)
            if coeff.re == 0 and coeff.im == 0:
                continue
            key = (u_exps, lam)
            prev = clean.get(key)
            merged = coeff if prev is None else prev + coeff
            if merged.re == 0 and merged.im == 0:
                clean.pop(key, None)
            else:
                clean[key] = merged
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PolySpec is immutable")

    def terms(self):
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, PolySpec):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    def __len__(self):
        return len(self._terms)

    def lambda_degrees(self) -> set:
        return {lam.total_degree() for _, lam in self._terms}

    def max_deriv_weight(self) -> int:
        return max(
            (lam.deriv_weight(self.spec) for _, lam in self._terms), default=0
        )

    def max_deriv_count(self) -> int:
        return max((lam.deriv_count() for _, lam in self._terms), default=0)


def homogeneous_parts(p: PolySpec) -> dict:
    """Split by total v-degree; the parts sum back to the original."""
    buckets: dict[int, dict] = {}
    for key, coeff in p.terms().items():
        buckets.setdefault(key[1].total_degree(), {})[key] = coeff
    return {
        deg: PolySpec(p.spec, terms) for deg, terms in sorted(buckets.items())
    }


def _u_power(u_values, u_exps, bits) -> ComplexHP:
    acc = ComplexHP(1, bits=bits)
    for v, e in zip(u_values, u_exps):
        if e:
            acc = acc * v ** e
    return acc


def a_lambda(p_part: PolySpec, lam: LambdaTriple, u_values) -> ComplexHP:
    """The u-polynomial coefficient attached to lambda, evaluated at u."""
    if len(u_values) != p_part.spec.m + 1:
        raise DomainError("u vector arity does not match the variable spec")
    bits = max((u.bits for u in u_values), default=ComplexHP(0).bits)
    acc = ComplexHP(0, bits=bits)
    for (u_exps, term_lam), coeff in p_part._terms.items():
        if term_lam == lam:
            acc = acc + coeff * _u_power(u_values, u_exps, bits)
    return acc


def _c_ladder(k: int) -> int:
    return k * (k - 1) // 2


def b_hat(p_part: PolySpec, q: int, t: int, u_values) -> ComplexHP:
    """Limit coefficient of f^q H^t in the rearranged homogeneous part.

    Missing (p, q, j) combinations contribute the zero polynomial.  The
    homogeneous degree p is read off the part itself.
    """
    spec = p_part.spec
    bits = max((u.bits for u in u_values), default=ComplexHP(0).bits)
    acc = ComplexHP(0, bits=bits)
    degrees = p_part.lambda_degrees()
    if not degrees:
        return acc
    if len(degrees) != 1:
        raise DomainError("b_hat expects a |lambda|-homogeneous part")
    p = degrees.pop()
    c_n, c_l = _c_ladder(spec.n), _c_ladder(spec.l)
    for j in range(p_part.max_deriv_count() + 1):
        lam = lambda_from_pqj(p, q, j, spec)
        if lam is None:
            continue
        weight = sum(
            math.comb(lam.ln, i) * c_n ** i
            * math.comb(lam.ll, t - i) * c_l ** (t - i)
            for i in range(t + 1)
        )
        if weight == 0:
            continue
        acc = acc + a_lambda(p_part, lam, u_values) * weight
    return acc


def first_nonzero_b(p_part: PolySpec, u_samples):
    """First (q, t) with a nonvanishing b_hat in the dominance scan order.

    Scans t = 0..N outer and q = M..0 inner; a coefficient counts as nonzero
    when it exceeds 1e-30 in modulus at any of the supplied u samples.
    Returns None when everything vanishes.
    """
    thr_log10 = NONZERO_THRESHOLD_LOG10
    m_q = p_part.max_deriv_weight()
    n_t = p_part.max_deriv_count()
    for t in range(n_t + 1):
        for q in range(m_q, -1, -1):
            for u in u_samples:
                val = abs(b_hat(p_part, q, t, u))
                if val > 0 and gmpy2.log10(val) > thr_log10:
                    return q, t
    return None


def envelope(q0: int, t0: int, z) -> ComplexHP:
    """Growth proxy |log z|^(q0-2t0) / |z|^t0 of the leading term."""
    if not isinstance(z, ComplexHP):
        z = ComplexHP(z) if not isinstance(z, complex) else ComplexHP(
            z.real, z.imag
        )
    if float(abs(z)) <= 1.0:
        raise DomainError("envelope needs |z| > 1")
    with context(z.bits):
        zm = z.mpc()
        val = abs(gmpy2.log(zm)) ** (q0 - 2 * t0) / abs(zm) ** t0
    return ComplexHP(val, 0, bits=z.bits)


def evaluate_P(
    p: PolySpec, z, cfg: PrecisionConfig = DEFAULT_CONFIG
) -> ComplexHP:
    """Substitute zeta jets for u and Gamma derivatives for v at z."""
    spec = p.spec
    bits = cfg.precision_bits
    if not isinstance(z, ComplexHP):
        z = ComplexHP(z.real, z.imag, bits=bits) if isinstance(z, complex) \
            else ComplexHP(z, bits=bits)
    hi = cfg.with_bits(cfg.working_bits)
    u = specfun.zeta_jet(z, spec.m, hi)
    g0 = specfun.gamma(z, hi)
    gn = specfun.gamma_deriv(z, spec.n, hi)
    gl = specfun.gamma_deriv(z, spec.l, hi)
    acc = ComplexHP(0, bits=hi.precision_bits)
    for (u_exps, lam), coeff in p.terms().items():
        term = coeff * _u_power(u, u_exps, hi.precision_bits)
        term = term * g0 ** lam.l0 * gn ** lam.ln * gl ** lam.ll
        acc = acc + term
    return ComplexHP(acc.re, acc.im, bits=bits)


@dataclass(frozen=True)
class DominanceReport:
    """Leading-term prediction and measured magnitudes along z = 3/4 + iy.

    verdict is NONVANISHING_EVIDENCE when measured/predicted stays inside
    [0.25, 4] on the trailing half of the samples; this is numeric evidence
    of the predicted growth, never a proof.
    """

    p0: int
    q0: int
    t0: int
    b_hat_value: ComplexHP
    samples: tuple  # (y, measured |P_p0 / Gamma^p0|, predicted envelope value)
    verdict: str

    def to_json(self) -> dict:
        return {
            "p0": self.p0,
            "q0": self.q0,
            "t0": self.t0,
            "b_hat_value": self.b_hat_value.to_json(),
            "samples": [
                {
                    "y": repr(y),
                    "measured": m.to_json(),
                    "predicted": p.to_json(),
                }
                for y, m, p in self.samples
            ],
            "verdict": self.verdict,
        }


def _random_u_vectors(count, arity, bits, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(
            tuple(
                ComplexHP(rng.uniform(-2, 2), rng.uniform(-2, 2), bits=bits)
                for _ in range(arity)
            )
        )
    return out


def falsify(
    p: PolySpec,
    y_list,
    cfg: PrecisionConfig = DEFAULT_CONFIG,
    seed: int = 0,
) -> DominanceReport:
    """Dominance probe of the lowest nonzero homogeneous part along the line
    z = 3/4 + iy.

    For the smallest p0 with P_p0 nonzero, evaluates
    |P_p0(zeta jets; 1, Gamma^(n)/Gamma, Gamma^(l)/Gamma)| at each y and
    compares with |b_hat(q0, t0)| times the growth envelope, where (q0, t0)
    comes from the scan at the sampled zeta jets plus seeded random vectors.
    """
    if p.is_zero():
        raise ZeroPolynomial("candidate polynomial is identically zero")
    ys = [float(y) for y in y_list]
    if not ys or any(b <= a for a, b in zip(ys, ys[1:])):
        raise DomainError("y_list must be strictly increasing")
    if ys[0] < 5:
        raise DomainError("y_list entries must be >= 5")

    spec = p.spec
    part = homogeneous_parts(p)
    p0 = min(part)
    p_part = part[p0]

    hi = cfg.with_bits(cfg.working_bits)
    bits = cfg.precision_bits
    ratio_n = diffpoly.gamma_log_ratio(spec.n)
    ratio_l = diffpoly.gamma_log_ratio(spec.l)

    zs, us, measured = [], [], []
    for y in ys:
        z = ComplexHP(0.75, y, bits=hi.precision_bits)
        u = tuple(specfun.zeta_jet(z, spec.m, hi))
        jet = specfun.digamma_jet(z, max(spec.l - 1, 1), hi)
        vn = ratio_n.evaluate(jet)
        vl = ratio_l.evaluate(jet)
        acc = ComplexHP(0, bits=hi.precision_bits)
        for (u_exps, lam), coeff in p_part.terms().items():
            term = coeff * _u_power(u, u_exps, hi.precision_bits)
            acc = acc + term * vn ** lam.ln * vl ** lam.ll
        zs.append(z)
        us.append(u)
        measured.append(ComplexHP(abs(acc), 0, bits=bits))

    u_samples = list(us) + _random_u_vectors(
        8, spec.m + 1, hi.precision_bits, seed
    )
    lead = first_nonzero_b(p_part, u_samples)
    if lead is None:
        # AllZeroCoefficients: report INCONCLUSIVE rather than raise
        samples = tuple(
            (y, m, ComplexHP(0, bits=bits)) for y, m in zip(ys, measured)
        )
        return DominanceReport(
            p0=p0,
            q0=-1,
            t0=-1,
            b_hat_value=ComplexHP(0, bits=bits),
            samples=samples,
            verdict=VERDICT_INCONCLUSIVE,
        )
    q0, t0 = lead

    predicted = []
    for z, u in zip(zs, us):
        b = b_hat(p_part, q0, t0, u)
        env = envelope(q0, t0, z)
        predicted.append(ComplexHP(abs(b * env), 0, bits=bits))

    tail = len(ys) // 2
    in_band = True
    for m, pr in zip(measured[tail:], predicted[tail:]):
        pm, pp = abs(m), abs(pr)
        if pp == 0 or not (0.25 <= float(pm / pp) <= 4.0):
            in_band = False
            break

    b_final = b_hat(p_part, q0, t0, us[-1])
    samples = tuple(zip(ys, measured, predicted))
    return DominanceReport(
        p0=p0,
        q0=q0,
        t0=t0,
        b_hat_value=ComplexHP(b_final.re, b_final.im, bits=bits),
        samples=samples,
        verdict=VERDICT_EVIDENCE if in_band else VERDICT_INCONCLUSIVE,
    )
