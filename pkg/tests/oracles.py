"""Independent oracles used by the test suite.

Every oracle here deliberately avoids the code paths it checks: Bell numbers
come from set-partition enumeration and the additive triangle, zeta values
from direct summation with an elementary tail plus extrapolation, digamma
values from closed-form integration of the sawtooth integral, and the
rearrangement coefficients from literal polynomial expansion.
"""

from __future__ import annotations

import math
import random

import gmpy2

from gzlab.decomp import LambdaTriple, PolySpec, VarSpec
from gzlab.hp import ComplexHP, context


# -- Bell numbers -------------------------------------------------------------


def bell_by_enumeration(n: int) -> int:
    """Count set partitions of {1..n} by direct recursive placement."""
    if n == 0:
        return 1

    def place(i, blocks):
        if i == n:
            return 1
        total = place(i + 1, blocks + 1)  # open a new block
        return total + blocks * place(i + 1, blocks)

    return place(1, 1)


def bell_triangle(n: int) -> list[int]:
    """[B_0, ..., B_n] from the additive triangle."""
    out = [1]
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        out.append(nxt[0])
        row = nxt
    return out[: n + 1]


# -- zeta by direct summation + extrapolation ---------------------------------


def _det3(a):
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def zeta_direct_oracle(s: float, n0: int = 200_000):
    """(zeta(s), zeta'(s)) for real s in (0, 1).

    Partial sums at N, 2N, 4N with the elementary tail N^{1-s}/(s-1) +
    N^{-s}/2 removed still deviate by (a + b log N) N^{-s-1}; a three-point
    linear solve eliminates both unknowns.  Good to ~1e-12 at s = 3/4.
    """
    ns = [n0, 2 * n0, 4 * n0]
    vals, dvals = [], []
    for n_cut in ns:
        s_sum = math.fsum(n ** -s for n in range(1, n_cut))
        d_sum = math.fsum(-math.log(n) * n ** -s for n in range(2, n_cut))
        ln_n = math.log(n_cut)
        tail = n_cut ** (1 - s) / (s - 1) + n_cut ** -s / 2
        dtail = (
            -ln_n * n_cut ** (1 - s) / (s - 1)
            - n_cut ** (1 - s) / (s - 1) ** 2
            - ln_n * n_cut ** -s / 2
        )
        vals.append(s_sum + tail)
        dvals.append(d_sum + dtail)

    def solve(vs):
        m = [[1.0, n ** (-s - 1), math.log(n) * n ** (-s - 1)] for n in ns]
        d = _det3(m)
        mz = [[vs[i], m[i][1], m[i][2]] for i in range(3)]
        return _det3(mz) / d

    return solve(vals), solve(dvals)


def zeta_coarse(s: complex, n_cut: int = 3000) -> complex:
    """Double-precision zeta with the elementary two-term tail.

    Error ~ |s| n_cut^(-Re s - 1) / 12: around 1e-5 on the line
    Re s = 3/4 for |Im s| <= 200.  Used as the coarse grid oracle.
    """
    acc = 1.0 + 0j
    for n in range(2, n_cut):
        acc += n ** -s
    return acc + n_cut ** (1 - s) / (s - 1) + n_cut ** -s / 2


# -- digamma via the sawtooth integral ----------------------------------------


def digamma_sawtooth_oracle(z, order: int, intervals: int = 6000, bits=192):
    """f^(order)(z) from closed-form integration of
    integral_0^inf ([u]-u+1/2) (u+z)^(-p) du, summed interval by interval.

    The integrand's midpoint symmetry makes each unit interval contribute
    O(k^-(p+1)), so truncation after K intervals costs about
    (1/12) (K+z)^-p; with K = 6000 that is ~2e-9 for the digamma itself
    and far less for higher orders.
    """
    with context(bits):
        zm = gmpy2.mpc(z.re, z.im) if isinstance(z, ComplexHP) else gmpy2.mpc(z)
        p = order + 2

        def segment(k):
            # integral over [k, k+1] of (k + 1/2 - u) (u+z)^(-p)
            a, b = zm + k, zm + k + 1
            mid = zm + (2 * k + 1) / gmpy2.mpfr(2)
            first = mid * (b ** (1 - p) - a ** (1 - p)) / (1 - p)
            if p == 2:
                second = gmpy2.log(b) - gmpy2.log(a)
            else:
                second = (b ** (2 - p) - a ** (2 - p)) / (2 - p)
            return first - second

        integral = gmpy2.mpc(0)
        for k in range(intervals):
            integral += segment(k)

        if order == 0:
            return ComplexHP.from_mpc(
                gmpy2.log(zm) - 1 / (2 * zm) - integral, bits
            )
        n = order
        sign = (-1) ** (n - 1)
        val = (
            math.factorial(n - 1) / zm ** n
            + gmpy2.mpfr(math.factorial(n)) / (2 * zm ** (n + 1))
            + math.factorial(n + 1) * integral
        )
        return ComplexHP.from_mpc(sign * val, bits)


# -- literal expansion oracle for the b coefficients --------------------------


def _convolve(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def b_expansion_oracle(p_part: PolySpec, u_values) -> dict:
    """All b(q, t) by literally expanding [1 + c_n H]^ln [1 + c_l H]^ll.

    No Cramer inversion and no binomial shortcut: each term's H-polynomial
    is built by repeated convolution and accumulated at its q.
    """
    spec = p_part.spec
    c_n = spec.n * (spec.n - 1) // 2
    c_l = spec.l * (spec.l - 1) // 2
    bits = max((u.bits for u in u_values), default=ComplexHP(0).bits)
    out: dict = {}
    for (u_exps, lam), coeff in p_part.terms().items():
        h_poly = [1]
        for _ in range(lam.ln):
            h_poly = _convolve(h_poly, [1, c_n])
        for _ in range(lam.ll):
            h_poly = _convolve(h_poly, [1, c_l])
        a_val = coeff
        for u, e in zip(u_values, u_exps):
            if e:
                a_val = a_val * u ** e
        q = lam.deriv_weight(spec)
        for t, w in enumerate(h_poly):
            if w == 0:
                continue
            key = (q, t)
            prev = out.get(key, ComplexHP(0, bits=bits))
            out[key] = prev + a_val * w
    return out


# -- random generators ---------------------------------------------------------


def random_diffpoly(rng: random.Random, max_terms=5, max_order=6, max_exp=3):
    from gzlab.diffpoly import DiffPoly

    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        n_vars = rng.randint(1, 3)
        exps = [0] * (max_order + 1)
        for _ in range(n_vars):
            exps[rng.randint(0, max_order)] += rng.randint(1, max_exp)
        coeff = rng.choice([c for c in range(-9, 10) if c])
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + coeff
    return DiffPoly(terms)


def random_homogeneous_diffpoly(rng: random.Random, weight: int):
    """Random weight-homogeneous polynomial: sums of weighted partitions."""
    from gzlab.diffpoly import DiffPoly

    terms = {}
    for _ in range(rng.randint(1, 4)):
        remaining = weight
        exps = [0] * weight
        while remaining:
            part = rng.randint(1, remaining)  # a factor f^(part-1), weight part
            exps[part - 1] += 1
            remaining -= part
        coeff = rng.choice([c for c in range(-9, 10) if c])
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return DiffPoly(terms)


def random_polyspec(rng: random.Random, spec: VarSpec, bits=256,
                    homogeneous=None, max_terms=4):
    lam_pool = []
    for l0 in range(4):
        for ln in range(4):
            for ll in range(4):
                lam = LambdaTriple(l0, ln, ll)
                if homogeneous is None or lam.total_degree() == homogeneous:
                    lam_pool.append(lam)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        u_exps = tuple(rng.randint(0, 2) for _ in range(spec.m + 1))
        lam = rng.choice(lam_pool)
        coeff = ComplexHP(rng.randint(-5, 5), rng.randint(-5, 5), bits=bits)
        key = (u_exps, lam)
        prev = terms.get(key)
        terms[key] = coeff if prev is None else prev + coeff
    return PolySpec(spec, terms)


def random_u_vector(rng: random.Random, arity: int, bits=256, integral=False):
    if integral:
        return tuple(
            ComplexHP(rng.randint(-3, 3), rng.randint(-3, 3), bits=bits)
            for _ in range(arity)
        )
    return tuple(
        ComplexHP(rng.uniform(-2, 2), rng.uniform(-2, 2), bits=bits)
        for _ in range(arity)
    )
