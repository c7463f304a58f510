"""Exact differential-polynomial algebra over jet variables of the digamma
function.

A monomial is an exponent tuple ``exps`` with ``exps[k]`` the exponent of the
order-k jet variable f^(k) (f itself is order 0); trailing zeros are stripped,
the empty tuple is the constant monomial.  Coefficients are exact integers.
The formal derivation maps f^(k) to f^(k+1) and obeys the Leibniz rule, so the
weight grading (f^(k) has weight k+1) increases by exactly one per derivative.

The central object is the ratio ladder gamma_log_ratio(n): the polynomial
R_n with Gamma^(n) = Gamma * R_n(f, f', ...), built by the recursion
R_0 = 1, R_{n+1} = R_n' + R_n * f.  R_n is the complete Bell polynomial in
the jet variables: weight-homogeneous of weight n, leading term f^n, and its
all-ones value is the n-th Bell number.
"""

from __future__ import annotations

import threading

from .errors import LimitExceeded, MissingJetValue, ParseError
from .hp import ComplexHP

DEFAULT_ORDER_LIMIT = 64

Exps = tuple


def _weight(exps: Exps) -> int:
    return sum(e * (k + 1) for k, e in enumerate(exps))


def _trim(exps: list) -> Exps:
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _order_key(exps: Exps):
    # Ascending weight; within a weight, descending lexicographic on the
    # exponent vector read from the highest derivative order down.  This
    # reproduces the conventional display order f''' , f f'' , f'^2 , ...
    w = _weight(exps)
    padded = tuple(exps) + (0,) * (w - len(exps))
    return (w, tuple(-e for e in reversed(padded)))


class DiffPoly:
    """Immutable sparse polynomial in the jet variables f, f', f'', ..."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = int(coeff)
                if coeff == 0:
                    continue
                key = _trim(list(exps))
                if any(e < 0 for e in key):
                    raise ValueError("negative exponent in jet monomial")
                clean[key] = clean.get(key, 0) + coeff
                if clean[key] == 0:
                    del clean[key]
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DiffPoly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffPoly":
        return cls()

    @classmethod
    def one(cls) -> "DiffPoly":
        return cls({(): 1})

    @classmethod
    def variable(cls, k: int) -> "DiffPoly":
        """The jet variable f^(k)."""
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        return cls({(0,) * k + (1,): 1})

    # -- inspection -------------------------------------------------------

    def terms(self):
        """Terms in canonical order as (exps, coefficient) pairs."""
        return [(e, self._terms[e]) for e in sorted(self._terms, key=_order_key)]

    def coefficient(self, exps) -> int:
        return self._terms.get(_trim(list(exps)), 0)

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    def max_order(self) -> int:
        """Highest derivative order occurring; -1 for a constant."""
        return max((len(e) - 1 for e in self._terms), default=-1)

    def weights(self) -> set:
        return {_weight(e) for e in self._terms}

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __len__(self):
        return len(self._terms)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        out = dict(self._terms)
        for exps, c in other._terms.items():
            out[exps] = out.get(exps, 0) + c
        return DiffPoly(out)

    def __neg__(self):
        return DiffPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return DiffPoly({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, DiffPoly):
            return NotImplemented
        out = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                la, lb = len(ea), len(eb)
                if la < lb:
                    ea, eb, la, lb = eb, ea, lb, la
                key = tuple(
                    ea[i] + (eb[i] if i < lb else 0) for i in range(la)
                )
                out[key] = out.get(key, 0) + ca * cb
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = DiffPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def differentiate(self) -> "DiffPoly":
        out = {}
        for exps, c in self._terms.items():
            for k, e in enumerate(exps):
                if e == 0:
                    continue
                ne = list(exps)
                ne[k] -= 1
                if len(ne) <= k + 1:
                    ne.append(0)
                ne[k + 1] += 1
                key = _trim(ne)
                out[key] = out.get(key, 0) + c * e
        return DiffPoly(out)

    def evaluate(self, jet) -> ComplexHP:
        """Substitute f^(k) <- jet[k]; jet entries are ComplexHP."""
        need = self.max_order()
        if need >= len(jet):
            raise MissingJetValue(
                f"need jet values up to order {need}, got {len(jet)}"
            )
        bits = max((v.bits for v in jet), default=None)
        acc = ComplexHP(0, bits=bits) if bits else ComplexHP(0)
        for exps, c in self._terms.items():
            term = ComplexHP(c, bits=acc.bits)
            for k, e in enumerate(exps):
                if e:
                    term = term * jet[k] ** e
            acc = acc + term
        return acc

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, coeff in self.terms():
            factors = []
            for k, e in enumerate(exps):
                if e == 0:
                    continue
                if k == 0:
                    var = "f"
                elif k <= 3:
                    var = "f" + "'" * k
                else:
                    var = f"f^({k})"
                factors.append(var if e == 1 else f"{var}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append((coeff < 0, body))
        first_neg, first = pieces[0]
        out = ("-" if first_neg else "") + first
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"DiffPoly({self.render()})"


def differentiate(p: DiffPoly) -> DiffPoly:
    """Formal z-derivative: d f^(k) = f^(k+1) with the Leibniz rule."""
    return p.differentiate()


def coefficient_sum(p: DiffPoly) -> int:
    """Sum of coefficients, i.e. the value with every jet variable at 1."""
    return p.coefficient_sum()


def evaluate(p: DiffPoly, jet) -> ComplexHP:
    return p.evaluate(jet)


_memo_lock = threading.Lock()
_ratio_memo: list[DiffPoly] = [DiffPoly.one()]


def gamma_log_ratio(n: int, limit: int = DEFAULT_ORDER_LIMIT) -> DiffPoly:
    """R_n with Gamma^(n)/Gamma = R_n(f, f', ..., f^(n-1)).

    Memoized across calls; the recursion R_{n+1} = R_n' + R_n*f only ever
    extends the shared table, so concurrent callers see identical values.
    """
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    if n > limit:
        raise LimitExceeded(f"order {n} above the configured cap {limit}")
    with _memo_lock:
        f = DiffPoly.variable(0)
        while len(_ratio_memo) <= n:
            prev = _ratio_memo[-1]
            _ratio_memo.append(prev.differentiate() + prev * f)
        return _ratio_memo[n]


def c_coefficient(n: int) -> int:
    """Coefficient of f^(n-2) f' in R_n; equals n(n-1)/2, with c_1 = 0.

    For n = 1 the monomial falls outside the polynomial ring, and the ladder
    constant is 0 by convention.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 0
    exps = (n - 2, 1)
    return gamma_log_ratio(n).coefficient(exps)


# -- parser for the textual rendering ---------------------------------------


class _PolyParser:
    """Recursive-descent parser accepting exactly the render() grammar."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message):
        raise ParseError(message, self.line, self.col)

    def _advance(self, count=1):
        for _ in range(count):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self._advance()

    def _peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _accept(self, ch):
        if self._peek() == ch:
            self._advance()
            return True
        return False

    def _integer(self) -> int:
        self._skip_ws()
        start = self.pos
        while self._peek().isdigit():
            self._advance()
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def _factor(self) -> DiffPoly:
        self._skip_ws()
        ch = self._peek()
        if ch.isdigit():
            return DiffPoly({(): self._integer()})
        if ch != "f":
            self.error("expected 'f' or an integer")
        self._advance()
        order = 0
        if self._peek() == "'":
            while self._accept("'"):
                order += 1
            if order > 3:
                self.error("orders above 3 are written f^(k)")
        elif self._peek() == "^" and self.pos + 1 < len(self.text) \
                and self.text[self.pos + 1] == "(":
            self._advance(2)
            order = self._integer()
            if order < 4:
                self.error("f^(k) requires k >= 4")
            if not self._accept(")"):
                self.error("expected ')'")
        power = 1
        if self._peek() == "^":
            self._advance()
            power = self._integer()
            if power == 0:
                self.error("zero exponent is not rendered")
        return DiffPoly.variable(order) ** power

    def _term(self) -> DiffPoly:
        acc = self._factor()
        while True:
            self._skip_ws()
            if self._accept("*"):
                acc = acc * self._factor()
            else:
                return acc

    def parse(self) -> DiffPoly:
        self._skip_ws()
        negative = self._accept("-")
        acc = self._term()
        if negative:
            acc = -acc
        while True:
            self._skip_ws()
            if self._accept("+"):
                acc = acc + self._term()
            elif self._accept("-"):
                acc = acc - self._term()
            elif self.pos >= len(self.text):
                return acc
            else:
                self.error("unexpected character")


def parse(text: str) -> DiffPoly:
    """Inverse of DiffPoly.render(); parse(render(p)) == p."""
    return _PolyParser(text).parse()
