"""Recursive-descent parser for candidate-polynomial expressions.

Grammar (whitespace insignificant, errors carry line/column):

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := var | complexlit | '(' expr ')'

Variables are u0..u{m}, v0, vn, vl; complex literals are decimal numbers
with an optional trailing 'i' for the imaginary unit, so a+bi enters as the
sum of two literals.  The parsed expression is expanded into the monomial
basis of a PolySpec.
"""

from __future__ import annotations

from .decomp import LambdaTriple, PolySpec, VarSpec
from .errors import ParseError
from .hp import ComplexHP, DEFAULT_PRECISION_BITS


def _poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, coeff in b.items():
        prev = out.get(key)
        merged = coeff if prev is None else prev + coeff
        if merged.re == 0 and merged.im == 0:
            out.pop(key, None)
        else:
            out[key] = merged
    return out


def _poly_neg(a: dict) -> dict:
    return {key: -coeff for key, coeff in a.items()}


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (ua, la), ca in a.items():
        for (ub, lb), cb in b.items():
            key = (
                tuple(x + y for x, y in zip(ua, ub)),
                LambdaTriple(la.l0 + lb.l0, la.ln + lb.ln, la.ll + lb.ll),
            )
            coeff = ca * cb
            prev = out.get(key)
            merged = coeff if prev is None else prev + coeff
            if merged.re == 0 and merged.im == 0:
                out.pop(key, None)
            else:
                out[key] = merged
    return out


class _Parser:
    def __init__(self, text: str, spec: VarSpec, bits: int):
        self.text = text
        self.spec = spec
        self.bits = bits
        self.pos = 0
        self.line = 1
        self.col = 1

    # -- low-level scanning -------------------------------------------------

    def _error(self, message, line=None, col=None):
        raise ParseError(
            message, self.line if line is None else line,
            self.col if col is None else col,
        )

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
        self._skip_ws()
        if self._peek() == ch:
            self._advance()
            return True
        return False

    # -- token-level pieces --------------------------------------------------

    def _uint(self) -> int:
        self._skip_ws()
        start = self.pos
        while self._peek().isdigit():
            self._advance()
        if start == self.pos:
            self._error("expected a non-negative integer exponent")
        return int(self.text[start:self.pos])

    def _number(self) -> dict:
        start, line, col = self.pos, self.line, self.col
        seen_dot = False
        while self._peek().isdigit() or (self._peek() == "." and not seen_dot):
            if self._peek() == ".":
                seen_dot = True
            self._advance()
        if self.pos == start or self.text[start:self.pos] == ".":
            self._error("malformed number", line, col)
        if self._peek() in ("e", "E"):
            self._advance()
            if self._peek() in ("+", "-"):
                self._advance()
            if not self._peek().isdigit():
                # not an exponent after all; 'e' is no variable either
                self._error("malformed exponent in number")
            while self._peek().isdigit():
                self._advance()
        literal = self.text[start:self.pos]
        imaginary = self._peek() == "i"
        if imaginary:
            self._advance()
        coeff = (
            ComplexHP(0, literal, bits=self.bits)
            if imaginary
            else ComplexHP(literal, 0, bits=self.bits)
        )
        key = ((0,) * (self.spec.m + 1), LambdaTriple(0, 0, 0))
        return {key: coeff}

    def _variable(self) -> dict:
        start, line, col = self.pos, self.line, self.col
        self._advance()  # leading 'u' or 'v'
        while self._peek().isalnum():
            self._advance()
        name = self.text[start:self.pos]
        u_exps = [0] * (self.spec.m + 1)
        lam = [0, 0, 0]
        if name == "v0":
            lam[0] = 1
        elif name == "vn":
            lam[1] = 1
        elif name == "vl":
            lam[2] = 1
        elif name.startswith("u") and name[1:].isdigit():
            idx = int(name[1:])
            if idx > self.spec.m:
                self._error(
                    f"variable {name} exceeds the zeta-derivative order "
                    f"m={self.spec.m}", line, col,
                )
            u_exps[idx] = 1
        else:
            self._error(f"unknown variable {name!r}", line, col)
        key = (tuple(u_exps), LambdaTriple(*lam))
        return {key: ComplexHP(1, bits=self.bits)}

    # -- grammar -------------------------------------------------------------

    def _base(self) -> dict:
        self._skip_ws()
        ch = self._peek()
        if ch == "":
            self._error("unexpected end of input")
        if ch == "(":
            self._advance()
            inner = self._expr()
            if not self._accept(")"):
                self._error("expected ')'")
            return inner
        if ch.isdigit() or ch == ".":
            return self._number()
        if ch in ("u", "v"):
            return self._variable()
        self._error(f"unexpected character {ch!r}")

    def _factor(self) -> dict:
        base = self._base()
        self._skip_ws()
        if self._peek() == "^":
            self._advance()
            power = self._uint()
            result = {
                ((0,) * (self.spec.m + 1), LambdaTriple(0, 0, 0)):
                ComplexHP(1, bits=self.bits)
            }
            for _ in range(power):
                result = _poly_mul(result, base)
            return result
        return base

    def _term(self) -> dict:
        acc = self._factor()
        while self._accept("*"):
            acc = _poly_mul(acc, self._factor())
        return acc

    def _expr(self) -> dict:
        acc = self._term()
        while True:
            if self._accept("+"):
                acc = _poly_add(acc, self._term())
            elif self._accept("-"):
                acc = _poly_add(acc, _poly_neg(self._term()))
            else:
                return acc

    def parse(self) -> PolySpec:
        body = self._expr()
        self._skip_ws()
        if self.pos < len(self.text):
            self._error(f"unexpected character {self._peek()!r}")
        return PolySpec(self.spec, body)


def parse_polyspec(
    text: str, spec: VarSpec, bits: int = DEFAULT_PRECISION_BITS
) -> PolySpec:
    """Parse an expression into a PolySpec; raises ParseError with position."""
    return _Parser(text, spec, bits).parse()
