"""Recursive-descent parser for the multivector text grammar.

    mv       := term (("+"|"-") term)* ;
    term     := coeff ("*"? blade)? | blade ;
    coeff    := rational | rational? "i" | "(" rational ("+"|"-") rational "i" ")" ;
    rational := integer ("/" positive-integer)? ;
    blade    := "e" | "e" index+ | "e" index ("." index)+ ;

Decimal literals (``0.7071``) are accepted as an extension; they put the
result on the float backend.
"""
from __future__ import annotations

from gmpy2 import mpq

from .blades import BladeParseError, parse_blade
from .multivector import Multivector
from .scalars import GaussQ, gauss


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected):
        self.text = text
        self.pos = pos
        self.expected = sorted(set(expected))
        found = repr(text[pos]) if pos < len(text) else "end of input"
        super().__init__(
            f"at position {pos}: expected one of {', '.join(self.expected)}; found {found}"
        )


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.pos = 0

    def error(self, *expected):
        raise ParseError(self.text, self.pos, expected)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]

    def number(self):
        """integer ("/" positive-integer)? or a decimal literal."""
        self.skip()
        ds = self.digits()
        if not ds:
            self.error("integer")
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            frac = self.digits()
            if not frac:
                self.error("digit")
            return float(f"{ds}.{frac}")
        save = self.pos
        self.skip()
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            self.skip()
            den = self.digits()
            if not den:
                self.error("positive integer")
            if int(den) == 0:
                self.pos -= len(den)
                self.error("positive integer")
            return mpq(int(ds), int(den))
        self.pos = save
        return mpq(int(ds))

    def blade(self):
        self.skip()
        start = self.pos
        if not self.text.startswith("e", self.pos):
            self.error("blade")
        self.pos += 1
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
            self.pos += 1
        token = self.text[start:self.pos]
        try:
            return parse_blade(token, self.n)
        except BladeParseError:
            self.pos = start
            self.error("blade")

    def paren_coeff(self):
        lead = -1 if self.eat("-") else 1
        re_ = lead * self.number()
        if self.eat("+"):
            sign = 1
        elif self.eat("-"):
            sign = -1
        else:
            self.error("'+'", "'-'")
        if self.peek() == "i":
            im = mpq(1)
        else:
            im = self.number()
        if not self.eat("i"):
            self.error("'i'")
        if not self.eat(")"):
            self.error("')'")
        if isinstance(re_, float) or isinstance(im, float):
            return complex(float(re_), sign * float(im))
        return gauss(re_, sign * im)

    def term(self):
        ch = self.peek()
        coeff = None
        if ch == "(":
            self.pos += 1
            coeff = self.paren_coeff()
        elif ch.isdigit():
            coeff = self.number()
            if self.peek() == "i":
                self.pos += 1
                coeff = complex(0, coeff) if isinstance(coeff, float) else GaussQ(0, coeff)
        elif ch == "i":
            self.pos += 1
            coeff = GaussQ(0, 1)
        elif ch == "e":
            sign, mask = self.blade()
            return Multivector(self.n, {mask: sign})
        else:
            self.error("coefficient", "blade")
        if self.eat("*"):
            sign, mask = self.blade()
        elif self.peek() == "e":
            sign, mask = self.blade()
        else:
            sign, mask = 1, 0
        return Multivector(self.n, {mask: coeff if sign > 0 else -coeff})

    def mv(self):
        total = Multivector.zero(self.n)
        negate = False
        if self.eat("-"):
            negate = True
        elif self.eat("+"):
            pass
        t = self.term()
        total = total + (-t if negate else t)
        while True:
            if self.eat("+"):
                total = total + self.term()
            elif self.eat("-"):
                total = total - self.term()
            elif self.peek() == "":
                return total
            else:
                self.error("'+'", "'-'", "end of input")


def parse_mv(text: str, n: int) -> Multivector:
    """Parse ``text`` into a canonical multivector of Cl(1,n)."""
    if text.strip() == "0":
        return Multivector.zero(n)
    return _Parser(text, n).mv()
