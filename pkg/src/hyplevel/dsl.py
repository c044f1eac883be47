"""Text syntax for maps, used by the CLI and the committed corpus.

Grammar (whitespace-insensitive)::

    expr := "id"
          | "const(" num "," num ")"      | "rot(" num ")"
          | "scale(" num ")"              | "phi(" num "," num ")"
          | "falpha(" num ["," num] ")"   | "kalpha(" num ")"
          | "galpha(" num ")"
          | "blaschke([" [zero {"," zero}] "];" num "," num ")"
          | "compose(" expr "," expr ")"  | "mul(" expr "," expr ")"
          | "smul(" num "," num "," expr ")"
    zero := "(" num "," num "," int ")"

Parse errors carry the byte offset of the offending token.
"""
import re

from . import holomap as hm
from .errors import DSLParseError

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[a-z]+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message, pos=None):
        pos = self.pos if pos is None else pos
        raise DSLParseError(message, len(self.text[:pos].encode("utf-8")))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, token):
        self.skip()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            self.error(f"expected {token!r}, found {found!r}")
        self.pos += len(token)

    def peek(self, token):
        self.skip()
        return self.text.startswith(token, self.pos)

    def number(self) -> float:
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return float(m.group())

    def integer(self) -> int:
        start = self.pos
        x = self.number()
        if x != int(x):
            self.error("expected an integer multiplicity", start)
        return int(x)

    def expr(self) -> hm.HoloMap:
        self.skip()
        start = self.pos
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a map name")
        name = m.group()
        self.pos = m.end()
        if name == "id":
            return hm.Identity()
        builder = getattr(self, "_" + name, None)
        if builder is None:
            self.error(f"unknown map {name!r}", start)
        self.expect("(")
        try:
            node = builder()
        except ValueError as exc:
            if isinstance(exc, DSLParseError):
                raise
            self.error(f"invalid {name}: {exc}", start)
        self.expect(")")
        return node

    def _const(self):
        re_ = self.number()
        self.expect(",")
        return hm.Constant(complex(re_, self.number()))

    def _rot(self):
        return hm.Rotation(self.number())

    def _scale(self):
        return hm.Scale(self.number())

    def _phi(self):
        re_ = self.number()
        self.expect(",")
        return hm.Mobius(complex(re_, self.number()))

    def _falpha(self):
        re_ = self.number()
        im = 0.0
        if self.peek(","):
            self.expect(",")
            im = self.number()
        return hm.NegMobiusNeg(complex(re_, im))

    def _kalpha(self):
        return hm.MaMindaK(self.number())

    def _galpha(self):
        return hm.MaMindaG(self.number())

    def _blaschke(self):
        self.expect("[")
        zeros = []
        if not self.peek("]"):
            while True:
                self.expect("(")
                re_ = self.number()
                self.expect(",")
                im = self.number()
                self.expect(",")
                zeros.append((complex(re_, im), self.integer()))
                self.expect(")")
                if not self.peek(","):
                    break
                self.expect(",")
        self.expect("]")
        self.expect(";")
        s_re = self.number()
        self.expect(",")
        return hm.BlaschkeProduct(tuple(zeros), complex(s_re, self.number()))

    def _compose(self):
        outer = self.expr()
        self.expect(",")
        return hm.Compose(outer, self.expr())

    def _mul(self):
        left = self.expr()
        self.expect(",")
        return hm.Product(left, self.expr())

    def _smul(self):
        re_ = self.number()
        self.expect(",")
        im = self.number()
        self.expect(",")
        return hm.ScalarMul(complex(re_, im), self.expr())


def parse(text: str) -> hm.HoloMap:
    """Parse a DSL string into a map tree."""
    p = _Parser(text)
    node = p.expr()
    p.skip()
    if p.pos != len(text):
        p.error("trailing input")
    return node
