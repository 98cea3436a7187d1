"""Expression language for forms and ring elements.

Grammar (usual precedence, ``^`` binds tightest, unary minus next)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | NAME | NAME "(" expr ")" | "(" expr ")"

Names are the tower variables, the field generator ``g`` and the operators
``T V F R d dlog C``.  Elaboration is top-down in the length: ``V(e)``
evaluates ``e`` one length lower, ``F(e)`` and ``R(e)`` one length higher.
A subtree without operator calls that mentions a variable or ``g`` is a ring
element and is promoted to its Teichmüller lift; an integer literal on its
own means the integer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArityError, ParseError, ShapeMismatch, UnknownSymbol
from .forms import DrwForm, dlog, teich_form
from .laurent import LaurentElem, TowerSpec

FUNCTIONS = ("T", "V", "F", "R", "d", "dlog", "C")
GENERATOR = "g"


# -- AST ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


# -- tokenizer ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, END
    text: str
    line: int
    column: int


def tokenize(src: str) -> list:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            tokens.append(Token("INT", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(Token("NAME", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*^(),":
            tokens.append(Token("OP", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line=line, column=col)
    tokens.append(Token("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, src: str, names):
        self.tokens = tokenize(src)
        self.pos = 0
        self.names = set(names)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        raise cls(msg, line=tok.line, column=tok.column)

    def expect(self, text):
        tok = self.peek()
        if tok.kind != "OP" or tok.text != text:
            found = "end of input" if tok.kind == "END" else repr(tok.text)
            self.error(f"expected {text!r}, found {found}")
        return self.next()

    def parse(self):
        node = self.expr()
        if self.peek().kind != "END":
            self.error(f"unexpected {self.peek().text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.next().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "OP" and self.peek().text == "*":
            self.next()
            node = BinOp("*", node, self.unary())
        return node

    def unary(self):
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.next()
            sign = 1
            if self.peek().kind == "OP" and self.peek().text == "-":
                self.next()
                sign = -1
            tok = self.peek()
            if tok.kind != "INT":
                self.error("expected an integer exponent")
            self.next()
            node = Pow(node, sign * int(tok.text))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return Num(int(tok.text))
        if tok.kind == "NAME":
            self.next()
            if tok.text in FUNCTIONS:
                self.expect("(")
                if self.peek().kind == "OP" and self.peek().text == ")":
                    self.error(f"{tok.text} takes exactly one argument, got 0", tok, ArityError)
                arg = self.expr()
                if self.peek().kind == "OP" and self.peek().text == ",":
                    self.error(f"{tok.text} takes exactly one argument", tok, ArityError)
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text in self.names or tok.text == GENERATOR:
                if self.peek().kind == "OP" and self.peek().text == "(":
                    self.error(f"{tok.text!r} is not an operator", tok, UnknownSymbol)
                return Name(tok.text)
            self.error(f"unknown symbol {tok.text!r}", tok, UnknownSymbol)
        if tok.kind == "OP" and tok.text == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if tok.kind == "END" else repr(tok.text)
        self.error(f"unexpected {found}")


def parse_expr(src: str, tower: TowerSpec | None = None):
    names = tower.var_names if tower is not None else ("t", "u")
    return _Parser(src, names).parse()


# -- printer -------------------------------------------------------------------------------

def _is_atomic(node):
    return isinstance(node, (Num, Name, Call))


def print_expr(node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({print_expr(node.arg)})"
    if isinstance(node, Neg):
        inner = print_expr(node.arg)
        if isinstance(node.arg, BinOp):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = print_expr(node.base)
        if not _is_atomic(node.base):
            base = f"({base})"
        return f"{base}^{node.exp}"
    if isinstance(node, BinOp):
        left, right = print_expr(node.left), print_expr(node.right)
        if node.op == "*":
            if isinstance(node.left, BinOp) and node.left.op in "+-":
                left = f"({left})"
            if isinstance(node.right, BinOp):
                right = f"({right})"
            return f"{left}*{right}"
        if isinstance(node.right, BinOp) and node.right.op in "+-":
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


# -- elaboration ---------------------------------------------------------------------------------

def _is_ring(node) -> bool:
    if isinstance(node, (Num, Name)):
        return True
    if isinstance(node, Call):
        return False
    if isinstance(node, (Neg, Pow)):
        return _is_ring(node.base if isinstance(node, Pow) else node.arg)
    return _is_ring(node.left) and _is_ring(node.right)


def _mentions_symbol(node) -> bool:
    if isinstance(node, Name):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return _mentions_symbol(node.arg)
    if isinstance(node, Pow):
        return _mentions_symbol(node.base)
    if isinstance(node, BinOp):
        return _mentions_symbol(node.left) or _mentions_symbol(node.right)
    return True


def eval_ring(node, tower: TowerSpec) -> LaurentElem:
    """Evaluate an operator-free subtree in the Laurent ring."""
    ring = tower.ring
    if isinstance(node, Num):
        return LaurentElem.const(tower, ring.from_int(node.value, 1))
    if isinstance(node, Name):
        if node.name == GENERATOR:
            return LaurentElem.const(tower, ring.gen())
        return LaurentElem.var(tower, node.name)
    if isinstance(node, Neg):
        return -eval_ring(node.arg, tower)
    if isinstance(node, Pow):
        return eval_ring(node.base, tower) ** node.exp
    if isinstance(node, BinOp):
        a, b = eval_ring(node.left, tower), eval_ring(node.right, tower)
        return a + b if node.op == "+" else a - b if node.op == "-" else a * b
    raise ShapeMismatch(f"{print_expr(node)} is not a ring element")


@dataclass(frozen=True)
class Context:
    tower: TowerSpec
    m: int
    prec: int | None = None
    section: str = "frobenius-inverse-lift"


def elaborate(node, ctx: Context, m: int | None = None) -> DrwForm:
    """Evaluate an AST to a form of length m (default: the context length)."""
    from .cartier import cartier_C

    tower = ctx.tower
    m = ctx.m if m is None else m
    if m < 0:
        return DrwForm.zero(tower, 0)
    if isinstance(node, Num):
        return DrwForm.integer(tower, node.value, m)
    if _is_ring(node) and _mentions_symbol(node):
        return teich_form(eval_ring(node, tower), m)
    if isinstance(node, Call):
        fn = node.fn
        if fn == "T":
            return teich_form(eval_ring(node.arg, tower), m)
        if fn == "dlog":
            return dlog(eval_ring(node.arg, tower), m, ctx.prec)
        if fn == "V":
            if m == 0:
                return DrwForm.zero(tower, 0, elaborate(node.arg, ctx, 0).q)
            return elaborate(node.arg, ctx, m - 1).V()
        if fn == "F":
            return elaborate(node.arg, ctx, m + 1).F()
        if fn == "R":
            return elaborate(node.arg, ctx, m + 1).R()
        if fn == "d":
            return elaborate(node.arg, ctx, m).d()
        if fn == "C":
            return cartier_C(elaborate(node.arg, ctx, m), ctx.section)
        raise UnknownSymbol(f"unknown operator {fn!r}")
    if isinstance(node, Neg):
        return -elaborate(node.arg, ctx, m)
    if isinstance(node, Pow):
        if node.exp < 0:
            raise ShapeMismatch("negative powers are only defined for ring elements")
        return elaborate(node.base, ctx, m) ** node.exp
    if isinstance(node, BinOp):
        a, b = elaborate(node.left, ctx, m), elaborate(node.right, ctx, m)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        return a * b
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(src: str, tower: TowerSpec, m: int, prec: int | None = None) -> DrwForm:
    return elaborate(parse_expr(src, tower), Context(tower, m, prec))


def parse_ring(src: str, tower: TowerSpec) -> LaurentElem:
    node = parse_expr(src, tower)
    return eval_ring(node, tower)


def parse_coords(src: str, tower: TowerSpec) -> list:
    """Comma-separated ring expressions, e.g. ``"t^-1, 0"``."""
    parts = [s for s in src.split(",")]
    if not parts or any(not s.strip() for s in parts):
        raise ParseError("expected a comma-separated list of ring expressions", line=1, column=1)
    return [parse_ring(s, tower) for s in parts]
