"""A small expression language for naming group constructions.

Grammar (whitespace-insensitive; ``Y`` binds tighter than ``x``)::

    expr  := term ('x' term)*
    term  := atom ('Y' atom)*
    atom  := NAME '(' [arg (',' arg)*] ')' | '(' expr ')'
    arg   := INT | 'p' | 'p2' | 'p^2' | expr

``direct(a, b)`` and ``central(a, b)`` are the function forms of ``a x b`` and
``a Y b`` and parse to the same tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import SpecError, UnitLabError
from .pgroup import (
    PGroup,
    build_cyclic,
    build_dihedral8,
    build_elementary_abelian,
    build_extraspecial,
    build_modular_maximal_cyclic,
    build_quaternion8,
    central_product,
    direct_product,
)


@dataclass(frozen=True)
class Ctor:
    name: str
    args: tuple[Union[int, str], ...]


@dataclass(frozen=True)
class BinOp:
    op: str  # "x" or "Y"
    left: "GroupSpec"
    right: "GroupSpec"


GroupSpec = Union[Ctor, BinOp]

# name -> kinds of arguments: "int" or "kind" (p / p2)
CONSTRUCTORS: dict[str, tuple[str, ...]] = {
    "cyclic": ("int", "int"),
    "elem_abelian": ("int", "int"),
    "extraspecial": ("int", "kind"),
    "modular": ("int", "int"),
    "dihedral8": (),
    "quaternion8": (),
}
INFIX = {"direct": "x", "central": "Y"}
PRECEDENCE = {"x": 1, "Y": 2}

_TOKEN = re.compile(r"(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),^])")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise SpecError(f"unexpected character {ch!r}", line, col)
        word = m.group()
        # ")xcyclic(" : an operator glued to the following constructor name
        if (m.lastgroup == "name" and toks and toks[-1].text == ")" and word[0] in "xY"
                and (word[1:] in CONSTRUCTORS or word[1:] in INFIX)):
            toks.append(_Tok("name", word[0], line, col))
            toks.append(_Tok("name", word[1:], line, col + 1))
        else:
            toks.append(_Tok(m.lastgroup, word, line, col))
        col += m.end() - i
        i = m.end()
    toks.append(_Tok("end", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise SpecError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.cur.text != text:
            self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")
        tok = self.cur
        self.i += 1
        return tok

    def parse(self) -> GroupSpec:
        node = self.expr()
        if self.cur.kind != "end":
            self.error(f"unexpected {self.cur.text!r}")
        return node

    def expr(self) -> GroupSpec:
        node = self.term()
        while self.cur.kind == "name" and self.cur.text == "x":
            self.i += 1
            node = BinOp("x", node, self.term())
        return node

    def term(self) -> GroupSpec:
        node = self.atom()
        while self.cur.kind == "name" and self.cur.text == "Y":
            self.i += 1
            node = BinOp("Y", node, self.atom())
        return node

    def atom(self) -> GroupSpec:
        tok = self.cur
        if tok.text == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind != "name" or tok.text in ("x", "Y"):
            self.error(f"expected a constructor, found {tok.text or 'end of input'!r}")
        self.i += 1
        name = tok.text
        if name not in CONSTRUCTORS and name not in INFIX:
            self.error(f"unknown constructor {name!r}", tok)
        self.expect("(")
        args = []
        if self.cur.text != ")":
            args.append(self.arg())
            while self.cur.text == ",":
                self.i += 1
                args.append(self.arg())
        self.expect(")")
        if name in INFIX:
            if len(args) != 2 or not all(isinstance(a, (Ctor, BinOp)) for a in args):
                self.error(f"{name} takes two group arguments, got {len(args)}", tok)
            return BinOp(INFIX[name], args[0], args[1])
        kinds = CONSTRUCTORS[name]
        if len(args) != len(kinds):
            self.error(f"{name} takes {len(kinds)} arguments, got {len(args)}", tok)
        for a, kind in zip(args, kinds):
            ok = isinstance(a, int) if kind == "int" else a in ("p", "p2")
            if not ok:
                self.error(f"bad argument {a!r} for {name}", tok)
        return Ctor(name, tuple(args))

    def arg(self):
        tok = self.cur
        if tok.kind == "int":
            self.i += 1
            return int(tok.text)
        if tok.kind == "name" and tok.text in ("p", "p2"):
            self.i += 1
            if tok.text == "p" and self.cur.text == "^":
                self.i += 1
                if self.cur.text != "2":
                    self.error("only p^2 is supported")
                self.i += 1
                return "p2"
            return tok.text
        return self.expr()


def parse_group_spec(text: str) -> GroupSpec:
    return _Parser(text).parse()


def format_spec(spec: GroupSpec) -> str:
    """Canonical text; parse_group_spec(format_spec(s)) == s."""
    if isinstance(spec, Ctor):
        return f"{spec.name}({','.join(str(a) for a in spec.args)})"
    prec = PRECEDENCE[spec.op]

    def side(child: GroupSpec, right: bool) -> str:
        s = format_spec(child)
        if isinstance(child, BinOp):
            cp = PRECEDENCE[child.op]
            if cp < prec or (right and cp == prec):
                return f"({s})"
        return s

    return f"{side(spec.left, False)} {spec.op} {side(spec.right, True)}"


def evaluate(spec: GroupSpec | str, cap: int | None = None) -> PGroup:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    if isinstance(spec, BinOp):
        left = evaluate(spec.left, cap)
        right = evaluate(spec.right, cap)
        if spec.op == "x":
            return direct_product(left, right, cap)
        return central_product(left, right, cap=cap)
    a = spec.args
    if spec.name == "cyclic":
        return build_cyclic(a[0], a[1], cap)
    if spec.name == "elem_abelian":
        return build_elementary_abelian(a[0], a[1], cap)
    if spec.name == "extraspecial":
        return build_extraspecial(a[0], a[1], cap)
    if spec.name == "modular":
        return build_modular_maximal_cyclic(a[0], a[1], cap)
    if spec.name == "dihedral8":
        return build_dihedral8()
    if spec.name == "quaternion8":
        return build_quaternion8()
    raise UnitLabError(f"unknown constructor {spec.name}")  # pragma: no cover
