"""Reader and printer for the guarded-command language (``.gcl``).

::

    model NAME;
    var x : int[0,2] = 0;
    property x <= 2;
    process P {
      l0: true -> acquire(m); goto l1;
      l1: m = 1 -> x := x + 1; release(m); goto l2;
    }
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .expr import (
    COMPARE,
    PRECEDENCE,
    Binary,
    Const,
    Expr,
    ExprTypeError,
    Unary,
    Var,
    render,
    type_of,
)
from .model import (
    Acquire,
    Assign,
    DomainOverflow,
    Edge,
    Model,
    ModelError,
    ProcessSource,
    Release,
    Stmt,
    UndeclaredVariable,
    VarDecl,
)

KEYWORDS = {
    "model", "var", "int", "property", "process", "goto",
    "acquire", "release", "true", "false",
}


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class GclError(ModelError):
    def __init__(self, span: SourceSpan, message: str):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message


class GclSyntaxError(GclError):
    pass


class GclUndeclared(GclError, UndeclaredVariable):
    pass


class GclDomainError(GclError, DomainOverflow):
    pass


class GclDuplicate(GclError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # ID, INT, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>//[^\n]*)"
    r"|(?P<INT>\d+)|(?P<ID>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<OP>:=|->|<=|>=|!=|&&|\|\||[-+*%=<>!(){}\[\];:,])"
)


def tokenize(text: str, file: str = "<string>") -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise GclSyntaxError(
                SourceSpan(file, line, col, col + 1), f"unexpected character {text[pos]!r}"
            )
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0
        self.vars: dict[str, VarDecl] = {}

    # token helpers

    def span(self, tok: Token) -> SourceSpan:
        return SourceSpan(self.file, tok.line, tok.col, tok.col + max(len(tok.text), 1))

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> GclSyntaxError:
        return GclSyntaxError(self.span(tok or self.tok), msg)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "EOF"

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str) -> Token:
        t = self.tok
        if t.kind != "ID" or t.text in KEYWORDS:
            raise self.error(f"expected {what}")
        return self.advance()

    def integer(self) -> int:
        sign = -1 if self.at("-") else 1
        if sign < 0:
            self.advance()
        if self.tok.kind != "INT":
            raise self.error("expected integer")
        return sign * int(self.advance().text)

    # grammar

    def model(self) -> Model:
        head = self.expect("model")
        name = self.ident("model name").text
        self.expect(";")
        decls = []
        while self.at("var"):
            decls.append(self.decl())
        self.expect("property")
        prop = self.typed_expr("bool")
        self.expect(";")
        procs: list[ProcessSource] = []
        names: set[str] = set()
        while self.at("process"):
            tok, proc = self.process()
            if proc.name in names:
                raise GclDuplicate(self.span(tok), f"duplicate process {proc.name!r}")
            names.add(proc.name)
            procs.append(proc)
        if not procs:
            raise self.error("expected 'process'")
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.text!r}")
        try:
            return Model.build(name, decls, prop, procs)
        except GclError:
            raise
        except DomainOverflow as err:
            raise GclDomainError(self.span(head), str(err)) from None
        except ModelError as err:
            raise GclSyntaxError(self.span(head), str(err)) from None

    def decl(self) -> VarDecl:
        self.expect("var")
        tok = self.ident("variable name")
        if tok.text in self.vars:
            raise GclDuplicate(self.span(tok), f"duplicate variable {tok.text!r}")
        self.expect(":")
        self.expect("int")
        self.expect("[")
        lo = self.integer()
        self.expect(",")
        hi = self.integer()
        self.expect("]")
        self.expect("=")
        init_tok = self.tok
        init = self.integer()
        self.expect(";")
        if lo > hi:
            raise GclDomainError(self.span(tok), f"empty domain [{lo},{hi}]")
        if not lo <= init <= hi:
            raise GclDomainError(
                self.span(init_tok), f"initial value {init} outside [{lo},{hi}]"
            )
        d = VarDecl(tok.text, lo, hi, init)
        self.vars[d.name] = d
        return d

    def process(self) -> tuple[Token, ProcessSource]:
        self.expect("process")
        tok = self.ident("process name")
        self.expect("{")
        edges = [self.edge()]
        while not self.at("}"):
            edges.append(self.edge())
        self.expect("}")
        return tok, ProcessSource(tok.text, tuple(edges))

    def edge(self) -> Edge:
        src = self.ident("location").text
        self.expect(":")
        guard = self.typed_expr("bool")
        self.expect("->")
        stmts: list[Stmt] = []
        assigned: set[str] = set()
        while not self.at("goto"):
            tok = self.tok
            s = self.stmt()
            if s.var in assigned:
                raise GclDuplicate(self.span(tok), f"variable {s.var!r} assigned twice")
            assigned.add(s.var)
            stmts.append(s)
        self.expect("goto")
        dst = self.ident("location").text
        self.expect(";")
        return Edge(src, guard, tuple(stmts), dst)

    def stmt(self) -> Stmt:
        if self.at("acquire") or self.at("release"):
            kind = self.advance().text
            self.expect("(")
            var = self.declared(self.ident("lock variable"))
            self.expect(")")
            self.expect(";")
            return Acquire(var) if kind == "acquire" else Release(var)
        var = self.declared(self.ident("statement"))
        self.expect(":=")
        e = self.typed_expr("int")
        self.expect(";")
        return Assign(var, e)

    def declared(self, tok: Token) -> str:
        if tok.text not in self.vars:
            raise GclUndeclared(self.span(tok), f"undeclared variable {tok.text!r}")
        return tok.text

    def typed_expr(self, want: str) -> Expr:
        tok = self.tok
        e = self.expr(1)
        try:
            got = type_of(e)
        except ExprTypeError as err:
            raise self.error(str(err), tok) from None
        if got != want:
            raise self.error(f"expected {want} expression", tok)
        return e

    def expr(self, min_prec: int) -> Expr:
        left = self.unary()
        while self.tok.kind == "OP" and PRECEDENCE.get(self.tok.text, 0) >= min_prec:
            op = self.advance().text
            prec = PRECEDENCE[op]
            right = self.expr(prec + 1)
            left = Binary(op, left, right)
            if op in COMPARE and self.tok.text in COMPARE:
                raise self.error("comparison operators do not chain")
        return left

    def unary(self) -> Expr:
        if self.at("!"):
            self.advance()
            return Unary("!", self.unary())
        if self.at("-"):
            self.advance()
            if self.tok.kind == "INT":
                return Const(-int(self.advance().text))
            return Unary("-", self.unary())
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Const(int(t.text))
        if t.text in ("true", "false"):
            self.advance()
            return Const(t.text == "true")
        if self.at("("):
            self.advance()
            e = self.expr(1)
            self.expect(")")
            return e
        if t.kind == "ID" and t.text not in KEYWORDS:
            return Var(self.declared(self.advance()))
        raise self.error(f"expected expression, found {t.text or 'end of input'!r}")


def parse(text: str, file: str = "<string>") -> Model:
    """Parse GCL source into a Model; errors carry a SourceSpan."""
    return _Parser(text, file).model()


def parse_file(path: str | Path) -> Model:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), str(path))


def parse_expr(text: str, model: Model) -> Expr:
    """Parse a standalone boolean expression over ``model``'s variables."""
    p = _Parser(text, "<property>")
    p.vars = {v.name: v for v in model.vars}
    e = p.typed_expr("bool")
    if p.tok.kind != "EOF":
        raise p.error(f"unexpected {p.tok.text!r}")
    return e


def _stmt(s: Stmt) -> str:
    if isinstance(s, Assign):
        return f"{s.var} := {render(s.expr)};"
    return f"{'acquire' if isinstance(s, Acquire) else 'release'}({s.var});"


def pretty(model: Model) -> str:
    lines = [f"model {model.name};"]
    for v in model.vars:
        lines.append(f"var {v.name} : int[{v.lo},{v.hi}] = {v.init};")
    lines.append(f"property {render(model.property_y)};")
    for src in model.sources:
        lines.append(f"process {src.name} {{")
        for e in src.edges:
            body = " ".join([_stmt(s) for s in e.stmts] + [f"goto {e.target};"])
            lines.append(f"  {e.source}: {render(e.guard)} -> {body}")
        lines.append("}")
    return "\n".join(lines) + "\n"
