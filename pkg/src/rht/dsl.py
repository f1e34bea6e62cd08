"""A small text format for Lie algebras, CDGAs, bicomplexes and basic rings.

Four block kinds are accepted::

    lie h3 over Q {
        basis e1 e2 e3;
        bracket [e1,e2] = e3;
    }

    cdga X { gen x:1 y:1; d y = x*x; truncate 3; }

    bicomplex sq { component (0,0) a; component (1,0) b; del a = b; }

    basicring heis5 over Qi {
        n = 2;
        gen x1 x2 x3 x4;
        component (1,0) x1 + i*x2, x3 + i*x4;
        omega = x1*x2 + x3*x4;
    }

The grammar is in ``docs/grammar.ebnf``. :func:`parse` returns a
:class:`SourceFile` or a :class:`Diagnostics` list; :func:`format_source`
prints an AST back in canonical form and reparsing it gives an equal AST.
:func:`lower` turns a declaration into the objects used by the rest of the
package.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import LieAlgebra
from .gca import Element, FreeCDGA
from .hodge import Bicomplex
from .linalg import I, ONE, ZERO, Gaussian, is_real
from .sasaki import BasicRing, free_exterior

KINDS = ("lie", "cdga", "bicomplex", "basicring")
FIELDS = ("Q", "Qi")


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class Diagnostics(list):
    """A list of :class:`Diagnostic`; falsy when empty."""

    @property
    def has_errors(self) -> bool:
        return any(d.severity == "error" for d in self)

    def __str__(self):
        return "\n".join(str(d) for d in self)


class DSLError(Exception):
    def __init__(self, diagnostics: Diagnostics):
        self.diagnostics = diagnostics
        super().__init__(str(diagnostics))


# ---------------------------------------------------------------------------
# tokens

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\]();,=+\-*/:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "number", "punct" or "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """Longest-match scan; raises :class:`DSLError` on a stray character."""
    out, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLError(Diagnostics([Diagnostic("error", f"unexpected character {text[pos]!r}", line, col)]))
        kind, s = m.lastgroup, m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                out.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# ---------------------------------------------------------------------------
# AST; locations are excluded from equality


@dataclass(frozen=True)
class Loc:
    line: int
    column: int


@dataclass(frozen=True)
class Term:
    coeff: object
    factors: tuple[str, ...]


@dataclass(frozen=True)
class Expr:
    terms: tuple[Term, ...]

    def symbols(self) -> list[str]:
        return [f for t in self.terms for f in t.factors]

    def is_real(self) -> bool:
        return all(is_real(t.coeff) for t in self.terms)


@dataclass(frozen=True)
class Basis:
    names: tuple[str, ...]
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Bracket:
    left: str
    right: str
    value: Expr
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class GenDecl:
    name: str
    degree: int
    bidegree: tuple[int, int] | None = None
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Gens:
    gens: tuple[GenDecl, ...]
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Differential:
    name: str
    value: Expr
    # "d" for a CDGA, "del" or "delbar" for a bicomplex
    op: str = "d"
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Truncate:
    degree: int
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Component:
    bidegree: tuple[int, int]
    # basis names (bicomplex) or spanning expressions (basicring)
    items: tuple
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class SetN:
    n: int
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Relation:
    value: Expr
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Omega:
    value: Expr
    loc: Loc = field(default=Loc(0, 0), compare=False)


@dataclass(frozen=True)
class Declaration:
    kind: str
    name: str
    field: str | None
    statements: tuple
    loc: Loc = field(default=Loc(0, 0), compare=False)

    @property
    def scalar_field(self) -> str:
        if self.field:
            return self.field
        return "Qi" if self.kind == "basicring" else "Q"


@dataclass(frozen=True)
class SourceFile:
    declarations: tuple[Declaration, ...]

    def get(self, name: str) -> Declaration:
        for d in self.declarations:
            if d.name == name:
                return d
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.declarations]


# ---------------------------------------------------------------------------
# parser


class _Syntax(Exception):
    def __init__(self, tok: Token, message: str):
        self.tok = tok
        super().__init__(message)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.diags = Diagnostics()

    # --- helpers ---
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise _Syntax(self.tok, f"expected {text!r}, found {self._desc(self.tok)}")
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            raise _Syntax(self.tok, f"expected {what}, found {self._desc(self.tok)}")
        if self.tok.text == "i":
            raise _Syntax(self.tok, "'i' is the imaginary unit and cannot be used as a name")
        return self.advance()

    def number(self) -> int:
        if self.tok.kind != "number":
            raise _Syntax(self.tok, f"expected a number, found {self._desc(self.tok)}")
        return int(self.advance().text)

    @staticmethod
    def _desc(t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.text)

    def error(self, loc, message: str):
        self.diags.append(Diagnostic("error", message, loc.line, loc.column))

    # --- grammar ---
    def source(self) -> SourceFile:
        decls = []
        seen: set[str] = set()
        while self.tok.kind != "eof":
            d = self.declaration()
            if d.name in seen:
                self.error(d.loc, f"declaration {d.name!r} defined twice")
            seen.add(d.name)
            decls.append(d)
        return SourceFile(tuple(decls))

    def declaration(self) -> Declaration:
        start = self.tok
        if start.kind != "ident" or start.text not in KINDS:
            raise _Syntax(start, f"expected one of {', '.join(KINDS)}, found {self._desc(start)}")
        kind = self.advance().text
        name = self.ident("a declaration name").text
        fld = None
        if self.at("over"):
            self.advance()
            t = self.tok
            if t.kind != "ident" or t.text not in FIELDS:
                raise _Syntax(t, f"expected Q or Qi, found {self._desc(t)}")
            fld = self.advance().text
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise _Syntax(self.tok, f"unterminated block {name!r}")
            stmts.append(getattr(self, "stmt_" + kind)())
        self.expect("}")
        d = Declaration(kind, name, fld, tuple(stmts), Loc(start.line, start.column))
        _Scope(self, d).run()
        return d

    def keyword(self, allowed: tuple[str, ...]) -> Token:
        t = self.tok
        if t.kind != "ident" or t.text not in allowed:
            raise _Syntax(t, f"expected one of {', '.join(allowed)}, found {self._desc(t)}")
        return self.advance()

    def stmt_lie(self):
        kw = self.keyword(("basis", "bracket"))
        loc = Loc(kw.line, kw.column)
        if kw.text == "basis":
            names = self.ident_list()
            self.expect(";")
            return Basis(names, loc)
        self.expect("[")
        a = self.ident().text
        self.expect(",")
        b = self.ident().text
        self.expect("]")
        self.expect("=")
        value = self.expr()
        self.expect(";")
        return Bracket(a, b, value, loc)

    def stmt_cdga(self):
        kw = self.keyword(("gen", "d", "truncate"))
        loc = Loc(kw.line, kw.column)
        if kw.text == "gen":
            gens = []
            while True:
                t = self.ident("a generator name")
                self.expect(":")
                deg = self.number()
                bideg = self.bidegree() if self.at("(") else None
                gens.append(GenDecl(t.text, deg, bideg, Loc(t.line, t.column)))
                if self.at(";"):
                    break
            self.advance()
            return Gens(tuple(gens), loc)
        if kw.text == "d":
            name = self.ident().text
            self.expect("=")
            value = self.expr()
            self.expect(";")
            return Differential(name, value, "d", loc)
        deg = self.number()
        self.expect(";")
        return Truncate(deg, loc)

    def stmt_bicomplex(self):
        kw = self.keyword(("component", "del", "delbar"))
        loc = Loc(kw.line, kw.column)
        if kw.text == "component":
            bd = self.bidegree()
            names = self.ident_list()
            self.expect(";")
            return Component(bd, names, loc)
        name = self.ident().text
        self.expect("=")
        value = self.expr()
        self.expect(";")
        return Differential(name, value, kw.text, loc)

    def stmt_basicring(self):
        kw = self.keyword(("n", "gen", "relation", "component", "omega"))
        loc = Loc(kw.line, kw.column)
        if kw.text == "n":
            self.expect("=")
            n = self.number()
            self.expect(";")
            return SetN(n, loc)
        if kw.text == "gen":
            names = self.ident_list()
            self.expect(";")
            return Gens(tuple(GenDecl(nm, 1) for nm in names), loc)
        if kw.text == "relation":
            value = self.expr()
            self.expect(";")
            return Relation(value, loc)
        if kw.text == "component":
            bd = self.bidegree()
            items = [self.expr()]
            while self.at(","):
                self.advance()
                items.append(self.expr())
            self.expect(";")
            return Component(bd, tuple(items), loc)
        self.expect("=")
        value = self.expr()
        self.expect(";")
        return Omega(value, loc)

    def ident_list(self) -> tuple[str, ...]:
        names = [self.ident().text]
        while self.tok.kind == "ident" and self.tok.text != "i":
            names.append(self.advance().text)
        return tuple(names)

    def bidegree(self) -> tuple[int, int]:
        self.expect("(")
        p = self.number()
        self.expect(",")
        q = self.number()
        self.expect(")")
        return p, q

    # expr := ['+'|'-'] term (('+'|'-') term)*
    def expr(self) -> Expr:
        terms = []
        sign = ONE
        if self.at("-") or self.at("+"):
            sign = -ONE if self.advance().text == "-" else ONE
        while True:
            t = self.term()
            if t.coeff:
                terms.append(Term(sign * t.coeff, t.factors))
            if self.at("+") or self.at("-"):
                sign = -ONE if self.advance().text == "-" else ONE
            else:
                break
        return Expr(tuple(terms))

    # term := factor ('*' factor)*
    def term(self) -> Term:
        coeff, factors = self.factor(ONE, [])
        while self.at("*"):
            self.advance()
            coeff, factors = self.factor(coeff, factors)
        return Term(coeff, tuple(factors))

    def factor(self, coeff, factors: list):
        t = self.tok
        if t.kind == "number":
            self.advance()
            val = Fraction(int(t.text))
            if self.at("/"):
                self.advance()
                den = self.tok
                d = self.number()
                if d == 0:
                    raise _Syntax(den, "division by zero")
                val /= d
            return coeff * val, factors
        if t.kind == "ident" and t.text == "i":
            self.advance()
            return coeff * I, factors
        if t.kind == "ident":
            self.advance()
            return coeff, factors + [t.text]
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            if inner.symbols():
                raise _Syntax(t, "parenthesized factors must be scalars")
            val = ZERO
            for term in inner.terms:
                val = val + term.coeff
            return coeff * val, factors
        raise _Syntax(t, f"expected a scalar or a name, found {self._desc(t)}")


class _Scope:
    """Declaration-before-use, duplicate and shape checks inside one block."""

    def __init__(self, parser: _Parser, decl: Declaration):
        self.p = parser
        self.d = decl

    def err(self, loc, msg):
        self.p.error(loc, msg)

    def run(self):
        getattr(self, "check_" + self.d.kind)()
        if self.d.field == "Q":
            for st in self.d.statements:
                for e in _exprs(st):
                    if not e.is_real():
                        self.err(st.loc, "complex coefficient in a block declared over Q")

    def _linear(self, st, e: Expr, known, what: str):
        for t in e.terms:
            if len(t.factors) != 1:
                self.err(st.loc, f"{what} must be a linear combination of basis names")
                return
            if t.factors[0] not in known:
                self.err(st.loc, f"undeclared name {t.factors[0]!r}")

    def check_lie(self):
        basis: dict[str, int] = {}
        seen = set()
        for st in self.d.statements:
            if isinstance(st, Basis):
                if basis:
                    self.err(st.loc, "basis declared twice")
                    continue
                for nm in st.names:
                    if nm in basis:
                        self.err(st.loc, f"basis name {nm!r} repeated")
                    basis.setdefault(nm, len(basis))
                continue
            if not basis:
                self.err(st.loc, "bracket before basis declaration")
                continue
            ok = True
            for nm in (st.left, st.right):
                if nm not in basis:
                    self.err(st.loc, f"undeclared name {nm!r}")
                    ok = False
            if ok:
                i, j = basis[st.left], basis[st.right]
                if i == j:
                    self.err(st.loc, f"[{st.left},{st.right}] is zero by antisymmetry and may not be entered")
                elif i > j:
                    self.err(st.loc, f"bracket must be entered with the earlier basis element first: "
                                     f"write [{st.right},{st.left}]")
                elif (i, j) in seen:
                    self.err(st.loc, f"bracket [{st.left},{st.right}] entered twice")
                seen.add((i, j))
            self._linear(st, st.value, basis, "a bracket")
        if not basis:
            self.err(self.d.loc, f"lie block {self.d.name!r} has no basis")

    def check_cdga(self):
        gens: dict[str, GenDecl] = {}
        ds = set()
        trunc = False
        for st in self.d.statements:
            if isinstance(st, Gens):
                for g in st.gens:
                    if g.name in gens:
                        self.err(g.loc, f"generator {g.name!r} declared twice")
                    if g.degree < 1:
                        self.err(g.loc, f"generator {g.name!r} must have positive degree")
                    if g.bidegree is not None and sum(g.bidegree) != g.degree:
                        self.err(g.loc, f"bidegree {g.bidegree} of {g.name!r} does not add up to its degree")
                    gens.setdefault(g.name, g)
            elif isinstance(st, Differential):
                if st.name not in gens:
                    self.err(st.loc, f"d of undeclared generator {st.name!r}")
                if st.name in ds:
                    self.err(st.loc, f"d {st.name} given twice")
                ds.add(st.name)
                for s in st.value.symbols():
                    if s not in gens:
                        self.err(st.loc, f"undeclared name {s!r}")
            else:
                if trunc:
                    self.err(st.loc, "truncate given twice")
                trunc = True
        if not gens:
            self.err(self.d.loc, f"cdga block {self.d.name!r} has no generators")

    def check_bicomplex(self):
        names: set[str] = set()
        seen = set()
        for st in self.d.statements:
            if isinstance(st, Component):
                for nm in st.items:
                    if nm in names:
                        self.err(st.loc, f"basis name {nm!r} repeated")
                    names.add(nm)
                continue
            if st.name not in names:
                self.err(st.loc, f"{st.op} of undeclared name {st.name!r}")
            if (st.op, st.name) in seen:
                self.err(st.loc, f"{st.op} {st.name} given twice")
            seen.add((st.op, st.name))
            self._linear(st, st.value, names, f"{st.op} {st.name}")

    def check_basicring(self):
        gens: set[str] = set()
        counts: dict[type, int] = {}
        comps = set()
        for st in self.d.statements:
            counts[type(st)] = counts.get(type(st), 0) + 1
            if isinstance(st, (SetN, Gens, Omega)) and counts[type(st)] > 1:
                self.err(st.loc, f"{_KEYWORD[type(st)]} given twice")
            if isinstance(st, Gens):
                for g in st.gens:
                    if g.name in gens:
                        self.err(st.loc, f"generator {g.name!r} declared twice")
                    if g.name == "y":
                        self.err(st.loc, "the name y is reserved for the Sasaki model")
                    gens.add(g.name)
                continue
            if isinstance(st, Component):
                if st.bidegree not in ((1, 0), (0, 1)):
                    self.err(st.loc, "only the (1,0) and (0,1) components are given; higher ones are products")
                if st.bidegree in comps:
                    self.err(st.loc, f"component {st.bidegree} given twice")
                comps.add(st.bidegree)
            for e in _exprs(st):
                for s in e.symbols():
                    if s not in gens:
                        self.err(st.loc, f"undeclared name {s!r}")
        if SetN not in counts:
            self.err(self.d.loc, f"basicring {self.d.name!r} needs 'n = N;'")
        if (1, 0) not in comps:
            self.err(self.d.loc, f"basicring {self.d.name!r} needs a (1,0) component")


_KEYWORD = {SetN: "n", Gens: "gen", Omega: "omega"}


def _exprs(st) -> list[Expr]:
    if isinstance(st, (Bracket, Differential, Relation, Omega)):
        return [st.value]
    if isinstance(st, Component):
        return [e for e in st.items if isinstance(e, Expr)]
    return []


def parse(text: str) -> SourceFile | Diagnostics:
    """Parse ``text``; on failure the result is a non-empty :class:`Diagnostics`."""
    try:
        tokens = tokenize(text)
    except DSLError as exc:
        return exc.diagnostics
    p = _Parser(tokens)
    try:
        sf = p.source()
    except _Syntax as exc:
        p.diags.append(Diagnostic("error", str(exc), exc.tok.line, exc.tok.column))
        return p.diags
    if p.diags.has_errors:
        return p.diags
    return sf


def parse_expr(text: str) -> Expr:
    """A single expression, as used on the command line (``x1``, ``x1*x2 - x3``)."""
    p = _Parser(tokenize(text))
    try:
        e = p.expr()
        if p.tok.kind != "eof":
            raise _Syntax(p.tok, f"unexpected {p._desc(p.tok)} after expression")
    except _Syntax as exc:
        raise DSLError(Diagnostics([Diagnostic("error", str(exc), exc.tok.line, exc.tok.column)])) from None
    return e


def parse_or_raise(text: str) -> SourceFile:
    res = parse(text)
    if isinstance(res, Diagnostics):
        raise DSLError(res)
    return res


# ---------------------------------------------------------------------------
# printer


def _fmt_rational(x: Fraction) -> str:
    return str(x)


def _fmt_coeff(c) -> tuple[str, str]:
    """``(sign, body)`` for a nonzero coefficient; body is '' for 1."""
    if isinstance(c, Gaussian):
        re_, im = c.re, c.im
        if re_ == 0:
            sign = "-" if im < 0 else "+"
            a = abs(im)
            return sign, "i" if a == 1 else f"{_fmt_rational(a)}*i"
        imag = "i" if abs(im) == 1 else f"{_fmt_rational(abs(im))}*i"
        op = "-" if im < 0 else "+"
        return "+", f"({_fmt_rational(re_)} {op} {imag})"
    c = Fraction(c)
    sign = "-" if c < 0 else "+"
    a = abs(c)
    return sign, "" if a == 1 else _fmt_rational(a)


def format_expr(e: Expr) -> str:
    if not e.terms:
        return "0"
    parts = []
    for k, t in enumerate(e.terms):
        sign, body = _fmt_coeff(t.coeff)
        pieces = ([body] if body else []) + list(t.factors)
        text = "*".join(pieces) if pieces else "1"
        if k == 0:
            parts.append(("-" if sign == "-" else "") + text)
        else:
            parts.append(f" {sign} {text}")
    return "".join(parts)


def _fmt_bideg(bd) -> str:
    return f"({bd[0]},{bd[1]})"


def format_statement(st) -> str:
    if isinstance(st, Basis):
        return "basis " + " ".join(st.names) + ";"
    if isinstance(st, Bracket):
        return f"bracket [{st.left},{st.right}] = {format_expr(st.value)};"
    if isinstance(st, Gens):
        return "gen " + " ".join(
            f"{g.name}:{g.degree}" + (_fmt_bideg(g.bidegree) if g.bidegree else "") for g in st.gens) + ";"
    if isinstance(st, Differential):
        return f"{st.op} {st.name} = {format_expr(st.value)};"
    if isinstance(st, Truncate):
        return f"truncate {st.degree};"
    if isinstance(st, Component):
        items = [format_expr(x) if isinstance(x, Expr) else x for x in st.items]
        sep = ", " if st.items and isinstance(st.items[0], Expr) else " "
        return f"component {_fmt_bideg(st.bidegree)} " + sep.join(items) + ";"
    if isinstance(st, SetN):
        return f"n = {st.n};"
    if isinstance(st, Relation):
        return f"relation {format_expr(st.value)};"
    if isinstance(st, Omega):
        return f"omega = {format_expr(st.value)};"
    raise TypeError(f"not a statement: {st!r}")


def format_declaration(d: Declaration) -> str:
    head = f"{d.kind} {d.name}" + (f" over {d.field}" if d.field else "")
    body = []
    for st in d.statements:
        line = format_statement(st)
        if d.kind == "basicring" and isinstance(st, Gens):
            # basic rings declare bare names, all of degree 1
            line = "gen " + " ".join(g.name for g in st.gens) + ";"
        body.append("    " + line)
    return head + " {\n" + "\n".join(body) + ("\n" if body else "") + "}\n"


def format_source(sf: SourceFile) -> str:
    return "\n".join(format_declaration(d) for d in sf.declarations)


# ---------------------------------------------------------------------------
# lowering to package objects


def _fail(st, message: str):
    loc = getattr(st, "loc", Loc(0, 0))
    raise DSLError(Diagnostics([Diagnostic("error", message, loc.line, loc.column)]))


def _linear_map(e: Expr) -> dict:
    out: dict = {}
    for t in e.terms:
        nm = t.factors[0]
        out[nm] = out.get(nm, ZERO) + t.coeff
    return {k: v for k, v in out.items() if v}


def element_of(alg: FreeCDGA, e: Expr) -> Element:
    """Evaluate ``e`` in ``alg``; unknown generator names raise ``KeyError``."""
    out = alg.zero()
    for t in e.terms:
        m = alg.one()
        for f in t.factors:
            m = m * alg.gen(f)
        out = out + t.coeff * m
    return out


def lower_lie(d: Declaration) -> LieAlgebra:
    basis: tuple[str, ...] = ()
    sc = {}
    for st in d.statements:
        if isinstance(st, Basis):
            basis = st.names
        else:
            sc[st.left, st.right] = _linear_map(st.value)
    return LieAlgebra(basis, sc, name=d.name)


def lower_cdga(d: Declaration) -> FreeCDGA:
    gens = [(g.name, g.degree, g.bidegree) for st in d.statements if isinstance(st, Gens) for g in st.gens]
    trunc = next((st.degree for st in d.statements if isinstance(st, Truncate)), None)
    bare = FreeCDGA(gens, name=d.name, truncation_degree=trunc)
    diff = {}
    for st in d.statements:
        if not isinstance(st, Differential):
            continue
        g = bare.generators[bare.gen_id(st.name)]
        val = element_of(bare, st.value)
        if st.value.terms and not val:
            _fail(st, f"d {st.name} is declared nonzero but evaluates to zero "
                      f"(odd generators square to zero and graded commutativity may cancel terms)")
        if val and val.degree != g.degree + 1:
            _fail(st, f"d {st.name} must have degree {g.degree + 1}, got {val.degree}")
        diff[st.name] = dict(val.terms)
    return FreeCDGA(gens, diff, truncation_degree=trunc, name=d.name)


def lower_bicomplex(d: Declaration) -> Bicomplex:
    comps: dict[tuple[int, int], list[str]] = {}
    where = {}
    for st in d.statements:
        if isinstance(st, Component):
            comps.setdefault(st.bidegree, []).extend(st.items)
            for nm in st.items:
                where[nm] = st.bidegree
    maps: dict[str, dict] = {"del": {}, "delbar": {}}
    for st in d.statements:
        if isinstance(st, Differential):
            shift = (1, 0) if st.op == "del" else (0, 1)
            p, q = where[st.name]
            img = _linear_map(st.value)
            for tgt in img:
                if where[tgt] != (p + shift[0], q + shift[1]):
                    _fail(st, f"{st.op} {st.name} must land in bidegree ({p + shift[0]},{q + shift[1]}), "
                              f"but {tgt} has bidegree {where[tgt]}")
            maps[st.op][st.name] = img
    try:
        return Bicomplex(comps, maps["del"], maps["delbar"], name=d.name)
    except ValueError as exc:
        _fail(d, str(exc))


def lower_basicring(d: Declaration) -> BasicRing:
    n = next(st.n for st in d.statements if isinstance(st, SetN))
    names = [g.name for st in d.statements if isinstance(st, Gens) for g in st.gens]
    free = free_exterior(names)
    rels = []
    for st in d.statements:
        if isinstance(st, Relation):
            e = element_of(free, st.value)
            if e and e.degree is None:
                _fail(st, "relations must be homogeneous")
            rels.append(e)
    comps = {}
    for st in d.statements:
        if isinstance(st, Component):
            elems = [element_of(free, x) for x in st.items]
            for x, e in zip(st.items, elems):
                if not e or e.degree != 1:
                    _fail(st, f"component entries must be nonzero degree-1 elements, got {format_expr(x)!r}")
            comps[st.bidegree] = elems
    omega = None
    for st in d.statements:
        if isinstance(st, Omega):
            omega = element_of(free, st.value)
            if omega and omega.degree != 2:
                _fail(st, "omega must have degree 2")
    return BasicRing.from_presentation(d.name, n, free, rels, comps, omega)


_LOWER = {"lie": lower_lie, "cdga": lower_cdga, "bicomplex": lower_bicomplex, "basicring": lower_basicring}


def lower(d: Declaration):
    return _LOWER[d.kind](d)


def load(text: str, name: str | None = None):
    """Parse and lower one declaration (the only one, or the one called ``name``)."""
    sf = parse_or_raise(text)
    return lower(select(sf, name))


def select(sf: SourceFile, name: str | None = None) -> Declaration:
    if name is not None:
        try:
            return sf.get(name)
        except KeyError:
            raise DSLError(Diagnostics([Diagnostic("error", f"no declaration named {name!r}", 1, 1)])) from None
    if len(sf.declarations) != 1:
        msg = "file is empty" if not sf.declarations else \
            f"file has {len(sf.declarations)} declarations; pick one of {', '.join(sf.names)}"
        raise DSLError(Diagnostics([Diagnostic("error", msg, 1, 1)]))
    return sf.declarations[0]


__all__ = [
    "Diagnostic", "Diagnostics", "DSLError", "Token", "tokenize", "Loc", "Term", "Expr", "Basis", "Bracket",
    "GenDecl", "Gens", "Differential", "Truncate", "Component", "SetN", "Relation", "Omega", "Declaration",
    "SourceFile", "parse", "parse_expr", "parse_or_raise", "element_of", "format_expr", "format_statement",
    "format_declaration", "format_source", "lower", "lower_lie", "lower_cdga", "lower_bicomplex", "lower_basicring", "load", "select",
]
