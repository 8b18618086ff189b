"""A small language for algebra presentations, maps, ledgers and complexes.

Example::

    dga S2 { gen x : 2; gen y : 3; d x = 0; d y = x^2; }
    morphism f : S2 -> T { x -> 2*u; y -> 0; }
    homotopy H : S2 -> T { x -> u*(1 - t) + c*dt; }
    ledger W : T { u = 2; c = 2; dt = 1; }
    complex disk { 0 1 2; 0 2 3; A { 0 1; } }

Products are written with ``*`` (``^`` between two factors is accepted as a
synonym); ``x^n`` with an integer ``n`` is a power; ``t`` and ``dt`` are
reserved inside homotopy blocks.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import PresentationSyntaxError, SemanticError

# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: Tuple["Expr", ...]


@dataclass(frozen=True)
class Neg:
    inner: "Expr"


@dataclass(frozen=True)
class Add:
    terms: Tuple[Tuple[str, "Expr"], ...]


Expr = Union[Num, Sym, Pow, Mul, Neg, Add]


@dataclass(frozen=True)
class GenDecl:
    name: str
    degree: int
    weight: Optional[int] = None


@dataclass(frozen=True)
class DiffDecl:
    name: str
    expr: Expr


@dataclass(frozen=True)
class DgaDecl:
    name: str
    gens: Tuple[GenDecl, ...]
    diffs: Tuple[DiffDecl, ...]
    top: Optional[int] = None


@dataclass(frozen=True)
class MapDecl:
    kind: str  # "morphism" or "homotopy"
    name: str
    source: str
    target: str
    images: Tuple[Tuple[str, Expr], ...]


@dataclass(frozen=True)
class LedgerDecl:
    name: str
    algebra: Optional[str]
    entries: Tuple[Tuple[str, Fraction], ...]
    dt: Optional[Fraction] = None


@dataclass(frozen=True)
class ComplexDecl:
    name: str
    simplices: Tuple[Tuple[int, ...], ...]
    relative: Tuple[Tuple[int, ...], ...] = ()


Decl = Union[DgaDecl, MapDecl, LedgerDecl, ComplexDecl]


@dataclass(frozen=True)
class Program:
    decls: Tuple[Decl, ...]


# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->) | (?P<int>\d+) | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[{}();:=+\-*^/,])
""", re.VERBOSE)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass
class Token:
    kind: str  # int, ident, sym, eof
    text: str
    line: int
    col: int


def tokenize(src: str, names: Sequence[str] = ()) -> List[Token]:
    """Split source into tokens. ``names`` are extra identifiers (such as
    ``c(w^x)``) matched verbatim, longest first, before the ordinary rules."""
    out: List[Token] = []
    pos, line, col = 0, 1, 1
    special = sorted((n for n in names if not _IDENT.fullmatch(n)), key=len, reverse=True)
    while pos < len(src):
        hit = next((n for n in special if src.startswith(n, pos)), None)
        if hit is not None:
            out.append(Token("ident", hit, line, col))
            col += len(hit)
            pos += len(hit)
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise PresentationSyntaxError(line, col, {"token"}, src[pos])
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(text)
        else:
            out.append(Token("sym" if kind == "arrow" else kind, text, line, col))
            col += len(text)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# ---------------------------------------------------------------- parser

class Parser:
    def __init__(self, src: str, names: Sequence[str] = ()):
        self.toks = tokenize(src, names)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, expected):
        t = self.tok
        raise PresentationSyntaxError(t.line, t.col, set(expected), t.text or "end of input")

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail({text})
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail({"identifier"})
        t = self.tok.text
        self.i += 1
        return t

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail({"integer"})
        v = int(self.tok.text)
        self.i += 1
        return v

    def number(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.i += 1
            neg = True
        p = self.integer()
        q = 1
        if self.at("/") and self.peek().kind == "int":
            self.i += 1
            q = self.integer()
        v = Fraction(p, q)
        return -v if neg else v

    # program
    def program(self) -> Program:
        decls = []
        while self.tok.kind != "eof":
            if self.at("dga"):
                decls.append(self.dga())
            elif self.at("morphism") or self.at("homotopy"):
                decls.append(self.mapping())
            elif self.at("ledger"):
                decls.append(self.ledger())
            elif self.at("complex"):
                decls.append(self.complex_())
            else:
                self.fail({"dga", "morphism", "homotopy", "ledger", "complex"})
        return Program(tuple(decls))

    def dga(self) -> DgaDecl:
        self.expect("dga")
        name = self.ident()
        self.expect("{")
        gens, diffs, top = [], [], None
        while not self.at("}"):
            if self.at("gen"):
                self.i += 1
                g = self.ident()
                self.expect(":")
                deg = self.integer()
                w = None
                if self.at("weight"):
                    self.i += 1
                    w = self.integer()
                self.expect(";")
                gens.append(GenDecl(g, deg, w))
            elif self.at("d"):
                self.i += 1
                g = self.ident()
                self.expect("=")
                e = self.expr()
                self.expect(";")
                diffs.append(DiffDecl(g, e))
            elif self.at("top"):
                self.i += 1
                top = self.integer()
                self.expect(";")
            else:
                self.fail({"gen", "d", "top", "}"})
        self.expect("}")
        return DgaDecl(name, tuple(gens), tuple(diffs), top)

    def mapping(self) -> MapDecl:
        kind = self.ident()
        name = self.ident()
        self.expect(":")
        src = self.ident()
        self.expect("->")
        tgt = self.ident()
        self.expect("{")
        images = []
        while not self.at("}"):
            g = self.ident()
            self.expect("->")
            e = self.expr()
            self.expect(";")
            images.append((g, e))
        self.expect("}")
        return MapDecl(kind, name, src, tgt, tuple(images))

    def ledger(self) -> LedgerDecl:
        self.expect("ledger")
        name = self.ident()
        alg = None
        if self.at(":"):
            self.i += 1
            alg = self.ident()
        self.expect("{")
        entries, dtw = [], None
        while not self.at("}"):
            a = self.ident()
            self.expect("=")
            v = self.number()
            self.expect(";")
            if a == "dt":
                dtw = v
            else:
                entries.append((a, v))
        self.expect("}")
        return LedgerDecl(name, alg, tuple(entries), dtw)

    def simplex_list(self) -> List[Tuple[int, ...]]:
        out = []
        while self.tok.kind == "int":
            verts = []
            while self.tok.kind == "int":
                verts.append(self.integer())
            self.expect(";")
            out.append(tuple(verts))
        return out

    def complex_(self) -> ComplexDecl:
        self.expect("complex")
        name = self.ident()
        self.expect("{")
        simp = self.simplex_list()
        rel: List[Tuple[int, ...]] = []
        if self.at("A"):
            self.i += 1
            self.expect("{")
            rel = self.simplex_list()
            self.expect("}")
        if not self.at("}"):
            self.fail({"integer", "A", "}"})
        self.expect("}")
        return ComplexDecl(name, tuple(simp), tuple(rel))

    # expressions
    def expr(self) -> Expr:
        first = self.term()
        items = [("+", first)]
        while self.at("+") or self.at("-"):
            sign = self.tok.text
            self.i += 1
            items.append((sign, self.term()))
        if len(items) == 1:
            return first
        return Add(tuple(items))

    def term(self) -> Expr:
        factors = [self.unary()]
        while self.at("*") or (self.at("^") and self.peek().kind != "int"):
            self.i += 1
            factors.append(self.unary())
        if len(factors) == 1:
            return factors[0]
        return Mul(tuple(factors))

    def unary(self) -> Expr:
        if self.at("-"):
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^") and self.peek().kind == "int":
            self.i += 1
            return Pow(base, self.integer())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            return Num(self.number())
        if t.kind == "ident":
            self.i += 1
            return Sym(t.text)
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        self.fail({"number", "identifier", "("})


def parse(src: str) -> Program:
    return Parser(src).program()


def parse_expr(src: str, names: Sequence[str] = ()) -> Expr:
    p = Parser(src, names)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail({"end of input", "+", "-", "*"})
    return e


# ---------------------------------------------------------------- printer

def print_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Pow):
        b = print_expr(e.base)
        if not isinstance(e.base, (Sym, Num)):
            b = f"({b})"
        return f"{b}^{e.exp}"
    if isinstance(e, Neg):
        inner = print_expr(e.inner)
        if isinstance(e.inner, (Mul, Add)):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Mul):
        parts = []
        for f in e.factors:
            s = print_expr(f)
            if isinstance(f, (Add, Mul)):
                s = f"({s})"
            parts.append(s)
        return "*".join(parts)
    if isinstance(e, Add):
        out = []
        for k, (sign, t) in enumerate(e.terms):
            s = print_expr(t)
            if isinstance(t, Add):
                s = f"({s})"
            out.append(s if k == 0 else f" {sign} {s}")
        return "".join(out)
    raise TypeError(e)


def print_decl(d: Decl) -> str:
    if isinstance(d, DgaDecl):
        lines = [f"dga {d.name} {{"]
        if d.top is not None:
            lines.append(f"  top {d.top};")
        for g in d.gens:
            w = f" weight {g.weight}" if g.weight is not None else ""
            lines.append(f"  gen {g.name} : {g.degree}{w};")
        for df in d.diffs:
            lines.append(f"  d {df.name} = {print_expr(df.expr)};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, MapDecl):
        lines = [f"{d.kind} {d.name} : {d.source} -> {d.target} {{"]
        lines += [f"  {g} -> {print_expr(e)};" for g, e in d.images]
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, LedgerDecl):
        head = f"ledger {d.name}" + (f" : {d.algebra}" if d.algebra else "") + " {"
        lines = [head] + [f"  {a} = {v};" for a, v in d.entries]
        if d.dt is not None:
            lines.append(f"  dt = {d.dt};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, ComplexDecl):
        lines = [f"complex {d.name} {{"]
        lines += ["  " + " ".join(map(str, s)) + ";" for s in d.simplices]
        if d.relative:
            lines.append("  A {")
            lines += ["    " + " ".join(map(str, s)) + ";" for s in d.relative]
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines)
    raise TypeError(d)


def print_program(p: Program) -> str:
    return "\n\n".join(print_decl(d) for d in p.decls) + "\n"


# ---------------------------------------------------------------- evaluation

def eval_expr(e: Expr, env: Dict[str, object], zero):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Sym):
        if e.name not in env:
            raise SemanticError(f"unknown generator {e.name!r}")
        return env[e.name]
    if isinstance(e, Pow):
        b = eval_expr(e.base, env, zero)
        out = Fraction(1)
        for _ in range(e.exp):
            out = out * b
        return out
    if isinstance(e, Neg):
        return -eval_expr(e.inner, env, zero)
    if isinstance(e, Mul):
        out = Fraction(1)
        for f in e.factors:
            out = out * eval_expr(f, env, zero)
        return out
    if isinstance(e, Add):
        out = zero
        for sign, t in e.terms:
            v = eval_expr(t, env, zero)
            out = out + v if sign == "+" else out - v
        return out
    raise TypeError(e)


def parse_element(alg, text: str):
    env = {g.name: alg.gen(g.name) for g in alg.generators}
    v = eval_expr(parse_expr(text, list(env)), env, alg.zero())
    return alg.coerce(v) if not hasattr(v, "alg") else alg.embed(v)


def element_to_expr(x) -> Expr:
    """Canonical expression for an Element (generator names must be identifiers)."""
    terms = []
    for m, c in x.sorted_terms():
        factors: List[Expr] = []
        for i, e in m:
            s = Sym(x.alg.generators[i].name)
            factors.append(s if e == 1 else Pow(s, e))
        mag = abs(c)
        if not factors:
            body: Expr = Num(mag)
        elif mag != 1:
            body = Mul(tuple([Num(mag)] + factors))
        else:
            body = factors[0] if len(factors) == 1 else Mul(tuple(factors))
        terms.append((c, body))
    if not terms:
        return Num(Fraction(0))
    items = []
    for k, (c, body) in enumerate(terms):
        if k == 0:
            items.append(("+", Neg(body) if c < 0 else body))
        else:
            items.append(("-" if c < 0 else "+", body))
    return items[0][1] if len(items) == 1 else Add(tuple(items))


def dga_to_decl(A, name: Optional[str] = None) -> DgaDecl:
    gens = tuple(GenDecl(g.name, g.degree, g.weight) for g in A.generators)
    diffs = tuple(DiffDecl(g.name, element_to_expr(A.diff[i])) for i, g in enumerate(A.generators))
    return DgaDecl(name or A.name or "A", gens, diffs, A.top_degree)


def dga_to_text(A, name: Optional[str] = None) -> str:
    return print_decl(dga_to_decl(A, name)) + "\n"


# ---------------------------------------------------------------- semantics

@dataclass
class Workspace:
    dgas: Dict[str, object] = field(default_factory=dict)
    morphisms: Dict[str, object] = field(default_factory=dict)
    homotopies: Dict[str, object] = field(default_factory=dict)
    ledgers: Dict[str, object] = field(default_factory=dict)
    complexes: Dict[str, object] = field(default_factory=dict)


def build_dga(d: DgaDecl):
    from .algebra import FreeCDGA, Generator
    seen = set()
    for g in d.gens:
        if g.name in seen:
            raise SemanticError(f"generator {g.name} declared twice in {d.name}")
        if g.name in ("t", "dt", "d"):
            raise SemanticError(f"{g.name!r} is reserved")
        seen.add(g.name)
    for df in d.diffs:
        if df.name not in seen:
            raise SemanticError(f"differential given for undeclared generator {df.name!r}")
    gens = [Generator(g.name, g.degree, g.weight) for g in d.gens]

    def diffs(alg):
        env = {g.name: alg.gen(g.name) for g in alg.generators}
        return {df.name: alg.coerce(eval_expr(df.expr, env, alg.zero())) for df in d.diffs}

    from .errors import DegreeMismatch
    try:
        return FreeCDGA(gens, diffs, top_degree=d.top, name=d.name)
    except DegreeMismatch as exc:
        raise SemanticError(f"in {d.name}: {exc}") from exc


def _lookup_dga(ws: Workspace, name: str):
    if name in ws.dgas:
        return ws.dgas[name]
    from .models import canned_model
    from .errors import UnknownModel
    try:
        alg = canned_model(name)
    except UnknownModel:
        raise SemanticError(f"unknown algebra {name!r}") from None
    ws.dgas[name] = alg
    return alg


def build(program: Program) -> Workspace:
    from .cylinder import CylinderElement, dt, t
    from .morphisms import Homotopy, Morphism
    from .ledger import WeightLedger
    from .cochains import SimplicialPair
    ws = Workspace()
    for d in program.decls:
        if isinstance(d, DgaDecl):
            ws.dgas[d.name] = build_dga(d)
        elif isinstance(d, MapDecl):
            src = _lookup_dga(ws, d.source)
            tgt = _lookup_dga(ws, d.target)
            env = {g.name: tgt.gen(g.name) for g in tgt.generators}
            images = {}
            for g, e in d.images:
                if g not in src.index:
                    raise SemanticError(f"{g!r} is not a generator of {d.source}")
                if d.kind == "homotopy":
                    env2 = dict(env, t=t(tgt), dt=dt(tgt))
                    v = eval_expr(e, env2, CylinderElement.zero(tgt))
                    if not isinstance(v, CylinderElement):
                        v = CylinderElement.const(tgt.coerce(v))
                else:
                    v = tgt.coerce(eval_expr(e, env, tgt.zero()))
                images[g] = v
            from .errors import DegreeMismatch
            try:
                obj = (Homotopy if d.kind == "homotopy" else Morphism)(src, tgt, images)
            except DegreeMismatch as exc:
                raise SemanticError(f"in {d.name}: {exc}") from exc
            (ws.homotopies if d.kind == "homotopy" else ws.morphisms)[d.name] = obj
        elif isinstance(d, LedgerDecl):
            ws.ledgers[d.name] = WeightLedger(dict(d.entries), dt_exponent=d.dt or 0)
        elif isinstance(d, ComplexDecl):
            ws.complexes[d.name] = SimplicialPair(d.simplices, d.relative, name=d.name)
    return ws


def load(src: str) -> Workspace:
    return build(parse(src))
