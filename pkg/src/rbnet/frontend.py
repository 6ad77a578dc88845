"""Concrete syntax: lexer, parsers, and pretty-printers.

Model files (``.rbn``) declare the vocabulary, optional cumulative
combination functions, and one label clause per probabilistic relation.
Scenario files (``.rbs``) give a domain, rigid interpretations and constant
bindings, an evidence literal list, and query atoms.  Both languages are
whitespace-insensitive with ``#`` line comments, and both round-trip through
the pretty-printer to structurally identical documents.

Grammar sketch (``cc`` is the convex-combination node, the only arithmetic):

    model    := item*
    item     := "relation" IDENT "/" INT ";"
              | "rigid"    IDENT "/" INT ";"
              | "constant" IDENT ";"
              | "combfun"  IDENT "cumulative" "[" RAT ("," RAT)* "]" ";"
              | IDENT "(" vars? ")" "=" pf ";"
    pf       := RAT | IDENT "(" terms? ")" | "cc" "(" pf "," pf "," pf ")"
              | IDENT "{" pf ("," pf)* "|" vars? ";" con "}"
    con      := "true" | "false" | term "=" term | term "!=" term
              | IDENT "(" terms? ")" | "!" con | con "&" con | con "|" con
              | "(" con ")"
    scenario := "domain" "{" IDENT ("," IDENT)* "}"
                ("rigid" IDENT "=" "{" tuple ("," tuple)* "}")*
                ("bind" IDENT "=" IDENT)*
                ("evidence" "{" lit ("," lit)* "}")?
                "query" atom ("," atom)*

Rationals are written ``p/q`` or as decimals; decimals are parsed exactly
(``0.8`` becomes ``4/5``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import combinators
from .errors import ModelValidationError, ParseError
from .fol import FAnd, FAtom, FEq, FExists, FForall, FNot, FOr
from .grounding import Evidence
from .model import (And, Comb, Const, Convex, Eq, FALSE, FalseC, GroundAtom,
                    Indicator, Not, Or, RelationalNetwork, RigidAtom, RigidConst,
                    Structure, TRUE, TrueC, Var, Vocabulary, validate_network)

_KEYWORDS = {"relation", "rigid", "constant", "combfun", "cumulative", "cc",
             "true", "false", "domain", "bind", "evidence", "query"}


# ---------------------------------------------------------------------------
# Documents

@dataclass(frozen=True)
class RelationDecl:
    name: str
    arity: int


@dataclass(frozen=True)
class RigidDecl:
    name: str
    arity: int


@dataclass(frozen=True)
class ConstantDecl:
    name: str


@dataclass(frozen=True)
class CombFunDecl:
    name: str
    gamma: tuple


@dataclass(frozen=True)
class LabelClause:
    relation: str
    params: tuple
    formula: object


@dataclass(frozen=True)
class ModelDocument:
    items: tuple


@dataclass(frozen=True)
class ScenarioDocument:
    domain: tuple
    rigids: tuple  # ((name, (tuple, ...)), ...)
    binds: tuple   # ((constant, element), ...)
    evidence_pos: tuple
    evidence_neg: tuple
    queries: tuple


@dataclass(frozen=True)
class ParsedModel:
    document: ModelDocument
    network: RelationalNetwork
    registry: combinators.Registry


# ---------------------------------------------------------------------------
# Lexer

@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "ident" | "op" | "eof"
    value: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+|/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>!=|[(){}\[\];,=|&!/])
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


def _parse_rational(tok: _Token) -> Fraction:
    try:
        if "." in tok.value:
            whole, frac = tok.value.split(".")
            return Fraction(int(whole + frac), 10 ** len(frac))
        if "/" in tok.value:
            p, q = tok.value.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(tok.value))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed number {tok.value!r}", tok.line, tok.col) from None


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.constants: set = set()

    def peek(self, offset=0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, value: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.value or 'end of input'!r}",
                             tok.line, tok.col)
        return self.advance()

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def term(self):
        tok = self.expect("ident")
        if tok.value in self.constants:
            return RigidConst(tok.value)
        return Var(tok.value)

    def term_list(self, close=")"):
        terms = []
        if not self.at("op", close):
            terms.append(self.term())
            while self.at("op", ","):
                self.advance()
                terms.append(self.term())
        return tuple(terms)

    # -- model items --------------------------------------------------------

    def model(self) -> ModelDocument:
        items = []
        while not self.at("eof"):
            items.append(self.item())
        return ModelDocument(tuple(items))

    def item(self):
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected a declaration or label clause, found {tok.value!r}",
                             tok.line, tok.col)
        if tok.value in ("relation", "rigid"):
            self.advance()
            name = self.expect("ident").value
            self.expect("op", "/")
            ar_tok = self.expect("number")
            arity = _parse_rational(ar_tok)
            if arity.denominator != 1:
                raise ParseError("arity must be an integer", ar_tok.line, ar_tok.col)
            self.expect("op", ";")
            cls = RelationDecl if tok.value == "relation" else RigidDecl
            return cls(name, int(arity))
        if tok.value == "constant":
            self.advance()
            name = self.expect("ident").value
            self.expect("op", ";")
            self.constants.add(name)
            return ConstantDecl(name)
        if tok.value == "combfun":
            self.advance()
            name = self.expect("ident").value
            self.expect("ident", "cumulative")
            self.expect("op", "[")
            gamma = [_parse_rational(self.expect("number"))]
            while self.at("op", ","):
                self.advance()
                gamma.append(_parse_rational(self.expect("number")))
            self.expect("op", "]")
            self.expect("op", ";")
            return CombFunDecl(name, tuple(gamma))
        # label clause
        name = self.advance().value
        self.expect("op", "(")
        params = []
        if not self.at("op", ")"):
            params.append(Var(self.expect("ident").value))
            while self.at("op", ","):
                self.advance()
                params.append(Var(self.expect("ident").value))
        self.expect("op", ")")
        self.expect("op", "=")
        f = self.pf()
        self.expect("op", ";")
        return LabelClause(name, tuple(params), f)

    # -- probability formulas -----------------------------------------------

    def pf(self):
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            q = _parse_rational(tok)
            if not 0 <= q <= 1:
                raise ParseError(f"constant {tok.value} out of [0,1]", tok.line, tok.col)
            return Const(q)
        if tok.kind != "ident":
            raise ParseError(f"expected a probability formula, found {tok.value or 'end of input'!r}",
                             tok.line, tok.col)
        if tok.value == "cc":
            self.advance()
            self.expect("op", "(")
            f1 = self.pf()
            self.expect("op", ",")
            f2 = self.pf()
            self.expect("op", ",")
            f3 = self.pf()
            self.expect("op", ")")
            return Convex(f1, f2, f3)
        name = self.advance().value
        if self.at("op", "("):
            self.advance()
            args = self.term_list()
            self.expect("op", ")")
            return Indicator(name, args)
        if self.at("op", "{"):
            self.advance()
            formulas = [self.pf()]
            while self.at("op", ","):
                self.advance()
                formulas.append(self.pf())
            self.expect("op", "|")
            bound = []
            if not self.at("op", ";"):
                bound.append(Var(self.expect("ident").value))
                while self.at("op", ","):
                    self.advance()
                    bound.append(Var(self.expect("ident").value))
            self.expect("op", ";")
            con = self.con()
            self.expect("op", "}")
            return Comb(name, tuple(formulas), tuple(bound), con)
        raise ParseError(f"expected '(' or '{{' after {name!r}", tok.line, tok.col)

    # -- constraints ----------------------------------------------------------

    def con(self):
        left = self.con_and()
        while self.at("op", "|"):
            self.advance()
            left = Or(left, self.con_and())
        return left

    def con_and(self):
        left = self.con_unary()
        while self.at("op", "&"):
            self.advance()
            left = And(left, self.con_unary())
        return left

    def con_unary(self):
        tok = self.peek()
        if self.at("op", "!") and not self.at("op", "!="):
            self.advance()
            return Not(self.con_unary())
        if self.at("op", "("):
            self.advance()
            c = self.con()
            self.expect("op", ")")
            return c
        if tok.kind == "ident" and tok.value == "true":
            self.advance()
            return TRUE
        if tok.kind == "ident" and tok.value == "false":
            self.advance()
            return FALSE
        if tok.kind == "ident" and self.peek(1).kind == "op" and self.peek(1).value == "(":
            name = self.advance().value
            self.advance()
            args = self.term_list()
            self.expect("op", ")")
            return RigidAtom(name, args)
        left = self.term()
        if self.at("op", "="):
            self.advance()
            return Eq(left, self.term())
        if self.at("op", "!="):
            self.advance()
            return Not(Eq(left, self.term()))
        tok = self.peek()
        raise ParseError(f"expected '=' or '!=', found {tok.value or 'end of input'!r}",
                         tok.line, tok.col)

    # -- scenarios ------------------------------------------------------------

    def scenario(self) -> ScenarioDocument:
        self.expect("ident", "domain")
        self.expect("op", "{")
        domain = [self.expect("ident").value]
        while self.at("op", ","):
            self.advance()
            domain.append(self.expect("ident").value)
        self.expect("op", "}")
        if len(set(domain)) != len(domain):
            raise ParseError("domain elements must be distinct",
                             self.peek().line, self.peek().col)
        rigids = []
        while self.at("ident", "rigid"):
            self.advance()
            name = self.expect("ident").value
            self.expect("op", "=")
            self.expect("op", "{")
            tuples = []
            if not self.at("op", "}"):
                tuples.append(self.element_tuple())
                while self.at("op", ","):
                    self.advance()
                    tuples.append(self.element_tuple())
            self.expect("op", "}")
            rigids.append((name, tuple(tuples)))
        binds = []
        while self.at("ident", "bind"):
            self.advance()
            const = self.expect("ident").value
            self.expect("op", "=")
            binds.append((const, self.expect("ident").value))
        pos, neg = [], []
        if self.at("ident", "evidence"):
            self.advance()
            self.expect("op", "{")
            self.literal(pos, neg)
            while self.at("op", ","):
                self.advance()
                self.literal(pos, neg)
            self.expect("op", "}")
        if set(pos) & set(neg):
            tok = self.peek()
            raise ParseError("contradictory evidence literals", tok.line, tok.col)
        self.expect("ident", "query")
        queries = [self.ground_atom()]
        while self.at("op", ","):
            self.advance()
            queries.append(self.ground_atom())
        self.expect("eof")
        return ScenarioDocument(tuple(domain), tuple(rigids), tuple(binds),
                                tuple(pos), tuple(neg), tuple(queries))

    def element_tuple(self):
        self.expect("op", "(")
        elems = [self.expect("ident").value]
        while self.at("op", ","):
            self.advance()
            elems.append(self.expect("ident").value)
        self.expect("op", ")")
        return tuple(elems)

    def literal(self, pos, neg):
        if self.at("op", "!"):
            self.advance()
            neg.append(self.ground_atom())
        else:
            pos.append(self.ground_atom())

    def ground_atom(self) -> GroundAtom:
        name = self.expect("ident").value
        args = self.element_tuple()
        return GroundAtom(name, args)

    # -- first-order formulas -------------------------------------------------

    def fol(self):
        if self.at("ident", "exists") or self.at("ident", "forall"):
            kw = self.advance().value
            v = Var(self.expect("ident").value)
            body = self.fol()
            return FExists(v, body) if kw == "exists" else FForall(v, body)
        return self.fol_or()

    def fol_or(self):
        left = self.fol_and()
        while self.at("op", "|"):
            self.advance()
            left = FOr(left, self.fol_and())
        return left

    def fol_and(self):
        left = self.fol_unary()
        while self.at("op", "&"):
            self.advance()
            left = FAnd(left, self.fol_unary())
        return left

    def fol_unary(self):
        if self.at("op", "!") and not self.at("op", "!="):
            self.advance()
            return FNot(self.fol_unary())
        if self.at("op", "("):
            self.advance()
            f = self.fol()
            self.expect("op", ")")
            return f
        if self.at("ident", "exists") or self.at("ident", "forall"):
            return self.fol()
        name_tok = self.expect("ident")
        if self.at("op", "("):
            self.advance()
            args = []
            if not self.at("op", ")"):
                args.append(Var(self.expect("ident").value))
                while self.at("op", ","):
                    self.advance()
                    args.append(Var(self.expect("ident").value))
            self.expect("op", ")")
            return FAtom(name_tok.value, tuple(args))
        if self.at("op", "="):
            self.advance()
            return FEq(Var(name_tok.value), Var(self.expect("ident").value))
        if self.at("op", "!="):
            self.advance()
            return FNot(FEq(Var(name_tok.value), Var(self.expect("ident").value)))
        tok = self.peek()
        raise ParseError(f"expected an atom or equality, found {tok.value or 'end of input'!r}",
                         tok.line, tok.col)


# ---------------------------------------------------------------------------
# Public parse entry points

def parse_model(text: str) -> ParsedModel:
    """Parse a model source into a document, network, and registry.

    Validation failures are forwarded as ``ModelValidationError`` carrying
    the full report.
    """
    try:
        parser = _Parser(text)
        doc = parser.model()
    except RecursionError:
        raise ParseError("input nested too deeply") from None
    network, registry = document_to_network(doc)
    report = validate_network(network, registry)
    if not report.ok:
        raise ModelValidationError(report)
    return ParsedModel(doc, network, registry)


def parse_scenario(text: str) -> ScenarioDocument:
    try:
        parser = _Parser(text)
        return parser.scenario()
    except RecursionError:
        raise ParseError("input nested too deeply") from None


def parse_fol(text: str):
    """Parse a first-order formula over the probabilistic vocabulary."""
    try:
        parser = _Parser(text)
        f = parser.fol()
        parser.expect("eof")
        return f
    except RecursionError:
        raise ParseError("input nested too deeply") from None


def document_to_network(doc: ModelDocument):
    """Assemble the network and combination-function registry of a document."""
    prob, rigid, constants = {}, {}, set()
    registry = combinators.default_registry()
    params, labels = {}, {}
    for item in doc.items:
        if isinstance(item, RelationDecl):
            _declare_once(prob, rigid, item.name)
            prob[item.name] = item.arity
        elif isinstance(item, RigidDecl):
            _declare_once(prob, rigid, item.name)
            rigid[item.name] = item.arity
        elif isinstance(item, ConstantDecl):
            constants.add(item.name)
        elif isinstance(item, CombFunDecl):
            try:
                table = combinators.CumulativeTable(item.gamma)
            except ValueError as exc:
                raise ParseError(f"combfun {item.name}: {exc}") from None
            registry.register(table.as_function(item.name))
        elif isinstance(item, LabelClause):
            if item.relation in labels:
                raise ParseError(f"duplicate label for relation {item.relation}")
            params[item.relation] = item.params
            labels[item.relation] = item.formula
        else:
            raise TypeError(f"unknown document item {item!r}")
    try:
        vocabulary = Vocabulary(prob, rigid, frozenset(constants))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    network = RelationalNetwork.from_labels(vocabulary, params, labels)
    return network, registry


def _declare_once(prob, rigid, name):
    if name in prob or name in rigid:
        raise ParseError(f"relation {name} declared twice")


def scenario_structure(doc: ScenarioDocument) -> Structure:
    """The rigid part of a scenario as a structure (no probabilistic symbols)."""
    interp = {}
    for name, tuples in doc.rigids:
        interp[name] = frozenset(tuples) | interp.get(name, frozenset())
    try:
        return Structure(doc.domain, interp, dict(doc.binds))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def scenario_evidence(doc: ScenarioDocument) -> Evidence:
    return Evidence(frozenset(doc.evidence_pos), frozenset(doc.evidence_neg))


# ---------------------------------------------------------------------------
# Pretty-printing

def format_term(t) -> str:
    return t.name


def format_constraint(c, parent_prec=0) -> str:
    if isinstance(c, TrueC):
        return "true"
    if isinstance(c, FalseC):
        return "false"
    if isinstance(c, Eq):
        return f"{format_term(c.left)} = {format_term(c.right)}"
    if isinstance(c, RigidAtom):
        return f"{c.name}({','.join(format_term(a) for a in c.args)})"
    if isinstance(c, Not):
        if isinstance(c.arg, Eq):
            return f"{format_term(c.arg.left)} != {format_term(c.arg.right)}"
        return f"!{format_constraint(c.arg, 3)}"
    if isinstance(c, And):
        s = f"{format_constraint(c.left, 2)} & {format_constraint(c.right, 3)}"
        return f"({s})" if parent_prec > 2 else s
    if isinstance(c, Or):
        s = f"{format_constraint(c.left, 1)} | {format_constraint(c.right, 2)}"
        return f"({s})" if parent_prec > 1 else s
    raise TypeError(f"not a constraint: {c!r}")


def format_formula(f) -> str:
    if isinstance(f, Const):
        return str(f.value)
    if isinstance(f, Indicator):
        return f"{f.relation}({','.join(format_term(a) for a in f.args)})"
    if isinstance(f, Convex):
        return f"cc({format_formula(f.f1)}, {format_formula(f.f2)}, {format_formula(f.f3)})"
    if isinstance(f, Comb):
        fs = ", ".join(format_formula(g) for g in f.formulas)
        zs = ", ".join(v.name for v in f.bound)
        con = format_constraint(f.constraint)
        return f"{f.name}{{ {fs} | {zs}; {con} }}" if zs else f"{f.name}{{ {fs} | ; {con} }}"
    raise TypeError(f"not a probability formula: {f!r}")


def pretty_print(doc) -> str:
    """Render a document so that parsing the output reproduces it exactly."""
    if isinstance(doc, ModelDocument):
        lines = []
        for item in doc.items:
            if isinstance(item, RelationDecl):
                lines.append(f"relation {item.name}/{item.arity};")
            elif isinstance(item, RigidDecl):
                lines.append(f"rigid {item.name}/{item.arity};")
            elif isinstance(item, ConstantDecl):
                lines.append(f"constant {item.name};")
            elif isinstance(item, CombFunDecl):
                gamma = ", ".join(str(g) for g in item.gamma)
                lines.append(f"combfun {item.name} cumulative [{gamma}];")
            elif isinstance(item, LabelClause):
                ps = ",".join(v.name for v in item.params)
                lines.append(f"{item.relation}({ps}) = {format_formula(item.formula)};")
            else:
                raise TypeError(f"unknown document item {item!r}")
        return "\n".join(lines) + "\n"
    if isinstance(doc, ScenarioDocument):
        lines = [f"domain {{{', '.join(doc.domain)}}}"]
        for name, tuples in doc.rigids:
            ts = ", ".join("(" + ",".join(t) + ")" for t in tuples)
            lines.append(f"rigid {name} = {{{ts}}}")
        for const, elem in doc.binds:
            lines.append(f"bind {const} = {elem}")
        lits = [str(a) for a in doc.evidence_pos] + [f"!{a}" for a in doc.evidence_neg]
        if lits:
            lines.append(f"evidence {{{', '.join(lits)}}}")
        lines.append("query " + ", ".join(str(a) for a in doc.queries))
        return "\n".join(lines) + "\n"
    raise TypeError(f"not a document: {doc!r}")
