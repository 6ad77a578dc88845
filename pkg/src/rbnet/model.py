"""Core model types: terms, constraints, probability formulas, networks, structures.

A probability formula is built from rational constants, indicator functions
of relation atoms, convex combinations ``F1*F2 + (1-F1)*F3``, and
combination-function terms ``comb{F1,...,Fk | z; c}`` whose constraint ``c``
filters the tuples that populate the combined multiset.  A relational network
labels every probabilistic relation with one such formula; a structure supplies
a finite domain together with interpretations of relations and constants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import MissingInterpretationError

EQ = "="  # built-in equality relation; never declared in a vocabulary


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class RigidConst:
    name: str

    def __repr__(self):
        return f"RigidConst({self.name!r})"


Term = Union[Var, RigidConst]


# ---------------------------------------------------------------------------
# Constraints (quantifier-free formulas over equality and rigid relations)

@dataclass(frozen=True)
class TrueC:
    pass


@dataclass(frozen=True)
class FalseC:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class RigidAtom:
    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: "Constraint"


@dataclass(frozen=True)
class And:
    left: "Constraint"
    right: "Constraint"


@dataclass(frozen=True)
class Or:
    left: "Constraint"
    right: "Constraint"


Constraint = Union[TrueC, FalseC, Eq, RigidAtom, Not, And, Or]

TRUE = TrueC()
FALSE = FalseC()


def constraint_vars(c: Constraint) -> frozenset:
    if isinstance(c, (TrueC, FalseC)):
        return frozenset()
    if isinstance(c, Eq):
        return frozenset(t for t in (c.left, c.right) if isinstance(t, Var))
    if isinstance(c, RigidAtom):
        return frozenset(t for t in c.args if isinstance(t, Var))
    if isinstance(c, Not):
        return constraint_vars(c.arg)
    return constraint_vars(c.left) | constraint_vars(c.right)


def constraint_rigids(c: Constraint) -> frozenset:
    """Names of rigid relations mentioned in a constraint (equality excluded)."""
    if isinstance(c, RigidAtom):
        return frozenset({c.name})
    if isinstance(c, Not):
        return constraint_rigids(c.arg)
    if isinstance(c, (And, Or)):
        return constraint_rigids(c.left) | constraint_rigids(c.right)
    return frozenset()


def constraint_constants(c: Constraint) -> frozenset:
    if isinstance(c, Eq):
        return frozenset(t.name for t in (c.left, c.right) if isinstance(t, RigidConst))
    if isinstance(c, RigidAtom):
        return frozenset(t.name for t in c.args if isinstance(t, RigidConst))
    if isinstance(c, Not):
        return constraint_constants(c.arg)
    if isinstance(c, (And, Or)):
        return constraint_constants(c.left) | constraint_constants(c.right)
    return frozenset()


def subst_constraint(c: Constraint, m: Mapping[Var, Term]) -> Constraint:
    def t(x):
        return m.get(x, x) if isinstance(x, Var) else x

    if isinstance(c, (TrueC, FalseC)):
        return c
    if isinstance(c, Eq):
        return Eq(t(c.left), t(c.right))
    if isinstance(c, RigidAtom):
        return RigidAtom(c.name, tuple(t(a) for a in c.args))
    if isinstance(c, Not):
        return Not(subst_constraint(c.arg, m))
    if isinstance(c, And):
        return And(subst_constraint(c.left, m), subst_constraint(c.right, m))
    return Or(subst_constraint(c.left, m), subst_constraint(c.right, m))


# ---------------------------------------------------------------------------
# Probability formulas

@dataclass(frozen=True)
class Const:
    value: Fraction

    def __init__(self, value):
        object.__setattr__(self, "value", Fraction(value))


@dataclass(frozen=True)
class Indicator:
    relation: str
    args: tuple


@dataclass(frozen=True)
class Convex:
    f1: "Formula"
    f2: "Formula"
    f3: "Formula"


@dataclass(frozen=True)
class Comb:
    name: str
    formulas: tuple
    bound: tuple  # tuple of Var; may be empty
    constraint: Constraint


Formula = Union[Const, Indicator, Convex, Comb]


def free_vars(f: Formula) -> frozenset:
    """Free variables of a probability formula.

    For a combination term these are the free variables of the subformulas
    and of the constraint, minus the bound tuple.
    """
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Indicator):
        return frozenset(a for a in f.args if isinstance(a, Var))
    if isinstance(f, Convex):
        return free_vars(f.f1) | free_vars(f.f2) | free_vars(f.f3)
    inner = frozenset().union(*(free_vars(g) for g in f.formulas)) if f.formulas else frozenset()
    inner |= constraint_vars(f.constraint)
    return inner - frozenset(f.bound)


def relations_in(f: Formula) -> frozenset:
    """Probabilistic relations whose indicators occur in the formula."""
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Indicator):
        return frozenset({f.relation})
    if isinstance(f, Convex):
        return relations_in(f.f1) | relations_in(f.f2) | relations_in(f.f3)
    out = frozenset()
    for g in f.formulas:
        out |= relations_in(g)
    return out


def rigids_in(f: Formula) -> frozenset:
    if isinstance(f, (Const, Indicator)):
        return frozenset()
    if isinstance(f, Convex):
        return rigids_in(f.f1) | rigids_in(f.f2) | rigids_in(f.f3)
    out = constraint_rigids(f.constraint)
    for g in f.formulas:
        out |= rigids_in(g)
    return out


def constants_in(f: Formula) -> frozenset:
    """Names of rigid constants appearing in indicator arguments or constraints."""
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Indicator):
        return frozenset(a.name for a in f.args if isinstance(a, RigidConst))
    if isinstance(f, Convex):
        return constants_in(f.f1) | constants_in(f.f2) | constants_in(f.f3)
    out = constraint_constants(f.constraint)
    for g in f.formulas:
        out |= constants_in(g)
    return out


def comb_terms(f: Formula):
    """Yield every Comb node of the formula, outermost first."""
    if isinstance(f, Convex):
        yield from comb_terms(f.f1)
        yield from comb_terms(f.f2)
        yield from comb_terms(f.f3)
    elif isinstance(f, Comb):
        yield f
        for g in f.formulas:
            yield from comb_terms(g)


def const_values(f: Formula):
    if isinstance(f, Const):
        yield f.value
    elif isinstance(f, Convex):
        for g in (f.f1, f.f2, f.f3):
            yield from const_values(g)
    elif isinstance(f, Comb):
        for g in f.formulas:
            yield from const_values(g)


def subst_formula(f: Formula, m: Mapping[Var, Term]) -> Formula:
    """Capture-avoiding substitution of free variables.

    Bound tuples of combination terms shadow the mapping; if a mapping target
    would be captured by a bound variable, the bound tuple is renamed first.
    """
    if isinstance(f, Const):
        return f
    if isinstance(f, Indicator):
        return Indicator(f.relation, tuple(m.get(a, a) if isinstance(a, Var) else a for a in f.args))
    if isinstance(f, Convex):
        return Convex(subst_formula(f.f1, m), subst_formula(f.f2, m), subst_formula(f.f3, m))
    inner = {k: v for k, v in m.items() if k not in f.bound}
    targets = {v for v in inner.values() if isinstance(v, Var)}
    bound = f.bound
    formulas = f.formulas
    constraint = f.constraint
    if targets & set(bound):
        # rename captured bound variables out of the way
        taken = {v.name for v in targets} | {v.name for v in bound}
        ren = {}
        new_bound = []
        for z in bound:
            if z in targets:
                i = 1
                while f"{z.name}_{i}" in taken:
                    i += 1
                nz = Var(f"{z.name}_{i}")
                taken.add(nz.name)
                ren[z] = nz
                new_bound.append(nz)
            else:
                new_bound.append(z)
        bound = tuple(new_bound)
        formulas = tuple(subst_formula(g, ren) for g in formulas)
        constraint = subst_constraint(constraint, ren)
    return Comb(f.name, tuple(subst_formula(g, inner) for g in formulas), bound,
                subst_constraint(constraint, inner))


# ---------------------------------------------------------------------------
# Vocabulary

@dataclass(frozen=True)
class Vocabulary:
    """Probabilistic relations, rigid relations, and rigid constants.

    Equality is built in and may not be redeclared; the probabilistic and
    rigid name sets must be disjoint and all arities at least 1.
    """
    probabilistic: Mapping[str, int]
    rigid: Mapping[str, int] = field(default_factory=dict)
    constants: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "probabilistic", dict(self.probabilistic))
        object.__setattr__(self, "rigid", dict(self.rigid))
        object.__setattr__(self, "constants", frozenset(self.constants))
        overlap = set(self.probabilistic) & set(self.rigid)
        if overlap:
            raise ValueError(f"probabilistic and rigid vocabularies overlap: {sorted(overlap)}")
        if EQ in self.probabilistic or EQ in self.rigid:
            raise ValueError("equality is built in and may not be redeclared")
        for name, ar in {**self.probabilistic, **self.rigid}.items():
            if ar < 1:
                raise ValueError(f"relation {name} has arity {ar}; arity must be >= 1")

    def arity(self, name: str) -> int:
        if name == EQ:
            return 2
        if name in self.probabilistic:
            return self.probabilistic[name]
        if name in self.rigid:
            return self.rigid[name]
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Ground atoms

@dataclass(frozen=True, order=True)
class GroundAtom:
    relation: str
    args: tuple

    def __str__(self):
        return f"{self.relation}({','.join(str(a) for a in self.args)})"


# ---------------------------------------------------------------------------
# Structures

@dataclass(frozen=True)
class Structure:
    """A finite domain with interpretations of relations and rigid constants.

    May be partial: only a subset of a vocabulary needs to be interpreted,
    and operations state which symbols they require.
    """
    domain: tuple
    interpretations: Mapping[str, frozenset] = field(default_factory=dict)
    constant_bindings: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "interpretations",
                           {k: frozenset(map(tuple, v)) for k, v in dict(self.interpretations).items()})
        object.__setattr__(self, "constant_bindings", dict(self.constant_bindings))
        if not self.domain:
            raise ValueError("domain must be nonempty")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("domain elements must be distinct")
        dom = set(self.domain)
        for name, tuples in self.interpretations.items():
            for tup in tuples:
                if not set(tup) <= dom:
                    raise ValueError(f"tuple {tup} of {name} uses elements outside the domain")
        for name, el in self.constant_bindings.items():
            if el not in dom:
                raise ValueError(f"constant {name} bound to {el!r} outside the domain")

    def interprets(self, name: str) -> bool:
        return name == EQ or name in self.interpretations

    def holds(self, name: str, tup: tuple) -> bool:
        if name == EQ:
            return tup[0] == tup[1]
        try:
            return tup in self.interpretations[name]
        except KeyError:
            raise MissingInterpretationError(f"no interpretation for relation {name}") from None

    def with_interpretation(self, name: str, tuples: Iterable) -> "Structure":
        interp = dict(self.interpretations)
        interp[name] = frozenset(map(tuple, tuples))
        return Structure(self.domain, interp, self.constant_bindings)


# ---------------------------------------------------------------------------
# Relational networks

@dataclass(eq=False)
class RelationalNetwork:
    """A DAG over probabilistic relation symbols, one label formula per node.

    ``params[r]`` gives the argument variables of the label of ``r``; a node
    is recursive when its label mentions ``r`` itself.  Instances are treated
    as immutable after construction.
    """
    vocabulary: Vocabulary
    params: Mapping[str, tuple]
    labels: Mapping[str, Formula]
    parents: Mapping[str, frozenset]

    def __post_init__(self):
        self.params = {k: tuple(v) for k, v in dict(self.params).items()}
        self.labels = dict(self.labels)
        self.parents = {k: frozenset(v) for k, v in dict(self.parents).items()}

    @classmethod
    def from_labels(cls, vocabulary: Vocabulary, params, labels) -> "RelationalNetwork":
        """Build a network whose edges are derived from the labels themselves."""
        parents = {r: relations_in(f) - {r} for r, f in labels.items()}
        return cls(vocabulary, params, labels, parents)

    def is_recursive(self, r: str) -> bool:
        return r in relations_in(self.labels[r])

    @property
    def recursive_relations(self):
        return sorted(r for r in self.labels if self.is_recursive(r))

    def topological_order(self):
        """Relations ordered parents-first; raises ValueError on a cycle."""
        order, mark = [], {}

        def visit(r):
            if mark.get(r) == 1:
                raise ValueError(f"cycle through {r}")
            if r not in mark:
                mark[r] = 1
                for p in sorted(self.parents.get(r, ())):
                    visit(p)
                mark[r] = 2
                order.append(r)

        for r in sorted(self.vocabulary.probabilistic):
            visit(r)
        return order


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        self.violations.append(msg)


def validate_network(n: RelationalNetwork, registry=None) -> ValidationReport:
    """Check the structural invariants of a relational network.

    The report lists each violation; an empty report means the network is
    valid (possibly recursive).
    """
    from . import combinators  # local import to avoid a cycle

    reg = registry if registry is not None else combinators.default_registry()
    rep = ValidationReport()
    voc = n.vocabulary

    for r in sorted(voc.probabilistic):
        if r not in n.labels:
            rep.add(f"relation {r} has no label formula")
    for r in sorted(n.labels):
        if r not in voc.probabilistic:
            rep.add(f"label for undeclared relation {r}")

    # symbol graph must be a DAG (self-mentions are recursion, not edges)
    try:
        n.topological_order()
    except ValueError as exc:
        rep.add(f"cycle in symbol graph: {exc}")

    for r in sorted(n.labels):
        if r not in voc.probabilistic:
            continue
        f = n.labels[r]
        ps = n.params.get(r, ())
        if len(ps) != voc.probabilistic[r]:
            rep.add(f"{r}: parameter tuple {ps} does not match arity {voc.probabilistic[r]}")
        if len(set(ps)) != len(ps):
            rep.add(f"{r}: repeated parameter variable")
        allowed = set(n.parents.get(r, frozenset())) | {r}
        for r2 in sorted(relations_in(f)):
            if r2 not in voc.probabilistic:
                rep.add(f"{r}: label mentions undeclared relation {r2}")
            elif r2 not in allowed:
                rep.add(f"{r}: label mentions non-parent symbol {r2}")
        stray = free_vars(f) - set(ps)
        if stray:
            rep.add(f"{r}: stray free variables {sorted(v.name for v in stray)}")
        for q in const_values(f):
            if not (0 <= q <= 1):
                rep.add(f"{r}: constant {q} out of [0,1]")
        for name in sorted(constants_in(f)):
            if name not in voc.constants:
                rep.add(f"{r}: undeclared constant {name}")
        _check_atoms(r, f, voc, rep)
        for t in comb_terms(f):
            if not reg.knows(t.name):
                rep.add(f"{r}: unknown combination function {t.name}")
            if not t.formulas:
                rep.add(f"{r}: combination term with empty formula list")
    for r, ps in n.parents.items():
        for p in sorted(ps):
            if p not in voc.probabilistic:
                rep.add(f"{r}: undeclared parent {p}")
    return rep


def _check_atoms(r, f, voc, rep):
    def con(c):
        if isinstance(c, RigidAtom):
            if c.name not in voc.rigid and c.name != EQ:
                rep.add(f"{r}: undeclared rigid relation {c.name}")
            elif len(c.args) != voc.arity(c.name):
                rep.add(f"{r}: arity mismatch in rigid atom {c.name}/{len(c.args)}")
        elif isinstance(c, Not):
            con(c.arg)
        elif isinstance(c, (And, Or)):
            con(c.left)
            con(c.right)

    if isinstance(f, Indicator):
        if f.relation in voc.probabilistic and len(f.args) != voc.probabilistic[f.relation]:
            rep.add(f"{r}: arity mismatch in indicator {f.relation}/{len(f.args)}")
    elif isinstance(f, Convex):
        for g in (f.f1, f.f2, f.f3):
            _check_atoms(r, g, voc, rep)
    elif isinstance(f, Comb):
        con(f.constraint)
        for g in f.formulas:
            _check_atoms(r, g, voc, rep)
