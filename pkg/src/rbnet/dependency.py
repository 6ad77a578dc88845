"""Symbolic dependency analysis of label formulas.

For relations r, r' the parent formula pa(r,r') is an existential constraint
formula in the label arguments x and target arguments y that holds exactly
when the value F_r(x) structurally depends on the atom r'(y).  Parent
formulas are computed by induction on the label, kept as a DNF of equality
and rigid-atom literals under an existential prefix, and pruned after every
step.  Over the empty vocabulary the existential quantifiers can always be
eliminated in favour of minimum-domain-size guards, which makes membership
checks independent of the domain; with rigid symbols present the formulas
are instead evaluated directly on the structure at hand.

Composing parent formulas along symbol-graph paths yields ancestor formulas
for non-recursive networks.  For recursive networks the ancestor relation is
structure-dependent, so it is computed by fixed-point iteration on the
concrete structure; well-foundedness amounts to acyclicity of the ground
self-dependency relation, checked here with an explicit cycle witness.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Union

from .errors import (NotNormalizableError, RecursiveNetworkError,
                     WellFoundednessError)
from .model import (And, Comb, Const, Convex, Eq, FalseC, GroundAtom, Indicator,
                    Not, Or, RelationalNetwork, RigidAtom, RigidConst, Structure,
                    TrueC, Var, subst_constraint, subst_formula)


@dataclass(frozen=True)
class Lit:
    positive: bool
    atom: Union[Eq, RigidAtom]


@dataclass(frozen=True)
class DependencyFormula:
    """Existential DNF over equality and rigid literals.

    Free variables are the label arguments ``xvars`` and target-atom
    arguments ``yvars``; ``exvars`` are quantified.  No disjuncts at all is
    the unsatisfiable formula; a single empty disjunct is the tautology.
    """
    xvars: tuple
    yvars: tuple
    exvars: tuple
    disjuncts: tuple

    @property
    def is_false(self) -> bool:
        return not self.disjuncts

    def mentions_rigid(self) -> bool:
        for d in self.disjuncts:
            for lit in d:
                if isinstance(lit.atom, RigidAtom):
                    return True
                if any(isinstance(t, RigidConst) for t in (lit.atom.left, lit.atom.right)):
                    return True
        return False


def _term_key(t):
    return (isinstance(t, RigidConst), t.name)


def _canon_eq(atom: Eq) -> Eq:
    if _term_key(atom.right) < _term_key(atom.left):
        return Eq(atom.right, atom.left)
    return atom


def _simplify_disjunct(lits):
    """Canonicalize a conjunction of literals; None if trivially unsatisfiable."""
    out = set()
    for lit in lits:
        atom = lit.atom
        if isinstance(atom, Eq):
            if atom.left == atom.right:
                if lit.positive:
                    continue
                return None
            atom = _canon_eq(atom)
        lit = Lit(lit.positive, atom)
        if Lit(not lit.positive, atom) in out:
            return None
        out.add(lit)
    return frozenset(out)


def _prune(disjuncts):
    """Drop duplicate and subsumed disjuncts (d1 subset of d2 makes d2 redundant)."""
    uniq = list(dict.fromkeys(disjuncts))
    return tuple(d for d in uniq if not any(other < d for other in uniq))


def constraint_to_dnf(c):
    """Quantifier-free constraint -> tuple of literal conjunctions."""

    def go(c, pos):
        if isinstance(c, TrueC):
            return (frozenset(),) if pos else ()
        if isinstance(c, FalseC):
            return () if pos else (frozenset(),)
        if isinstance(c, (Eq, RigidAtom)):
            d = _simplify_disjunct([Lit(pos, c)])
            return () if d is None else (d,)
        if isinstance(c, Not):
            return go(c.arg, not pos)
        conj = (isinstance(c, And) and pos) or (isinstance(c, Or) and not pos)
        left, right = go(c.left, pos), go(c.right, pos)
        if conj:
            out = []
            for a in left:
                for b in right:
                    d = _simplify_disjunct(a | b)
                    if d is not None:
                        out.append(d)
            return tuple(out)
        return left + right

    return _prune(go(c, True))


def _lit_vars(lit):
    if isinstance(lit.atom, Eq):
        return [t for t in (lit.atom.left, lit.atom.right) if isinstance(t, Var)]
    return [t for t in lit.atom.args if isinstance(t, Var)]


def _disjunct_vars(d):
    out = set()
    for lit in d:
        out.update(_lit_vars(lit))
    return out


class _Fresh:
    def __init__(self):
        self.i = 0

    def var(self) -> Var:
        self.i += 1
        return Var(f"_z{self.i}")

    def tuple(self, k):
        return tuple(self.var() for _ in range(k))


@dataclass(frozen=True)
class CardinalityNormalForm:
    """Disjunction of complete equality types with minimum-domain-size guards.

    Membership of a concrete tuple is decided from the equality pattern of
    its entries plus the domain size alone, independent of which elements
    occur.
    """
    nvars: int
    entries: Mapping[tuple, int]

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))

    @staticmethod
    def pattern(values) -> tuple:
        seen, out = {}, []
        for v in values:
            out.append(seen.setdefault(v, len(seen)))
        return tuple(out)

    def holds(self, values, domain_size: int) -> bool:
        guard = self.entries.get(self.pattern(values))
        return guard is not None and domain_size >= guard


def _eval_lit(lit, s, b):
    atom = lit.atom

    def res(t):
        return b[t] if isinstance(t, Var) else s.constant_bindings[t.name]

    if isinstance(atom, Eq):
        v = res(atom.left) == res(atom.right)
    else:
        v = s.holds(atom.name, tuple(res(t) for t in atom.args))
    return v if lit.positive else not v


def eval_dependency(d: DependencyFormula, s: Structure, dtup, dptup) -> bool:
    """Satisfaction of the existential formula, quantifiers over s.domain."""
    b = dict(zip(d.xvars, dtup))
    b.update(zip(d.yvars, dptup))
    exset = set(d.exvars)
    for disj in d.disjuncts:
        evars = sorted(_disjunct_vars(disj) & exset, key=lambda v: v.name)
        if not evars:
            if all(_eval_lit(lit, s, b) for lit in disj):
                return True
            continue
        for tup in product(s.domain, repeat=len(evars)):
            bb = dict(b)
            bb.update(zip(evars, tup))
            if all(_eval_lit(lit, s, bb) for lit in disj):
                return True
    return False


def normalize(d: DependencyFormula) -> CardinalityNormalForm:
    """Eliminate the existential prefix of an equality-only formula.

    Each quantified variable is either identified with the class of a free
    variable or witnesses a fresh element; a block of m mutually distinct
    fresh witnesses turns into the guard that the domain holds at least
    (#free classes + m) elements.
    """
    if d.mentions_rigid():
        raise NotNormalizableError("dependency formula mentions rigid symbols")
    free = d.xvars + d.yvars
    exset = set(d.exvars)
    entries = {}
    for pattern in _patterns(len(free)):
        cls = dict(zip(free, pattern))
        k = max(pattern, default=-1) + 1
        best = None
        for disj in d.disjuncts:
            evars = sorted(_disjunct_vars(disj) & exset, key=lambda v: v.name)
            for labels in product(range(k + len(evars)), repeat=len(evars)):
                assign = dict(cls)
                assign.update(zip(evars, labels))
                ok = True
                for lit in disj:
                    same = assign[lit.atom.left] == assign[lit.atom.right]
                    if same != lit.positive:
                        ok = False
                        break
                if ok:
                    m = len({l for l in labels if l >= k})
                    guard = k + m
                    if best is None or guard < best:
                        best = guard
        if best is not None:
            entries[pattern] = best
    return CardinalityNormalForm(len(free), entries)


def _patterns(nvars):
    """All equality types on nvars positions, as first-occurrence id tuples."""
    if nvars == 0:
        yield ()
        return
    def rec(prefix, k):
        if len(prefix) == nvars:
            yield tuple(prefix)
            return
        for c in range(k + 1):
            yield from rec(prefix + [c], max(k, c + 1))
    yield from rec([0], 1)


class DependencyAnalyzer:
    """Per-network cache of parent, normal-form, and ancestor formulas."""

    def __init__(self, network: RelationalNetwork):
        self.n = network
        self._fresh = _Fresh()
        self._parent = {}
        self._normal = {}
        self._ancestor = {}

    # -- parent formulas ----------------------------------------------------

    def xvars(self, r: str) -> tuple:
        return tuple(Var(f"x{i + 1}") for i in range(self.n.vocabulary.probabilistic[r]))

    def yvars(self, r: str) -> tuple:
        return tuple(Var(f"y{i + 1}") for i in range(self.n.vocabulary.probabilistic[r]))

    def parent(self, r: str, rp: str) -> DependencyFormula:
        key = (r, rp)
        if key not in self._parent:
            voc = self.n.vocabulary
            if r not in voc.probabilistic or rp not in voc.probabilistic:
                raise KeyError(f"unknown probabilistic relation in ({r}, {rp})")
            xs = self.xvars(r)
            ys = self.yvars(rp)
            label = subst_formula(self.n.labels[r], dict(zip(self.n.params[r], xs)))
            exvars, disjuncts = self._pa(label, rp, ys)
            disjuncts = _prune(disjuncts)
            used = set()
            for dd in disjuncts:
                used |= _disjunct_vars(dd)
            exvars = tuple(v for v in exvars if v in used)
            self._parent[key] = DependencyFormula(xs, ys, exvars, disjuncts)
        return self._parent[key]

    def _pa(self, f, rp, ys):
        if isinstance(f, Const):
            return (), ()
        if isinstance(f, Indicator):
            if f.relation != rp:
                return (), ()
            d = _simplify_disjunct(Lit(True, Eq(y, a)) for y, a in zip(ys, f.args))
            return (), (() if d is None else (d,))
        if isinstance(f, Convex):
            exvars, disjuncts = (), ()
            for g in (f.f1, f.f2, f.f3):
                ex, dj = self._pa(g, rp, ys)
                exvars += ex
                disjuncts += dj
            return exvars, disjuncts
        if isinstance(f, Comb):
            ren = {z: self._fresh.var() for z in f.bound}
            cdnf = constraint_to_dnf(subst_constraint(f.constraint, ren))
            exvars = tuple(ren.values())
            inner = ()
            for g in f.formulas:
                ex, dj = self._pa(subst_formula(g, ren), rp, ys)
                exvars += ex
                inner += dj
            out = []
            for a in cdnf:
                for b in inner:
                    d = _simplify_disjunct(a | b)
                    if d is not None:
                        out.append(d)
            return exvars, tuple(out)
        raise TypeError(f"not a probability formula: {f!r}")

    # -- evaluation ---------------------------------------------------------

    def normal(self, r: str, rp: str):
        """Cardinality normal form of pa(r, rp), or None if rigid symbols occur."""
        key = (r, rp)
        if key not in self._normal:
            d = self.parent(r, rp)
            try:
                self._normal[key] = normalize(d)
            except NotNormalizableError:
                self._normal[key] = None
        return self._normal[key]

    def depends(self, r: str, rp: str, s: Structure, dtup, dptup) -> bool:
        nf = self.normal(r, rp)
        if nf is not None:
            return nf.holds(tuple(dtup) + tuple(dptup), len(s.domain))
        return eval_dependency(self.parent(r, rp), s, dtup, dptup)

    def label_symbols(self, r: str):
        syms = set(self.n.parents[r])
        if self.n.is_recursive(r):
            syms.add(r)
        return sorted(syms)

    def parents_of(self, s: Structure, g: GroundAtom):
        """Ground-atom parents of g in the full auxiliary network over s."""
        out = []
        for rp in self.label_symbols(g.relation):
            if self.parent(g.relation, rp).is_false:
                continue
            arity = self.n.vocabulary.probabilistic[rp]
            for cand in product(s.domain, repeat=arity):
                if self.depends(g.relation, rp, s, g.args, cand):
                    out.append(GroundAtom(rp, cand))
        return out

    def children_of(self, s: Structure, g: GroundAtom):
        """Ground atoms whose value structurally depends on g."""
        out = []
        for r in sorted(self.n.vocabulary.probabilistic):
            if g.relation not in self.label_symbols(r):
                continue
            if self.parent(r, g.relation).is_false:
                continue
            arity = self.n.vocabulary.probabilistic[r]
            for cand in product(s.domain, repeat=arity):
                if self.depends(r, g.relation, s, cand, g.args):
                    out.append(GroundAtom(r, cand))
        return out

    # -- ancestors ----------------------------------------------------------

    def ancestor(self, r: str, rpp: str) -> DependencyFormula:
        """Disjunction over all symbol-graph paths from rpp to r of the
        composed parent formulas; non-recursive networks only."""
        if self.n.recursive_relations:
            raise RecursiveNetworkError(
                "ancestor formulas are structure-dependent for recursive networks; "
                "use ancestor_closure_on_structure")
        key = (r, rpp)
        if key not in self._ancestor:
            paths = self._paths(rpp, r)
            xs, ys = self.xvars(r), self.yvars(rpp)
            exvars, disjuncts = (), ()
            for path in paths:
                d = self.parent(path[-1], path[-2])
                for i in range(len(path) - 2, 0, -1):
                    d = self._compose(d, self.parent(path[i], path[i - 1]))
                assert d.xvars == xs and d.yvars == ys
                exvars += d.exvars
                disjuncts += d.disjuncts
            self._ancestor[key] = DependencyFormula(xs, ys, exvars, _prune(disjuncts))
        return self._ancestor[key]

    def _paths(self, src, dst):
        """All directed paths src -> ... -> dst along parent-to-child edges."""
        out = []

        def rec(node, acc):
            if node == src:
                out.append([src] + acc)
                return
            for p in sorted(self.n.parents.get(node, ())):
                rec(p, [node] + acc)

        rec(dst, [])
        return [p for p in out if len(p) >= 2]

    def _compose(self, d1: DependencyFormula, d2: DependencyFormula) -> DependencyFormula:
        """Relational composition: exists z (d1(x, z) and d2(z, y))."""
        zs = self._fresh.tuple(len(d1.yvars))
        m1 = dict(zip(d1.yvars, zs))
        m2 = dict(zip(d2.xvars, zs))
        disjuncts = []
        for a in d1.disjuncts:
            ra = frozenset(_subst_lit(l, m1) for l in a)
            for b in d2.disjuncts:
                d = _simplify_disjunct(ra | {_subst_lit(l, m2) for l in b})
                if d is not None:
                    disjuncts.append(d)
        exvars = zs + d1.exvars + d2.exvars
        pruned = _prune(disjuncts)
        used = set()
        for dd in pruned:
            used |= _disjunct_vars(dd)
        exvars = tuple(v for v in exvars if v in used)
        return DependencyFormula(d1.xvars, d2.yvars, exvars, pruned)

    # -- recursion ----------------------------------------------------------

    def ancestor_closure_on_structure(self, s: Structure, g: GroundAtom):
        """Exact ancestor set of g in the ground network over s, by iterating
        the parent formulas to a fixed point; errors on a dependency cycle."""
        parents = {}
        stack = [g]
        while stack:
            a = stack.pop()
            if a in parents:
                continue
            parents[a] = self.parents_of(s, a)
            stack.extend(parents[a])
        _check_acyclic(parents)
        closure = set()
        stack = list(parents[g])
        while stack:
            a = stack.pop()
            if a in closure:
                continue
            closure.add(a)
            stack.extend(parents[a])
        return closure

    def check_wellfounded(self, s: Structure):
        """True iff every recursive relation has an acyclic ground
        self-dependency relation over s; on failure returns a cycle witness."""
        for r in self.n.recursive_relations:
            dep = self.parent(r, r)
            if dep.is_false:
                continue
            arity = self.n.vocabulary.probabilistic[r]
            tuples = list(product(s.domain, repeat=arity))
            edges = {d: [dp for dp in tuples if self.depends(r, r, s, d, dp)]
                     for d in tuples}
            cyc = _find_cycle(edges)
            if cyc is not None:
                return False, tuple(GroundAtom(r, d) for d in cyc)
        return True, ()


def _subst_lit(lit, m):
    atom = lit.atom
    if isinstance(atom, Eq):
        return Lit(lit.positive, Eq(m.get(atom.left, atom.left), m.get(atom.right, atom.right)))
    return Lit(lit.positive, RigidAtom(atom.name, tuple(m.get(t, t) for t in atom.args)))


def _find_cycle(edges):
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in edges}
    for start in edges:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(edges[start]))]
        color[start] = GRAY
        path = [start]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color.get(nxt, BLACK) == GRAY:
                    i = path.index(nxt)
                    return path[i:] + [nxt]
                if color.get(nxt, BLACK) == WHITE:
                    color[nxt] = GRAY
                    path.append(nxt)
                    stack.append((nxt, iter(edges[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def _check_acyclic(parents):
    cyc = _find_cycle(parents)
    if cyc is not None:
        raise WellFoundednessError(cyc)


# -- module-level convenience wrappers --------------------------------------

def parent_formula(n: RelationalNetwork, r: str, rp: str) -> DependencyFormula:
    return DependencyAnalyzer(n).parent(r, rp)


def ancestor_formula(n: RelationalNetwork, r: str, rpp: str) -> DependencyFormula:
    return DependencyAnalyzer(n).ancestor(r, rpp)


def ancestor_closure_on_structure(n: RelationalNetwork, s: Structure, g: GroundAtom):
    return DependencyAnalyzer(n).ancestor_closure_on_structure(s, g)


def check_wellfounded(n: RelationalNetwork, s: Structure):
    return DependencyAnalyzer(n).check_wellfounded(s)
