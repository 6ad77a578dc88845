"""Ground-network construction and exact query answering.

For an evidence/query pair the minimal auxiliary Bayesian network over
boolean ground atoms is built from the symbolic parent formulas: the
ancestor closure of the query, plus, for every included uninstantiated
node whose ground subtree contains an evidence atom, the nodes on paths
from it to those evidence atoms (with their own ancestor closures).
Conditional probabilities are then computed exactly by variable
elimination, with each node's CPD realized lazily from the label formula
by enumerating the assignments of that node's parents only.

The brute-force enumeration oracle lives here as well.  It sums the joint
mass over explicitly enumerated interpretations and never touches the
parent formulas or the elimination machinery, so it can serve as an
independent check of the compiled inference path.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional

import numpy as np

from . import combinators
from .dependency import DependencyAnalyzer, _check_acyclic
from .errors import (BudgetExceededError, InconsistentEvidenceError,
                     MissingInterpretationError, WellFoundednessError)
from .evaluator import compile_formula, joint_probability
from .model import (EQ, GroundAtom, RelationalNetwork, Structure, relations_in)


# ---------------------------------------------------------------------------
# Evidence

@dataclass(frozen=True)
class Evidence:
    """A consistent set of signed ground literals."""
    positive: frozenset = frozenset()
    negative: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "positive", frozenset(self.positive))
        object.__setattr__(self, "negative", frozenset(self.negative))
        both = self.positive & self.negative
        if both:
            raise ValueError(f"atoms with both signs in evidence: {sorted(map(str, both))}")

    @property
    def atoms(self) -> frozenset:
        return self.positive | self.negative

    def items(self):
        for a in sorted(self.positive):
            yield a, True
        for a in sorted(self.negative):
            yield a, False


EMPTY_EVIDENCE = Evidence()


# ---------------------------------------------------------------------------
# Ground networks

class _AssignmentView:
    """Structure-like view: probabilistic atoms read from a boolean assignment,
    rigid symbols from the backing structure."""

    __slots__ = ("base", "prob", "assignment", "domain", "constant_bindings")

    def __init__(self, base: Structure, prob_relations, assignment):
        self.base = base
        self.prob = prob_relations
        self.assignment = assignment
        self.domain = base.domain
        self.constant_bindings = base.constant_bindings

    def holds(self, name, tup):
        if name == EQ:
            return tup[0] == tup[1]
        if name in self.prob:
            try:
                return self.assignment[GroundAtom(name, tup)]
            except KeyError:
                raise MissingInterpretationError(
                    f"atom {name}{tup} read outside the node's parent set") from None
        return self.base.holds(name, tup)


@dataclass
class GroundNode:
    atom: GroundAtom
    parents: tuple
    fn: object  # (assignment of parents to bool) -> probability


@dataclass
class GroundNetwork:
    """Auxiliary Bayesian network over boolean ground-atom nodes."""
    nodes: Mapping[GroundAtom, GroundNode]
    query: GroundAtom

    def __contains__(self, atom):
        return atom in self.nodes

    @property
    def node_count(self):
        return len(self.nodes)

    @property
    def edge_count(self):
        return sum(len(nd.parents) for nd in self.nodes.values())

    @property
    def atoms(self):
        return sorted(self.nodes)


def _check_ground_atom(n, s, g):
    if g.relation not in n.vocabulary.probabilistic:
        raise ValueError(f"unknown probabilistic relation {g.relation}")
    if len(g.args) != n.vocabulary.probabilistic[g.relation]:
        raise ValueError(f"arity mismatch in atom {g}")
    if not set(g.args) <= set(s.domain):
        raise ValueError(f"atom {g} uses elements outside the domain")


def build_auxiliary_network(n: RelationalNetwork, s: Structure, e: Evidence,
                            q: GroundAtom, registry=None,
                            analyzer: Optional[DependencyAnalyzer] = None) -> GroundNetwork:
    """Build the minimal auxiliary network for the evidence/query pair.

    Evidence atoms that are connected to the query neither as ancestors nor
    through a descendant path are simply absent from the result; their
    omission cannot change the answer.
    """
    an = analyzer or DependencyAnalyzer(n)
    _check_ground_atom(n, s, q)
    for a in e.atoms:
        _check_ground_atom(n, s, a)

    parents = {}

    def close(atom):
        stack = [atom]
        while stack:
            a = stack.pop()
            if a in parents:
                continue
            parents[a] = tuple(an.parents_of(s, a))
            stack.extend(parents[a])

    close(q)

    child_cache = {}

    def children(atom):
        if atom not in child_cache:
            child_cache[atom] = tuple(an.children_of(s, atom))
        return child_cache[atom]

    inst = e.atoms
    processed = set()
    changed = True
    while changed:
        changed = False
        for u in list(parents):
            if u in inst or u in processed:
                continue
            processed.add(u)
            desc = set()
            stack = [u]
            while stack:
                v = stack.pop()
                for w in children(v):
                    if w not in desc:
                        desc.add(w)
                        stack.append(w)
            hits = desc & inst
            if not hits:
                continue
            # nodes of desc lying on a path from u to an evidence atom
            reach = set(hits)
            grow = True
            while grow:
                grow = False
                for v in desc - reach:
                    if any(w in reach for w in children(v)):
                        reach.add(v)
                        grow = True
            for v in sorted(reach):
                if v not in parents:
                    close(v)
                    changed = True

    _check_acyclic(parents)
    return GroundNetwork(_materialize_nodes(n, s, parents, registry), q)


def _materialize_nodes(n, s, parents, registry):
    prob_rels = set(n.vocabulary.probabilistic)
    compiled = {}
    nodes = {}
    for atom in sorted(parents):
        r = atom.relation
        if r not in compiled:
            compiled[r] = compile_formula(n.labels[r], registry)
        fn = _node_function(compiled[r], n.params[r], atom, s, prob_rels)
        nodes[atom] = GroundNode(atom, parents[atom], fn)
    return nodes


def evidence_mass(n: RelationalNetwork, s: Structure, e: Evidence,
                  registry=None, analyzer: Optional[DependencyAnalyzer] = None) -> float:
    """Exact probability of the evidence conjunction.

    Computed by eliminating every atom of the ancestor closure of the
    evidence; used to detect inconsistent evidence even in parts of the
    network that are irrelevant to a particular query.
    """
    if not e.atoms:
        return 1.0
    an = analyzer or DependencyAnalyzer(n)
    parents = {}
    stack = list(e.atoms)
    while stack:
        a = stack.pop()
        if a in parents:
            continue
        parents[a] = tuple(an.parents_of(s, a))
        stack.extend(parents[a])
    _check_acyclic(parents)
    g = GroundNetwork(_materialize_nodes(n, s, parents, registry), None)
    mass, _ = _run_elimination(g, e, None, check=False)
    return mass


def _node_function(label_fn, params, atom, s, prob_rels):
    base_binding = dict(zip(params, atom.args))

    def fn(assignment):
        view = _AssignmentView(s, prob_rels, assignment)
        return label_fn(view, dict(base_binding))

    return fn


# ---------------------------------------------------------------------------
# Variable elimination

@dataclass
class Factor:
    scope: tuple
    table: np.ndarray


def _expand(f: Factor, scope) -> np.ndarray:
    order = sorted(range(len(f.scope)), key=lambda i: scope.index(f.scope[i]))
    t = np.transpose(f.table, order)
    shape = [1] * len(scope)
    for v in f.scope:
        shape[scope.index(v)] = 2
    return t.reshape(shape)


def factor_multiply(f1: Factor, f2: Factor) -> Factor:
    scope = list(f1.scope) + [v for v in f2.scope if v not in f1.scope]
    return Factor(tuple(scope), _expand(f1, scope) * _expand(f2, scope))


def factor_sum_out(f: Factor, var) -> Factor:
    ax = f.scope.index(var)
    return Factor(f.scope[:ax] + f.scope[ax + 1:], f.table.sum(axis=ax))


def factor_reduce(f: Factor, var, value: bool) -> Factor:
    ax = f.scope.index(var)
    return Factor(f.scope[:ax] + f.scope[ax + 1:], f.table.take(int(value), axis=ax))


def node_factor(node: GroundNode) -> Factor:
    """Materialize the CPD of a single node over (node, parents)."""
    k = len(node.parents)
    table = np.empty((2,) * (k + 1))
    for bits in product((False, True), repeat=k):
        p = float(node.fn(dict(zip(node.parents, bits))))
        idx = tuple(int(b) for b in bits)
        table[(1,) + idx] = p
        table[(0,) + idx] = 1.0 - p
    return Factor((node.atom,) + node.parents, table)


def _pick_minfill(candidates, factors):
    best, best_key = None, None
    for v in sorted(candidates, key=lambda a: (a.relation, a.args)):
        neighbors = set()
        for f in factors:
            if v in f.scope:
                neighbors.update(f.scope)
        neighbors.discard(v)
        fill = 0
        ns = sorted(neighbors, key=lambda a: (a.relation, a.args))
        for i, a in enumerate(ns):
            for b in ns[i + 1:]:
                if not any(a in f.scope and b in f.scope for f in factors):
                    fill += 1
        key = (fill, v.relation, v.args)
        if best_key is None or key < best_key:
            best, best_key = v, key
    return best


def _run_elimination(g: GroundNetwork, e: Evidence, q, order="minfill", check=True):
    factors = [node_factor(nd) for nd in g.nodes.values()]
    for atom, val in e.items():
        if atom not in g.nodes:
            continue
        factors = [factor_reduce(f, atom, val) if atom in f.scope else f for f in factors]
    to_eliminate = {a for a in g.nodes if a != q and a not in e.atoms}
    width = max((len(f.scope) for f in factors), default=0)
    while to_eliminate:
        if order == "lex":
            v = min(to_eliminate, key=lambda a: (a.relation, a.args))
        else:
            v = _pick_minfill(to_eliminate, factors)
        to_eliminate.discard(v)
        relevant = [f for f in factors if v in f.scope]
        rest = [f for f in factors if v not in f.scope]
        if not relevant:
            continue
        prod = relevant[0]
        for f in relevant[1:]:
            prod = factor_multiply(prod, f)
        width = max(width, len(prod.scope))
        factors = rest + [factor_sum_out(prod, v)]
    result = Factor((), np.array(1.0))
    for f in factors:
        result = factor_multiply(result, f)
    if q is None:
        return float(result.table), width
    if result.scope != (q,):
        result = _expand_to_query(result, q)
    mass = float(result.table[0] + result.table[1])
    if check and mass <= 0.0:
        raise InconsistentEvidenceError("evidence has probability zero")
    return float(result.table[1]) / mass, width


def _expand_to_query(f: Factor, q) -> Factor:
    if f.scope == ():
        # query factor eliminated through reductions; cannot happen when q is
        # not part of the evidence
        raise ValueError("query variable missing from final factor")
    return Factor((q,), _expand(f, [q]).reshape(2))


def variable_elimination(g: GroundNetwork, e: Evidence, q: GroundAtom,
                         order="minfill") -> float:
    """Exact P(q = true | evidence) on the given ground network."""
    p, _ = _run_elimination(g, e, q, order)
    return p


# ---------------------------------------------------------------------------
# End-to-end inference

@dataclass
class InferenceResult:
    query: GroundAtom
    probability: float
    node_count: int
    edge_count: int
    width: int
    wall_seconds: float = 0.0


def infer(n: RelationalNetwork, s: Structure, e: Evidence, q: GroundAtom,
          registry=None, order="minfill") -> float:
    return infer_report(n, s, e, q, registry, order).probability


def infer_report(n: RelationalNetwork, s: Structure, e: Evidence, q: GroundAtom,
                 registry=None, order="minfill",
                 analyzer: Optional[DependencyAnalyzer] = None) -> InferenceResult:
    """Answer a conditional-probability query, with ground-network statistics."""
    t0 = time.perf_counter()
    _check_ground_atom(n, s, q)
    for a in e.atoms:
        _check_ground_atom(n, s, a)
    an = analyzer or DependencyAnalyzer(n)
    if n.recursive_relations:
        ok, witness = an.check_wellfounded(s)
        if not ok:
            raise WellFoundednessError(witness)
    if e.atoms and evidence_mass(n, s, e, registry, analyzer=an) <= 0.0:
        raise InconsistentEvidenceError("evidence has probability zero")
    if q in e.positive:
        return InferenceResult(q, 1.0, 0, 0, 0, time.perf_counter() - t0)
    if q in e.negative:
        return InferenceResult(q, 0.0, 0, 0, 0, time.perf_counter() - t0)
    g = build_auxiliary_network(n, s, e, q, registry, analyzer=an)
    p, width = _run_elimination(g, e, q, order)
    return InferenceResult(q, p, g.node_count, g.edge_count, width,
                           time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Brute-force oracle

def _relation_atoms(n, s):
    return {r: list(product(s.domain, repeat=ar))
            for r, ar in sorted(n.vocabulary.probabilistic.items())}


def brute_force_joint(n: RelationalNetwork, s: Structure, budget_bits: int = 24,
                      registry=None, exact=False):
    """Explicit map from S-structures (frozensets of true atoms) to mass.

    Enumerates every interpretation of every probabilistic relation and
    scores it with the joint product; infeasible beyond the bit budget.
    """
    atoms = _relation_atoms(n, s)
    rels = sorted(atoms)
    bits = sum(len(atoms[r]) for r in rels)
    if bits > budget_bits:
        raise BudgetExceededError(f"{bits} atom bits exceed budget of {budget_bits}")
    compiled = {r: compile_formula(n.labels[r], registry, exact) for r in rels}
    out = {}
    for masks in product(*(range(1 << len(atoms[r])) for r in rels)):
        interp = {r: frozenset(t for i, t in enumerate(atoms[r]) if mask >> i & 1)
                  for r, mask in zip(rels, masks)}
        full = Structure(s.domain, {**s.interpretations, **interp}, s.constant_bindings)
        w = joint_probability(n, full, registry, exact, _compiled=compiled)
        key = frozenset(GroundAtom(r, t) for r in rels for t in interp[r])
        out[key] = w
    return out


class _MaskView:
    """Structure view reading probabilistic atoms from integer masks."""

    __slots__ = ("base", "index", "masks", "domain", "constant_bindings")

    def __init__(self, base: Structure, index):
        self.base = base
        self.index = index
        self.masks = {}
        self.domain = base.domain
        self.constant_bindings = base.constant_bindings

    def holds(self, name, tup):
        if name == EQ:
            return tup[0] == tup[1]
        idx = self.index.get(name)
        if idx is not None:
            return self.masks[name] >> idx[tup] & 1 == 1
        return self.base.holds(name, tup)


def brute_force_conditional(n: RelationalNetwork, s: Structure, e: Evidence,
                            q: GroundAtom, budget_bits: int = 24,
                            registry=None, exact=False):
    """P(q | evidence) by enumeration, independent of the elimination path.

    Only relations that some label actually reads are enumerated in full;
    atoms of unread relations are independent given those interpretations,
    so everything except the explicit evidence/query literals marginalizes
    to one and can be dropped.
    """
    _check_ground_atom(n, s, q)
    for a in e.atoms:
        _check_ground_atom(n, s, a)
    q_in_pos = q in e.positive
    q_in_neg = q in e.negative
    voc = n.vocabulary
    read = sorted({rp for r in n.labels for rp in relations_in(n.labels[r])})
    atoms = {r: list(product(s.domain, repeat=voc.probabilistic[r])) for r in read}
    bits = sum(len(v) for v in atoms.values())
    if bits > budget_bits:
        raise BudgetExceededError(f"{bits} atom bits exceed budget of {budget_bits}")
    index = {r: {t: i for i, t in enumerate(atoms[r])} for r in read}
    view = _MaskView(s, index)
    compiled = {r: compile_formula(n.labels[r], registry, exact) for r in sorted(n.labels)}
    mentioned = {r: sorted(relations_in(n.labels[r])) for r in n.labels}

    one = 1 if exact else 1.0
    weight_cache = {r: {} for r in read}
    atom_cache = {}

    def rel_weight(r, mask):
        key = (mask,) + tuple(view.masks[m] for m in mentioned[r])
        cache = weight_cache[r]
        w = cache.get(key)
        if w is None:
            fn = compiled[r]
            params = n.params[r]
            w = one
            for i, d in enumerate(atoms[r]):
                p = fn(view, dict(zip(params, d)))
                w *= p if mask >> i & 1 else 1 - p
                if not w:
                    break
            cache[key] = w
        return w

    def atom_prob(a):
        key = (a,) + tuple(view.masks[m] for m in mentioned[a.relation])
        p = atom_cache.get(key)
        if p is None:
            p = compiled[a.relation](view, dict(zip(n.params[a.relation], a.args)))
            atom_cache[key] = p
        return p

    literals = [(a, sign) for a, sign in e.items()]
    mass_e = 0 if exact else 0.0
    mass_eq = 0 if exact else 0.0
    for masks in product(*(range(1 << len(atoms[r])) for r in read)):
        for r, mask in zip(read, masks):
            view.masks[r] = mask
        w = one
        for r, mask in zip(read, masks):
            w = w * rel_weight(r, mask)
            if not w:
                break
        if not w:
            continue
        for a, sign in literals:
            if a.relation in index:
                truth = view.masks[a.relation] >> index[a.relation][a.args] & 1 == 1
                if truth != sign:
                    w = 0
                    break
            else:
                p = atom_prob(a)
                w = w * (p if sign else 1 - p)
                if not w:
                    break
        if not w:
            continue
        mass_e += w
        if q_in_pos:
            mass_eq += w
        elif q_in_neg:
            pass
        elif q.relation in index:
            if view.masks[q.relation] >> index[q.relation][q.args] & 1 == 1:
                mass_eq += w
        else:
            mass_eq += w * atom_prob(q)
    if not mass_e:
        raise InconsistentEvidenceError("evidence has probability zero")
    return mass_eq / mass_e
