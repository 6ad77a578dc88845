"""Seeded random generators shared by the property and acceptance tests."""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from rbnet.frontend import (LabelClause, ModelDocument, RelationDecl,
                            document_to_network)
from rbnet.grounding import Evidence
from rbnet.model import (And, Comb, Const, Convex, Eq, FALSE, GroundAtom,
                         Indicator, Not, Or, Structure, TRUE, Var)

COMB_NAMES = ("noisyor", "max", "min", "mean")


def random_rational(rng) -> Fraction:
    den = rng.randint(1, 8)
    return Fraction(rng.randint(0, den), den)


def random_constraint(rng, scope, depth=2):
    if depth == 0 or not scope:
        return FALSE if scope and rng.random() < 0.1 else TRUE
    roll = rng.random()
    if roll < 0.45:
        c = Eq(rng.choice(scope), rng.choice(scope))
        return c if rng.random() < 0.5 else Not(c)
    if roll < 0.6:
        return Not(random_constraint(rng, scope, depth - 1))
    if roll < 0.7:
        return TRUE
    op = And if rng.random() < 0.5 else Or
    return op(random_constraint(rng, scope, depth - 1),
              random_constraint(rng, scope, depth - 1))


def random_formula(rng, scope, parent_rels, depth):
    """A random probability formula over variables ``scope`` reading only
    relations from ``parent_rels`` (pairs of name and arity)."""
    roll = rng.random()
    if depth == 0 or roll < 0.25:
        if parent_rels and scope and rng.random() < 0.6:
            name, ar = rng.choice(parent_rels)
            return Indicator(name, tuple(rng.choice(scope) for _ in range(ar)))
        return Const(random_rational(rng))
    if roll < 0.55:
        return Convex(random_formula(rng, scope, parent_rels, depth - 1),
                      random_formula(rng, scope, parent_rels, depth - 1),
                      random_formula(rng, scope, parent_rels, depth - 1))
    bound = tuple(Var(f"z{depth}{i}") for i in range(rng.randint(0, 2)))
    inner = list(scope) + list(bound)
    formulas = tuple(random_formula(rng, inner, parent_rels, depth - 1)
                     for _ in range(rng.randint(1, 2)))
    return Comb(rng.choice(COMB_NAMES), formulas, bound,
                random_constraint(rng, inner))


def random_document(rng, max_rels=3, max_arity=2, dom_size=3,
                    bit_cap=None, max_depth=4) -> ModelDocument:
    while True:
        k = rng.randint(1, max_rels)
        arities = [rng.randint(1, max_arity) for _ in range(k)]
        if bit_cap is None or sum(dom_size ** a for a in arities) <= bit_cap:
            break
    names = [f"r{i}" for i in range(1, k + 1)]
    items = [RelationDecl(nm, ar) for nm, ar in zip(names, arities)]
    parent_rels = []
    for nm, ar in zip(names, arities):
        params = tuple(Var(f"x{j}") for j in range(1, ar + 1))
        f = random_formula(rng, list(params), parent_rels, rng.randint(0, max_depth))
        items.append(LabelClause(nm, params, f))
        parent_rels.append((nm, ar))
    return ModelDocument(tuple(items))


def random_network(rng, dom_size, bit_cap=12):
    doc = random_document(rng, dom_size=dom_size, bit_cap=bit_cap)
    network, registry = document_to_network(doc)
    return doc, network, registry


def domain_of(size, prefix="d"):
    return tuple(f"{prefix}{i}" for i in range(1, size + 1))


def all_atoms(network, domain):
    return [GroundAtom(r, t)
            for r, ar in sorted(network.vocabulary.probabilistic.items())
            for t in product(domain, repeat=ar)]


def random_scenario(rng, network, dom_size):
    """A bare structure plus random evidence literals and a random query."""
    domain = domain_of(dom_size)
    s = Structure(domain)
    atoms = all_atoms(network, domain)
    rng.shuffle(atoms)
    pos, neg = set(), set()
    for a in atoms[:rng.randint(0, min(3, len(atoms)))]:
        (pos if rng.random() < 0.5 else neg).add(a)
    q = rng.choice(atoms)
    return s, Evidence(frozenset(pos), frozenset(neg)), q


def random_full_structure(rng, network, base: Structure) -> Structure:
    """Extend a rigid structure with random interpretations of every
    probabilistic relation."""
    interps = dict(base.interpretations)
    for r, ar in sorted(network.vocabulary.probabilistic.items()):
        interps[r] = frozenset(t for t in product(base.domain, repeat=ar)
                               if rng.random() < 0.5)
    return Structure(base.domain, interps, base.constant_bindings)
