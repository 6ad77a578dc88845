"""Evaluation of probability formulas against structures.

A formula with free variables x1..xn maps each n-tuple of domain elements to
a value in [0,1].  Indicators read atom truth values from the structure;
combination terms collect one multiset entry per subformula and per bound
tuple satisfying the constraint, counting multiplicity even when the bound
tuple does not occur in the subformula.

Values are computed in double precision by default.  With ``exact=True`` all
arithmetic is carried out on ``Fraction``s, which is practical only at desk
scale but lets tests compare marginals exactly.

The product over all ground atoms of F or (1-F) turns a full structure into
a joint probability; for a recursive network this product is a probability
measure whenever the ground self-dependency relation is acyclic (the caller
is responsible for that check).
"""
from __future__ import annotations

from itertools import product
from typing import Mapping

from . import combinators
from .errors import UnboundVariableError
from .model import (And, Comb, Const, Convex, Eq, FalseC, GroundAtom, Indicator,
                    Not, Or, RigidAtom, RigidConst, Structure, TrueC, Var, free_vars)

_MISSING = object()


def _resolve(term, s, b):
    if isinstance(term, Var):
        v = b.get(term, _MISSING)
        if v is _MISSING:
            raise UnboundVariableError(f"unbound variable {term.name}")
        return v
    try:
        return s.constant_bindings[term.name]
    except KeyError:
        raise UnboundVariableError(f"unbound rigid constant {term.name}") from None


def compile_constraint(c):
    """Compile a constraint to a closure (structure, binding) -> bool."""
    if isinstance(c, TrueC):
        return lambda s, b: True
    if isinstance(c, FalseC):
        return lambda s, b: False
    if isinstance(c, Eq):
        left, right = c.left, c.right
        return lambda s, b: _resolve(left, s, b) == _resolve(right, s, b)
    if isinstance(c, RigidAtom):
        name, args = c.name, c.args
        return lambda s, b: s.holds(name, tuple(_resolve(a, s, b) for a in args))
    if isinstance(c, Not):
        g = compile_constraint(c.arg)
        return lambda s, b: not g(s, b)
    if isinstance(c, And):
        g, h = compile_constraint(c.left), compile_constraint(c.right)
        return lambda s, b: g(s, b) and h(s, b)
    if isinstance(c, Or):
        g, h = compile_constraint(c.left), compile_constraint(c.right)
        return lambda s, b: g(s, b) or h(s, b)
    raise TypeError(f"not a constraint: {c!r}")


def eval_constraint(c, s: Structure, b: Mapping) -> bool:
    """Truth value of a quantifier-free constraint under a binding."""
    return compile_constraint(c)(s, b)


def compile_formula(f, registry=None, exact=False):
    """Compile a probability formula to a closure (structure, binding) -> value.

    The binding dict is mutated in place while bound variables are in scope
    and restored before returning, so a caller-owned dict may be reused
    across calls but must not be shared between concurrent evaluations.
    """
    reg = registry if registry is not None else combinators.default_registry()

    def comp(f):
        if isinstance(f, Const):
            v = f.value if exact else float(f.value)
            return lambda s, b: v
        if isinstance(f, Indicator):
            rel, args = f.relation, f.args
            return lambda s, b: 1 if s.holds(rel, tuple(_resolve(a, s, b) for a in args)) else 0
        if isinstance(f, Convex):
            g1, g2, g3 = comp(f.f1), comp(f.f2), comp(f.f3)

            def convex(s, b):
                v1 = g1(s, b)
                return v1 * g2(s, b) + (1 - v1) * g3(s, b)

            return convex
        if isinstance(f, Comb):
            cf = reg.get(f.name).fn
            subs = [comp(g) for g in f.formulas]
            con = compile_constraint(f.constraint)
            zs = f.bound
            if not zs:
                def nullary(s, b):
                    vals = [g(s, b) for g in subs] if con(s, b) else []
                    return cf(vals)

                return nullary

            def bound(s, b):
                saved = [b.get(z, _MISSING) for z in zs]
                vals = []
                try:
                    for tup in product(s.domain, repeat=len(zs)):
                        for z, v in zip(zs, tup):
                            b[z] = v
                        if con(s, b):
                            for g in subs:
                                vals.append(g(s, b))
                finally:
                    for z, v in zip(zs, saved):
                        if v is _MISSING:
                            b.pop(z, None)
                        else:
                            b[z] = v
                return cf(vals)

            return bound
        raise TypeError(f"not a probability formula: {f!r}")

    return comp(f)


def eval_formula(f, s: Structure, b: Mapping = None, registry=None, exact=False):
    """Value of a probability formula on a structure under a binding."""
    return compile_formula(f, registry, exact)(s, dict(b or {}))


def build_multiset(t: Comb, s: Structure, b: Mapping, registry=None, exact=False):
    """The multiset of subformula values a combination term aggregates.

    One entry per subformula index and per bound tuple satisfying the
    constraint; with an empty bound tuple, the entries are present exactly
    when the constraint holds on the outer binding.
    """
    reg = registry if registry is not None else combinators.default_registry()
    subs = [compile_formula(g, reg, exact) for g in t.formulas]
    con = compile_constraint(t.constraint)
    b = dict(b or {})
    vals = []
    if not t.bound:
        if con(s, b):
            vals = [g(s, b) for g in subs]
        return vals
    for tup in product(s.domain, repeat=len(t.bound)):
        for z, v in zip(t.bound, tup):
            b[z] = v
        if con(s, b):
            for g in subs:
                vals.append(g(s, b))
    return vals


def atom_probability(n, s: Structure, g: GroundAtom, registry=None, exact=False):
    """F_r(d) for a ground atom r(d), read off the label of r."""
    b = dict(zip(n.params[g.relation], g.args))
    return eval_formula(n.labels[g.relation], s, b, registry, exact)


def interpretation_probability(n, s: Structure, r: str, interp, registry=None,
                               exact=False, _compiled=None):
    """Probability of a full interpretation of r given the rest of the structure.

    The product of F_r(d) over tuples in the interpretation and 1 - F_r(d)
    over tuples outside it.  For a recursive r the structure must already
    carry the interpretation of r itself.
    """
    interp = frozenset(map(tuple, interp))
    fn = _compiled or compile_formula(n.labels[r], registry, exact)
    params = n.params[r]
    arity = n.vocabulary.probabilistic[r]
    p = 1 if exact else 1.0
    b = {}
    for d in product(s.domain, repeat=arity):
        for v, e in zip(params, d):
            b[v] = e
        q = fn(s, b)
        p *= q if d in interp else 1 - q
        if not p:
            return p
    return p


def joint_probability(n, full: Structure, registry=None, exact=False, _compiled=None):
    """Probability mass of a full structure over all probabilistic relations.

    Requires ``full`` to interpret every probabilistic relation; for a
    recursive network the caller must have established well-foundedness.
    """
    compiled = _compiled or {r: compile_formula(n.labels[r], registry, exact)
                             for r in n.labels}
    p = 1 if exact else 1.0
    for r in n.topological_order():
        p *= interpretation_probability(n, full, r, full.interpretations[r],
                                        registry, exact, _compiled=compiled[r])
        if not p:
            return p
    return p


def check_binding(f, b: Mapping):
    missing = free_vars(f) - set(b)
    if missing:
        raise UnboundVariableError(f"unbound variables {sorted(v.name for v in missing)}")
