"""First-order formulas over the probabilistic vocabulary.

Any first-order property of a finite structure can be expressed by a 0/1
valued probability formula using max as the only combination function:
atoms become indicators, equality becomes a max-term guarded by an equality
constraint, negation and conjunction become inversion and multiplication,
and an existential quantifier becomes a max over the quantified variable.
``model_check`` implements ordinary Tarskian satisfaction directly and
serves as the independent oracle for that translation.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Union

from .errors import UnboundVariableError
from .model import (Comb, Const, Convex, Eq, Indicator, Structure, TRUE, Var)


@dataclass(frozen=True)
class FAtom:
    relation: str
    args: tuple


@dataclass(frozen=True)
class FEq:
    left: Var
    right: Var


@dataclass(frozen=True)
class FNot:
    arg: "FOFormula"


@dataclass(frozen=True)
class FAnd:
    left: "FOFormula"
    right: "FOFormula"


@dataclass(frozen=True)
class FOr:
    left: "FOFormula"
    right: "FOFormula"


@dataclass(frozen=True)
class FExists:
    var: Var
    body: "FOFormula"


@dataclass(frozen=True)
class FForall:
    var: Var
    body: "FOFormula"


FOFormula = Union[FAtom, FEq, FNot, FAnd, FOr, FExists, FForall]


def fo_free_vars(phi: FOFormula) -> frozenset:
    if isinstance(phi, FAtom):
        return frozenset(phi.args)
    if isinstance(phi, FEq):
        return frozenset({phi.left, phi.right})
    if isinstance(phi, FNot):
        return fo_free_vars(phi.arg)
    if isinstance(phi, (FAnd, FOr)):
        return fo_free_vars(phi.left) | fo_free_vars(phi.right)
    return fo_free_vars(phi.body) - {phi.var}


def model_check(phi: FOFormula, s: Structure, b: Mapping) -> bool:
    """Tarskian satisfaction; quantifiers range over the structure's domain."""

    def val(v, b):
        try:
            return b[v]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {v.name}") from None

    def sat(phi, b):
        if isinstance(phi, FAtom):
            return s.holds(phi.relation, tuple(val(v, b) for v in phi.args))
        if isinstance(phi, FEq):
            return val(phi.left, b) == val(phi.right, b)
        if isinstance(phi, FNot):
            return not sat(phi.arg, b)
        if isinstance(phi, FAnd):
            return sat(phi.left, b) and sat(phi.right, b)
        if isinstance(phi, FOr):
            return sat(phi.left, b) or sat(phi.right, b)
        if isinstance(phi, FExists):
            return any(sat(phi.body, {**b, phi.var: d}) for d in s.domain)
        if isinstance(phi, FForall):
            return all(sat(phi.body, {**b, phi.var: d}) for d in s.domain)
        raise TypeError(f"not a first-order formula: {phi!r}")

    return sat(phi, dict(b))


_ZERO = Const(0)
_ONE = Const(1)


def _invert(f):
    return Convex(f, _ZERO, _ONE)


def _multiply(f, g):
    return Convex(f, g, _ZERO)


def translate(phi: FOFormula):
    """Compile a first-order formula into an equivalent 0/1 probability formula.

    The output uses max as its only combination function and evaluates to 1
    on exactly the satisfying bindings.  Universal quantifiers are rewritten
    as negated existentials first; disjunction goes through De Morgan.
    """
    if isinstance(phi, FAtom):
        return Indicator(phi.relation, phi.args)
    if isinstance(phi, FEq):
        return Comb("max", (_ONE,), (), Eq(phi.left, phi.right))
    if isinstance(phi, FNot):
        return _invert(translate(phi.arg))
    if isinstance(phi, FAnd):
        return _multiply(translate(phi.left), translate(phi.right))
    if isinstance(phi, FOr):
        return _invert(_multiply(_invert(translate(phi.left)),
                                 _invert(translate(phi.right))))
    if isinstance(phi, FExists):
        return Comb("max", (translate(phi.body),), (phi.var,), TRUE)
    if isinstance(phi, FForall):
        return translate(FNot(FExists(phi.var, FNot(phi.body))))
    raise TypeError(f"not a first-order formula: {phi!r}")


def all_bindings(variables, domain):
    variables = tuple(variables)
    for tup in product(domain, repeat=len(variables)):
        yield dict(zip(variables, tup))
