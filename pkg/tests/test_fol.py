import random
from itertools import product

from rbnet.evaluator import eval_formula
from rbnet.fol import (FAnd, FAtom, FEq, FExists, FForall, FNot, FOr,
                       all_bindings, fo_free_vars, model_check, translate)
from rbnet.model import Structure, Var

X, Y = Var("x"), Var("y")


def test_model_check_basics():
    s = Structure(("a", "b"), {"b": {("a", "b")}, "t": {("b",)}})
    phi = FExists(Y, FAtom("b", (X, Y)))
    assert model_check(phi, s, {X: "a"})
    assert not model_check(phi, s, {X: "b"})
    assert model_check(FForall(X, FOr(FAtom("t", (X,)),
                                      FExists(Y, FAtom("b", (X, Y))))), s, {})
    assert model_check(FEq(X, Y), s, {X: "a", Y: "a"})
    assert not model_check(FNot(FEq(X, X)), s, {X: "a"})


def test_fo_free_vars():
    phi = FExists(Y, FAnd(FAtom("b", (X, Y)), FEq(X, Y)))
    assert fo_free_vars(phi) == frozenset({X})


def test_translate_is_zero_one_equivalent():
    rng = random.Random(7)
    formulas = [
        FAtom("t", (X,)),
        FEq(X, Y),
        FNot(FAtom("t", (X,))),
        FAnd(FAtom("t", (X,)), FNot(FEq(X, Y))),
        FOr(FAtom("t", (X,)), FAtom("t", (Y,))),
        FExists(Y, FAtom("b", (X, Y))),
        FForall(Y, FOr(FEq(X, Y), FNot(FAtom("b", (X, Y))))),
        FExists(X, FForall(Y, FOr(FEq(X, Y), FAtom("b", (X, Y))))),
    ]
    for size in (1, 2):
        domain = tuple(f"d{i}" for i in range(size))
        b_atoms = list(product(domain, repeat=2))
        t_atoms = list(product(domain, repeat=1))
        for _ in range(20):
            s = Structure(domain, {
                "b": {a for a in b_atoms if rng.random() < 0.5},
                "t": {a for a in t_atoms if rng.random() < 0.5},
            })
            for phi in formulas:
                pf = translate(phi)
                for binding in all_bindings(sorted(fo_free_vars(phi),
                                                   key=lambda v: v.name), domain):
                    want = 1 if model_check(phi, s, binding) else 0
                    assert eval_formula(pf, s, binding) == want
