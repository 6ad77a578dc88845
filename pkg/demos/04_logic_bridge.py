"""The first-order bridge: model checking with probability formulas.

Every first-order formula over the probabilistic vocabulary translates into
a 0/1-valued probability formula using max as the only combination function;
evaluating the translation on a structure is exactly Tarskian satisfaction.
"""
from itertools import product

from rbnet import (Structure, eval_formula, model_check, parse_fol,
                   format_formula, translate)
from rbnet.fol import all_bindings, fo_free_vars

examples = [
    "exists y b(x,y)",
    "forall y (x = y | !b(x,y))",
    "exists x forall y (t(y) | b(x,y))",
    "!t(x) & exists y (b(y,x) & y != x)",
]

s = Structure(("a", "b", "c"), {
    "b": {("a", "b"), ("b", "c"), ("c", "c")},
    "t": {("c",)},
})
print(f"structure: b = {sorted(s.interpretations['b'])}, "
      f"t = {sorted(s.interpretations['t'])}\n")

for text in examples:
    phi = parse_fol(text)
    pf = translate(phi)
    print(f"φ  = {text}")
    print(f"F_φ = {format_formula(pf)}")
    fv = sorted(fo_free_vars(phi), key=lambda v: v.name)
    agree = all(
        eval_formula(pf, s, binding) == (1 if model_check(phi, s, binding) else 0)
        for binding in all_bindings(fv, s.domain))
    sat = [tuple(b[v] for v in fv)
           for b in all_bindings(fv, s.domain) if model_check(phi, s, b)]
    print(f"satisfying bindings {sat}; translation agrees everywhere: {agree}\n")
