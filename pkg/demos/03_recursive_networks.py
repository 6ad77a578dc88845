"""Recursive networks: labels that read their own relation.

With rigid relations as scaffolding, a label may mention the relation it
defines; the semantics is well-defined exactly when the ground
self-dependency relation is acyclic on the given structure.  Three classic
shapes: a symmetric relation (drawn once per unordered pair under a total
order, then mirrored), a temporal chain (each time step reads the previous
one), and a random function (each argument picks exactly one ordered value).
"""
from fractions import Fraction

from rbnet import (EMPTY_EVIDENCE, Evidence, GroundAtom, WellFoundednessError,
                   brute_force_conditional, check_wellfounded, corpus, infer)

# --- Symmetric relation -----------------------------------------------------
p = Fraction(2, 7)
sym = corpus.symmetric_model(p)
order3 = corpus.total_order_structure(3)
print(f"symmetric: P(r(d1,d2)) = "
      f"{infer(sym.network, order3, EMPTY_EVIDENCE, GroundAtom('r', ('d1', 'd2')), sym.registry):.6f}"
      f"  (p = {float(p):.6f})")
e = Evidence(frozenset({GroundAtom("r", ("d1", "d2"))}))
print(f"symmetric: P(r(d2,d1) | r(d1,d2)) = "
      f"{infer(sym.network, order3, e, GroundAtom('r', ('d2', 'd1')), sym.registry)}")

# Without a total order the definition is circular, and the engine says so:
from rbnet import Structure
bad = Structure(("d1", "d2"), {"leq": {("d1", "d1"), ("d2", "d2")}})
ok, witness = check_wellfounded(sym.network, bad)
print(f"incomparable pair: well-founded={ok}, cycle={' -> '.join(map(str, witness))}")
try:
    infer(sym.network, bad, EMPTY_EVIDENCE, GroundAtom("r", ("d1", "d2")),
          sym.registry)
except WellFoundednessError as exc:
    print(f"inference refuses: {exc}")

# --- Temporal chain ---------------------------------------------------------
p0, p1, p2 = Fraction(1, 3), Fraction(1, 5), Fraction(2, 3)
tmp = corpus.temporal_model(p0, p1, p2)
chain = corpus.chain_structure(4, objects=0)
print("\ntemporal: marginals follow q_{i+1} = q_i p1 + (1-q_i) p2")
q = float(p0)
for i in range(4):
    got = infer(tmp.network, chain, EMPTY_EVIDENCE,
                GroundAtom("r", (f"t{i}", "t0")), tmp.registry)
    print(f"  P(r(t{i})) = {got:.10f}   recursion predicts {q:.10f}")
    q = q * float(p1) + (1 - q) * float(p2)

# --- Functional relation ----------------------------------------------------
ps = (Fraction(1, 3), Fraction(1, 4), Fraction(1))
fun = corpus.functional_model(ps)
fs = corpus.functional_structure(3)
print("\nfunctional: P(value v_i) = (1-p_1)...(1-p_{i-1}) p_i")
for i in range(1, 4):
    got = brute_force_conditional(fun.network, fs, EMPTY_EVIDENCE,
                                  GroundAtom("r", ("a1", f"v{i}")),
                                  registry=fun.registry, exact=True)
    print(f"  P(r(a1,v{i})) = {got}")
