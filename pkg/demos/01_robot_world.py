"""The robot world: a relational Bayesian network end to end.

A robot wants to know, for each location x, the probability of *success*
s(x): either x is a terminal location t(x), or an unblocked neighbor is.
Three relations: b/2 (a path is blocked), t/1 (terminal), s/1 (success).
b and t are parentless; s combines its neighbors' contributions by noisy-or.
"""
from rbnet import (EMPTY_EVIDENCE, Evidence, GroundAtom, brute_force_joint,
                   corpus, infer, pretty_print)

model = corpus.robot_model()  # p0 = p1 = p2 = 1/2
print("The model, in concrete syntax:\n")
print(pretty_print(model.document))

# --- Semantics: every finite domain induces a joint distribution ------------
s2 = corpus.plain_structure(2)
table = brute_force_joint(model.network, s2, registry=model.registry)
print(f"|D| = 2 induces a distribution over {len(table)} full structures; "
      f"total mass = {sum(table.values()):.12f}")

most = max(table, key=table.get)
print(f"most likely structure has mass {table[most]:.6f}: "
      f"{{{', '.join(map(str, sorted(map(str, most)))) or 'empty'}}}\n")

# --- Inference --------------------------------------------------------------
s4 = corpus.plain_structure(4)
q = GroundAtom("s", ("l1",))
p = infer(model.network, s4, EMPTY_EVIDENCE, q, model.registry)
print(f"P(s(l1)) on |D| = 4: {p:.6f}")

# Evidence changes the picture: a known unblocked terminal neighbor
e = Evidence(frozenset({GroundAtom("t", ("l2",))}),
             frozenset({GroundAtom("b", ("l1", "l2"))}))
p = infer(model.network, s4, e, q, model.registry)
print(f"P(s(l1) | t(l2), no block l1->l2): {p:.6f}  (forced success)")

# A location never blocks itself off with positive probability:
print(f"P(b(l1,l1)) = {infer(model.network, s4, EMPTY_EVIDENCE, GroundAtom('b', ('l1', 'l1')), model.registry)}")
