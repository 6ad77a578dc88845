"""Acceptance suite: one test (and one printed pass line) per criterion.

Run with ``pytest -v`` to see the per-criterion outcome lines; add ``-s`` to
see the printed summaries as well.
"""
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from rbnet import corpus
from rbnet.dependency import DependencyAnalyzer, eval_dependency, parent_formula
from rbnet.errors import InconsistentEvidenceError, RbnError
from rbnet.evaluator import atom_probability, eval_formula
from rbnet.fol import (FAnd, FAtom, FEq, FExists, FForall, FNot, FOr,
                       all_bindings, fo_free_vars, model_check, translate)
from rbnet.frontend import parse_model, parse_scenario, pretty_print
from rbnet.grounding import (EMPTY_EVIDENCE, Evidence, brute_force_conditional,
                             brute_force_joint, build_auxiliary_network, infer)
from rbnet.model import GroundAtom, Structure, Var

import helpers

TOL = 1e-9


def _equivalent(network, registry, s, e, q, budget=24):
    """Compare infer against the brute-force oracle on one query."""
    try:
        p = infer(network, s, e, q, registry)
    except InconsistentEvidenceError:
        with pytest.raises(InconsistentEvidenceError):
            brute_force_conditional(network, s, e, q, budget, registry)
        return None
    bf = brute_force_conditional(network, s, e, q, budget, registry)
    assert abs(p - float(bf)) <= TOL, f"{q}: infer {p} vs oracle {bf}"
    return p


def test_criterion_1_oracle_equivalence_nonrecursive():
    rng = random.Random(20240824)
    t0 = time.perf_counter()
    for i in range(200):
        dom_size = rng.choice((1, 2, 3))
        _, network, registry = helpers.random_network(rng, dom_size)
        s, e, q = helpers.random_scenario(rng, network, dom_size)
        _equivalent(network, registry, s, e, q)
    dt = time.perf_counter() - t0
    assert dt < 60
    print(f"criterion 1: PASS — 200 random networks, |infer − oracle| ≤ 1e-9 "
          f"({dt:.1f}s)")


def test_criterion_2_oracle_equivalence_recursive():
    rng = random.Random(7)
    t0 = time.perf_counter()
    cases = []
    for size in (2, 3):
        m = corpus.symmetric_model(Fraction(2, 7))
        cases.append((m, corpus.total_order_structure(size)))
    m = corpus.temporal_model(Fraction(1, 3), Fraction(1, 5), Fraction(2, 3))
    cases.append((m, corpus.chain_structure(3, objects=0)))
    m = corpus.functional_model((Fraction(1, 3), Fraction(1, 2)))
    cases.append((m, corpus.functional_structure(2)))

    checked = 0
    for parsed, s in cases:
        atoms = helpers.all_atoms(parsed.network, s.domain)
        for _ in range(25):
            rng.shuffle(atoms)
            pos, neg = set(), set()
            for a in atoms[: rng.randint(0, 2)]:
                (pos if rng.random() < 0.5 else neg).add(a)
            e = Evidence(frozenset(pos), frozenset(neg))
            _equivalent(parsed.network, parsed.registry, s, e, rng.choice(atoms))
            checked += 1
    dt = time.perf_counter() - t0
    assert dt < 30
    print(f"criterion 2: PASS — {checked} recursive queries matched the "
          f"oracle to 1e-9 ({dt:.1f}s)")


def test_criterion_3_robot_world():
    t0 = time.perf_counter()
    m = corpus.robot_model()  # p0 = p1 = p2 = 1/2
    s = corpus.plain_structure(4)
    q = GroundAtom("s", ("l1",))
    p = infer(m.network, s, EMPTY_EVIDENCE, q, m.registry)
    # the oracle enumerates all 2^20 (b, t) interpretations
    bf = brute_force_conditional(m.network, s, EMPTY_EVIDENCE, q, 20, m.registry)
    assert abs(p - bf) <= TOL
    dt = time.perf_counter() - t0
    assert dt < 60
    print(f"criterion 3: PASS — P(s(l1)) = {p:.12g} on |D|=4, elimination == "
          f"2^20-structure brute force ({dt:.1f}s)")


def test_criterion_4_pa_formula_reproduction():
    n = corpus.robot_model().network
    d = parent_formula(n, "s", "b")
    for size in range(1, 5):
        dom = tuple(f"e{i}" for i in range(size))
        s = Structure(dom)
        for x, y1, y2 in product(dom, repeat=3):
            want = (y1 == x and y2 != x) or (y1 != x and y2 == x)
            assert eval_dependency(d, s, (x,), (y1, y2)) == want
    print("criterion 4: PASS — pa_{s,b} ≡ (y1=x ∧ y2≠x) ∨ (y1≠x ∧ y2=x) "
          "on all domains |D| ≤ 4")


def test_criterion_5_auxiliary_network_shape():
    t0 = time.perf_counter()
    m = corpus.robot_model()
    s = corpus.plain_structure(10)
    g = build_auxiliary_network(m.network, s, EMPTY_EVIDENCE,
                                GroundAtom("s", ("l1",)), m.registry)
    expected = {GroundAtom("s", ("l1",))}
    expected |= {GroundAtom("t", (f"l{i}",)) for i in range(1, 11)}
    expected |= {GroundAtom("b", ("l1", f"l{i}")) for i in range(2, 11)}
    expected |= {GroundAtom("b", (f"l{i}", "l1")) for i in range(2, 11)}
    assert set(g.nodes) == expected
    assert g.node_count == 29
    dt = time.perf_counter() - t0
    assert dt < 1
    print(f"criterion 5: PASS — auxiliary network is exactly the 29 expected "
          f"nodes ({dt:.2f}s)")


def test_criterion_6_fo_translation_round_trip():
    t0 = time.perf_counter()
    x, y, z = Var("x"), Var("y"), Var("z")
    formulas = [
        FAtom("t", (x,)),
        FAtom("b", (x, y)),
        FEq(x, y),
        FNot(FAtom("t", (x,))),
        FAnd(FAtom("t", (x,)), FAtom("b", (x, y))),
        FOr(FEq(x, y), FNot(FAtom("b", (y, x)))),
        FExists(y, FAtom("b", (x, y))),
        FForall(y, FOr(FEq(x, y), FAtom("b", (x, y)))),
        FExists(y, FAnd(FNot(FEq(x, y)), FAtom("t", (y,)))),
        FForall(x, FExists(y, FAtom("b", (x, y)))),                      # depth 2
        FExists(x, FForall(y, FOr(FAtom("t", (y,)),
                                  FExists(z, FAnd(FAtom("b", (x, z)),
                                                  FEq(z, y)))))),        # depth 3
        FNot(FForall(x, FNot(FAnd(FAtom("t", (x,)),
                                  FForall(y, FNot(FAtom("b", (x, y)))))))),
    ]
    assert len(formulas) == 12
    checked = 0
    for size in (1, 2, 3):
        dom = tuple(f"d{i}" for i in range(size))
        b_atoms = list(product(dom, repeat=2))
        t_atoms = list(product(dom, repeat=1))
        for mask in range(1 << (len(b_atoms) + len(t_atoms))):
            s = Structure(dom, {
                "b": {a for i, a in enumerate(b_atoms) if mask >> i & 1},
                "t": {a for i, a in enumerate(t_atoms)
                      if mask >> (len(b_atoms) + i) & 1},
            })
            for phi in formulas:
                pf = translate(phi)
                fv = sorted(fo_free_vars(phi), key=lambda v: v.name)
                for binding in all_bindings(fv, dom):
                    want = 1 if model_check(phi, s, binding) else 0
                    assert eval_formula(pf, s, binding) == want
                    checked += 1
    dt = time.perf_counter() - t0
    assert dt < 120
    print(f"criterion 6: PASS — FO translation round-trip exact on {checked} "
          f"(formula, structure, binding) triples ({dt:.1f}s)")


def test_criterion_7_normalization():
    cases = [
        ("robot", corpus.robot_model(), corpus.plain_structure(3)),
        ("symmetric", corpus.symmetric_model(Fraction(2, 7)),
         corpus.total_order_structure(3)),
        ("temporal", corpus.temporal_model(Fraction(1, 3), Fraction(1, 5),
                                           Fraction(2, 3)),
         corpus.chain_structure(3, objects=0)),
        ("functional", corpus.functional_model((Fraction(1, 3), Fraction(1, 2))),
         corpus.functional_structure(2)),
    ]
    for name, parsed, s in cases:
        table = brute_force_joint(parsed.network, s, 24, parsed.registry)
        total = sum(table.values())
        assert abs(total - 1.0) <= TOL, f"{name}: mass {total}"
    print("criterion 7: PASS — joint mass sums to 1 ± 1e-9 for all four "
          "corpus networks")


def test_criterion_8_closed_form_marginals():
    # functional: P(value v_i) = (1-p1)...(1-p_{i-1}) p_i, exact rationals
    ps = (Fraction(1, 3), Fraction(1, 2))
    m = corpus.functional_model(ps)
    s = corpus.functional_structure(2)
    for i, p in enumerate(ps, 1):
        q = GroundAtom("r", ("a1", f"v{i}"))
        got = brute_force_conditional(m.network, s, EMPTY_EVIDENCE, q, 24,
                                      m.registry, exact=True)
        want = p
        for pj in ps[: i - 1]:
            want = want * (1 - pj)
        assert got == want, f"v{i}: {got} != {want}"

    # temporal: q_{i+1} = q_i p1 + (1 - q_i) p2
    p0, p1, p2 = Fraction(1, 3), Fraction(1, 5), Fraction(2, 3)
    mt = corpus.temporal_model(p0, p1, p2)
    st = corpus.chain_structure(4, objects=0)
    q = float(p0)
    for i in range(4):
        got = infer(mt.network, st, EMPTY_EVIDENCE,
                    GroundAtom("r", (f"t{i}", "t0")), mt.registry)
        assert abs(got - q) <= 1e-12, f"t{i}: {got} != {q}"
        q = q * float(p1) + (1 - q) * float(p2)

    # symmetric: P(r(a,b)) = p in both argument orders
    p = Fraction(2, 7)
    ms = corpus.symmetric_model(p)
    ss = corpus.total_order_structure(3)
    for a, b in (("d1", "d2"), ("d2", "d1"), ("d3", "d3")):
        got = infer(ms.network, ss, EMPTY_EVIDENCE, GroundAtom("r", (a, b)),
                    ms.registry)
        assert abs(got - float(p)) <= 1e-12
    print("criterion 8: PASS — functional marginals exact, temporal recursion "
          "and symmetric marginal to 1e-12")


def test_criterion_9_dependency_flip_soundness():
    rng = random.Random(4242)
    trials = violations = 0
    while trials < 1000:
        dom_size = rng.choice((2, 3))
        _, network, registry = helpers.random_network(rng, dom_size)
        analyzer = DependencyAnalyzer(network)
        base = Structure(helpers.domain_of(dom_size))
        s = helpers.random_full_structure(rng, network, base)
        rels = sorted(network.vocabulary.probabilistic.items())
        for _ in range(20):
            r, ar = rng.choice(rels)
            rp, arp = rng.choice(rels)
            d = tuple(rng.choice(s.domain) for _ in range(ar))
            dp = tuple(rng.choice(s.domain) for _ in range(arp))
            if analyzer.depends(r, rp, s, d, dp):
                continue
            g = GroundAtom(r, d)
            before = atom_probability(network, s, g, registry, exact=True)
            interp = set(s.interpretations[rp])
            interp.symmetric_difference_update({dp})
            flipped = s.with_interpretation(rp, interp)
            after = atom_probability(network, flipped, g, registry, exact=True)
            trials += 1
            if before != after:
                violations += 1
    assert violations == 0
    print(f"criterion 9: PASS — {trials} non-pa atom flips, zero changes to "
          f"F_r(d)")


def test_criterion_10_frontend_round_trip_and_fuzz():
    rng = random.Random(5)
    t0 = time.perf_counter()
    for _ in range(1000):
        doc = helpers.random_document(rng)
        assert parse_model(pretty_print(doc)).document == doc
    for _ in range(1_000_000):
        text = rng.randbytes(rng.randrange(40)).decode("latin-1")
        for fn in (parse_model, parse_scenario):
            try:
                fn(text)
            except RbnError:
                pass
    dt = time.perf_counter() - t0
    print(f"criterion 10: PASS — 1000 model round-trips, 10^6 fuzz inputs "
          f"without a crash ({dt:.1f}s)")
