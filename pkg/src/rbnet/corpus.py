"""Bundled example networks used by the tests and demos.

Four families: the robot-success network (two parentless relations feeding a
noisy-or success relation), a recursive symmetric-relation network over a
total order, a recursive temporal network over a successor chain, and a
recursive functional-relation network that distributes a random value among
ordered constants.  Each family is produced as concrete DSL source and then
parsed, so the corpus also exercises the frontend.
"""
from __future__ import annotations

from fractions import Fraction

from .frontend import ParsedModel, parse_model
from .model import Structure

HALF = Fraction(1, 2)


def _q(x) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# Robot-success network: b and t parentless, s depends on both.

def robot_source(p0=HALF, p1=HALF, p2=HALF) -> str:
    return (
        "relation b/2;\n"
        "relation t/1;\n"
        "relation s/1;\n"
        f"b(x,y) = max{{ {_q(p0)} | ; x != y }};\n"
        f"t(x) = {_q(p1)};\n"
        "s(x) = cc(t(x), 1, noisyor{ max{ cc(t(z), cc(b(x,z), 0, 1), 0), "
        f"cc({_q(p2)}, cc(b(z,x), 0, 1), 0) | ; true }} | z; z != x }});\n"
    )


def robot_model(p0=HALF, p1=HALF, p2=HALF) -> ParsedModel:
    return parse_model(robot_source(p0, p1, p2))


def plain_structure(size: int, prefix: str = "l") -> Structure:
    """A purely relational domain l1..ln with no rigid symbols."""
    return Structure(tuple(f"{prefix}{i}" for i in range(1, size + 1)))


# ---------------------------------------------------------------------------
# Symmetric relation: r(x,y) drawn once per unordered pair, mirrored back.

def symmetric_source(p=HALF) -> str:
    return (
        "rigid leq/2;\n"
        "relation r/2;\n"
        f"r(x1,x2) = max{{ max{{ {_q(p)} | ; leq(x1,x2) }}, "
        "max{ r(x2,x1) | ; !leq(x1,x2) } | ; true };\n"
    )


def symmetric_model(p=HALF) -> ParsedModel:
    return parse_model(symmetric_source(p))


def total_order_structure(size: int, prefix: str = "d") -> Structure:
    """Domain d1..dn with leq interpreted as the reflexive total order."""
    elems = tuple(f"{prefix}{i}" for i in range(1, size + 1))
    leq = frozenset((elems[i], elems[j]) for i in range(size) for j in range(size)
                    if i <= j)
    return Structure(elems, {"leq": leq})


# ---------------------------------------------------------------------------
# Temporal chain: r(t, x) evolves along a rigid successor relation.

def temporal_source(p0=HALF, p1=HALF, p2=HALF) -> str:
    return (
        "rigid succ/2;\n"
        "relation r/2;\n"
        "r(t,x) = cc(max{ 1 | tp; succ(tp,t) }, "
        f"max{{ cc(r(tp,x), {_q(p1)}, {_q(p2)}) | tp; succ(tp,t) }}, {_q(p0)});\n"
    )


def temporal_model(p0=HALF, p1=HALF, p2=HALF) -> ParsedModel:
    return parse_model(temporal_source(p0, p1, p2))


def chain_structure(length: int, objects: int = 1) -> Structure:
    """Time points t0..t{length-1} in a succ-chain plus objects o1..on."""
    times = tuple(f"t{i}" for i in range(length))
    obs = tuple(f"o{i}" for i in range(1, objects + 1))
    succ = frozenset(zip(times, times[1:]))
    return Structure(times + obs, {"succ": succ})


# ---------------------------------------------------------------------------
# Functional relation: r(x, y) holds for exactly one value constant y per x
# (when the value probabilities exhaust the unit mass, i.e. p_n = 1).

def functional_source(ps) -> str:
    ps = tuple(Fraction(p) for p in ps)
    n = len(ps)
    decls = "".join(f"constant v{i};\n" for i in range(1, n + 1))
    picks = ", ".join(f"max{{ {_q(p)} | ; y = v{i} }}" for i, p in enumerate(ps, 1))
    return (
        "rigid lt/2;\n"
        f"{decls}"
        "relation r/2;\n"
        f"r(x,y) = cc(max{{ r(x,z) | z; lt(z,y) }}, 0, max{{ {picks} | ; true }});\n"
    )


def functional_model(ps) -> ParsedModel:
    return parse_model(functional_source(ps))


def functional_structure(n_values: int, n_args: int = 1) -> Structure:
    """Domain of argument objects a1.. plus value constants v1..vn under lt."""
    values = tuple(f"v{i}" for i in range(1, n_values + 1))
    args = tuple(f"a{i}" for i in range(1, n_args + 1))
    lt = frozenset((values[i], values[j]) for i in range(n_values)
                   for j in range(n_values) if i < j)
    return Structure(args + values, {"lt": lt}, {v: v for v in values})


def corpus_models():
    """The default-parameter corpus as (name, parsed_model, structure) triples."""
    return (
        ("robot", robot_model(), plain_structure(2)),
        ("symmetric", symmetric_model(), total_order_structure(2)),
        ("temporal", temporal_model(), chain_structure(3)),
        ("functional", functional_model((HALF, HALF, Fraction(1))),
         functional_structure(3)),
    )
