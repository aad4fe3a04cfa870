"""Shared test utilities: random networks and a sympy bridge used as an oracle."""

import random
import re
from fractions import Fraction

import sympy as sp

from relpoly.netmodel import parse_network


def random_network(rng: random.Random, max_components: int = 10):
    """A random network whose sink is reachable from the source.

    A random source-to-sink chain guarantees connectivity; extra arcs are then
    added, some undirected (two antiparallel arcs sharing a component).
    """
    n_nodes = rng.randint(2, 6)
    nodes = [f"v{i}" for i in range(n_nodes)]
    arcs = []
    comp = 0

    def add(u, v, undirected):
        nonlocal comp
        comp += 1
        arcs.append({"id": len(arcs) + 1, "from": u, "to": v, "component": comp})
        if undirected:
            arcs.append({"id": len(arcs) + 1, "from": v, "to": u, "component": comp})

    middle = nodes[1:-1]
    rng.shuffle(middle)
    chain = [nodes[0]] + middle[: rng.randint(0, len(middle))] + [nodes[-1]]
    for u, v in zip(chain, chain[1:]):
        add(u, v, rng.random() < 0.3)
    target = rng.randint(comp, max_components)
    while comp < target:
        u, v = rng.sample(nodes, 2)
        add(u, v, rng.random() < 0.3)
    return parse_network({"nodes": nodes, "source": nodes[0], "sink": nodes[-1], "arcs": arcs})


def to_sympy(p):
    """SqFreePoly -> sympy expression over symbols named after its variables."""
    syms = sp.symbols(p.names) if p.n else ()
    if p.n == 1:
        syms = (syms,) if not isinstance(syms, tuple) else syms
    expr = sp.Integer(0)
    for mask, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for i in range(p.n):
            if mask >> i & 1:
                term *= syms[i]
        expr += term
    return sp.expand(expr)


_TOKEN = re.compile(r"[ab]_?\s*\d|[Rx]_?\d|\d+|[()+\-]")


def parse_display(text: str):
    """Parse equations typeset with implicit products, e.g. ``a_2a_3(b_1 - 1)``."""
    out = []
    prev = None
    for tok in _TOKEN.findall(text):
        tok = tok.replace("_", "").replace(" ", "")
        factor = tok[0].isalnum() or tok == "("
        if factor and prev is not None and (prev[0].isalnum() or prev == ")"):
            out.append("*")
        out.append(tok)
        prev = tok
    return sp.expand(sp.sympify("".join(out)))


def load_cases(path):
    """``{label: [equation, ...]}`` from the bracketed golden file."""
    blocks, cur = {}, None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("["):
                cur = line[1:-1]
                blocks[cur] = []
            elif line and cur is not None:
                blocks[cur].append(line)
    return blocks


def rand_fraction(rng: random.Random, lo=-2, hi=2, den=12) -> Fraction:
    d = rng.randint(1, den)
    return Fraction(rng.randint(lo * d, hi * d), d)
