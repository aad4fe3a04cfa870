"""Reliability polynomials of two-terminal networks.

The polynomial can be built three independent ways, which the test-suite
checks against each other:

* from minimal cuts, as the Boolean (idempotent) product of the per-cut
  availabilities ``1 - prod(1 - R_i)``;
* from minimal paths, by inclusion-exclusion over path families;
* by brute force over all ``2**n`` component states.

Probabilities are exact rationals everywhere except in :func:`monte_carlo`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .netmodel import Network, is_working, mask_of
from .sqfree_poly import SqFreePoly, to_fraction

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "probability_vector",
    "from_min_cuts",
    "from_min_paths",
    "bruteforce_poly",
    "bruteforce_value",
    "working_table",
    "monte_carlo",
    "MC_CHUNK",
]

BRUTE_FORCE_LIMIT = 20
MC_CHUNK = 1 << 16


def probability_vector(values: Sequence, n: int) -> tuple[Fraction, ...]:
    """Validate and convert component reliabilities."""
    if len(values) != n:
        raise ValueError(f"expected {n} probabilities, got {len(values)}")
    out = tuple(to_fraction(v) for v in values)
    for i, p in enumerate(out, 1):
        if not 0 <= p <= 1:
            raise ValueError(f"probability of component {i} is {p}, outside [0, 1]")
    return out


def _check_sets(sets: Iterable[Iterable[int]], n: int) -> list[int]:
    masks = []
    for s in sets:
        s = list(s)
        for i in s:
            if not 1 <= i <= n:
                raise ValueError(f"component {i} exceeds component count {n}")
        masks.append(mask_of(s))
    return masks


def from_min_cuts(cuts: Iterable[Iterable[int]], n: int) -> SqFreePoly:
    """Idempotent product over cuts of ``1 - prod_{i in C} (1 - R_i)``.

    The system works iff every minimal cut keeps at least one working
    component; multiplying indicator polynomials under ``R_i**2 = R_i`` turns
    that Boolean identity into the exact reliability polynomial.  An empty
    cut list gives the constant 1.
    """
    masks = _check_sets(cuts, n)
    one = SqFreePoly.constant(n, 1)
    result = one
    for mask in masks:
        all_fail = one
        for i in range(1, n + 1):
            if mask >> (i - 1) & 1:
                all_fail = all_fail * (one - SqFreePoly.variable(n, i))
        result = result.mul_idempotent(one - all_fail)
    return result


def from_min_paths(paths: Iterable[Iterable[int]], n: int) -> SqFreePoly:
    """Inclusion-exclusion over the events "path P is fully up".

    Each non-empty subfamily of k paths contributes ``(-1)**(k+1)`` times the
    monomial of the union of its components.  Subfamilies with the same
    union are merged as they are generated, so the work is bounded by the
    number of distinct unions rather than ``2**len(paths)``.
    """
    masks = _check_sets(paths, n)
    acc: dict[int, int] = {}
    for p in masks:
        nxt = dict(acc)
        nxt[p] = nxt.get(p, 0) + 1
        for m, c in acc.items():
            u = m | p
            nxt[u] = nxt.get(u, 0) - c
        acc = {m: c for m, c in nxt.items() if c}
    return SqFreePoly(n, acc)


def working_table(net: Network) -> np.ndarray:
    """Boolean array indexed by up-set bitmask: does the network work?"""
    if net.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT} components (got {net.n})")
    return np.fromiter((is_working(net, m) for m in range(1 << net.n)), dtype=bool, count=1 << net.n)


def bruteforce_poly(net: Network) -> SqFreePoly:
    """Expected structure function over all states, in multilinear form.

    Expanding ``sum_{S working} prod_{i in S} R_i prod_{i not in S} (1 - R_i)``
    gives the coefficient of monomial ``U`` as
    ``sum_{S subset U, S working} (-1)**(|U|-|S|)``, i.e. the Moebius
    transform of the working table, computed here one variable at a time.
    """
    n = net.n
    f = working_table(net).astype(np.int64)
    for i in range(n):
        view = f.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return SqFreePoly(n, {int(m): int(c) for m, c in enumerate(f) if c})


def bruteforce_value(net: Network, probs: Sequence) -> Fraction:
    """Exact reliability by direct summation over the ``2**n`` states."""
    p = probability_vector(probs, net.n)
    table = working_table(net)
    q = [1 - x for x in p]
    total = Fraction(0)
    for mask in np.flatnonzero(table):
        mask = int(mask)
        prod = Fraction(1)
        for i in range(net.n):
            prod *= p[i] if mask >> i & 1 else q[i]
            if not prod:
                break
        total += prod
    return total


def monte_carlo(net: Network, probs: Sequence, trials: int, seed: int) -> tuple[float, float]:
    """Sampled reliability with its binomial standard error.

    States are drawn from numpy's PCG64 generator.  The trials are split into
    fixed chunks of ``MC_CHUNK``; chunk ``k`` uses the ``k``-th child of
    ``SeedSequence(seed)``, so the result depends only on ``seed`` and
    ``trials``.
    """
    if trials < 1:
        raise ValueError("trials must be a positive integer")
    if net.n == 0:
        raise ValueError("network has no components to sample")
    p = np.array([float(x) for x in probability_vector(probs, net.n)])
    weights = np.left_shift(np.int64(1), np.arange(net.n, dtype=np.int64))
    n_chunks = -(-trials // MC_CHUNK)
    children = np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF).spawn(n_chunks)
    cache: dict[int, bool] = {}
    hits = 0
    remaining = trials
    for child in children:
        size = min(MC_CHUNK, remaining)
        remaining -= size
        rng = np.random.Generator(np.random.PCG64(child))
        up = rng.random((size, net.n)) < p
        masks = up.astype(np.int64) @ weights
        uniq, counts = np.unique(masks, return_counts=True)
        for m, c in zip(uniq.tolist(), counts.tolist()):
            ok = cache.get(m)
            if ok is None:
                ok = cache[m] = is_working(net, m)
            if ok:
                hits += c
    est = hits / trials
    return est, math.sqrt(est * (1 - est) / trials)
