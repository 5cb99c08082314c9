"""Shared builders for randomized test instances.

Everything is seeded: the same seed always yields the same graph, assignment,
or matrix, so failures reproduce.
"""

import random

from arbx import (
    BasisAssignment,
    MarketGraph,
    canonical_basis,
    complete,
    generate_graph,
)

KINDS = ("tree", "gnp-connected", "preferential-attachment", "complete")
CYCLIC_KINDS = ("gnp-connected", "preferential-attachment", "complete")


def random_connected_graph(seed, n_lo=2, n_hi=8, require_chord=False) -> MarketGraph:
    rng = random.Random(seed)
    if require_chord:
        n = rng.randint(max(n_lo, 3), max(n_hi, 3))
        kind = rng.choice(CYCLIC_KINDS)
        g = _gen(kind, n, rng)
        while len(g.simple_edges) <= g.n - 1:
            g = _gen(kind, n, rng)
        return g
    return _gen(rng.choice(KINDS), rng.randint(n_lo, n_hi), rng)


def _gen(kind, n, rng) -> MarketGraph:
    seed = rng.randrange(2**32)
    if kind == "gnp-connected":
        return generate_graph(kind, n, p=0.6, seed=seed)
    if kind == "preferential-attachment":
        return generate_graph(kind, n, m=min(2, n - 1), seed=seed)
    return generate_graph(kind, n, seed=seed)


def random_assignment(g: MarketGraph, seed, scale=2.0) -> BasisAssignment:
    rng = random.Random(seed)
    spec = canonical_basis(g)
    return BasisAssignment(
        spec=spec, values=tuple(rng.uniform(-scale, scale) for _ in spec.entries)
    )


def random_log_matrix(g: MarketGraph, seed, scale=2.0):
    return complete(random_assignment(g, seed, scale=scale))


def chords_of(g: MarketGraph, spec) -> list[tuple[int, int]]:
    tree = {(min(i, j), max(i, j)) for i, j in spec.entries}
    return [e for e in g.simple_edges if e not in tree]
