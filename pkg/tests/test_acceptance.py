"""Acceptance suite.

One test per release criterion, each at its stated tolerance, each printing
a single pass/fail line (run with ``pytest tests/test_acceptance.py -s``).
"""

import itertools
import json
import math
import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from arbx import (
    BasisAssignment,
    LogRateMatrix,
    PerturbationVector,
    apply_exact,
    build_operator,
    canonical_basis,
    check_no_arbitrage,
    check_no_arbitrage_oracle,
    complete,
    cycle_log_gain,
    decompose,
    dimension_by_rank,
    epsilon_matrices,
    exp_of,
    generate_graph,
    matrix_from_prices,
    price_vector,
    propagate_log,
    propagate_multiplicative_first_order,
    row_basis,
)
from arbx.cli import main
from arbx.io import load_graph
from helpers import chords_of, random_assignment, random_log_matrix


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL")
        raise
    print(f"[acceptance] {name}: PASS")


def mixed_graph(case, rng, require_chord=False):
    n = rng.randint(3 if require_chord else 2, 8)
    kinds = ["tree", "gnp", "pa", "complete"]
    kind = kinds[case % 4]
    if require_chord and kind == "tree":
        kind = "complete"
    seed = rng.randrange(2**31)
    if kind == "gnp":
        g = generate_graph("gnp-connected", n, p=0.7, seed=seed)
        while require_chord and len(g.simple_edges) <= g.n - 1:
            seed += 1
            g = generate_graph("gnp-connected", n, p=0.7, seed=seed)
        return g
    if kind == "pa":
        return generate_graph("preferential-attachment", n, m=min(2, n - 1), seed=seed)
    return generate_graph(kind, n, seed=seed)


def test_criterion_1_dimension_theorem():
    with criterion("1 dimension theorem, 200 random graphs"):
        rng = random.Random(1001)
        start = time.perf_counter()
        for case in range(200):
            g = mixed_graph(case, rng)
            assert dimension_by_rank(g) == g.n - 1
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_criterion_2_oracle_equivalence():
    with criterion("2 oracle equivalence, 200 instances"):
        rng = random.Random(2002)
        agreements = 0
        for case in range(200):
            perturbed = case >= 100
            g = mixed_graph(case, rng, require_chord=perturbed)
            e = complete(random_assignment(g, rng.randrange(2**31)))
            if perturbed:
                chord = rng.choice(chords_of(g, canonical_basis(g)))
                e = e.with_entry(*chord, e.value(*chord) + rng.choice([-1e-3, 1e-3]))
            fast = check_no_arbitrage(e, tol=1e-9)
            slow = check_no_arbitrage_oracle(e, tol=1e-9)
            assert fast.ok == slow.ok == (not perturbed)
            agreements += 1
        assert agreements == 200


def test_criterion_3_complete_graph_row_basis():
    with criterion("3 row-basis completion on complete graphs"):
        rng = random.Random(3003)
        for n in range(2, 8):
            g = generate_graph("complete", n)
            k = rng.randint(1, n)
            spec = row_basis(g, k)
            values = tuple(rng.uniform(-2, 2) for _ in spec.entries)
            e = complete(BasisAssignment(spec=spec, values=values))
            conditions = 0
            for a, b, c in itertools.combinations(range(1, n + 1), 3):
                for walk in ((a, b, c, a), (a, c, b, a)):
                    assert abs(cycle_log_gain(e, walk)) <= 1e-9
                    conditions += 1
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i != j:
                        assert abs(e.value(i, j) + e.value(j, i)) <= 1e-9
                        conditions += 1
            assert conditions == 2 * math.comb(n, 3) + n * (n - 1)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    expected = e.value(k, j) - e.value(k, i)
                    assert abs(e.value(i, j) - expected) <= 1e-12


def test_criterion_4_uniqueness_and_minimality():
    with criterion("4 uniqueness and minimality of bases"):
        rng = random.Random(4004)
        for case in range(12):
            g = mixed_graph(case, rng, require_chord=True)
            a = random_assignment(g, rng.randrange(2**31))
            e = complete(a)
            basis_coords = set(a.spec.entries)
            non_basis = [
                (i, j)
                for i in range(1, g.n + 1)
                for j in range(1, g.n + 1)
                if g.has_edge(i, j) and i != j and (i, j) not in basis_coords
            ]
            assert non_basis
            for i, j in non_basis:
                bumped = e.with_entry(i, j, e.value(i, j) + 1e-3)
                assert not check_no_arbitrage(bumped, tol=1e-9).ok
            for drop in range(a.spec.size):
                pair = []
                for coeff in (0.0, 1.0):
                    values = tuple(
                        coeff if k == drop else v for k, v in enumerate(a.values)
                    )
                    pair.append(complete(BasisAssignment(spec=a.spec, values=values)))
                kept = [c for k, c in enumerate(a.spec.entries) if k != drop]
                for i, j in kept:
                    assert pair[0].value(i, j) == pair[1].value(i, j)
                assert np.max(np.abs(pair[0].entries - pair[1].entries)) > 1e-3


def test_criterion_5_epsilon_basis_exactness():
    with criterion("5 unit-response basis read-off"):
        rng = random.Random(5005)
        for case in range(12):
            g = mixed_graph(case, rng)
            specs = [canonical_basis(g)]
            if len(g.simple_edges) == g.n * (g.n - 1) // 2:
                specs.append(row_basis(g, rng.randint(1, g.n)))
            for spec in specs:
                eps = epsilon_matrices(spec)
                for k, m in enumerate(eps.matrices):
                    for idx, (i, j) in enumerate(spec.entries):
                        assert m.value(i, j) == (1.0 if idx == k else 0.0)
                values = tuple(rng.uniform(-2, 2) for _ in spec.entries)
                coeffs = decompose(complete(BasisAssignment(spec=spec, values=values)), spec)
                assert coeffs == pytest.approx(list(values), abs=1e-12)


def test_criterion_6_potential_equivalence():
    with criterion("6 price-potential equivalence"):
        rng = random.Random(6006)
        for case in range(12):
            g = mixed_graph(case, rng)
            e = random_log_matrix(g, rng.randrange(2**31))
            ref = rng.randint(1, g.n)
            rebuilt = matrix_from_prices(g, price_vector(e, ref))
            assert np.max(np.abs(rebuilt.entries - e.entries)) <= 1e-12
            other = 1 + (ref % g.n)
            p1 = price_vector(e, ref).prices
            p2 = price_vector(e, other).prices
            for a in range(g.n):
                for b in range(g.n):
                    assert abs((p1[a] - p1[b]) - (p2[a] - p2[b])) <= 1e-12


def test_criterion_7_dynamics():
    with criterion("7 perturbation dynamics"):
        rng = random.Random(7007)
        for case in range(20):
            g = mixed_graph(case, rng)
            e = random_log_matrix(g, rng.randrange(2**31), scale=1.0)
            r = exp_of(e)
            direction = random_log_matrix(g, rng.randrange(2**31), scale=1.0)

            def remainder(step):
                exact = exp_of(LogRateMatrix(g, e.entries + step * direction.entries))
                d = LogRateMatrix(g, step * direction.entries)
                linear = r.entries + propagate_multiplicative_first_order(r, d)
                return np.max(np.abs(exact.entries - linear))

            ratio = remainder(1e-3) / remainder(5e-4)
            assert 3.5 <= ratio <= 4.5

        g = mixed_graph(3, rng, require_chord=True)
        spec = canonical_basis(g)
        op = build_operator(spec)
        state = complete(random_assignment(g, 77))
        for _ in range(100):
            deltas = tuple(rng.uniform(-0.02, 0.02) for _ in range(spec.size))
            d_log = propagate_log(op, PerturbationVector(spec=spec, deltas=deltas))
            state, _ = apply_exact(state, d_log, tol=1e-9)
            assert check_no_arbitrage(state, tol=2e-9).ok


def test_criterion_8_cli_round_trip(tmp_path, capsys):
    with criterion("8 CLI round trip and differential run"):
        rng = random.Random(8008)
        kinds = [
            ("complete", []),
            ("tree", []),
            ("gnp", ["--p", "0.6"]),
            ("pa", ["--m", "2"]),
        ]
        for case in range(50):
            kind, extra = kinds[case % 4]
            n = rng.randint(3, 8)
            gfile = tmp_path / f"g{case}.json"
            assert main([
                "gen", "--kind", kind, "--n", str(n),
                "--seed", str(case), "--out", str(gfile), *extra,
            ]) == 0
            g = load_graph(gfile)
            spec = canonical_basis(g)
            bfile = tmp_path / f"b{case}.json"
            bfile.write_text(json.dumps({
                "entries": [list(entry) for entry in spec.entries],
                "values": [rng.uniform(-2, 2) for _ in spec.entries],
            }))
            rfile = tmp_path / f"r{case}.csv"
            assert main([
                "complete", "--graph", str(gfile), "--basis", str(bfile),
                "--out", str(rfile),
            ]) == 0
            check_code = main(["check", "--rates", str(rfile)])
            oracle_code = main(["oracle", "--rates", str(rfile)])
            assert check_code == 0
            assert check_code == oracle_code
        capsys.readouterr()
