import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from markovlab.plancherel import (
    Partition,
    corners,
    dim_hook,
    partition_diagram,
    partitions_of,
    plancherel_grow,
    plancherel_weight,
    predecessors,
    transition_measure,
    transition_weights_exact,
    verify_dims,
)


def test_partition_validation_and_parse():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    p = Partition.parse("7,4,4,3,1")
    assert p.size == 19
    assert str(p) == "7,4,4,3,1"
    assert Partition.parse("") == Partition(())


def test_conjugate_involution():
    p = Partition((7, 4, 4, 3, 1))
    assert p.conjugate().rows == (5, 4, 4, 3, 1, 1, 1)
    for q in partitions_of(8):
        assert q.conjugate().conjugate() == q


def test_corner_contents_example():
    c = corners(Partition((7, 4, 4, 3, 1)))
    assert c.outer == (-5, -3, 0, 3, 7)
    assert c.inner == (-4, -1, 1, 6)


def test_corners_empty_and_row():
    c = corners(Partition(()))
    assert c.outer == (0,) and c.inner == ()
    c = corners(Partition((4,)))
    assert c.outer == (-1, 4) and c.inner == (3,)


def test_dim_hook_known_values():
    assert dim_hook(Partition(())) == 1
    assert dim_hook(Partition((5,))) == 1
    assert dim_hook(Partition((1, 1, 1))) == 1
    assert dim_hook(Partition((2, 1))) == 2
    assert dim_hook(Partition((2, 2))) == 2
    assert dim_hook(Partition((3, 2))) == 5


def test_partition_counts():
    assert sum(1 for _ in partitions_of(10)) == 42
    assert sum(1 for _ in partitions_of(12)) == 77


def test_dims_identities():
    for n in range(1, 11):
        assert verify_dims(n)


def test_transition_weights_match_dimension_ratios():
    # exact oracle: the weight of adding a box to lambda (|lambda| = n)
    # producing Lambda is dim(Lambda) / ((n+1) dim(lambda))
    for n in range(0, 9):
        for p in partitions_of(n):
            weights = transition_weights_exact(p)
            assert sum(weights) == 1
            d = dim_hook(p)
            successors = []
            c = corners(p)
            for row in c.outer_rows:
                rows = list(p.rows)
                if row == len(rows):
                    rows.append(1)
                else:
                    rows[row] += 1
                successors.append(Partition(tuple(rows)))
            for w, q in zip(weights, successors):
                assert w == Fraction(dim_hook(q), (n + 1) * d)


def test_transition_measure_matches_exact_weights():
    p = Partition((7, 4, 4, 3, 1))
    mu = transition_measure(p)
    exact = transition_weights_exact(p)
    assert np.allclose(mu.weights, [float(w) for w in exact], atol=1e-13)
    assert np.allclose(mu.atoms, corners(p).outer)


def test_predecessors():
    got = set(predecessors(Partition((3, 2, 2))))
    assert got == {Partition((2, 2, 2)), Partition((3, 2, 1))}
    assert list(predecessors(Partition((1,)))) == [Partition(())]


def test_partition_diagram_profile():
    d = partition_diagram(Partition(()))
    x = np.linspace(-3, 3, 7)
    assert np.allclose(d.eval(x), np.abs(x))
    # one box: profile dips to depth 1 at the origin
    d1 = partition_diagram(Partition((1,)))
    assert d1.eval(0.0) == pytest.approx(2.0)
    assert d1.eval(5.0) == pytest.approx(5.0)


def test_grow_deterministic_and_valid():
    p1 = plancherel_grow(200, 11)
    p2 = plancherel_grow(200, 11)
    assert p1 == p2
    assert p1.size == 200
    p3 = plancherel_grow(200, 12)
    assert p1 != p3
    chain = plancherel_grow(12, 3, return_chain=True)
    assert [q.size for q in chain] == list(range(13))
    for prev, nxt in zip(chain, chain[1:]):
        assert prev in set(predecessors(nxt))


def test_grow_distribution_matches_plancherel():
    # empirical law of the chain at n = 4 against exact dim^2/n!
    counts = Counter(plancherel_grow(4, seed) for seed in range(4000))
    for p in partitions_of(4):
        want = float(plancherel_weight(p))
        got = counts[p] / 4000
        assert abs(got - want) < 4 * math.sqrt(want * (1 - want) / 4000) + 1e-3


def test_plancherel_weights_sum_to_one():
    for n in (5, 8):
        assert sum(plancherel_weight(p) for p in partitions_of(n)) == 1
