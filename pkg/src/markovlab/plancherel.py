"""Partitions, corner contents, the transition measure, Plancherel growth,
and the exact hook-length dimension oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .interlacing import AtomicMeasure, Diagram, InterlacingPair, markov_forward
from .seeds import STREAM_PLANCHEREL, rng_for


@dataclass(frozen=True)
class Partition:
    """Non-increasing positive row lengths; () is the empty partition."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r < 1 for r in rows):
            raise ValueError("row lengths must be >= 1")
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise ValueError("row lengths must be non-increasing")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return sum(self.rows)

    def conjugate(self) -> "Partition":
        if not self.rows:
            return Partition(())
        cols = [sum(1 for r in self.rows if r > j) for j in range(self.rows[0])]
        return Partition(tuple(cols))

    def __str__(self) -> str:
        return ",".join(str(r) for r in self.rows)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(t) for t in text.split(",")))


@dataclass(frozen=True)
class CornerData:
    """Contents of addable (outer) and removable (inner) boxes, increasing.

    ``outer_rows[j]`` is the 0-based row index receiving a box at
    ``outer[j]`` (row count itself for a new bottom row).
    """

    outer: tuple
    inner: tuple
    outer_rows: tuple

    def __post_init__(self):
        if len(self.outer) != len(self.inner) + 1:
            raise ValueError("need one more outer corner than inner corners")
        merged = []
        for i, o in enumerate(self.outer):
            merged.append(o)
            if i < len(self.inner):
                merged.append(self.inner[i])
        if any(merged[i] >= merged[i + 1] for i in range(len(merged) - 1)):
            raise ValueError("corner contents must strictly interlace")


def corners(p: Partition) -> CornerData:
    """Addable and removable box contents of a partition."""
    rows = p.rows
    r = len(rows)
    outer = []  # built in decreasing content, reversed at the end
    inner = []
    outer_rows = []
    for i in range(r + 1):
        if i == 0 or (i < r and rows[i] < rows[i - 1]) or i == r:
            if i < r:
                outer.append(rows[i] - i)
            else:
                outer.append(-r)
            outer_rows.append(i)
        if i < r and (i == r - 1 or rows[i] > rows[i + 1]):
            inner.append(rows[i] - (i + 1))
    return CornerData(
        tuple(reversed(outer)), tuple(reversed(inner)), tuple(reversed(outer_rows))
    )


def partition_pair(p: Partition) -> InterlacingPair:
    c = corners(p)
    return InterlacingPair(np.array(c.outer, dtype=float),
                           np.array(c.inner, dtype=float))


def partition_diagram(p: Partition) -> Diagram:
    """Profile of the rotated Young diagram as a continual diagram."""
    return Diagram(partition_pair(p))


def transition_measure(p: Partition) -> AtomicMeasure:
    """Markov transform of the corner pair: atoms at addable-box contents."""
    return markov_forward(partition_pair(p))


def transition_weights_exact(p: Partition) -> list:
    """Transition probabilities as exact rationals (partial fractions)."""
    c = corners(p)
    weights = []
    for j, a in enumerate(c.outer):
        num = math.prod(a - b for b in c.inner)
        den = math.prod(a - c.outer[i] for i in range(len(c.outer)) if i != j)
        weights.append(Fraction(num, den))
    return weights


def dim_hook(p: Partition) -> int:
    """Number of standard tableaux of the shape: n! over the hook products."""
    n = p.size
    if n == 0:
        return 1
    conj = p.conjugate().rows
    hooks = 1
    for i, row in enumerate(p.rows):
        for j in range(row):
            hooks *= row - (j + 1) + conj[j] - (i + 1) + 1
    dim, rem = divmod(math.factorial(n), hooks)
    if rem:
        raise AssertionError("hook product does not divide n!")
    return dim


def plancherel_grow(n: int, seed: int, return_chain: bool = False):
    """Grow a Plancherel-random partition of n from the empty diagram.

    Each step adds the addable box drawn from the transition measure of
    the current shape; one uniform draw per step, corners in increasing
    content order.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = rng_for(seed, STREAM_PLANCHEREL)
    uniforms = rng.random(n)

    cap = 3 * int(math.isqrt(n) + 2) + 4
    rows = np.zeros(cap, dtype=np.int64)
    r = 0
    chain = [Partition(())] if return_chain else None

    for step in range(n):
        arr = rows[:r]
        # addable row indices: 0, every strict descent, and the new row r
        if r:
            descents = np.nonzero(arr[1:] < arr[:-1])[0] + 1
            add_rows = np.concatenate(([0], descents, [r]))
            outer = np.where(
                add_rows < r, arr[np.minimum(add_rows, r - 1)] - add_rows, -r
            ).astype(float)
        else:
            add_rows = np.array([0])
            outer = np.array([0.0])
        if r:
            drops = np.nonzero(
                np.concatenate((arr[:-1] > arr[1:], [True]))
            )[0]
            inner = (arr[drops] - (drops + 1)).astype(float)
            # partial-fraction weights in log space (all positive)
            log_num = np.log(np.abs(outer[:, None] - inner[None, :])).sum(axis=1)
            diff = np.abs(outer[:, None] - outer[None, :])
            np.fill_diagonal(diff, 1.0)
            log_den = np.log(diff).sum(axis=1)
            weights = np.exp(log_num - log_den)
            weights /= weights.sum()
        else:
            weights = np.array([1.0])
        # corners ordered by increasing content for the inverse-CDF draw
        order = np.argsort(outer)
        cdf = np.cumsum(weights[order])
        pick = int(np.searchsorted(cdf, uniforms[step], side="right"))
        pick = min(pick, order.size - 1)  # guard against roundoff at u ~ 1
        row = int(add_rows[order[pick]])
        if row == r:
            if r == cap:
                cap *= 2
                rows = np.concatenate((rows, np.zeros(cap, dtype=np.int64)))
                cap = rows.size
            r += 1
        rows[row] += 1
        if return_chain:
            chain.append(Partition(tuple(int(x) for x in rows[:r])))

    result = Partition(tuple(int(x) for x in rows[:r]))
    if return_chain:
        return chain
    return result


def predecessors(p: Partition):
    """Partitions obtained by removing one removable box."""
    rows = p.rows
    for i in range(len(rows)):
        if i == len(rows) - 1 or rows[i] > rows[i + 1]:
            shrunk = list(rows)
            shrunk[i] -= 1
            if shrunk[i] == 0:
                shrunk.pop(i)
            yield Partition(tuple(shrunk))


def verify_dims(n: int) -> bool:
    """Exact dimension identities at level n.

    Checks that each dimension equals the sum over one-box-smaller shapes
    and that the squared dimensions sum to n!.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 0
    for p in partitions_of(n):
        d = dim_hook(p)
        total += d * d
        if d != sum(dim_hook(q) for q in predecessors(p)):
            return False
    return total == math.factorial(n)


def plancherel_weight(p: Partition) -> Fraction:
    """Plancherel probability dim^2 / n! of a partition."""
    return Fraction(dim_hook(p) ** 2, math.factorial(p.size))


def partitions_of(n: int):
    """All partitions of n in reverse lexicographic order."""
    if n == 0:
        yield Partition(())
        return

    def gen(remaining, maximum, prefix):
        if remaining == 0:
            yield Partition(tuple(prefix))
            return
        for first in range(min(remaining, maximum), 0, -1):
            yield from gen(remaining - first, first, prefix + [first])

    yield from gen(n, n, [])
