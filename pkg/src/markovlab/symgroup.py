"""Exact small-n verification engine: the group algebra of S_n,
Jucys--Murphy elements, the Chebyshev-path identities, the trace vs
transition-measure identity, and the determinant (zeta) series check for
unimodular matrices.

All group-algebra arithmetic is exact (integers and Fractions).  The
half-integer powers of sqrt(m - 1) appearing in the displayed Chebyshev
normalizations cancel once the polynomials are expanded, so the expanded
polynomials have integer coefficients and every identity is checked
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .plancherel import (
    Partition,
    partitions_of,
    plancherel_weight,
    transition_weights_exact,
    corners,
)


def identity_perm(n: int) -> tuple:
    return tuple(range(n))


def transposition(i: int, j: int, n: int) -> tuple:
    """Transposition of the 1-based points i and j in S_n."""
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise ValueError("transposition needs two distinct points in 1..n")
    images = list(range(n))
    images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
    return tuple(images)


def compose(p: tuple, q: tuple) -> tuple:
    """Product pq acting as (pq)(x) = p(q(x))."""
    return tuple(p[qi] for qi in q)


@dataclass(frozen=True)
class GroupAlgebraElement:
    """Sparse rational linear combination of permutations of fixed degree."""

    n: int
    terms: dict

    def __post_init__(self):
        cleaned = {p: c for p, c in self.terms.items() if c != 0}
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {identity_perm(n): Fraction(1)})

    @classmethod
    def of(cls, perm: tuple, coeff=1) -> "GroupAlgebraElement":
        return cls(len(perm), {perm: Fraction(coeff)})

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, 0) + c
        return GroupAlgebraElement(self.n, terms)

    def __sub__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, 0) - c
        return GroupAlgebraElement(self.n, terms)

    def scale(self, coeff) -> "GroupAlgebraElement":
        coeff = Fraction(coeff)
        return GroupAlgebraElement(
            self.n, {p: c * coeff for p, c in self.terms.items()}
        )

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("group algebra degrees differ")


def algebra_mul(x: GroupAlgebraElement, y: GroupAlgebraElement):
    """Bilinear convolution product in the group algebra."""
    x._check(y)
    terms: dict = {}
    for p, a in x.terms.items():
        for q, b in y.terms.items():
            r = compose(p, q)
            terms[r] = terms.get(r, 0) + a * b
    return GroupAlgebraElement(x.n, terms)


def poly_apply(coeffs, x: GroupAlgebraElement) -> GroupAlgebraElement:
    """Evaluate a polynomial (coefficient list, index = degree) at x, by Horner."""
    result = GroupAlgebraElement.zero(x.n)
    for c in reversed(list(coeffs)):
        result = algebra_mul(result, x) + GroupAlgebraElement.one(x.n).scale(c)
    return result


def normalized_trace(x: GroupAlgebraElement) -> Fraction:
    """Trace per dimension in the regular representation: the identity coefficient."""
    return Fraction(x.terms.get(identity_perm(x.n), 0))


def jm_element(m: int, n: int) -> GroupAlgebraElement:
    """Jucys--Murphy element (1 m) + (2 m) + ... + (m-1 m) in S_n."""
    if not (2 <= m <= n):
        raise ValueError("need 2 <= m <= n")
    terms = {transposition(i, m, n): Fraction(1) for i in range(1, m)}
    return GroupAlgebraElement(n, terms)


# ---------------------------------------------------------------------------
# Rescaled Chebyshev polynomials with integer coefficients.
#
# With V_l(x) := s^{l/2} U_l(x / (2 sqrt(s))), the recurrence is
# V_{l+1} = x V_l - s V_{l-1}, so the V_l have integer coefficients.


def _v_polys(l_max: int, s: int) -> list:
    polys = [[1]]
    if l_max >= 1:
        polys.append([0, 1])
    for _ in range(2, l_max + 1):
        prev, cur = polys[-2], polys[-1]
        nxt = [0] + cur
        for d, c in enumerate(prev):
            nxt[d] -= s * c
        polys.append(nxt)
    return polys


def u_chain_poly(l: int, param: int) -> list:
    """Coefficients of s^{l/2} U_l(x/(2 sqrt(s))) - s^{(l-2)/2} U_{l-2}(x/(2 sqrt(s)))
    with s = param - 1; the polynomial applied to Jucys--Murphy elements."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    s = param - 1
    v = _v_polys(l, s)
    coeffs = list(v[l])
    if l >= 2:
        for d, c in enumerate(v[l - 2]):
            coeffs[d] -= c
    return coeffs


def t_chain_poly(k: int, param: int) -> list:
    """Coefficients of 2 s^{k/2} T_k(x/(2 sqrt(s))) - 2 s^{(k-2)/2} T_{k-2}(x/(2 sqrt(s)))
    with s = param - 1, for k >= 3."""
    if k < 3:
        raise ValueError("series form only used for k >= 3")
    s = param - 1
    v = _v_polys(k, s)
    coeffs = list(v[k])
    for d, c in enumerate(v[k - 2]):
        coeffs[d] -= param * c
    if k >= 4:
        for d, c in enumerate(v[k - 4]):
            coeffs[d] += s * c
    return coeffs


def _matrix_poly(coeffs, h: np.ndarray) -> np.ndarray:
    result = np.zeros_like(h)
    eye = np.eye(h.shape[0], dtype=h.dtype)
    for c in reversed(list(coeffs)):
        result = result @ h + float(c) * eye
    return result


# ---------------------------------------------------------------------------
# Path enumeration.


def nb_paths(length: int, points: int):
    """Tuples (j_1..j_l) from {1..points} with no immediate repetition."""
    if length == 0:
        yield ()
        return

    def extend(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for j in range(1, points + 1):
            if prefix and j == prefix[-1]:
                continue
            yield from extend(prefix + [j])

    yield from extend([])


def jm_path_element(path: tuple, m: int, n: int) -> tuple:
    """Product (j_1 m)(j_2 m)...(j_l m) as a permutation of degree n."""
    perm = identity_perm(n)
    for j in path:
        perm = compose(perm, transposition(j, m, n))
    return perm


def verify_jm_path_lemma(l: int, m: int) -> bool:
    """Exact check of the Chebyshev-polynomial / non-backtracking-path identity
    for the Jucys--Murphy element X_m."""
    if l < 0 or m < 2:
        raise ValueError("need l >= 0 and m >= 2")
    if (m - 1) * max(m - 2, 1) ** max(l - 1, 0) > 2_000_000:
        raise ValueError("path enumeration infeasible for these parameters")
    x = jm_element(m, m)
    lhs = poly_apply(u_chain_poly(l, m - 1), x)
    rhs = GroupAlgebraElement.zero(m)
    for path in nb_paths(l, m - 1):
        rhs = rhs + GroupAlgebraElement.of(jm_path_element(path, m, m))
    return lhs.terms == rhs.terms


def verify_trace_vs_transition(k_max: int, n: int) -> float:
    """Max residual over monomials x^k, k <= k_max, of the identity
    (1/n!) tr X_n^k = E int x^k d mu[lambda], lambda Plancherel of size n-1.

    Both sides are exact rationals; the residual is 0 when the identity holds.
    """
    if n > 8:
        raise ValueError("group algebra of S_n infeasible beyond n = 8")
    if n < 2:
        raise ValueError("need n >= 2")
    x = jm_element(n, n)
    worst = Fraction(0)
    power = GroupAlgebraElement.one(n)
    lhs = []
    for _ in range(k_max + 1):
        lhs.append(normalized_trace(power))
        power = algebra_mul(power, x)

    rhs = [Fraction(0)] * (k_max + 1)
    for lam in partitions_of(n - 1):
        weight = plancherel_weight(lam)
        atoms = corners(lam).outer
        probs = transition_weights_exact(lam)
        for k in range(k_max + 1):
            rhs[k] += weight * sum(
                p * Fraction(a) ** k for p, a in zip(probs, atoms)
            )
    for k in range(k_max + 1):
        worst = max(worst, abs(lhs[k] - rhs[k]))
    return float(worst)


# ---------------------------------------------------------------------------
# Non-backtracking walks on unimodular matrices.


def _closed_paths_brute(h: np.ndarray, length: int):
    """Reference enumeration used by the fast recursion and by tests."""
    n = h.shape[0]
    for start in range(n):
        stack = [(start,)]
        while stack:
            path = stack.pop()
            if len(path) == length:
                # closure checks
                u = path
                if u[-1] == start or (length >= 2 and u[-2] == start):
                    continue
                if length >= 2 and u[1] == u[-1]:
                    continue
                yield u + (start,)
                continue
            for v in range(n):
                if v == path[-1]:
                    continue
                if len(path) >= 2 and v == path[-2]:
                    continue
                stack.append(path + (v,))


def closed_nb_sum(h: np.ndarray, length: int) -> complex:
    """Sum of products H(u_0,u_1)...H(u_{l-1},u_0) over cyclically
    non-backtracking closed paths of the given length."""
    if length == 1:
        return complex(np.trace(h))
    if length == 2:
        return 0.0 + 0.0j
    total = 0.0 + 0.0j
    for path in _closed_paths_brute(h, length):
        prod = 1.0 + 0.0j
        for a, b in zip(path[:-1], path[1:]):
            prod *= h[a, b]
        total += prod
    return complex(total)


def nonbacktracking_trace_identity(h, k: int) -> float:
    """Residual of the trace identity for Chebyshev polynomials of a
    unimodular-class Hermitian matrix.

    k = 1 and k = 2 use the exact closed forms; k >= 3 compares
    tr Q_{k,n-1}(H) with the difference of the length-k and length-(k-2)
    cyclically non-backtracking path sums.
    """
    from .wigner import HermitianMatrix, is_unimodular_class

    if isinstance(h, HermitianMatrix):
        if not is_unimodular_class(h):
            raise ValueError("matrix is not of unimodular class")
        h = h.entries
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return abs(complex(np.trace(h)))
    if k == 2:
        return abs(complex(np.trace(h @ h)) - 2.0 * n * (n - 2) + n * (n - 3))
    if k > 6 or n > 8:
        raise ValueError("path enumeration infeasible beyond k = 6, n = 8")
    lhs = complex(np.trace(_matrix_poly(t_chain_poly(k, n - 1), h)))
    rhs = closed_nb_sum(h, k) - closed_nb_sum(h, k - 2)
    return abs(lhs - rhs)


def bass_series_check(h, degree: int) -> float:
    """Max residual, through the given power-series degree, between the
    logarithmic derivative of the determinant (zeta) side and the closed
    non-backtracking path sums.
    """
    from .wigner import HermitianMatrix, is_unimodular_class

    if isinstance(h, HermitianMatrix):
        if not is_unimodular_class(h):
            raise ValueError("matrix is not of unimodular class")
        h = h.entries
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if n > 8 or degree > 8:
        raise ValueError("infeasible size for the series check")
    eigs = np.linalg.eigvalsh(h)
    # Weighted Bass formula on the complete graph K_n: every vertex has
    # degree n - 1, so the determinant factor is det(1 - uH + (n-2) u^2)
    # and the exponent is #edges - #vertices = n(n-3)/2.
    q = n - 2
    c = n * (n - 3) // 2

    # -d/du log[(1-u^2)^c prod_j (1 - lam u + q u^2)], coefficientwise:
    # the (1-u^2)^c factor contributes 2c at odd degrees; each eigenvalue
    # factor contributes lam*s_d - 2q*s_{d-1} with
    # s_m = lam s_{m-1} - q s_{m-2}, s_0 = 1.
    s = np.zeros((degree + 2, eigs.size))
    s[0] = 1.0
    if degree + 1 >= 1:
        s[1] = eigs
    for m in range(2, degree + 2):
        s[m] = eigs * s[m - 1] - q * s[m - 2]
    det_side = np.zeros(degree + 1)
    for d in range(degree + 1):
        prev = s[d - 1] if d >= 1 else np.zeros_like(eigs)
        det_side[d] = float(np.sum(eigs * s[d] - 2.0 * q * prev))
        if d % 2 == 1:
            det_side[d] += 2.0 * c

    worst = 0.0
    for d in range(degree + 1):
        walk = closed_nb_sum(h, d + 1)
        worst = max(worst, abs(det_side[d] - walk))
    return worst


# ---------------------------------------------------------------------------
# Cycle-alignment counts (the combinatorial source of the CLT variances).


def count_matrix_alignments(k: int) -> int:
    """Closed cyclically non-backtracking k-paths with distinct vertices on
    {0..k-1} whose edges exactly reverse the reference cycle (0,1,...,k-1,0)."""
    reference = list(range(k)) + [0]
    ref_edges: dict = {}
    for a, b in zip(reference[:-1], reference[1:]):
        ref_edges[(a, b)] = ref_edges.get((a, b), 0) + 1

    count = 0
    from itertools import permutations

    for perm in permutations(range(k)):
        path = list(perm) + [perm[0]]
        # cyclic non-backtracking is automatic for distinct vertices, k >= 3
        edges = dict(ref_edges)
        for a, b in zip(path[:-1], path[1:]):
            edges[(a, b)] = edges.get((a, b), 0) + 1
        # balanced: every directed edge matched by its reverse
        balanced = all(
            edges.get((a, b), 0) == edges.get((b, a), 0)
            for (a, b) in list(edges)
        )
        if balanced:
            count += 1
    return count


def count_plancherel_alignments(k: int) -> int:
    """Closed non-backtracking k-paths with k-1 distinct indices whose
    transposition product inverts that of the reference cycle."""
    m = k  # work in S_k with the moving point m = k
    ref = list(range(1, k)) + [1]
    ref_perm = jm_path_element(tuple(ref), m, m)
    inv_ref = tuple(np.argsort(ref_perm))

    from itertools import permutations

    count = 0
    for perm in permutations(range(1, k)):
        path = list(perm) + [perm[0]]
        if jm_path_element(tuple(path), m, m) == inv_ref:
            count += 1
    return count
