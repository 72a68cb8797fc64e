from __future__ import annotations

import random

from seedpattern.exchange import ExchangeMatrix
from seedpattern.laurent import LaurentPolynomial

# 12x5 extended matrix of the all-plain-radii triangulation of the punctured
# pentagon: 5 mutable rows, 5 boundary rows, then the two eigenvalue rows.
TCIRC_ROWS = [
    [0, -1, 0, 0, 1],
    [1, 0, -1, 0, 0],
    [0, 1, 0, -1, 0],
    [0, 0, 1, 0, -1],
    [-1, 0, 0, 1, 0],
    [-1, 1, 0, 0, 0],
    [0, -1, 1, 0, 0],
    [0, 0, -1, 1, 0],
    [0, 0, 0, -1, 1],
    [1, 0, 0, 0, -1],
    [-1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1],
]


def tcirc_matrix() -> ExchangeMatrix:
    return ExchangeMatrix(TCIRC_ROWS, 5)


def random_skew_symmetric(rng: random.Random, n: int, frozen: int = 0,
                          bound: int = 3) -> ExchangeMatrix:
    rows = [[0] * n for _ in range(n + frozen)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-bound, bound)
            rows[i][j] = v
            rows[j][i] = -v
    for i in range(n, n + frozen):
        rows[i] = [rng.randint(-bound, bound) for _ in range(n)]
    return ExchangeMatrix(rows, n)


def random_skew_symmetrizable(rng: random.Random, n: int, frozen: int = 0,
                              bound: int = 2) -> ExchangeMatrix:
    """B = D^{-1} S with S skew-symmetric gives d_i b_ij = -d_j b_ji."""
    d = [rng.choice([1, 2, 3]) for _ in range(n)]
    rows = [[0] * n for _ in range(n + frozen)]
    for i in range(n):
        for j in range(i + 1, n):
            t = rng.randint(-bound, bound)
            rows[i][j] = d[j] * t
            rows[j][i] = -d[i] * t
    for i in range(n, n + frozen):
        rows[i] = [rng.randint(-bound, bound) for _ in range(n)]
    return ExchangeMatrix(rows, n)


def random_laurent(rng: random.Random, n_vars: int, max_terms: int = 4,
                   exp_bound: int = 3, coeff_bound: int = 5) -> LaurentPolynomial:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exp = tuple(rng.randint(-exp_bound, exp_bound) for _ in range(n_vars))
        coeff = rng.choice([c for c in range(-coeff_bound, coeff_bound + 1) if c])
        terms[exp] = coeff
    return LaurentPolynomial(terms, n_vars)


def random_mild_matrix(rng: random.Random, n: int, frozen: int = 0) -> ExchangeMatrix:
    """Small-entry skew-symmetrizable matrices that keep mutation words cheap."""
    d = [rng.choice([1, 2]) for _ in range(n)]
    rows = [[0] * n for _ in range(n + frozen)]
    for i in range(n):
        for j in range(i + 1, n):
            t = rng.randint(-1, 1)
            rows[i][j] = d[j] * t
            rows[j][i] = -d[i] * t
    for i in range(n, n + frozen):
        rows[i] = [rng.randint(-1, 1) for _ in range(n)]
    return ExchangeMatrix(rows, n)
