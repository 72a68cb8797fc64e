"""Seeds and seed mutation.

A seed pairs an extended exchange matrix with an extended cluster: one Laurent
polynomial per matrix row, each expressed in the m variables of the initial
extended cluster.  Mutation at a mutable index k replaces the k-th cluster
entry via the exchange relation

    x_k * x_k' = prod_{b_ik > 0} x_i^{b_ik}  +  prod_{b_ik < 0} x_i^{-b_ik}

with the products running over the full extended cluster, and mutates the
matrix.  The division is exact for every seed reachable from an initial seed;
an inexact division here is an implementation-bug alarm, not a user error.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .exchange import ExchangeMatrix, InputError, mutate, parse_matrix, render_matrix, restrict
from .laurent import (
    LaurentPolynomial,
    NonDivisibleError,
    lp_add,
    lp_const,
    lp_eval_ones,
    lp_exact_div,
    lp_mul,
    lp_var,
    parse_poly,
    render_poly,
)

__all__ = [
    "Seed",
    "LaurentViolation",
    "RestrictionBlocked",
    "initial_seed",
    "seed_mutate",
    "freeze",
    "restrict_seed",
    "trivialize",
    "canonicalize",
    "render_seed",
    "parse_seed",
]


class LaurentViolation(RuntimeError):
    """An exchange step failed to divide exactly; mutation code is broken."""


class RestrictionBlocked(InputError):
    """Restriction would sever an exchange relation; carries the violating (i, k)."""

    def __init__(self, i: int, k: int):
        super().__init__(
            f"cannot restrict: entry ({i}, {k}) couples an outside row to an inside mutable"
        )
        self.pair = (i, k)


class Seed:
    __slots__ = ("matrix", "cluster", "_hash")

    def __init__(self, matrix: ExchangeMatrix, cluster: Sequence[LaurentPolynomial]):
        cluster = tuple(cluster)
        if len(cluster) != matrix.m:
            raise InputError(
                f"cluster has {len(cluster)} entries, matrix has {matrix.m} rows"
            )
        n_vars = {p.n_vars for p in cluster}
        if len(n_vars) > 1:
            raise InputError("cluster entries disagree on variable count")
        self.matrix = matrix
        self.cluster = cluster
        self._hash = hash((matrix, cluster))

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def m(self) -> int:
        return self.matrix.m

    def __eq__(self, other) -> bool:
        if not isinstance(other, Seed):
            return NotImplemented
        return self.matrix == other.matrix and self.cluster == other.cluster

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        entries = ", ".join(render_poly(p) for p in self.cluster)
        return f"<Seed n={self.n} m={self.m} [{entries}]>"

    def mutate(self, k: int) -> "Seed":
        return seed_mutate(self, k)


def initial_seed(matrix: ExchangeMatrix) -> Seed:
    """The seed whose i-th cluster entry is the variable monomial x_{i+1}."""
    m = matrix.m
    return Seed(matrix, tuple(lp_var(i, m) for i in range(m)))


def seed_mutate(s: Seed, k: int) -> Seed:
    if not 0 <= k < s.n:
        raise InputError(f"mutable index {k} out of range for n={s.n}")
    b = s.matrix.rows
    n_vars = s.cluster[0].n_vars
    plus = lp_const(1, n_vars)
    minus = lp_const(1, n_vars)
    for i in range(s.m):
        e = b[i][k]
        if e > 0:
            plus = lp_mul(plus, s.cluster[i] ** e)
        elif e < 0:
            minus = lp_mul(minus, s.cluster[i] ** (-e))
    try:
        new_entry = lp_exact_div(lp_add(plus, minus), s.cluster[k])
    except NonDivisibleError as exc:
        raise LaurentViolation(
            f"exchange at index {k} did not divide exactly"
        ) from exc
    cluster = list(s.cluster)
    cluster[k] = new_entry
    return Seed(mutate(s.matrix, k), cluster)


def freeze(s: Seed, F: Iterable[int]) -> Seed:
    """Reclassify the mutable indices in F as frozen.

    The new index order keeps the surviving mutables first (original order),
    then the old frozen rows, then the newly frozen ones in increasing
    original index — which makes the result independent of the order in which
    indices are frozen one at a time.
    """
    F = sorted(set(F))
    if any(not 0 <= i < s.n for i in F):
        raise InputError("can only freeze mutable indices")
    keep = [i for i in range(s.n) if i not in set(F)]
    order = keep + list(range(s.n, s.m)) + F
    rows = [[s.matrix.rows[i][j] for j in keep] for i in order]
    return Seed(
        ExchangeMatrix(rows, len(keep)),
        tuple(s.cluster[i] for i in order),
    )


def restrict_seed(s: Seed, I: Iterable[int]) -> Seed:
    I = sorted(set(I))
    if any(not 0 <= i < s.m for i in I):
        raise InputError("restriction index out of range")
    inside = set(I)
    mut_inside = [k for k in I if k < s.n]
    for i in range(s.m):
        if i in inside:
            continue
        for k in mut_inside:
            if s.matrix.rows[i][k] != 0:
                raise RestrictionBlocked(i, k)
    return Seed(restrict(s.matrix, I), tuple(s.cluster[i] for i in I))


def trivialize(s: Seed, F: Iterable[int]) -> Seed:
    """Delete the frozen rows in F and set the corresponding variables to 1."""
    F = sorted(set(F))
    if any(not s.n <= i < s.m for i in F):
        raise InputError("can only trivialize frozen indices")
    keep = [i for i in range(s.m) if i not in set(F)]
    rows = [list(s.matrix.rows[i]) for i in keep]
    # cluster entries are expressed in the initial variables, so setting
    # x_i := 1 is evaluation; the dead coordinates leave the ambient ring
    cluster = tuple(lp_eval_ones(s.cluster[i], F) for i in keep)
    return Seed(ExchangeMatrix(rows, s.n), cluster)


def canonicalize(s: Seed) -> Seed:
    """Canonical representative of a seed under mutable-index relabeling.

    Mutable cluster entries are sorted by the global Laurent order; within
    groups of equal entries the matrix is minimized lexicographically over the
    group's permutations.  Frozen rows keep their positions.
    """
    n = s.n
    order = sorted(range(n), key=lambda i: s.cluster[i].sort_key())
    groups: list[list[int]] = []
    for i in order:
        if groups and s.cluster[groups[-1][-1]] == s.cluster[i]:
            groups[-1].append(i)
        else:
            groups.append([i])

    def permuted_rows(perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        top = [[s.matrix.rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        bottom = [
            [s.matrix.rows[i][perm[j]] for j in range(n)] for i in range(n, s.m)
        ]
        return tuple(tuple(r) for r in top + bottom)

    best: tuple[tuple[int, ...], ...] | None = None
    best_perm: list[int] | None = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [i for g in choice for i in g]
        rows = permuted_rows(perm)
        if best is None or rows < best:
            best, best_perm = rows, perm
    assert best is not None and best_perm is not None
    cluster = tuple(s.cluster[i] for i in best_perm) + s.cluster[n:]
    return Seed(ExchangeMatrix(best, n), cluster)


def render_seed(s: Seed) -> str:
    lines = [render_matrix(s.matrix).rstrip("\n")]
    lines.extend(render_poly(p) for p in s.cluster)
    return "\n".join(lines) + "\n"


def parse_seed(text: str) -> Seed:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputError("empty seed text")
    header = lines[0].split()
    if len(header) != 2:
        raise InputError("seed header must be 'm n'")
    m = int(header[0])
    if len(lines) != 1 + 2 * m:
        raise InputError(f"expected {m} matrix rows and {m} cluster lines")
    matrix = parse_matrix("\n".join(lines[: 1 + m]))
    cluster = tuple(parse_poly(ln, m) for ln in lines[1 + m :])
    return Seed(matrix, cluster)
