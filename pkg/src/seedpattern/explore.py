"""Exhaustive enumeration engines over mutation classes.

Three layers share one breadth-first core: matrix mutation classes up to
simultaneous index permutation (equivalently quiver isomorphism, frozen
vertices fixed pointwise), seed patterns up to unlabeled-seed equality, and
the derived questions — finite-type decision, mutation equivalence, and
embeddability of one quiver's mutation class into another's.

Deduplication uses a canonical labeling computed by color refinement plus
individualization, so vertex-transitive inputs (oriented cycles) do not fall
back to factorial search.  Depth profiles are cumulative: entry d counts the
distinct forms reachable with at most d mutations.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Mapping, Sequence

from .exchange import (
    ExchangeMatrix,
    InputError,
    mutate,
    skew_symmetrizer,
)
from .laurent import LaurentPolynomial
from .seed import Seed, canonicalize, seed_mutate

__all__ = [
    "Quiver",
    "ExplorationReport",
    "FiniteTypeDecision",
    "EmbeddingResult",
    "CLOSED",
    "ABORTED",
    "DEPTH_CAPPED",
    "canonical_matrix_form",
    "explore_matrix_class",
    "explore_quiver_class",
    "explore_seed_pattern",
    "decide_finite_type",
    "is_embeddable",
    "mutation_equivalent",
]

CLOSED = "Closed"
ABORTED = "AbortedInfiniteWitness"
DEPTH_CAPPED = "DepthCapped"

DEFAULT_MAX_FORMS = 10**6


class Quiver:
    """Directed multigraph without loops or 2-cycles; frozen vertices carry
    arrows only to or from mutable ones."""

    __slots__ = ("n", "m", "arrows", "_hash")

    def __init__(self, arrows: Mapping[tuple[int, int], int], n_mutable: int, n_total: int):
        n, m = int(n_mutable), int(n_total)
        if not 0 <= n <= m:
            raise InputError("need 0 <= n_mutable <= n_total")
        clean: dict[tuple[int, int], int] = {}
        for (i, j), mult in arrows.items():
            mult = int(mult)
            if mult == 0:
                continue
            if mult < 0:
                raise InputError("arrow multiplicities must be positive")
            if i == j:
                raise InputError(f"loop at vertex {i}")
            if not (0 <= i < m and 0 <= j < m):
                raise InputError(f"arrow ({i}, {j}) out of range")
            if i >= n and j >= n:
                raise InputError(f"arrow ({i}, {j}) joins two frozen vertices")
            clean[(i, j)] = mult
        for i, j in clean:
            if (j, i) in clean:
                raise InputError(f"2-cycle between {i} and {j}")
        self.n, self.m, self.arrows = n, m, clean
        self._hash = hash((n, m, frozenset(clean.items())))

    @classmethod
    def from_matrix(cls, M: ExchangeMatrix) -> "Quiver":
        if not M.is_skew_symmetric():
            raise InputError("quivers require a skew-symmetric top block")
        arrows: dict[tuple[int, int], int] = {}
        for i in range(M.m):
            for j in range(M.n):
                v = M.rows[i][j]
                if v > 0:
                    arrows[(i, j)] = v
                elif v < 0 and i >= M.n:
                    # frozen row: no mirror entry exists, so the negative
                    # entry is the only record of the arrow j -> i
                    arrows[(j, i)] = -v
        return cls(arrows, M.n, M.m)

    def to_matrix(self) -> ExchangeMatrix:
        rows = [[0] * self.n for _ in range(self.m)]
        for (i, j), mult in self.arrows.items():
            if j < self.n:
                rows[i][j] += mult
            if i < self.n:
                rows[j][i] -= mult
        return ExchangeMatrix(rows, self.n)

    def mutate(self, k: int) -> "Quiver":
        return Quiver.from_matrix(mutate(self.to_matrix(), k))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return (self.n, self.m, self.arrows) == (other.n, other.m, other.arrows)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            f"{i}->{j}" + (f"x{mult}" if mult > 1 else "")
            for (i, j), mult in sorted(self.arrows.items())
        )
        return f"<Quiver n={self.n} m={self.m} [{body}]>"


class ExplorationReport:
    __slots__ = ("status", "count", "variable_count", "depth_profile", "witness")

    def __init__(self, status, count, depth_profile, variable_count=None, witness=None):
        self.status = status
        self.count = count
        self.variable_count = variable_count
        self.depth_profile = list(depth_profile)
        self.witness = witness

    def __repr__(self) -> str:
        extra = f" witness={self.witness}" if self.witness else ""
        return f"<ExplorationReport {self.status} count={self.count}{extra}>"


class FiniteTypeDecision:
    __slots__ = ("kind", "class_size", "witness")

    def __init__(self, kind, class_size=None, witness=None):
        self.kind = kind  # "Finite" | "Infinite" | "Unknown"
        self.class_size = class_size
        self.witness = witness

    def __repr__(self) -> str:
        return f"<FiniteTypeDecision {self.kind}>"


class EmbeddingResult:
    __slots__ = ("embeddable", "subset", "word")

    def __init__(self, embeddable, subset=None, word=None):
        self.embeddable = embeddable  # True | False | None (cap reached)
        self.subset = subset
        self.word = word


# -- canonical labeling -------------------------------------------------------


def _refine(colors: list[int], rows, n: int) -> list[int]:
    while True:
        sigs = []
        for i in range(n):
            nbr = tuple(
                sorted((colors[j], rows[i][j], rows[j][i]) for j in range(n) if j != i)
            )
            sigs.append((colors[i], nbr))
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def canonical_matrix_form(M: ExchangeMatrix) -> tuple[tuple[int, ...], ...]:
    """Lexicographically minimal row encoding over permutations of the mutable
    indices; frozen rows keep their order with columns permuted."""
    n, m, rows = M.n, M.m, M.rows
    if n == 0:
        return rows
    init = [tuple(rows[f][i] for f in range(n, m)) for i in range(n)]
    ranks = {s: r for r, s in enumerate(sorted(set(init)))}
    start = [ranks[s] for s in init]

    best: tuple[tuple[int, ...], ...] | None = None

    def encode(perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        top = tuple(
            tuple(rows[perm[i]][perm[j]] for j in range(n)) for i in range(n)
        )
        bottom = tuple(
            tuple(rows[f][perm[j]] for j in range(n)) for f in range(n, m)
        )
        return top + bottom

    def search(colors: list[int]) -> None:
        nonlocal best
        colors = _refine(colors, rows, n)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            perm = sorted(range(n), key=lambda v: colors[v])
            enc = encode(perm)
            if best is None or enc < best:
                best = enc
            return
        for v in target:
            child = colors[:]
            child[v] = n  # fresh color; refinement re-ranks
            search(child)

    search(start)
    assert best is not None
    return best


def _infinite_witness(M: ExchangeMatrix) -> tuple[int, int, int] | None:
    rows = M.rows
    for i in range(M.n):
        for j in range(i + 1, M.n):
            prod = abs(rows[i][j] * rows[j][i])
            if prod >= 4:
                return (i, j, prod)
    return None


# -- matrix-class BFS ---------------------------------------------------------


def explore_matrix_class(
    B: ExchangeMatrix,
    cap: int | None = None,
    max_forms: int = DEFAULT_MAX_FORMS,
    stop_on_infinite: bool = True,
) -> tuple[ExplorationReport, list[ExchangeMatrix]]:
    """Enumerate the mutation class of a square matrix up to index permutation.

    With stop_on_infinite (the default), the search aborts as soon as any
    reached matrix has |b_ij * b_ji| >= 4, reporting the witness: such a class
    has infinitely many seeds.  Pass stop_on_infinite=False to enumerate
    classes that are mutation-finite without being 2-finite.
    """
    skew_symmetrizer(B)  # raises NotSkewSymmetrizable on bad input

    if stop_on_infinite:
        w = _infinite_witness(B)
        if w is not None:
            return (
                ExplorationReport(ABORTED, 1, [1], witness=w),
                [B],
            )
    seen = {canonical_matrix_form(B)}
    members = [B]
    frontier: list[tuple[ExchangeMatrix, int]] = [(B, -1)]
    profile = [1]
    status = CLOSED
    witness = None
    depth = 0
    while frontier:
        if cap is not None and depth >= cap:
            status = DEPTH_CAPPED
            break
        nxt: list[tuple[ExchangeMatrix, int]] = []
        for M, from_k in frontier:
            for k in range(M.n):
                if k == from_k:
                    continue
                M2 = mutate(M, k)
                if stop_on_infinite:
                    w = _infinite_witness(M2)
                    if w is not None:
                        profile.append(len(seen))
                        return (
                            ExplorationReport(ABORTED, len(seen), profile, witness=w),
                            members,
                        )
                c = canonical_matrix_form(M2)
                if c not in seen:
                    seen.add(c)
                    members.append(M2)
                    nxt.append((M2, k))
        frontier = nxt
        profile.append(len(seen))
        depth += 1
        if len(seen) > max_forms:
            status = DEPTH_CAPPED
            break
    return ExplorationReport(status, len(seen), profile, witness=witness), members


def explore_quiver_class(
    Q: Quiver,
    cap: int | None = None,
    max_forms: int = DEFAULT_MAX_FORMS,
    stop_on_infinite: bool = True,
) -> tuple[ExplorationReport, list[Quiver]]:
    report, members = explore_matrix_class(
        Q.to_matrix(), cap=cap, max_forms=max_forms, stop_on_infinite=stop_on_infinite
    )
    return report, [Quiver.from_matrix(M) for M in members]


# -- seed-pattern BFS ---------------------------------------------------------


def explore_seed_pattern(
    s0: Seed,
    cap: int | None = None,
    threads: int = 1,
    max_forms: int = DEFAULT_MAX_FORMS,
    labeled: bool = False,
) -> tuple[ExplorationReport, list[Seed], set[LaurentPolynomial]]:
    """Enumerate all seeds reachable from s0, up to relabeling of mutable
    indices (or exactly, with labeled=True).  Returns the report, the distinct
    seeds in discovery order, and the set of cluster variables encountered.

    The report is identical for every thread count: workers only parallelize
    the frontier's mutation calls, and results merge in a fixed order.
    """
    key = (lambda s: s) if labeled else canonicalize
    k0 = key(s0)
    seen = {k0}
    found = [k0]
    variables = set(s0.cluster[: s0.n])
    frontier: list[tuple[Seed, int]] = [(s0, -1)]
    profile = [1]
    status = CLOSED
    depth = 0
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            if cap is not None and depth >= cap:
                status = DEPTH_CAPPED
                break
            jobs = [
                (s, k) for s, from_k in frontier for k in range(s.n) if k != from_k
            ]
            if pool is not None:
                children = list(pool.map(lambda sk: seed_mutate(sk[0], sk[1]), jobs))
            else:
                children = [seed_mutate(s, k) for s, k in jobs]
            nxt: list[tuple[Seed, int]] = []
            for (s, k), child in zip(jobs, children):
                c = key(child)
                if c not in seen:
                    seen.add(c)
                    found.append(c)
                    variables.update(child.cluster[: child.n])
                    nxt.append((child, k))
            frontier = nxt
            profile.append(len(seen))
            depth += 1
            if len(seen) > max_forms:
                status = DEPTH_CAPPED
                break
    finally:
        if pool is not None:
            pool.shutdown()
    report = ExplorationReport(
        status, len(seen), profile, variable_count=len(variables)
    )
    return report, found, variables


# -- derived questions --------------------------------------------------------


def decide_finite_type(B: ExchangeMatrix, cap: int | None = None,
                       max_forms: int = DEFAULT_MAX_FORMS) -> FiniteTypeDecision:
    """Closed 2-finite mutation class => finite type; a product witness
    certifies infinite type; a cap yields Unknown (never silent truncation)."""
    report, _ = explore_matrix_class(
        B.top(), cap=cap, max_forms=max_forms, stop_on_infinite=True
    )
    if report.status == ABORTED:
        return FiniteTypeDecision("Infinite", witness=report.witness)
    if report.status == CLOSED:
        return FiniteTypeDecision("Finite", class_size=report.count)
    return FiniteTypeDecision("Unknown")


def is_embeddable(Q: Quiver, R: Quiver, cap: int | None = None,
                  max_forms: int = DEFAULT_MAX_FORMS) -> EmbeddingResult:
    """Search R's mutation class for a member with a full subquiver
    isomorphic to Q (mutable vertices matching mutable vertices)."""
    from itertools import combinations

    if Q.m > R.m or Q.n > R.n or Q.m - Q.n > R.m - R.n:
        return EmbeddingResult(False)
    target = canonical_matrix_form(Q.to_matrix())

    def scan(M: ExchangeMatrix) -> tuple[int, ...] | None:
        muts = combinations(range(M.n), Q.n)
        frz = combinations(range(M.n, M.m), Q.m - Q.n)
        for chosen_m in muts:
            for chosen_f in frz:
                I = list(chosen_m) + list(chosen_f)
                sub = M.restrict(I)
                if canonical_matrix_form(sub) == target:
                    return tuple(I)
        return None

    M0 = R.to_matrix()
    seen = {canonical_matrix_form(M0)}
    frontier: list[tuple[ExchangeMatrix, tuple[int, ...], int]] = [(M0, (), -1)]
    hit = scan(M0)
    if hit is not None:
        return EmbeddingResult(True, subset=hit, word=())
    depth = 0
    while frontier:
        if cap is not None and depth >= cap:
            return EmbeddingResult(None)
        nxt = []
        for M, word, from_k in frontier:
            for k in range(M.n):
                if k == from_k:
                    continue
                M2 = mutate(M, k)
                c = canonical_matrix_form(M2)
                if c in seen:
                    continue
                seen.add(c)
                w2 = word + (k,)
                hit = scan(M2)
                if hit is not None:
                    return EmbeddingResult(True, subset=hit, word=w2)
                nxt.append((M2, w2, k))
        frontier = nxt
        depth += 1
        if len(seen) > max_forms:
            return EmbeddingResult(None)
    return EmbeddingResult(False)


def mutation_equivalent(B1: ExchangeMatrix, B2: ExchangeMatrix,
                        cap: int | None = None,
                        max_forms: int = DEFAULT_MAX_FORMS) -> bool | None:
    """True/False when B1's class closes (or contains B2) within bounds; None
    when the cap stops the search first."""
    if B1.n != B2.n or B1.m != B2.m:
        raise InputError("shapes differ")
    target = canonical_matrix_form(B2)
    if canonical_matrix_form(B1) == target:
        return True
    seen = {canonical_matrix_form(B1)}
    frontier: list[tuple[ExchangeMatrix, int]] = [(B1, -1)]
    depth = 0
    while frontier:
        if cap is not None and depth >= cap:
            return None
        nxt = []
        for M, from_k in frontier:
            for k in range(M.n):
                if k == from_k:
                    continue
                M2 = mutate(M, k)
                c = canonical_matrix_form(M2)
                if c in seen:
                    continue
                if c == target:
                    return True
                seen.add(c)
                nxt.append((M2, k))
        frontier = nxt
        depth += 1
        if len(seen) > max_forms:
            return None
    return False
