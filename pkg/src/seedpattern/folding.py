"""Vertex-symmetry folding: orbit quotients of matrices and seeds.

A finite symmetry group acting on the vertices of a quiver induces, when the
action is admissible, a quotient exchange matrix whose rows are the vertex
orbits.  Mutating simultaneously at every vertex of an orbit then tracks
single mutations of the quotient, and identifying the variables along each
orbit (x_i -> x_[i]) turns whole seeds into seeds of the quotient pattern.
The catch is that admissibility is not preserved by orbit mutation, so the
global search, which replays every orbit-mutation word and checks each stop,
is what certifies that a quiver can be folded throughout its pattern.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .exchange import ExchangeMatrix, InputError, mutate
from .explore import DEFAULT_MAX_FORMS, Quiver
from .laurent import LaurentPolynomial
from .seed import Seed, initial_seed, seed_mutate

__all__ = [
    "VertexGroupAction",
    "Admissibility",
    "FoldedMatrix",
    "FoldabilityReport",
    "FOLDABLE",
    "COUNTEREXAMPLE",
    "UNKNOWN",
    "is_admissible",
    "fold_matrix",
    "orbit_mutate",
    "global_foldability",
    "fold_seed",
    "fold_seed_pattern",
]

FOLDABLE = "Foldable"
COUNTEREXAMPLE = "Counterexample"
UNKNOWN = "Unknown"


class VertexGroupAction:
    """Permutation group on vertex indices 0..m-1, given by generators."""

    __slots__ = ("m", "generators", "orbits", "_position", "_centralizers")

    def __init__(self, m: int, generators: Iterable[Sequence[int]]):
        self.m = int(m)
        gens = tuple(tuple(int(v) for v in g) for g in generators)
        for g in gens:
            if sorted(g) != list(range(self.m)):
                raise InputError(f"{g} is not a permutation of 0..{self.m - 1}")
        self.generators = gens
        parent = list(range(self.m))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for i, v in enumerate(g):
                parent[find(i)] = find(v)
        buckets: dict[int, list[int]] = {}
        for i in range(self.m):
            buckets.setdefault(find(i), []).append(i)
        self.orbits = tuple(tuple(sorted(b)) for b in sorted(buckets.values()))
        self._position = {v: t for t, orbit in enumerate(self.orbits) for v in orbit}
        self._centralizers: dict[int, tuple[tuple[int, ...], ...]] = {}

    def orbit_of(self, i: int) -> tuple[int, ...]:
        return self.orbits[self._position[i]]

    def same_orbit(self, i: int, j: int) -> bool:
        return self._position[i] == self._position[j]

    def __repr__(self) -> str:
        return f"VertexGroupAction(m={self.m}, orbits={self.orbits})"


class Admissibility:
    """Verdict of the four admissibility conditions; falsy when violated."""

    __slots__ = ("ok", "condition", "witness")

    def __init__(self, ok: bool, condition: int | None = None,
                 witness: tuple[int, ...] | None = None):
        self.ok = ok
        self.condition = condition
        self.witness = witness

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        if self.ok:
            return "Admissibility(ok)"
        return f"Admissibility(condition={self.condition}, witness={self.witness})"


def _as_matrix(source) -> ExchangeMatrix:
    if isinstance(source, ExchangeMatrix):
        return source
    if isinstance(source, Quiver):
        return source.to_matrix()
    if isinstance(source, Seed):
        return source.matrix
    raise InputError(f"cannot fold a {type(source).__name__}")


def is_admissible(source, G: VertexGroupAction) -> Admissibility:
    """Checks, in order: (1) orbits do not mix mutable and frozen vertices,
    (2) entries are constant along the action, (3) orbits are totally
    disconnected, (4) no entry sign conflict b_ij b_i'j < 0 within an orbit.
    The first violated condition is reported with its indices."""
    M = _as_matrix(source)
    if G.m != M.m:
        raise InputError(f"action is on {G.m} vertices, matrix has {M.m}")
    n = M.n
    for g in G.generators:
        for i in range(n):
            if g[i] >= n:
                return Admissibility(False, 1, (i, g[i]))
    for g in G.generators:
        for i in range(M.m):
            for j in range(n):
                if M.rows[i][j] != M.rows[g[i]][g[j]]:
                    return Admissibility(False, 2, (i, j))
    for orbit in G.orbits:
        if orbit[0] >= n:
            continue
        for a in range(len(orbit)):
            for b in range(a + 1, len(orbit)):
                if M.rows[orbit[a]][orbit[b]] != 0:
                    return Admissibility(False, 3, (orbit[a], orbit[b]))
    for orbit in G.orbits:
        for a in range(len(orbit)):
            for b in range(a + 1, len(orbit)):
                for j in range(n):
                    if M.rows[orbit[a]][j] * M.rows[orbit[b]][j] < 0:
                        return Admissibility(False, 4, (orbit[a], orbit[b], j))
    return Admissibility(True)


class FoldedMatrix:
    """Quotient matrix (rows: all orbits, columns: mutable orbits) together
    with the orbit labeling of its rows."""

    __slots__ = ("matrix", "orbits")

    def __init__(self, matrix: ExchangeMatrix, orbits: tuple[tuple[int, ...], ...]):
        self.matrix = matrix
        self.orbits = orbits

    def __eq__(self, other) -> bool:
        if not isinstance(other, FoldedMatrix):
            return NotImplemented
        return self.matrix == other.matrix and self.orbits == other.orbits

    def __repr__(self) -> str:
        return f"FoldedMatrix({[list(r) for r in self.matrix.rows]}, orbits={self.orbits})"


def fold_matrix(source, G: VertexGroupAction) -> FoldedMatrix:
    """Entry (I, J) of the quotient is the column sum over I at any
    representative of J.  Rows are orbits sorted by minimal element, which
    puts mutable orbits first."""
    M = _as_matrix(source)
    verdict = is_admissible(M, G)
    if not verdict:
        raise InputError(
            f"not admissible: condition {verdict.condition} fails at {verdict.witness}"
        )
    mutable = [orbit for orbit in G.orbits if orbit[0] < M.n]
    frozen = [orbit for orbit in G.orbits if orbit[0] >= M.n]
    ordered = tuple(mutable + frozen)
    rows = [
        [sum(M.rows[i][J[0]] for i in I) for J in mutable]
        for I in ordered
    ]
    out = ExchangeMatrix(rows, len(mutable))
    for a, I in enumerate(mutable):
        for b, J in enumerate(mutable):
            assert len(J) * rows[a][b] == -len(I) * rows[b][a], (
                "orbit sizes fail to skew-symmetrize the quotient"
            )
    return FoldedMatrix(out, ordered)


def _check_orbit(M: ExchangeMatrix, G: VertexGroupAction, K) -> tuple[int, ...]:
    K = tuple(sorted(set(K)))
    if K not in G.orbits:
        raise InputError(f"{K} is not an orbit of the action")
    if K[-1] >= M.n:
        raise InputError(f"orbit {K} is not mutable")
    for a in K:
        for b in K:
            if M.rows[a][b] != 0:
                raise InputError(
                    f"orbit {K} is not totally disconnected (entry ({a}, {b}))"
                )
    return K


def orbit_mutate(source, G: VertexGroupAction, K: Iterable[int]):
    """Simultaneous mutation at every vertex of the mutable orbit K; the
    orbit must be totally disconnected, which makes the order immaterial.
    Accepts a matrix, quiver, or seed and returns the same kind.  The result
    is not required to be admissible; callers who care must check."""
    if isinstance(source, Seed):
        K = _check_orbit(source.matrix, G, K)
        out = source
        for k in K:
            out = seed_mutate(out, k)
        return out
    M = _as_matrix(source)
    K = _check_orbit(M, G, K)
    out = M
    for k in K:
        out = mutate(out, k)
    return out if isinstance(source, ExchangeMatrix) else Quiver.from_matrix(out)


# -- equivariant canonical forms ------------------------------------------------


def _commuting_perms(G: VertexGroupAction, n: int) -> tuple[tuple[int, ...], ...]:
    """All vertex permutations that commute with every generator and keep
    mutable vertices mutable: the relabelings under which two quivers count
    as the same catalog entry.  Found by constraint propagation, so the cost
    scales with the (typically tiny) commutant, not with m factorial."""
    cached = G._centralizers.get(n)
    if cached is not None:
        return cached
    m = G.m
    gens = G.generators
    pi = [-1] * m
    used = [False] * m
    out: list[tuple[int, ...]] = []

    def assign(i: int, v: int) -> list[tuple[int, int]] | None:
        made: list[tuple[int, int]] = []
        stack = [(i, v)]
        while stack:
            a, b = stack.pop()
            if pi[a] == b:
                continue
            if pi[a] != -1 or used[b] or (a < n) != (b < n):
                for x, y in made:
                    pi[x] = -1
                    used[y] = False
                return None
            pi[a] = b
            used[b] = True
            made.append((a, b))
            for g in gens:
                stack.append((g[a], g[b]))
        return made

    def search() -> None:
        for i in range(m):
            if pi[i] == -1:
                break
        else:
            out.append(tuple(pi))
            return
        for v in range(m):
            if used[v]:
                continue
            made = assign(i, v)
            if made is None:
                continue
            search()
            for x, y in made:
                pi[x] = -1
                used[y] = False

    search()
    result = tuple(out)
    G._centralizers[n] = result
    return result


def _equivariant_form(M: ExchangeMatrix, perms) -> tuple:
    best = None
    m, n = M.m, M.n
    for pi in perms:
        inv = [0] * m
        for i, v in enumerate(pi):
            inv[v] = i
        enc = tuple(
            tuple(M.rows[inv[r]][inv[c]] for c in range(n)) for r in range(m)
        )
        if best is None or enc < best:
            best = enc
    return best


class FoldabilityReport:
    __slots__ = ("kind", "word", "forms")

    def __init__(self, kind: str, word: tuple[int, ...] | None, forms: int):
        self.kind = kind
        self.word = word
        self.forms = forms

    def __repr__(self) -> str:
        return f"FoldabilityReport({self.kind}, word={self.word}, forms={self.forms})"


def global_foldability(source, G: VertexGroupAction, cap: int | None = None,
                       max_forms: int = DEFAULT_MAX_FORMS) -> FoldabilityReport:
    """Replays every orbit-mutation word, deduplicating stops up to
    commuting relabelings.  Foldable when the catalog closes with every stop
    admissible; a violating word (of mutable-orbit positions) is returned as
    a Counterexample; cap/max_forms exhaustion gives Unknown."""
    M = _as_matrix(source)
    verdict = is_admissible(M, G)
    if not verdict:
        raise InputError(
            f"not admissible: condition {verdict.condition} fails at {verdict.witness}"
        )
    perms = _commuting_perms(G, M.n)
    mutable = [orbit for orbit in G.orbits if orbit[0] < M.n]
    seen = {_equivariant_form(M, perms)}
    frontier: list[tuple[ExchangeMatrix, tuple[int, ...]]] = [(M, ())]
    depth = 0
    while frontier:
        if cap is not None and depth >= cap:
            return FoldabilityReport(UNKNOWN, None, len(seen))
        nxt: list[tuple[ExchangeMatrix, tuple[int, ...]]] = []
        for current, word in frontier:
            for t, K in enumerate(mutable):
                if word and word[-1] == t:  # orbit mutation is an involution
                    continue
                child = orbit_mutate(current, G, K)
                if not is_admissible(child, G):
                    return FoldabilityReport(COUNTEREXAMPLE, word + (t,), len(seen))
                form = _equivariant_form(child, perms)
                if form in seen:
                    continue
                seen.add(form)
                if len(seen) > max_forms:
                    return FoldabilityReport(UNKNOWN, None, len(seen))
                nxt.append((child, word + (t,)))
        frontier = nxt
        depth += 1
    return FoldabilityReport(FOLDABLE, None, len(seen))


# -- seeds ----------------------------------------------------------------------


def _bundle(p: LaurentPolynomial, slot: Sequence[int], width: int) -> LaurentPolynomial:
    terms: dict[tuple[int, ...], int] = {}
    for exp, coeff in p.terms.items():
        folded = [0] * width
        for i, e in enumerate(exp):
            folded[slot[i]] += e
        key = tuple(folded)
        terms[key] = terms.get(key, 0) + coeff
    return LaurentPolynomial(terms, width)


def fold_seed(s: Seed, G: VertexGroupAction) -> Seed:
    """Identify the cluster variables along each orbit (x_i -> x_[i]) and
    quotient the matrix.  Requires the identified entries to agree on every
    orbit; seeds reached from an initial seed by admissible orbit mutations
    always do."""
    folded = fold_matrix(s.matrix, G)
    width = len(folded.orbits)
    slot = [0] * s.m
    for t, orbit in enumerate(folded.orbits):
        for v in orbit:
            slot[v] = t
    images = [_bundle(p, slot, width) for p in s.cluster]
    cluster = []
    for orbit in folded.orbits:
        first = images[orbit[0]]
        for v in orbit[1:]:
            if images[v] != first:
                raise InputError(
                    f"cluster entries at {orbit[0]} and {v} disagree after folding"
                )
        cluster.append(first)
    return Seed(folded.matrix, tuple(cluster))


def fold_seed_pattern(source, G: VertexGroupAction, cap: int | None = None,
                      max_forms: int = DEFAULT_MAX_FORMS) -> Seed:
    """The initial seed of the quotient pattern, after certifying that every
    orbit-mutation word keeps the quiver admissible."""
    M = _as_matrix(source)
    report = global_foldability(M, G, cap=cap, max_forms=max_forms)
    if report.kind != FOLDABLE:
        raise InputError(f"not globally foldable: search ended {report.kind}"
                         + (f" at word {report.word}" if report.word else ""))
    return fold_seed(initial_seed(M), G)
