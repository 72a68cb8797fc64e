"""Extended skew-symmetrizable integer matrices.

An ExchangeMatrix is an m x n integer matrix whose top n x n block is
skew-symmetrizable; rows n..m-1 are frozen (coefficient) rows.  All entries
are Python ints, so nothing here can overflow.  Indices are 0-based
throughout the library; the CLI converts to the 1-based convention at the
boundary.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "ExchangeMatrix",
    "Diagram",
    "InputError",
    "ShapeError",
    "NotSkewSymmetrizable",
    "mutate",
    "restrict",
    "cartan_counterpart",
    "skew_symmetrizer",
    "diagram",
    "full_z_rank",
    "rows_in_z_span",
    "psi_factor",
    "parse_matrix",
    "render_matrix",
    "matrix_to_json",
    "matrix_from_json",
]


class InputError(ValueError):
    """A caller-visible precondition failure (CLI exit code 2)."""


class ShapeError(InputError):
    pass


class NotSkewSymmetrizable(InputError):
    """Raised with the first violating index pair (0-based)."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"no positive symmetrizer exists: entries ({i},{j}) and ({j},{i}) are incompatible")


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


class ExchangeMatrix:
    """Immutable m x n integer matrix with the first n rows mutable."""

    __slots__ = ("rows", "n", "_hash")

    def __init__(self, rows: Iterable[Sequence[int]], n_mutable: int):
        rows = tuple(tuple(int(v) for v in row) for row in rows)
        n = int(n_mutable)
        if n < 0 or len(rows) < n:
            raise ShapeError(f"need at least {n} rows, got {len(rows)}")
        if any(len(row) != n for row in rows):
            raise ShapeError("all rows must have exactly n_mutable entries")
        for i in range(n):
            if rows[i][i] != 0:
                raise ShapeError(f"diagonal entry ({i},{i}) must be 0")
        self.rows = rows
        self.n = n
        self._hash = hash((n, rows))

    @property
    def m(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExchangeMatrix)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ExchangeMatrix({[list(r) for r in self.rows]}, n_mutable={self.n})"

    def top(self) -> ExchangeMatrix:
        """The square mutable block, as its own matrix."""
        return ExchangeMatrix(self.rows[: self.n], self.n)

    def is_skew_symmetric(self) -> bool:
        B = self.rows
        return all(
            B[i][j] == -B[j][i] for i in range(self.n) for j in range(i + 1, self.n)
        )

    # convenience wrappers so both functional and method style read naturally
    def mutate(self, k: int) -> ExchangeMatrix:
        return mutate(self, k)

    def restrict(self, I: Iterable[int]) -> ExchangeMatrix:
        return restrict(self, I)


def mutate(M: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation in direction k (0-based mutable index)."""
    if not 0 <= k < M.n:
        raise InputError(f"mutation index {k} out of mutable range 0..{M.n - 1}")
    rows = M.rows
    out = []
    for i in range(M.m):
        bik = rows[i][k]
        if i == k:
            out.append(tuple(-v for v in rows[i]))
            continue
        s = _sign(bik)
        row = list(rows[i])
        for j in range(M.n):
            if j == k:
                row[j] = -row[j]
            else:
                p = bik * rows[k][j]
                if p > 0:
                    row[j] += s * p
        out.append(tuple(row))
    return ExchangeMatrix(out, M.n)


def restrict(M: ExchangeMatrix, I: Iterable[int]) -> ExchangeMatrix:
    """Rows I and columns I ∩ {0..n-1}, reindexed in increasing order."""
    idx = sorted(set(I))
    if not idx:
        raise InputError("restriction index set must be nonempty")
    if idx[0] < 0 or idx[-1] >= M.m:
        raise InputError(f"row indices must lie in 0..{M.m - 1}")
    cols = [i for i in idx if i < M.n]
    rows = tuple(tuple(M.rows[i][j] for j in cols) for i in idx)
    return ExchangeMatrix(rows, len(cols))


def cartan_counterpart(M: ExchangeMatrix) -> tuple[tuple[int, ...], ...]:
    """The n x n matrix with 2 on the diagonal and -|b_ij| off it."""
    n = M.n
    return tuple(
        tuple(2 if i == j else -abs(M.rows[i][j]) for j in range(n)) for i in range(n)
    )


def skew_symmetrizer(M: ExchangeMatrix) -> tuple[int, ...]:
    """Componentwise-minimal positive integer d with d_i b_ij = -d_j b_ji.

    Ratios are propagated over each connected component of the diagram and
    each component is scaled to integer entries with gcd 1.  Raises
    NotSkewSymmetrizable naming the first bad pair.
    """
    n = M.n
    B = M.rows
    for i in range(n):
        for j in range(i + 1, n):
            if (B[i][j] == 0) != (B[j][i] == 0) or B[i][j] * B[j][i] > 0:
                raise NotSkewSymmetrizable(i, j)
    d: list[Fraction | None] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        comp = [root]
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if B[i][j] == 0:
                    continue
                want = d[i] * Fraction(abs(B[i][j]), abs(B[j][i]))
                if d[j] is None:
                    d[j] = want
                    comp.append(j)
                    stack.append(j)
                elif d[j] != want:
                    raise NotSkewSymmetrizable(i, j)
        scale = math.lcm(*(d[i].denominator for i in comp))
        g = math.gcd(*(int(d[i] * scale) for i in comp))
        for i in comp:
            d[i] = Fraction(int(d[i] * scale) // g)
    return tuple(int(v) for v in d)


class Diagram:
    """Weighted digraph on the mutable indices: arrow i->j iff b_ij > 0,
    carrying weight |b_ij * b_ji|."""

    __slots__ = ("n", "arrows")

    def __init__(self, n: int, arrows: dict[tuple[int, int], int]):
        self.n = n
        self.arrows = dict(arrows)

    def weight(self, i: int, j: int) -> int:
        return self.arrows.get((i, j)) or self.arrows.get((j, i)) or 0

    def has_arrow(self, i: int, j: int) -> bool:
        return (i, j) in self.arrows

    def neighbors(self, i: int) -> set[int]:
        out = set()
        for a, b in self.arrows:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return out

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for v in range(self.n):
            if v in seen:
                continue
            comp = [v]
            seen.add(v)
            stack = [v]
            while stack:
                u = stack.pop()
                for w in self.neighbors(u):
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Diagram)
            and self.n == other.n
            and self.arrows == other.arrows
        )

    def __repr__(self) -> str:
        return f"Diagram(n={self.n}, arrows={self.arrows})"


def diagram(M: ExchangeMatrix) -> Diagram:
    """The orientation convention (i->j iff b_ij > 0) lives only here."""
    arrows = {}
    for i in range(M.n):
        for j in range(M.n):
            if M.rows[i][j] > 0:
                arrows[(i, j)] = abs(M.rows[i][j] * M.rows[j][i])
    return Diagram(M.n, arrows)


def _row_hnf(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form by unimodular row operations.

    Returns (H, U) with H = U * input, H with positive pivots in strictly
    increasing columns and entries above each pivot reduced to 0..pivot-1.
    Fraction-free: only integer row swaps/negations/additions are used.
    """
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    H = [list(r) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        # gather the column below r into a single nonzero pivot by Euclid
        while True:
            live = [i for i in range(r, m) if H[i][c] != 0]
            if not live:
                break
            if len(live) == 1:
                p = live[0]
                if p != r:
                    H[r], H[p] = H[p], H[r]
                    U[r], U[p] = U[p], U[r]
                break
            live.sort(key=lambda i: abs(H[i][c]))
            p, q = live[0], live[1]
            f = H[q][c] // H[p][c]
            for t in range(ncols):
                H[q][t] -= f * H[p][t]
            for t in range(m):
                U[q][t] -= f * U[p][t]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            U[r] = [-v for v in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                for t in range(ncols):
                    H[i][t] -= f * H[r][t]
                for t in range(m):
                    U[i][t] -= f * U[r][t]
        r += 1
    return H, U


def _pivots(H: list[list[int]]) -> list[tuple[int, int]]:
    out = []
    for i, row in enumerate(H):
        for c, v in enumerate(row):
            if v != 0:
                out.append((i, c))
                break
    return out


def full_z_rank(M: ExchangeMatrix) -> bool:
    """True iff the rows of M span the full integer lattice Z^n."""
    H, _ = _row_hnf([list(r) for r in M.rows])
    piv = _pivots(H)
    return len(piv) == M.n and all(H[i][c] == 1 for i, c in piv)


def rows_in_z_span(M_sub: ExchangeMatrix, M_sup: ExchangeMatrix) -> bool:
    """True iff every row of M_sub is an integer combination of M_sup's rows."""
    if M_sub.n != M_sup.n:
        raise ShapeError("column counts differ")
    H, _ = _row_hnf([list(r) for r in M_sup.rows])
    piv = _pivots(H)
    for row in M_sub.rows:
        v = list(row)
        for i, c in piv:
            if v[c] % H[i][c]:
                return False
            f = v[c] // H[i][c]
            if f:
                for t in range(len(v)):
                    v[t] -= f * H[i][t]
        if any(v):
            return False
    return True


def psi_factor(
    M_circ: ExchangeMatrix, M_bar: ExchangeMatrix
) -> tuple[tuple[int, ...], ...] | None:
    """Integer matrix Psi = [[Id, 0], [Psi1, Psi2]] with Psi * M_circ = M_bar.

    Returns None when no integer factorization exists (equivalently, some
    frozen row of M_bar falls outside the Z-span of M_circ's rows).
    """
    if M_circ.n != M_bar.n:
        raise ShapeError("column counts differ")
    n = M_circ.n
    if M_circ.rows[:n] != M_bar.rows[:n]:
        raise InputError("mutable blocks must coincide")
    H, U = _row_hnf([list(r) for r in M_circ.rows])
    piv = _pivots(H)
    psi: list[tuple[int, ...]] = []
    for i in range(n):
        psi.append(tuple(int(i == j) for j in range(M_circ.m)))
    for row in M_bar.rows[n:]:
        v = list(row)
        y = [0] * M_circ.m
        for i, c in piv:
            if v[c] % H[i][c]:
                return None
            f = v[c] // H[i][c]
            y[i] = f
            if f:
                for t in range(len(v)):
                    v[t] -= f * H[i][t]
        if any(v):
            return None
        x = [sum(y[i] * U[i][t] for i in range(M_circ.m)) for t in range(M_circ.m)]
        psi.append(tuple(x))
    return tuple(psi)


# ---------------------------------------------------------------------------
# serialization: text format v1 and its JSON mirror

def parse_matrix(text: str) -> ExchangeMatrix:
    """Parse format v1: first line `m n`, then m rows of n integers.

    Lines starting with `#` are comments.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError("header must be `m n`")
    m, n = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise InputError(f"expected {m} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1 : m + 1]:
        vals = [int(v) for v in ln.split()]
        if len(vals) != n:
            raise InputError(f"row `{ln}` does not have {n} entries")
        rows.append(vals)
    return ExchangeMatrix(rows, n)


def render_matrix(M: ExchangeMatrix) -> str:
    out = [f"{M.m} {M.n}"]
    for row in M.rows:
        out.append(" ".join(str(v) for v in row))
    return "\n".join(out) + "\n"


def matrix_to_json(M: ExchangeMatrix) -> str:
    return json.dumps({"n_mutable": M.n, "rows": [list(r) for r in M.rows]})


def matrix_from_json(text: str) -> ExchangeMatrix:
    data = json.loads(text)
    return ExchangeMatrix(data["rows"], data["n_mutable"])
