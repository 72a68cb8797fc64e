"""Triangulation models whose flips realize matrix mutation.

Two models are provided: triangulations of a convex polygon, and tagged
triangulations of a punctured polygon.  Flipping one diagonal (or tagged
arc) corresponds to mutating the associated exchange matrix in the same
position, so seed patterns of the matrices can be read off combinatorially.
Two symmetric submodels -- centrally symmetric polygon triangulations and
tag-swap invariant tagged triangulations -- count the seeds of the folded
patterns.

Conventions
-----------
Polygon model: the vertices of a convex (n+3)-gon are labeled 1..n+3
clockwise.  A triangulation is an ordered tuple of n pairwise noncrossing
diagonals ``(a, b)`` with a < b; the order fixes the matrix columns.  The
matrix has 2n+3 rows: the n diagonals, then the boundary side {l, l+1} at
row n+l for l = 1..n+2, then the side {1, n+3} last.

Punctured model: the vertices of a convex n-gon are labeled 1..n clockwise
around an interior puncture p.  A tagged arc is one of

* ``("arc", a, b)`` -- the arc from vertex a to vertex b that separates
  the clockwise-open vertex interval (a, b) from the puncture; with a < b
  it stays clear of the boundary segment from n to 1, with a > b it wraps
  across that segment;
* ``("radius", v, tag)`` -- the segment from p to vertex v, where tag is
  ``"plain"`` or ``"notched"``.

There are n*(n-2) arcs of the first kind and 2n radii, n*n tagged arcs in
all.  A tagged triangulation is an ordered tuple of n pairwise compatible
tagged arcs; it always contains at least one radius.  The matrix has 2n+2
rows: the n arcs, the boundary segments {l, l+1} for l = 1..n-1, the
segment {n, 1}, and two frozen rows ``lam`` and ``lbar`` for the weights
an exchange picks up when its arcs wrap across that last segment on either
side of the puncture.  ``tagged_matrix`` keeps the first 2n rows (setting
both weights to one); ``tagged_matrix_bullet`` keeps all 2n+2.
"""

from __future__ import annotations

import itertools
from math import comb

from .exchange import ExchangeMatrix, InputError

__all__ = [
    "POLYGON_A",
    "TAGGED_D",
    "CENTRAL_C",
    "TAGSYM_B",
    "polygon_triangulations",
    "polygon_fan",
    "polygon_matrix",
    "polygon_flip",
    "central_flip",
    "tagged_arcs",
    "arc_compatible",
    "tagged_triangulations",
    "star_triangulation",
    "tagged_flip",
    "tagged_matrix",
    "tagged_matrix_bullet",
    "flavor",
    "tag_swap",
    "tagsym_flip",
    "count_triangulations",
    "dn_recurrence_check",
    "render_arc",
    "parse_arc",
    "render_triangulation",
    "parse_triangulation",
]

POLYGON_A = "PolygonA"
TAGGED_D = "TaggedD"
CENTRAL_C = "CentralC"
TAGSYM_B = "TagSymB"

_PLAIN = "plain"
_NOTCHED = "notched"


# --------------------------------------------------------------- polygons


def _check_diagonal(d, m):
    if (
        not isinstance(d, tuple)
        or len(d) != 2
        or not all(isinstance(v, int) for v in d)
    ):
        raise InputError(f"diagonal {d!r} is not a pair of vertices")
    a, b = d
    if not (1 <= a < b <= m):
        raise InputError(f"diagonal {d} does not fit a polygon with {m} vertices")
    if b - a < 2 or (a, b) == (1, m):
        raise InputError(f"{d} joins adjacent vertices of the {m}-gon")


def _diagonals_cross(d, e):
    (a, b), (c, f) = d, e
    return a < c < b < f or c < a < f < b


def _check_polygon(T):
    n = len(T)
    if n < 1:
        raise InputError("a polygon triangulation needs at least one diagonal")
    m = n + 3
    for d in T:
        _check_diagonal(d, m)
    if len(set(T)) != n:
        raise InputError("repeated diagonal")
    for d, e in itertools.combinations(T, 2):
        if _diagonals_cross(d, e):
            raise InputError(f"diagonals {d} and {e} cross")
    return n


def polygon_triangulations(n):
    """All triangulations of the (n+3)-gon, as tuples of n diagonals."""
    if n < 1:
        raise InputError("need n >= 1")
    m = n + 3
    diags = [
        (a, b)
        for a in range(1, m + 1)
        for b in range(a + 2, m + 1)
        if (a, b) != (1, m)
    ]
    out = []

    def grow(start, chosen):
        if len(chosen) == n:
            out.append(tuple(chosen))
            return
        # not enough candidates left to finish
        if len(diags) - start < n - len(chosen):
            return
        for idx in range(start, len(diags)):
            cand = diags[idx]
            if all(not _diagonals_cross(cand, c) for c in chosen):
                grow(idx + 1, chosen + [cand])

    grow(0, [])
    return out


def polygon_fan(n):
    """The fan triangulation of the (n+3)-gon: all diagonals at vertex 1."""
    if n < 1:
        raise InputError("need n >= 1")
    return tuple((1, k + 2) for k in range(1, n + 1))


def _edge_labels(T, n):
    m = n + 3
    label = {}
    for k, d in enumerate(T):
        label[d] = k
    for ell in range(1, m):
        label[(ell, ell + 1)] = n + ell - 1
    label[(1, m)] = 2 * n + 2
    return label


def polygon_matrix(T):
    """The (2n+3) x n exchange matrix of a polygon triangulation.

    Each triangle of the triangulation contributes +1 at (i, j) when side j
    follows side i in its clockwise traversal, and -1 the other way around.
    Columns of boundary sides are dropped; their rows stay (frozen).
    """
    T = tuple(T)
    n = _check_polygon(T)
    m = n + 3
    label = _edge_labels(T, n)
    rows = [[0] * n for _ in range(2 * n + 3)]
    # in convex position three pairwise joined vertices always bound a face
    for u, v, w in itertools.combinations(range(1, m + 1), 3):
        if (u, v) in label and (v, w) in label and (u, w) in label:
            cw = ((u, v), (v, w), (u, w))
            for e1, e2 in ((cw[0], cw[1]), (cw[1], cw[2]), (cw[2], cw[0])):
                r1, r2 = label[e1], label[e2]
                if r2 < n:
                    rows[r1][r2] += 1
                if r1 < n:
                    rows[r2][r1] -= 1
    return ExchangeMatrix(rows, n)


def polygon_flip(T, d):
    """Replace diagonal d by the other diagonal of its quadrilateral."""
    T = tuple(T)
    n = _check_polygon(T)
    if d not in T:
        raise InputError(f"diagonal {d} is not in the triangulation")
    label = _edge_labels(T, n)
    a, b = d
    apex = [
        w
        for w in range(1, n + 4)
        if w not in d
        and tuple(sorted((a, w))) in label
        and tuple(sorted((b, w))) in label
    ]
    assert len(apex) == 2, (T, d)
    new = tuple(sorted(apex))
    return tuple(new if e == d else e for e in T)


def _antipode(d, m):
    half = m // 2
    a, b = d
    return tuple(sorted((((a + half - 1) % m) + 1, ((b + half - 1) % m) + 1)))


def central_flip(T, d):
    """Flip d together with its antipodal partner.

    The triangulation must be invariant under the half-turn of its (even)
    polygon; the result is again invariant, so these moves walk the
    centrally symmetric submodel.
    """
    T = tuple(T)
    n = _check_polygon(T)
    m = n + 3
    if m % 2:
        raise InputError(f"the {m}-gon has no half-turn")
    if d not in T:
        raise InputError(f"diagonal {d} is not in the triangulation")
    if {_antipode(e, m) for e in T} != set(T):
        raise InputError("triangulation is not centrally symmetric")
    out = polygon_flip(T, d)
    partner = _antipode(d, m)
    if partner != d:
        out = polygon_flip(out, partner)
    return out


# --------------------------------------------------------- tagged arcs


def _check_arc(arc, n):
    if not isinstance(arc, tuple) or len(arc) != 3:
        raise InputError(f"{arc!r} is not a tagged arc")
    kind, x, y = arc
    if kind == "radius":
        if not isinstance(x, int) or not 1 <= x <= n:
            raise InputError(f"radius vertex {x!r} outside 1..{n}")
        if y not in (_PLAIN, _NOTCHED):
            raise InputError(f"unknown tag {y!r}")
        return
    if kind != "arc":
        raise InputError(f"unknown arc kind {kind!r}")
    if not all(isinstance(v, int) and 1 <= v <= n for v in (x, y)):
        raise InputError(f"arc endpoints {arc} outside 1..{n}")
    if x == y or y == x % n + 1:
        raise InputError(f"arc {arc} separates nothing from the puncture")


def tagged_arcs(n):
    """All n*n tagged arcs of the punctured n-gon."""
    if n < 2:
        raise InputError("need n >= 2")
    out = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a != b and b != a % n + 1:
                out.append(("arc", a, b))
    for v in range(1, n + 1):
        out.append(("radius", v, _PLAIN))
        out.append(("radius", v, _NOTCHED))
    return out


def _hug(arc, n):
    """Boundary segments {x, x+1} the arc wraps around, as segment labels x."""
    _, a, b = arc
    segs = set()
    x = a
    while x != b:
        segs.add(x)
        x = x % n + 1
    return frozenset(segs)


def _separated(arc, n):
    _, a, b = arc
    out = set()
    x = a % n + 1
    while x != b:
        out.add(x)
        x = x % n + 1
    return out


def arc_compatible(x, y, n):
    """Whether two tagged arcs of the punctured n-gon can share a triangulation.

    Radii at one vertex are compatible regardless of tags; radii at distinct
    vertices must carry equal tags; a radius and an arc are compatible unless
    the radius ends at a vertex the arc separates from the puncture; two arcs
    are compatible when the boundary intervals they wrap around are nested or
    disjoint.
    """
    _check_arc(x, n)
    _check_arc(y, n)
    if x[0] == "radius" and y[0] == "radius":
        return x[1] == y[1] or x[2] == y[2]
    if x[0] == "radius":
        x, y = y, x
    if y[0] == "radius":
        return y[1] not in _separated(x, n)
    hx, hy = _hug(x, n), _hug(y, n)
    return hx <= hy or hy <= hx or not (hx & hy)


def _check_tagged(T):
    n = len(T)
    if n < 2:
        raise InputError("a tagged triangulation needs at least two arcs")
    for arc in T:
        _check_arc(arc, n)
    if len(set(T)) != n:
        raise InputError("repeated tagged arc")
    for x, y in itertools.combinations(T, 2):
        if not arc_compatible(x, y, n):
            raise InputError(
                f"arcs {render_arc(x)} and {render_arc(y)} are incompatible"
            )
    return n


def tagged_triangulations(n):
    """All tagged triangulations of the punctured n-gon."""
    if n < 2:
        raise InputError("need n >= 2")
    arcs = tagged_arcs(n)
    out = []

    def grow(start, chosen):
        if len(chosen) == n:
            out.append(tuple(chosen))
            return
        if len(arcs) - start < n - len(chosen):
            return
        for idx in range(start, len(arcs)):
            cand = arcs[idx]
            if all(arc_compatible(cand, c, n) for c in chosen):
                grow(idx + 1, chosen + [cand])

    grow(0, [])
    return out


def star_triangulation(n):
    """The all-plain star: every radius of the punctured n-gon, untagged."""
    if n < 2:
        raise InputError("need n >= 2")
    return tuple(("radius", v, _PLAIN) for v in range(1, n + 1))


def _flip_arc(T, gamma, n):
    rest = [a for a in T if a != gamma]
    found = None
    for cand in tagged_arcs(n):
        if cand == gamma or cand in rest:
            continue
        if all(arc_compatible(cand, c, n) for c in rest):
            assert found is None, (T, gamma)
            found = cand
    assert found is not None, (T, gamma)
    return found


def tagged_flip(T, gamma):
    """Replace the tagged arc gamma by the unique other completion."""
    T = tuple(T)
    n = _check_tagged(T)
    if gamma not in T:
        raise InputError(f"{render_arc(gamma)} is not in the triangulation")
    new = _flip_arc(T, gamma, n)
    return tuple(new if a == gamma else a for a in T)


def flavor(T):
    """Classify the radius tags: "AllPlain", "AllNotched" or "DigonMixed"."""
    T = tuple(T)
    _check_tagged(T)
    tags = {a[2] for a in T if a[0] == "radius"}
    if tags == {_PLAIN}:
        return "AllPlain"
    if tags == {_NOTCHED}:
        return "AllNotched"
    if tags == {_PLAIN, _NOTCHED}:
        return "DigonMixed"
    raise InputError("a tagged triangulation always contains a radius")


def tag_swap(T):
    """Swap plain and notched on every radius, keeping other arcs."""
    out = []
    for a in T:
        if a[0] == "radius":
            out.append(("radius", a[1], _NOTCHED if a[2] == _PLAIN else _PLAIN))
        else:
            out.append(a)
    return tuple(out)


def tagsym_flip(T, gamma):
    """Flip gamma together with its tag-swap partner.

    The triangulation must be invariant under the global tag swap; so is
    the result, which makes these moves walk the tag-symmetric submodel.
    """
    T = tuple(T)
    _check_tagged(T)
    if gamma not in T:
        raise InputError(f"{render_arc(gamma)} is not in the triangulation")
    if frozenset(tag_swap(T)) != frozenset(T):
        raise InputError("triangulation is not tag-swap invariant")
    out = tagged_flip(T, gamma)
    partner = tag_swap((gamma,))[0]
    if partner != gamma:
        out = tagged_flip(out, partner)
    return out


# ------------------------------------------------- exchange relations
#
# Each flip pair satisfies one exchange relation; the entries of the pair's
# matrix column are +1 on one monomial and -1 on the other.  Which monomial
# is positive depends on which member of the pair sits in the triangulation
# (mutation negates the column), so every case below is written for its
# canonical first member and swapped when the other one is the in-T arc.
# Elements:  ("chordlike", i, j) is the arc or boundary segment wrapping
# the interval i..j-1 (i < j); ("crosslike", i, j) wraps j..i-1 across the
# segment {n, 1}; ("plain"/"notch", v) are radii; ("lam",)/("lbar",) the
# frozen weight rows.

_LAM = ("lam",)
_LBAR = ("lbar",)


def _pl(i):
    return ("plain", i)


def _no(i):
    return ("notch", i)


def _ch(i, j):
    return ("chordlike", i, j)


def _xl(i, j):
    return ("crosslike", i, j)


def _element(arc):
    if arc[0] == "arc":
        a, b = arc[1], arc[2]
        return _ch(a, b) if a < b else _xl(b, a)
    return _pl(arc[1]) if arc[2] == _PLAIN else _no(arc[1])


def _oriented_relation(gin, gout):
    """Monomials (positive, negative) of the column of in-T arc ``gin``."""
    q1, q2 = _element(gin), _element(gout)
    p1, p2 = (q1, q2) if q1[0] <= q2[0] else (q2, q1)
    kinds = (p1[0], p2[0])
    if kinds == ("notch", "plain"):
        ni, pj = p1[1], p2[1]
        if ni < pj:
            gin_first, mp, mm = q1 == p1, [_xl(ni, pj)], [_LBAR, _ch(ni, pj)]
        else:
            gin_first, mp, mm = q1 == p2, [_xl(pj, ni)], [_LAM, _ch(pj, ni)]
    elif kinds in (("chordlike", "plain"), ("chordlike", "notch")):
        a, b, r = p1[1], p1[2], p2[1]
        assert a < r < b, (q1, q2)
        rad = _pl if p2[0] == "plain" else _no
        gin_first, mp, mm = q1 == p1, [rad(a), _ch(r, b)], [_ch(a, r), rad(b)]
    elif kinds in (("crosslike", "plain"), ("crosslike", "notch")):
        a, b, r = p1[1], p1[2], p2[1]
        untagged = p2[0] == "plain"
        rad = _pl if untagged else _no
        if r > b:
            pre = _LBAR if untagged else _LAM
            gin_first, mp, mm = q1 == p1, [rad(b), _xl(a, r)], [pre, _ch(b, r), rad(a)]
        else:
            assert r < a, (q1, q2)
            pre = _LAM if untagged else _LBAR
            gin_first, mp, mm = q1 == p1, [pre, rad(b), _ch(r, a)], [_xl(r, b), rad(a)]
    elif kinds == ("chordlike", "chordlike"):
        (a, b), (c, d) = (p1[1], p1[2]), (p2[1], p2[2])
        swapped = c < a
        if swapped:
            a, b, c, d = c, d, a, b
        assert a < c < b < d, (q1, q2)
        gin_first = (q1 == p1) != swapped
        mp, mm = [_ch(a, d), _ch(c, b)], [_ch(a, c), _ch(b, d)]
    elif kinds == ("chordlike", "crosslike"):
        (a, b), (c, d) = (p1[1], p1[2]), (p2[1], p2[2])
        shared = {a, b} & {c, d}
        if shared == {a} and a == c:
            assert d < b, (q1, q2)
            gin_first, mp, mm = q1 == p1, [_ch(d, b), _pl(a), _no(a)], [_ch(a, d), _xl(a, b)]
        elif shared == {b} and b == d:
            assert a < c, (q1, q2)
            gin_first, mp, mm = q1 == p1, [_xl(a, b), _ch(c, b)], [_no(b), _pl(b), _ch(a, c)]
        elif c < a:
            assert not shared and c < a < d < b, (q1, q2)
            gin_first, mp, mm = q1 == p1, [_xl(c, a), _ch(d, b)], [_ch(a, d), _xl(c, b)]
        else:
            assert not shared and a < c < b < d, (q1, q2)
            gin_first, mp, mm = q1 == p1, [_xl(a, d), _ch(c, b)], [_xl(b, d), _ch(a, c)]
    elif kinds == ("crosslike", "crosslike"):
        (a, b), (c, d) = (p1[1], p1[2]), (p2[1], p2[2])
        swapped = c < a
        if swapped:
            a, b, c, d = c, d, a, b
        gin_first = (q1 == p1) != swapped
        if b == c:
            mp, mm = [_no(b), _pl(b), _xl(a, d)], [_LAM, _LBAR, _ch(a, b), _ch(b, d)]
        else:
            assert a < c < b < d, (q1, q2)
            mp, mm = [_xl(c, b), _xl(a, d)], [_LAM, _LBAR, _ch(a, c), _ch(b, d)]
    else:
        raise InputError(
            f"no exchange relation for {render_arc(gin)} and {render_arc(gout)}"
        )
    return (mp, mm) if gin_first else (mm, mp)


def _row_index(elem, T, n):
    if elem[0] in ("chordlike", "crosslike"):
        a, b = elem[1], elem[2]
        if elem[0] == "chordlike" and b == a + 1:
            return n + a - 1
        if elem[0] == "crosslike" and (a, b) == (1, n):
            return 2 * n - 1
        arc = ("arc", a, b) if elem[0] == "chordlike" else ("arc", b, a)
        return T.index(arc)
    if elem[0] in ("plain", "notch"):
        tag = _PLAIN if elem[0] == "plain" else _NOTCHED
        return T.index(("radius", elem[1], tag))
    if elem == _LAM:
        return 2 * n
    return 2 * n + 1


def tagged_matrix_bullet(T):
    """The (2n+2) x n exchange matrix of a tagged triangulation.

    Row order: the n arcs as given, the boundary segments {1,2} .. {n,1},
    then the frozen weights lam and lbar.  Column k holds the exchange
    relation of arc k with its flip: +1 entries on the positive monomial,
    -1 on the negative one.
    """
    T = tuple(T)
    n = _check_tagged(T)
    rows = [[0] * n for _ in range(2 * n + 2)]
    for k, gamma in enumerate(T):
        plus, minus = _oriented_relation(gamma, _flip_arc(T, gamma, n))
        for e in plus:
            rows[_row_index(e, T, n)][k] += 1
        for e in minus:
            rows[_row_index(e, T, n)][k] -= 1
    return ExchangeMatrix(rows, n)


def tagged_matrix(T):
    """The 2n x n matrix of a tagged triangulation: both weights set to one."""
    full = tagged_matrix_bullet(T)
    return ExchangeMatrix([list(r) for r in full.rows[: 2 * full.n]], full.n)


# ------------------------------------------------------------- counting


def _catalan(k):
    return comb(2 * k, k) // (k + 1)


def _polygon_closed(n):
    return _catalan(n + 1)


def _tagged_closed(n):
    return (3 * n - 2) * comb(2 * n - 2, n - 1) // n


def count_triangulations(model, n):
    """Count a model's triangulations twice: by search and in closed form.

    Returns the pair (enumerated, closed) after asserting they agree.
    Models: "PolygonA" (an (n+3)-gon), "TaggedD" (a punctured n-gon),
    "CentralC" (half-turn invariant triangulations of a (2n+2)-gon) and
    "TagSymB" (tag-swap invariant tagged triangulations of a punctured
    (n+1)-gon).
    """
    if model == POLYGON_A:
        if n < 1:
            raise InputError("need n >= 1")
        enumerated = len(polygon_triangulations(n))
        closed = _polygon_closed(n)
    elif model == TAGGED_D:
        if n < 2:
            raise InputError("need n >= 2")
        enumerated = len(tagged_triangulations(n))
        closed = _tagged_closed(n)
    elif model == CENTRAL_C:
        if n < 1:
            raise InputError("need n >= 1")
        m = 2 * n + 2
        enumerated = sum(
            1
            for T in polygon_triangulations(2 * n - 1)
            if {_antipode(d, m) for d in T} == set(T)
        )
        closed = comb(2 * n, n)
    elif model == TAGSYM_B:
        if n < 1:
            raise InputError("need n >= 1")
        enumerated = sum(
            1
            for T in tagged_triangulations(n + 1)
            if frozenset(tag_swap(T)) == frozenset(T)
        )
        closed = comb(2 * n, n)
    else:
        raise InputError(f"unknown model {model!r}")
    assert enumerated == closed, (model, n, enumerated, closed)
    return enumerated, closed


def dn_recurrence_check(N):
    """Verify d_n = sum_k a_k * d_(n-1-k) + 2 a_(n-1) for 3 <= n <= N.

    Here a_k counts triangulations of a (k+3)-gon and d_m tagged
    triangulations of a punctured m-gon, both in closed form (splitting on
    the triangle glued to a fixed boundary segment, the last two terms
    covering the configurations where that triangle reaches the puncture).
    """
    if N < 3:
        raise InputError("need N >= 3")
    for n in range(3, N + 1):
        rhs = sum(_polygon_closed(k) * _tagged_closed(n - 1 - k) for k in range(n - 2))
        rhs += 2 * _polygon_closed(n - 1)
        if rhs != _tagged_closed(n):
            return False
    return True


# -------------------------------------------------------- serialization


def render_arc(arc):
    """``"a-b"`` for arcs, ``"p-v:tag"`` for radii."""
    if arc[0] == "arc":
        return f"{arc[1]}-{arc[2]}"
    return f"p-{arc[1]}:{arc[2]}"


def parse_arc(text):
    """Inverse of render_arc; a radius without ":tag" is taken plain."""
    t = text.strip()
    if t.startswith("p-"):
        body, _, tag = t[2:].partition(":")
        tag = tag or _PLAIN
        if tag not in (_PLAIN, _NOTCHED):
            raise InputError(f"unknown tag {tag!r} in {text!r}")
        if not body.isdigit():
            raise InputError(f"bad radius {text!r}")
        return ("radius", int(body), tag)
    a, sep, b = t.partition("-")
    if not sep or not a.isdigit() or not b.isdigit():
        raise InputError(f"bad arc {text!r}")
    return ("arc", int(a), int(b))


def render_triangulation(T):
    return ", ".join(render_arc(a) for a in T)


def parse_triangulation(text):
    parts = [p for p in (s.strip() for s in text.split(",")) if p]
    if not parts:
        raise InputError("empty triangulation")
    return tuple(parse_arc(p) for p in parts)
