from __future__ import annotations

import random

import pytest

from seedpattern.exchange import ExchangeMatrix, InputError
from seedpattern.laurent import lp_const, lp_var, parse_poly, render_poly
from seedpattern.seed import (
    RestrictionBlocked,
    Seed,
    canonicalize,
    freeze,
    initial_seed,
    parse_seed,
    render_seed,
    restrict_seed,
    seed_mutate,
    trivialize,
)

from conftest import random_mild_matrix, random_skew_symmetrizable


def M(rows, n=None):
    return ExchangeMatrix(rows, len(rows[0]) if n is None else n)


def apply_word(s: Seed, word) -> Seed:
    for k in word:
        s = seed_mutate(s, k)
    return s


def relabel(s: Seed, perm) -> Seed:
    """Apply a permutation of the mutable indices: position j gets old index perm[j]."""
    n = s.n
    top = [[s.matrix.rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    bottom = [[s.matrix.rows[i][perm[j]] for j in range(n)] for i in range(n, s.m)]
    cluster = tuple(s.cluster[perm[i]] for i in range(n)) + s.cluster[n:]
    return Seed(ExchangeMatrix(top + bottom, n), cluster)


def test_rank1_mutation_doubles_inverse():
    s = initial_seed(M([[0]]))
    assert render_poly(seed_mutate(s, 0).cluster[0]) == "2*x1^-1"


def test_a2_pentagon():
    s = initial_seed(M([[0, 1], [-1, 0]]))
    seen = {s.cluster[0], s.cluster[1]}
    cur = s
    for step in range(10):
        cur = seed_mutate(cur, step % 2)
        seen.update(cur.cluster)
    expected = {
        parse_poly(t, 2)
        for t in [
            "x1",
            "x2",
            "x1^-1*x2 + x1^-1",
            "x1^-1*x2^-1 + x1^-1 + x2^-1",
            "x1*x2^-1 + x2^-1",
        ]
    }
    assert seen == expected
    five = apply_word(s, [0, 1, 0, 1, 0])
    assert five != s  # labels swapped ...
    assert canonicalize(five) == canonicalize(s)  # ... but the seed is the same


def test_rank2_weighted_relations():
    s = initial_seed(M([[0, -2], [1, 0]]))
    x1, x2 = s.cluster
    m0 = seed_mutate(s, 0)
    assert m0.cluster[0] * x1 == x2 + lp_const(1, 2)
    m1 = seed_mutate(s, 1)
    assert m1.cluster[1] * x2 == x1 * x1 + lp_const(1, 2)


def test_mutation_is_involution_on_seeds():
    rng = random.Random(404)
    for _ in range(30):
        s = initial_seed(random_mild_matrix(rng, 3, frozen=1))
        s = apply_word(s, [rng.randrange(3) for _ in range(3)])
        for k in range(3):
            assert seed_mutate(seed_mutate(s, k), k) == s


def test_freeze_all_mutables_is_inert():
    s = initial_seed(M([[0, 1], [-1, 0]]))
    frozen = freeze(s, [0, 1])
    assert frozen.n == 0 and frozen.m == 2
    assert frozen.cluster == s.cluster
    with pytest.raises(InputError):
        seed_mutate(frozen, 0)


def test_freeze_order_immaterial():
    rng = random.Random(11)
    for _ in range(20):
        s = initial_seed(random_mild_matrix(rng, 4, frozen=1))
        s = apply_word(s, [rng.randrange(4) for _ in range(2)])
        once = freeze(s, [1, 2])
        # after freezing index 1, original index 2 sits at mutable position 1
        twice = freeze(freeze(s, [1]), [1])
        assert once == twice


def test_freeze_commutes_with_mutation():
    rng = random.Random(202)
    for _ in range(40):
        s = initial_seed(random_mild_matrix(rng, 3, frozen=1))
        k = rng.randrange(3)
        F = [i for i in range(3) if i != k and rng.random() < 0.5]
        left = freeze(seed_mutate(s, k), F)
        k_new = [i for i in range(3) if i not in F].index(k)
        right = seed_mutate(freeze(s, F), k_new)
        assert left == right


def test_restrict_identity():
    rng = random.Random(7)
    s = initial_seed(random_mild_matrix(rng, 3, frozen=2))
    assert restrict_seed(s, range(5)) == s


def test_restrict_path_names_violation():
    s = initial_seed(M([[0, 1, 0], [-1, 0, 1], [0, -1, 0]]))
    with pytest.raises(RestrictionBlocked) as e:
        restrict_seed(s, [0, 1])
    assert e.value.pair == (2, 1)


def test_restrict_component_with_frozen_neighbors():
    # two isolated mutables, one frozen row attached to the first
    s = initial_seed(M([[0, 0], [0, 0], [1, 0]], n=2))
    r = restrict_seed(s, [0, 2])
    assert r.matrix.rows == ((0,), (1,))
    assert r.cluster == (s.cluster[0], s.cluster[2])


def test_restrict_commutes_with_mutation():
    rng = random.Random(606)
    for _ in range(30):
        a = random_mild_matrix(rng, 2, frozen=1)
        b = random_mild_matrix(rng, 2)
        rows = [
            [a.rows[0][0], a.rows[0][1], 0, 0],
            [a.rows[1][0], a.rows[1][1], 0, 0],
            [0, 0, b.rows[0][0], b.rows[0][1]],
            [0, 0, b.rows[1][0], b.rows[1][1]],
            [a.rows[2][0], a.rows[2][1], 0, 0],
        ]
        s = initial_seed(ExchangeMatrix(rows, 4))
        I = [0, 1, 4]
        word = [rng.randrange(2) for _ in range(4)]
        left = restrict_seed(apply_word(s, word), I)
        right = apply_word(restrict_seed(s, I), word)
        assert left == right


def test_trivialize_nothing_is_identity():
    rng = random.Random(3)
    s = initial_seed(random_mild_matrix(rng, 3, frozen=2))
    assert trivialize(s, []) == s


def test_trivialize_isolated_frozen_row():
    s = initial_seed(M([[0, 1], [-1, 0], [0, 0]], n=2))
    t = trivialize(s, [2])
    assert t.matrix.rows == ((0, 1), (-1, 0))
    assert t.cluster == (lp_var(0, 2), lp_var(1, 2))


def test_trivialize_rejects_mutable():
    s = initial_seed(M([[0, 1], [-1, 0], [0, 0]], n=2))
    with pytest.raises(InputError):
        trivialize(s, [0])


def test_trivialize_commutes_with_mutation():
    rng = random.Random(808)
    for _ in range(30):
        s = initial_seed(random_mild_matrix(rng, 3, frozen=2))
        word = [rng.randrange(3) for _ in range(4)]
        F = [3] if rng.random() < 0.5 else [3, 4]
        assert trivialize(apply_word(s, word), F) == apply_word(trivialize(s, F), word)


def test_canonicalize_idempotent_and_permutation_invariant():
    rng = random.Random(909)
    for _ in range(20):
        s = initial_seed(random_mild_matrix(rng, 4, frozen=1))
        s = apply_word(s, [rng.randrange(4) for _ in range(4)])
        canon = canonicalize(s)
        assert canonicalize(canon) == canon
        for _ in range(5):
            perm = list(range(4))
            rng.shuffle(perm)
            assert canonicalize(relabel(s, perm)) == canon


def test_canonical_correspondence_under_row_span():
    # coefficient patterns [[0,1],[-c,0],[1,0]] cover the coefficient-free
    # ones: equal canonical seeds upstairs must collapse downstairs too
    for c in (1, 2, 3):
        ref0 = initial_seed(M([[0, 1], [-c, 0], [1, 0]], n=2))
        bare0 = initial_seed(M([[0, 1], [-c, 0]]))
        words, frontier = [[]], [[]]
        for _ in range(8):
            frontier = [w + [k] for w in frontier for k in (0, 1) if not w or w[-1] != k]
            words.extend(frontier)
        by_ref = {}
        for w in words:
            ref = canonicalize(apply_word(ref0, w))
            bare = canonicalize(apply_word(bare0, w))
            if ref in by_ref:
                assert by_ref[ref] == bare, (c, w)
            else:
                by_ref[ref] = bare


def test_seed_serialization_roundtrip():
    rng = random.Random(515)
    for _ in range(20):
        s = initial_seed(random_mild_matrix(rng, 3, frozen=1))
        s = apply_word(s, [rng.randrange(3) for _ in range(3)])
        assert parse_seed(render_seed(s)) == s


def test_laurent_phenomenon_spot_check():
    rng = random.Random(616)
    for _ in range(15):
        s = initial_seed(random_mild_matrix(rng, 3, frozen=1))
        apply_word(s, [rng.randrange(3) for _ in range(6)])  # must not raise
