"""Exact Laurent-polynomial arithmetic over the integers.

Polynomials live in m indexed variables x1..xm and are stored as maps from
dense exponent vectors (length-m tuples of ints, negative entries allowed) to
nonzero integer coefficients.  Instances are interned: any two equal values
constructed through the public API are the same object, which makes the
equality and hashing done by the exploration engine cheap.

The module also provides the ordered quadratic extension Q(sqrt(D)) used by
the rank-2 infinite-growth witness, together with the tropical monomial
semifield built on top of it.
"""

from __future__ import annotations

import heapq
import re
import weakref
from fractions import Fraction
from operator import add as _add, neg as _neg, sub as _sub
from typing import Iterable, Mapping

from .exchange import InputError

__all__ = [
    "LaurentPolynomial",
    "NonDivisibleError",
    "lp_add",
    "lp_mul",
    "lp_exact_div",
    "lp_const",
    "lp_eval_ones",
    "lp_var",
    "lp_monomial",
    "render_poly",
    "parse_poly",
    "QuadraticNumber",
    "TropicalMonomial",
    "tropical_orbit",
]


class NonDivisibleError(ArithmeticError):
    """Raised when an exact Laurent quotient with integer coefficients does not exist."""


def _term_key(exp: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    # graded-lexicographic: total degree first, then the exponent vector
    return (sum(exp), exp)


class LaurentPolynomial:
    __slots__ = ("terms", "n_vars", "_hash", "_key", "__weakref__")

    _pool: weakref.WeakValueDictionary = weakref.WeakValueDictionary()

    def __init__(self, terms: Mapping[tuple[int, ...], int], n_vars: int):
        clean: dict[tuple[int, ...], int] = {}
        for exp, coeff in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n_vars:
                raise InputError(
                    f"exponent vector {exp} has length {len(exp)}, expected {n_vars}"
                )
            coeff = int(coeff)
            if coeff:
                clean[exp] = coeff
        self.terms = clean
        self.n_vars = int(n_vars)
        self._hash = hash((self.n_vars, frozenset(clean.items())))
        self._key = None

    @classmethod
    def _make(cls, terms: dict[tuple[int, ...], int], n_vars: int) -> "LaurentPolynomial":
        """Interning constructor: terms must already be clean (no zero coefficients)."""
        pool_key = (n_vars, frozenset(terms.items()))
        cached = cls._pool.get(pool_key)
        if cached is not None:
            return cached
        poly = cls.__new__(cls)
        poly.terms = terms
        poly.n_vars = n_vars
        poly._hash = hash(pool_key)
        poly._key = None
        cls._pool[pool_key] = poly
        return poly

    # -- basic predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- ordering -----------------------------------------------------------

    def sort_key(self):
        """Global total order: term count, then terms in descending graded-lex."""
        if self._key is None:
            ordered = sorted(self.terms.items(), key=lambda t: _term_key(t[0]), reverse=True)
            self._key = (
                len(ordered),
                tuple((sum(e), e, c) for e, c in ordered),
            )
        return self._key

    # -- dunder plumbing ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "LaurentPolynomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return lp_add(self, other)

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return lp_add(self, other.__neg__())

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._make(
            {e: -c for e, c in self.terms.items()}, self.n_vars
        )

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return lp_mul(self, other)

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if not self.is_monomial():
                raise NonDivisibleError("negative power of a non-monomial")
            (exp, coeff), = self.terms.items()
            if coeff * coeff != 1:
                raise NonDivisibleError("negative power needs a unit coefficient")
            base = LaurentPolynomial._make(
                {tuple(-e for e in exp): coeff}, self.n_vars
            )
            return base ** (-k)
        if k == 0:
            return lp_const(1, self.n_vars)
        if k == 1:
            return self
        result = lp_const(1, self.n_vars)
        base = self
        while k:
            if k & 1:
                result = lp_mul(result, base)
            base = lp_mul(base, base) if k > 1 else base
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"<LaurentPolynomial {render_poly(self)!r}>"


def _check_vars(a: LaurentPolynomial, b: LaurentPolynomial) -> None:
    if a.n_vars != b.n_vars:
        raise InputError(f"variable counts differ: {a.n_vars} vs {b.n_vars}")


def lp_add(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    _check_vars(a, b)
    terms = dict(a.terms)
    for exp, coeff in b.terms.items():
        s = terms.get(exp, 0) + coeff
        if s:
            terms[exp] = s
        elif exp in terms:
            del terms[exp]
    return LaurentPolynomial._make(terms, a.n_vars)


def lp_mul(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    _check_vars(a, b)
    if len(a.terms) > len(b.terms):
        a, b = b, a
    terms: dict[tuple[int, ...], int] = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            s = terms.get(exp, 0) + ca * cb
            if s:
                terms[exp] = s
            elif exp in terms:
                del terms[exp]
    return LaurentPolynomial._make(terms, a.n_vars)


def _shift_to_polynomial(p: LaurentPolynomial) -> tuple[dict, tuple[int, ...]]:
    """Translate exponents so the per-variable minimum is 0; return (terms, shift)."""
    mins = [min(e[i] for e in p.terms) for i in range(p.n_vars)]
    shifted = {
        tuple(x - m for x, m in zip(exp, mins)): c for exp, c in p.terms.items()
    }
    return shifted, tuple(mins)


def lp_exact_div(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Exact quotient q with q*b == a, over integer coefficients.

    The per-variable minimum degree is additive under multiplication, so any
    Laurent quotient of the shifted (ordinary-polynomial) numerator and
    denominator is itself an ordinary polynomial; leading-term elimination in
    graded-lex order then terminates and detects failure.
    """
    _check_vars(a, b)
    if b.is_zero():
        raise ZeroDivisionError("Laurent division by zero")
    if a.is_zero():
        return a
    num, num_shift = _shift_to_polynomial(a)
    den, den_shift = _shift_to_polynomial(b)
    back = tuple(x - y for x, y in zip(num_shift, den_shift))
    n_vars = a.n_vars

    quotient: dict[tuple[int, ...], int] = {}
    if len(den) == 1:
        (dexp, dcoeff), = den.items()
        for exp, coeff in num.items():
            q, r = divmod(coeff, dcoeff)
            if r:
                raise NonDivisibleError("coefficient not divisible")
            quotient[tuple(x - y for x, y in zip(exp, dexp))] = q
    else:
        lead_d = max(den, key=_term_key)
        lead_c = den[lead_d]
        rem = dict(num)
        while rem:
            lead_r = max(rem, key=_term_key)
            texp = tuple(x - y for x, y in zip(lead_r, lead_d))
            if any(e < 0 for e in texp):
                raise NonDivisibleError("no exact Laurent quotient")
            tcoeff, leftover = divmod(rem[lead_r], lead_c)
            if leftover:
                raise NonDivisibleError("no exact Laurent quotient")
            quotient[texp] = tcoeff
            for dexp, dcoeff in den.items():
                exp = tuple(x + y for x, y in zip(texp, dexp))
                s = rem.get(exp, 0) - tcoeff * dcoeff
                if s:
                    rem[exp] = s
                elif exp in rem:
                    del rem[exp]

    result = LaurentPolynomial._make(
        {tuple(x + y for x, y in zip(exp, back)): c for exp, c in quotient.items()},
        n_vars,
    )
    if lp_mul(result, b) != a:
        raise NonDivisibleError("no exact Laurent quotient")
    return result


def lp_eval_ones(p: LaurentPolynomial, drop: Iterable[int]) -> LaurentPolynomial:
    """Substitute x_i := 1 for each 0-based index in drop; those coordinates vanish."""
    dropset = set(drop)
    if not all(0 <= i < p.n_vars for i in dropset):
        raise InputError("substitution index out of range")
    keep = [i for i in range(p.n_vars) if i not in dropset]
    terms: dict[tuple[int, ...], int] = {}
    for exp, coeff in p.terms.items():
        key = tuple(exp[i] for i in keep)
        s = terms.get(key, 0) + coeff
        if s:
            terms[key] = s
        elif key in terms:
            del terms[key]
    return LaurentPolynomial._make(terms, len(keep))


def lp_const(c: int, n_vars: int) -> LaurentPolynomial:
    c = int(c)
    terms = {(0,) * n_vars: c} if c else {}
    return LaurentPolynomial._make(terms, n_vars)


def lp_var(i: int, n_vars: int) -> LaurentPolynomial:
    """The monomial x_{i+1} (0-based index i)."""
    if not 0 <= i < n_vars:
        raise InputError(f"variable index {i} out of range for {n_vars} variables")
    exp = tuple(1 if j == i else 0 for j in range(n_vars))
    return LaurentPolynomial._make({exp: 1}, n_vars)


def lp_monomial(exps: Iterable[int], coeff: int = 1) -> LaurentPolynomial:
    exps = tuple(int(e) for e in exps)
    coeff = int(coeff)
    terms = {exps: coeff} if coeff else {}
    return LaurentPolynomial._make(terms, len(exps))


# -- rendering / parsing ----------------------------------------------------

_TERM_RE = re.compile(
    r"""^\s*
        (?:
            (?P<coeff>[+-]?\d+)                              # coefficient ...
            (?P<vars1>(?:\s*\*\s*x\d+(?:\^-?\d+)?)*)         # ... then *-joined factors
          |
            (?P<vars2>x\d+(?:\^-?\d+)?(?:\s*\*\s*x\d+(?:\^-?\d+)?)*)  # factors only
        )
        \s*$""",
    re.VERBOSE,
)
_FACTOR_RE = re.compile(r"x(\d+)(?:\^(-?\d+))?")


def render_poly(p: LaurentPolynomial) -> str:
    """Render as e.g. ``3*x1^2*x2^-1 + 1`` with terms in descending graded-lex order."""
    if not p.terms:
        return "0"
    pieces: list[str] = []
    ordered = sorted(p.terms.items(), key=lambda t: _term_key(t[0]), reverse=True)
    for idx, (exp, coeff) in enumerate(ordered):
        factors = [
            f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
            for i, e in enumerate(exp)
            if e
        ]
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if idx == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(pieces)


def parse_poly(text: str, n_vars: int) -> LaurentPolynomial:
    """Parse the grammar produced by :func:`render_poly`."""
    s = text.strip()
    if not s:
        raise InputError("empty polynomial text")
    if s == "0":
        return lp_const(0, n_vars)
    # split at +/- signs that separate terms; signs directly after '^' or '*'
    # belong to an exponent or coefficient and stay inside the term
    chunks: list[tuple[int, str]] = []
    sign, buf, prev = 1, [], ""
    i = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    while i < len(s):
        ch = s[i]
        if ch in "+-" and buf and prev not in "^*":
            chunks.append((sign, "".join(buf)))
            sign, buf, prev = (-1 if ch == "-" else 1), [], ""
        else:
            buf.append(ch)
            if not ch.isspace():
                prev = ch
        i += 1
    chunks.append((sign, "".join(buf)))

    terms: dict[tuple[int, ...], int] = {}
    for sgn, chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or not chunk.strip():
            raise InputError(f"cannot parse term {chunk!r}")
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        exp = [0] * n_vars
        factors = (m.group("vars1") or "") + (m.group("vars2") or "")
        for var, power in _FACTOR_RE.findall(factors):
            idx = int(var) - 1
            if not 0 <= idx < n_vars:
                raise InputError(f"variable x{var} out of range for {n_vars} variables")
            exp[idx] += int(power) if power else 1
        key = tuple(exp)
        total = terms.get(key, 0) + sgn * coeff
        if total:
            terms[key] = total
        elif key in terms:
            del terms[key]
    return LaurentPolynomial._make(terms, n_vars)


# -- quadratic numbers and the tropical semifield ----------------------------


class QuadraticNumber:
    """Element p + q*sqrt(delta) of the real quadratic field Q(sqrt(delta)).

    Comparisons are exact: the sign of p + q*sqrt(delta) is decided by
    rational arithmetic alone.  delta = 0 degenerates to the rationals.
    """

    __slots__ = ("p", "q", "delta")

    def __init__(self, p, q=0, delta: int = 0):
        p = Fraction(p)
        q = Fraction(q)
        delta = int(delta)
        if delta < 0:
            raise InputError("delta must be nonnegative")
        if q == 0:
            delta = 0
        elif delta == 0:
            q = Fraction(0)
        else:
            root = _isqrt_exact(delta)
            if root is not None:
                p, q, delta = p + q * root, Fraction(0), 0
        self.p, self.q, self.delta = p, q, delta

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if self.delta and other.delta and self.delta != other.delta:
                raise InputError("mixed quadratic fields")
            return other
        return QuadraticNumber(other)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.p + o.p, self.q + o.q, self.delta or o.delta)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.p - o.p, self.q - o.q, self.delta or o.delta)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        delta = self.delta or o.delta
        return QuadraticNumber(
            self.p * o.p + self.q * o.q * delta,
            self.p * o.q + self.q * o.p,
            delta,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return QuadraticNumber(-self.p, -self.q, self.delta)

    def sign(self) -> int:
        if self.q == 0:
            return -1 if self.p < 0 else (1 if self.p > 0 else 0)
        if self.p == 0 or (self.p > 0) == (self.q > 0):
            return 1 if self.q > 0 else -1
        # p and q have opposite signs: compare p^2 against q^2 * delta
        lhs, rhs = self.p * self.p, self.q * self.q * self.delta
        if lhs == rhs:
            return 0
        bigger_is_root = rhs > lhs
        return (1 if self.q > 0 else -1) if bigger_is_root else (1 if self.p > 0 else -1)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - o).sign() == 0

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __hash__(self):
        return hash((self.p, self.q, self.delta))

    def __repr__(self):
        return f"QuadraticNumber({self.p}, {self.q}, {self.delta})"

    def __str__(self):
        if self.q == 0:
            return str(self.p.numerator) if self.p.denominator == 1 else str(self.p)
        p = str(self.p.numerator) if self.p.denominator == 1 else str(self.p)
        qmag = abs(self.q)
        q = str(qmag.numerator) if qmag.denominator == 1 else str(qmag)
        op = "+" if self.q > 0 else "-"
        return f"{p} {op} {q}*sqrt({self.delta})"


def _isqrt_exact(delta: int):
    """sqrt(delta) as an int when delta is a perfect square, else None."""
    if delta == 0:
        return 0
    r = int(delta ** 0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == delta:
            return cand
    return None


class TropicalMonomial:
    """Formal monomial u^r; addition is max of exponents, product adds them."""

    __slots__ = ("exponent",)

    def __init__(self, exponent: QuadraticNumber):
        self.exponent = exponent

    def __mul__(self, other: "TropicalMonomial") -> "TropicalMonomial":
        return TropicalMonomial(self.exponent + other.exponent)

    def __pow__(self, k: int) -> "TropicalMonomial":
        return TropicalMonomial(self.exponent * QuadraticNumber(k))

    def tropical_add(self, other: "TropicalMonomial") -> "TropicalMonomial":
        return TropicalMonomial(max(self.exponent, other.exponent))

    def __eq__(self, other):
        if not isinstance(other, TropicalMonomial):
            return NotImplemented
        return self.exponent == other.exponent

    def __hash__(self):
        return hash(("trop", self.exponent))

    def __repr__(self):
        return f"u^({self.exponent})"


def tropical_orbit(b: int, c: int, steps: int) -> list[TropicalMonomial]:
    """The first ``steps`` exponents of the rank-2 infinite-growth witness,
    in increasing order.

    Starting from the two seed values, each next exponent solves
    r[t-1] + r[t+1] = max(e_t * r[t], 0) with e_t alternating between c (even
    t) and b (odd t); since every exponent in the walk is positive the max
    never truncates and the recurrence is linear.  The walk itself zigzags
    between two strictly growing strands, so the witness sequence reported
    here is its set of distinct values, sorted ascending — an unbounded
    strictly increasing certificate.
    """
    b, c, steps = int(b), int(c), int(steps)
    if b < 1 or c < 1:
        raise InputError("b and c must be positive")
    if b * c <= 3:
        raise InputError("finite type; no witness")
    if steps < 1:
        return []
    if b * c == 4:
        r_prev = QuadraticNumber(1)
        r_cur = QuadraticNumber(b)
    else:
        delta = (b * c - 2) ** 2 - 4
        lam = QuadraticNumber(Fraction(b * c - 2, 2), Fraction(1, 2), delta)
        r_prev = QuadraticNumber(c, 0, delta)
        r_cur = lam + 1
    walk = [r_prev]
    t = 2
    while len(walk) < 2 * steps + 2:
        walk.append(r_cur)
        e = c if t % 2 == 0 else b
        r_prev, r_cur = r_cur, r_cur * QuadraticNumber(e) - r_prev
        t += 1
    walk.sort()
    orbit: list[TropicalMonomial] = []
    for r in walk:
        if not orbit or orbit[-1].exponent < r:
            orbit.append(TropicalMonomial(r))
        if len(orbit) == steps:
            break
    return orbit
