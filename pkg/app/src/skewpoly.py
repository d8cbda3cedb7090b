"""
Skew-commuting polynomial rings.

Elements of k<x1..xn>/(xi xj + xj xi) are kept in the normal form
x1^a1 x2^a2 (x3^a3) with every sign absorbed into the coefficient.
The grading puts every variable in degree 2.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, TypeAlias

from errors import NotInvariantError, RingMismatchError, SkewPolyParseError
from utils.linalg import nullspace

Monomial: TypeAlias = tuple[int, ...]
Scalar: TypeAlias = int | Fraction


def monomial_degree(m: Monomial) -> int:
    return 2 * sum(m)


def _monomial_mul(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    # moving x_j of b past x_i of a (i > j) costs one sign each
    swaps = 0
    for i in range(1, len(a)):
        if a[i]:
            swaps += a[i] * sum(b[:i])
    return (-1 if swaps % 2 else 1), tuple(x + y for x, y in zip(a, b))


class SkewPoly:
    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: dict[Monomial, Fraction] | None = None):
        self.n = n
        self.terms: dict[Monomial, Fraction] = {}
        self._hash: int | None = None
        for m, c in (terms or {}).items():
            if len(m) != n:
                raise RingMismatchError(f"monomial {m} does not have {n} exponents")
            if c:
                self.terms[m] = Fraction(c)

    # ---------------------------------- Constructors ---------------------------------- #

    @classmethod
    def zero(cls, n: int):
        return cls(n)

    @classmethod
    def const(cls, n: int, c: Scalar = 1):
        return cls(n, {(0,) * n: Fraction(c)})

    @classmethod
    def var(cls, n: int, i: int):
        if not 1 <= i <= n:
            raise RingMismatchError(f"x{i} is not a variable of a ring with {n} variables")
        return cls(n, {tuple(1 if j == i - 1 else 0 for j in range(n)): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Iterable[int], c: Scalar = 1):
        m = tuple(exponents)
        return cls(len(m), {m: Fraction(c)})

    @classmethod
    def parse(cls, text: str, n: int = 2):
        return parse_poly(text, n)

    # ---------------------------------- Queries ---------------------------------- #

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def homogeneous_degree(self) -> int | None:
        """
        Single degree of a homogeneous element, None if the element mixes degrees.
        The zero element counts as homogeneous of every degree and reports None as well.
        """
        degrees = {monomial_degree(m) for m in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_homogeneous_of(self, d: int):
        return all(monomial_degree(m) == d for m in self.terms)

    def leading(self) -> tuple[Monomial, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def components(self) -> dict[int, "SkewPoly"]:
        out: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            out.setdefault(monomial_degree(m), {})[m] = c
        return {d: SkewPoly(self.n, t) for d, t in out.items()}

    # ---------------------------------- Arithmetic ---------------------------------- #

    def _check(self, other: "SkewPoly"):
        if self.n != other.n:
            raise RingMismatchError(f"cannot combine elements of rings with {self.n} and {other.n} variables")

    def _coerce(self, other) -> "SkewPoly":
        if isinstance(other, SkewPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SkewPoly.const(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return SkewPoly(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return SkewPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar):
        c = Fraction(c)
        if not c:
            return SkewPoly(self.n)
        return SkewPoly(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = SkewPoly.const(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SkewPoly.const(self.n, other)
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"SkewPoly({self})"

    def __str__(self):
        return format_terms(self.terms, lambda m: _monomial_text(m, "x"))


def mul(p: SkewPoly, q: SkewPoly) -> SkewPoly:
    p._check(q)
    terms: dict[Monomial, Fraction] = {}
    for a, ca in p.terms.items():
        for b, cb in q.terms.items():
            sign, m = _monomial_mul(a, b)
            terms[m] = terms.get(m, 0) + sign * ca * cb
    return SkewPoly(p.n, terms)


def x(i: int, n: int = 2):
    return SkewPoly.var(n, i)


def one(n: int = 2):
    return SkewPoly.const(n)


def zero(n: int = 2):
    return SkewPoly.zero(n)


# ---------------------------------- Transpositions and Demazure operators ---------------------------------- #


def _check_index(i: int, n: int):
    if not 1 <= i < n:
        raise RingMismatchError(f"s{i} is not a simple transposition for {n} variables")


@lru_cache(maxsize=None)
def _act_monomial(i: int, m: Monomial) -> SkewPoly:
    n = len(m)
    out = SkewPoly.const(n, -1 if sum(m) % 2 else 1)
    for j, e in enumerate(m, start=1):
        target = i + 1 if j == i else i if j == i + 1 else j
        for _ in range(e):
            out = out * SkewPoly.var(n, target)
    return out


def act_s(i: int, p: SkewPoly) -> SkewPoly:
    """s_i(x_j) = -x_{s_i(j)}, extended multiplicatively."""
    _check_index(i, p.n)
    out = SkewPoly.zero(p.n)
    for m, c in p.terms.items():
        out = out + _act_monomial(i, m).scale(c)
    return out


@lru_cache(maxsize=None)
def _demazure_monomial(i: int, m: Monomial) -> SkewPoly:
    n = len(m)
    if not any(m):
        return SkewPoly.zero(n)
    # m = x_j * rest with no sign, j being the first variable present
    j = next(k for k, e in enumerate(m) if e)
    rest = tuple(e - 1 if k == j else e for k, e in enumerate(m))
    out = _demazure_monomial(i, rest)
    out = act_s(i, SkewPoly.var(n, j + 1)) * out
    if j + 1 in (i, i + 1):
        out = out + SkewPoly.monomial(rest)
    return out


def demazure(i: int, p: SkewPoly) -> SkewPoly:
    """Odd Demazure operator: d(x_i) = d(x_{i+1}) = 1 and d(fg) = d(f)g + s(f)d(g)."""
    _check_index(i, p.n)
    out = SkewPoly.zero(p.n)
    for m, c in p.terms.items():
        out = out + _demazure_monomial(i, m).scale(c)
    return out


def is_invariant(i: int, p: SkewPoly) -> bool:
    return demazure(i, p).is_zero()


def left_decompose(p: SkewPoly, basis_var: int, i: int = 1) -> tuple[SkewPoly, SkewPoly]:
    """p = c0 + c1 * x_v with c0, c1 invariant under the i-th Demazure operator."""
    if basis_var not in (i, i + 1):
        raise RingMismatchError(f"x{basis_var} is not a basis variable over the s{i}-invariants")
    c1 = act_s(i, demazure(i, p))
    c0 = p - c1 * SkewPoly.var(p.n, basis_var)
    return c0, c1


def right_decompose(p: SkewPoly, basis_var: int, i: int = 1) -> tuple[SkewPoly, SkewPoly]:
    """p = e0 + x_v * e1 with e0, e1 invariant; for v = i+1 this is e1 = dp, e0 = p - x_v dp."""
    if basis_var not in (i, i + 1):
        raise RingMismatchError(f"x{basis_var} is not a basis variable over the s{i}-invariants")
    e1 = demazure(i, p)
    e0 = p - SkewPoly.var(p.n, basis_var) * e1
    return e0, e1


# ---------------------------------- Rings ---------------------------------- #


def monomials(n: int, d: int) -> list[Monomial]:
    """Monomials of degree d in lexicographic order, x1 first."""
    if d % 2:
        raise ValueError(f"degree {d} is odd, slices of the polynomial ring live in even degrees")
    if d < 0:
        return []
    total = d // 2
    out = [m for m in product(range(total + 1), repeat=n) if sum(m) == total]
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class Ring:
    """
    A graded ring inside the skew polynomial ring with n variables: the whole ring,
    or the common kernel of the Demazure operators listed in `fixed`.
    """

    name: str
    n: int
    fixed: tuple[int, ...] = ()
    # generators (as ordered words) with the exponent map lead-monomial -> generator exponents
    gens: tuple[SkewPoly, ...] = field(default=(), compare=False, repr=False)
    split_lead: Callable[[Monomial], tuple[int, ...] | None] | None = field(default=None, compare=False, repr=False)

    def __str__(self):
        return self.name

    def generators(self) -> tuple[SkewPoly, ...]:
        if not self.fixed:
            return tuple(SkewPoly.var(self.n, i) for i in range(1, self.n + 1))
        if not self.gens:
            raise RingMismatchError(f"{self.name} has no generating set, only degreewise slices")
        return self.gens

    def contains(self, p: SkewPoly) -> bool:
        return p.n == self.n and all(is_invariant(i, p) for i in self.fixed)

    def coordinates(self, p: SkewPoly) -> dict[tuple[int, ...], Fraction]:
        """
        p as a combination of ordered generator products g1^k1 g2^k2 ...
        For the full ring these are just the monomials.
        """
        if p.n != self.n:
            raise RingMismatchError(f"element of a ring with {p.n} variables is not in {self.name}")
        if not self.fixed:
            return dict(p.terms)
        if self.split_lead is None:
            raise RingMismatchError(f"{self.name} has no generating set, only degreewise slices")
        out: dict[tuple[int, ...], Fraction] = {}
        rest = p
        while rest:
            lead, c = rest.leading()
            k = self.split_lead(lead)
            if k is None or any(e < 0 for e in k):
                raise NotInvariantError(f"{p} is not an element of {self.name}")
            basis = self.word(k)
            _, bc = basis.leading()
            out[k] = out.get(k, 0) + c / bc
            rest = rest - basis.scale(c / bc)
        return out

    def word(self, k: tuple[int, ...]) -> SkewPoly:
        return _generator_word(self, k)

    def slice(self, d: int) -> list[SkewPoly]:
        return degree_slice(self, d)


@lru_cache(maxsize=None)
def _generator_word(ring: Ring, k: tuple[int, ...]) -> SkewPoly:
    out = SkewPoly.const(ring.n)
    for g, e in zip(ring.generators(), k):
        for _ in range(e):
            out = out * g
    return out


def _x(i: int, n: int):
    return SkewPoly.var(n, i)


E1 = _x(1, 2) - _x(2, 2)
E2 = _x(1, 2) * _x(2, 2)

R = Ring("R", 2)
RS = Ring("R^s", 2, (1,), (E1, E2), lambda e: (e[0] - e[1], e[1]))
R3 = Ring("R3", 3)
R3_1 = Ring(
    "R^1",
    3,
    (1,),
    (_x(1, 3) - _x(2, 3), _x(1, 3) * _x(2, 3), _x(3, 3)),
    lambda e: (e[0] - e[1], e[1], e[2]),
)
R3_2 = Ring(
    "R^2",
    3,
    (2,),
    (_x(1, 3), _x(2, 3) - _x(3, 3), _x(2, 3) * _x(3, 3)),
    lambda e: (e[0], e[1] - e[2], e[2]),
)
R3_12 = Ring("R^[2]", 3, (1, 2))

RINGS = {r.name: r for r in (R, RS, R3, R3_1, R3_2, R3_12)}


@lru_cache(maxsize=None)
def _slice(ring: Ring, d: int) -> tuple[SkewPoly, ...]:
    if not ring.fixed:
        return tuple(SkewPoly.monomial(m) for m in monomials(ring.n, d))
    if ring.split_lead is not None:
        k = len(ring.generators())
        leads = [g.leading()[0] for g in ring.generators()]
        words = []
        for m in monomials(ring.n, d):
            ks = ring.split_lead(m)
            if ks is None or any(e < 0 for e in ks) or len(ks) != k:
                continue
            if tuple(sum(kj * L[t] for kj, L in zip(ks, leads)) for t in range(ring.n)) == m:
                words.append(ring.word(ks))
        return tuple(words)

    basis = monomials(ring.n, d)
    index = {m: j for j, m in enumerate(basis)}
    rows: list[dict[int, Fraction]] = []
    for i in ring.fixed:
        image = monomials(ring.n, d - 2) if d >= 2 else []
        image_index = {m: j for j, m in enumerate(image)}
        for m in image:
            rows.append({})
        offset = len(rows) - len(image)
        for m in basis:
            for t, c in _demazure_monomial(i, m).terms.items():
                rows[offset + image_index[t]][index[m]] = c
    vectors = nullspace(rows, len(basis))
    return tuple(SkewPoly(ring.n, {basis[j]: c for j, c in v.items()}) for v in vectors)


def degree_slice(ring: Ring, d: int) -> list[SkewPoly]:
    """A basis of the degree-d piece of `ring`; empty for negative d."""
    if d % 2:
        raise ValueError(f"degree {d} is odd, slices of {ring.name} live in even degrees")
    if d < 0:
        return []
    return list(_slice(ring, d))


# ---------------------------------- R^s normal form ---------------------------------- #


class EExpression:
    """Sum of c * E1^a E2^b with E1 = x1 - x2 and E2 = x1x2."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    def expand(self) -> SkewPoly:
        out = SkewPoly.zero(2)
        for k, c in self.terms.items():
            out = out + RS.word(k).scale(c)
        return out

    @classmethod
    def parse(cls, text: str):
        return rs_normal_form(parse_poly(text, 2))

    def __eq__(self, other):
        if not isinstance(other, EExpression):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"EExpression({self})"

    def __str__(self):
        return format_terms(self.terms, lambda k: _monomial_text(k, "E"))


def rs_normal_form(p: SkewPoly) -> EExpression:
    if p.n != 2:
        raise RingMismatchError("the E1/E2 normal form is defined for two variables")
    return EExpression(RS.coordinates(p))


# ---------------------------------- Text ---------------------------------- #


def _monomial_text(m: tuple[int, ...], letter: str) -> str:
    parts = []
    for i, e in enumerate(m, start=1):
        if e == 1:
            parts.append(f"{letter}{i}")
        elif e > 1:
            parts.append(f"{letter}{i}^{e}")
    return "*".join(parts)


def format_terms(terms: dict, text: Callable[[tuple[int, ...]], str]) -> str:
    if not terms:
        return "0"
    out = ""
    for k in sorted(terms, key=lambda k: (-sum(k), tuple(-e for e in k))):
        c = terms[k]
        body = text(k)
        mag = abs(c)
        if not body:
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag}*{body}"
        if not out:
            out = piece if c > 0 else f"-{piece}"
        else:
            out += f" + {piece}" if c > 0 else f" - {piece}"
    return out


_TOKEN = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^(x|E)(\d+)(?:\^(\d+))?$")


def _iter_terms(text: str) -> Iterator[tuple[int, str]]:
    text = text.strip()
    if not text:
        raise SkewPolyParseError("empty expression")
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise SkewPolyParseError(f"cannot parse {text!r} at position {pos}")
        if pos and not match.group(1):
            raise SkewPolyParseError(f"missing operator in {text!r} at position {pos}")
        yield (-1 if match.group(1) == "-" else 1), match.group(2).strip()
        pos = match.end()


def parse_poly(text: str, n: int = 2) -> SkewPoly:
    """Parse terms like `-3*x1^2*x2` or `1/2*E1*E2`; factors multiply in the written order."""
    out = SkewPoly.zero(n)
    for sign, body in _iter_terms(text):
        term = SkewPoly.const(n, sign)
        for factor in body.split("*"):
            factor = factor.strip()
            if re.fullmatch(r"\d+(/\d+)?", factor):
                term = term.scale(Fraction(factor))
                continue
            match = _FACTOR.match(factor)
            if not match:
                raise SkewPolyParseError(f"unknown factor {factor!r}")
            letter, index, power = match.group(1), int(match.group(2)), int(match.group(3) or 1)
            if letter == "x":
                if not 1 <= index <= n:
                    raise SkewPolyParseError(f"x{index} is not a variable of a ring with {n} variables")
                base = SkewPoly.var(n, index)
            else:
                if n != 2 or index not in (1, 2):
                    raise SkewPolyParseError(f"E{index} is only defined for two variables")
                base = E1 if index == 1 else E2
            term = term * base**power
        out = out + term
    return out
