"""
Graded bimodules over pairs of skew polynomial rings.

A bimodule is free as a left module; it is stored as a left basis with degrees
plus, for every generator of the right ring, the matrix expressing
basis_element * generator as a left combination of basis elements.
Morphism matrices act row-wise on the source basis:
phi(src_a) = sum_b matrix[a][b] * tgt_b.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from multiprocessing.pool import ThreadPool
from typing import Callable, Sequence, TypeAlias

from errors import MorphismError, NotIdempotentError, RingMismatchError
from models import BimoduleDocument, GradedDimSeries, MorphismDocument, MorphismReport, Witness
from skewpoly import R, R3, R3_1, R3_2, RS, Ring, SkewPoly, act_s, left_decompose, monomial_degree
from utils.config import MAX_WORKERS, get_logger
from utils.linalg import Row, nullspace, rank, solve

logger = get_logger("bimod")

Vec: TypeAlias = dict[int, SkewPoly]
Mat: TypeAlias = list[dict[int, SkewPoly]]


# ---------------------------------- Matrices over the skew ring ---------------------------------- #


def vec_add(u: Vec, v: Vec, c: Fraction | int = 1) -> Vec:
    out = dict(u)
    for j, p in v.items():
        q = out[j] + p.scale(c) if j in out else p.scale(c)
        if q:
            out[j] = q
        else:
            out.pop(j, None)
    return out


def vec_lmul(f: SkewPoly, v: Vec) -> Vec:
    out = {}
    for j, p in v.items():
        q = f * p
        if q:
            out[j] = q
    return out


def vec_scale(v: Vec, c: Fraction | int) -> Vec:
    if not c:
        return {}
    return {j: p.scale(c) for j, p in v.items()}


def vec_ratio(u: Vec, v: Vec) -> Fraction | None:
    """c with u = c*v for a nonzero v, None when u is not such a multiple."""
    if not v or set(u) != set(v):
        return None
    k = min(v)
    m, lead = v[k].leading()
    c = u[k].terms.get(m, Fraction(0)) / lead
    if c and all(u[j] == p.scale(c) for j, p in v.items()):
        return c
    return None


def mat_mul(a: Mat, b: Mat) -> Mat:
    out: Mat = []
    for row in a:
        acc: Vec = {}
        for k, p in row.items():
            acc = vec_add(acc, vec_lmul(p, b[k]))
        out.append(acc)
    return out


def mat_add(a: Mat, b: Mat, c: Fraction | int = 1) -> Mat:
    return [vec_add(u, v, c) for u, v in zip(a, b)]


def mat_identity(size: int, n: int) -> Mat:
    return [{i: SkewPoly.const(n)} for i in range(size)]


def mat_is_zero(a: Mat) -> bool:
    return all(not row for row in a)


# ---------------------------------- Objects ---------------------------------- #


@dataclass(frozen=True)
class BaseTag:
    name: str
    left: Ring
    right: Ring
    labels: tuple[str, ...]
    elements: tuple[SkewPoly, ...]
    index: int = 1


UNIT_TAGS = ("UnitR", "UnitRs", "UnitR3", "UnitR3_1", "UnitR3_2")


class BimoduleObj:
    """
    Free graded bimodule.

    `word` is the flattened sequence of base tags for tensor words, None for
    direct sums and split summands. `entries` gives for every basis element of
    a word the ring element sitting in each tensor factor.
    """

    def __init__(
        self,
        left: Ring,
        right: Ring,
        labels: Sequence[str],
        degrees: Sequence[int],
        actions: Sequence[Mat],
        shift: int = 0,
        word: tuple[str, ...] | None = None,
        entries: Sequence[tuple[SkewPoly, ...]] | None = None,
        name: str | None = None,
    ):
        self.left = left
        self.right = right
        self.labels = tuple(labels)
        self.base_degrees = tuple(degrees)
        self.actions = tuple(actions)
        self.shift = shift
        self.word = word
        self.entries = tuple(entries) if entries is not None else None
        self.name = name or ("*".join(word) if word else "M")
        self._words: dict[tuple[int, ...], Mat] = {}

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        suffix = f"{{{self.shift}}}" if self.shift else ""
        return f"BimoduleObj({self.name}{suffix}, rank={len(self)})"

    @property
    def n(self) -> int:
        return self.left.n

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d + self.shift for d in self.base_degrees)

    def degree(self, a: int) -> int:
        return self.base_degrees[a] + self.shift

    def is_unit(self):
        return self.word is not None and len(self.word) == 1 and self.word[0] in UNIT_TAGS

    # ---------------------------------- Right action ---------------------------------- #

    def action(self, g: int) -> Mat:
        return self.actions[g]

    def _word_matrix(self, k: tuple[int, ...]) -> Mat:
        cached = self._words.get(k)
        if cached is not None:
            return cached
        if not any(k):
            out = mat_identity(len(self), self.n)
        else:
            g = max(j for j, e in enumerate(k) if e)
            prev = tuple(e - 1 if j == g else e for j, e in enumerate(k))
            out = mat_mul(self._word_matrix(prev), self.actions[g])
        self._words[k] = out
        return out

    def right_matrix(self, a: SkewPoly) -> Mat:
        """Matrix of right multiplication by an arbitrary element of the right ring."""
        out: Mat = [{} for _ in range(len(self))]
        for k, c in self.right.coordinates(a).items():
            out = mat_add(out, self._word_matrix(k), c)
        return out

    def act_right(self, v: Vec, a: SkewPoly) -> Vec:
        if not v or not a:
            return {}
        rho = self.right_matrix(a)
        out: Vec = {}
        for i, f in v.items():
            out = vec_add(out, vec_lmul(f, rho[i]))
        return out

    def element(self, *entries: SkewPoly) -> Vec:
        """The pure tensor with the given ring element in each factor of the word."""
        if self.word is None:
            raise MorphismError(f"{self.name} is not a tensor word, pure tensors are undefined")
        if len(entries) != len(self.word):
            raise MorphismError(f"{self.name} has {len(self.word)} factors, got {len(entries)} entries")
        prefix = base(self.word[0])
        v = _base_element(prefix, entries[0])
        for tag, e in zip(self.word[1:], entries[1:]):
            factor = base(tag)
            w = _base_element(factor, e)
            out: Vec = {}
            size = len(factor)
            for d, coeff in w.items():
                for b, p in prefix.act_right(v, coeff).items():
                    out[b * size + d] = p
            v = out
            prefix = _word_object(prefix.word + (tag,))
        return v

    # ---------------------------------- Structure ---------------------------------- #

    def same_as(self, other: "BimoduleObj") -> bool:
        return (
            self.left == other.left
            and self.right == other.right
            and self.degrees == other.degrees
            and all(a == b for a, b in zip(self.actions, other.actions))
        )

    def graded_dims(self, d_min: int, d_max: int) -> dict[int, int]:
        out = {}
        for d in range(d_min, d_max + 1):
            total = 0
            for deg in self.degrees:
                e = d - deg
                if e >= 0 and e % 2 == 0:
                    total += len(self.left.slice(e))
            out[d] = total
        return out

    def anticommutation_defects(self) -> list[tuple[int, int]]:
        """Pairs of right generators whose matrices fail the skew relation; only rings with two variables."""
        if self.n != 2:
            return []
        bad = []
        for g, h in [(0, 1)]:
            gh = mat_mul(self.actions[g], self.actions[h])
            hg = mat_mul(self.actions[h], self.actions[g])
            if not mat_is_zero(mat_add(gh, hg)):
                bad.append((g, h))
        return bad

    def to_document(self) -> BimoduleDocument:
        return BimoduleDocument(
            name=self.name,
            left=self.left.name,
            right=self.right.name,
            shift=self.shift,
            labels=list(self.labels),
            degrees=list(self.degrees),
            actions=[_matrix_text(m, len(self)) for m in self.actions],
        )


def _matrix_text(m: Mat, size: int) -> list[list[str]]:
    return [[str(row.get(j, "0")) for j in range(size)] for row in m]


# ---------------------------------- Base objects ---------------------------------- #


def _invariant_ring(n: int, i: int) -> Ring:
    if n == 2:
        return RS
    return R3_1 if i == 1 else R3_2


def _full_ring(n: int) -> Ring:
    return R if n == 2 else R3


@lru_cache(maxsize=None)
def base_tag(tag: str) -> BaseTag:
    """
    Base tags: UnitR, UnitRs, Ind, Res, U, Us on two variables; Ind1, Res1, U1,
    Ind2, Res2, U2, UnitR3, UnitR3_1, UnitR3_2 on three variables.
    """
    n, i, kind = 2, 1, tag
    if tag in ("UnitR3", "UnitR3_1", "UnitR3_2"):
        n, kind = 3, tag
    elif tag[-1].isdigit() and tag[:-1] in ("Ind", "Res", "U"):
        n, i, kind = 3, int(tag[-1]), tag[:-1]
    full, inv = _full_ring(n), _invariant_ring(n, i)
    one = SkewPoly.const(n)
    match kind:
        case "UnitR" | "UnitR3":
            return BaseTag(tag, full, full, ("1",), (one,))
        case "UnitRs" | "UnitR3_1" | "UnitR3_2":
            ring = RS if kind == "UnitRs" else (R3_1 if kind == "UnitR3_1" else R3_2)
            return BaseTag(tag, ring, ring, ("1",), (one,))
        case "Ind":
            return BaseTag(tag, full, inv, ("1",), (one,), i)
        case "Res":
            return BaseTag(tag, inv, full, ("1", f"x{i}"), (one, SkewPoly.var(n, i)), i)
        case "U":
            return BaseTag(tag, full, full, ("u",), (one,), i)
        case "Us":
            return BaseTag(tag, inv, inv, ("us",), (one,), i)
    raise RingMismatchError(f"unknown base bimodule {tag!r}")


@lru_cache(maxsize=None)
def base(tag: str) -> BimoduleObj:
    t = base_tag(tag)
    kind = tag.rstrip("0123456789") if tag not in UNIT_TAGS else "Unit"
    actions: list[Mat] = []
    for g in t.right.generators():
        match kind:
            case "Unit" | "Ind":
                rows = [{0: g}]
            case "Res":
                rows = []
                for e in t.elements:
                    c0, c1 = left_decompose(e * g, t.index, t.index)
                    rows.append({j: c for j, c in enumerate((c0, c1)) if c})
            case "U" | "Us":
                rows = [{0: act_s(t.index, g)}]
        actions.append(rows)
    degrees = [monomial_degree(e.leading()[0]) for e in t.elements]
    return BimoduleObj(t.left, t.right, t.labels, degrees, actions, 0, (tag,), [(e,) for e in t.elements], tag)


def _base_element(obj: BimoduleObj, e: SkewPoly) -> Vec:
    tag = obj.word[0]
    if tag.rstrip("0123456789") == "Res":
        t = base_tag(tag)
        c0, c1 = left_decompose(e, t.index, t.index)
        return {j: c for j, c in enumerate((c0, c1)) if c}
    if not obj.left.contains(e):
        raise RingMismatchError(f"{e} is not in {obj.left.name}, cannot sit in a {tag} factor")
    return {0: e} if e else {}


@lru_cache(maxsize=None)
def _word_object(word: tuple[str, ...]) -> BimoduleObj:
    out = base(word[0])
    for tag in word[1:]:
        out = tensor(out, base(tag))
    return out


def word(*tags: str, shift: int = 0, name: str | None = None) -> BimoduleObj:
    obj = _word_object(tuple(tags))
    return BimoduleObj(obj.left, obj.right, obj.labels, obj.base_degrees, obj.actions, shift, obj.word, obj.entries, name)


# ---------------------------------- Constructions ---------------------------------- #


def shift(M: BimoduleObj, n: int) -> BimoduleObj:
    if n == 0:
        return M
    return BimoduleObj(M.left, M.right, M.labels, M.base_degrees, M.actions, M.shift + n, M.word, M.entries, M.name)


def renamed(M: BimoduleObj, name: str) -> BimoduleObj:
    return BimoduleObj(M.left, M.right, M.labels, M.base_degrees, M.actions, M.shift, M.word, M.entries, name)


def tensor(M: BimoduleObj, N: BimoduleObj) -> BimoduleObj:
    """M (x) N over the middle ring; the unit bimodules are strict units."""
    if M.right != N.left:
        raise RingMismatchError(f"cannot tensor {M.name} (right {M.right}) with {N.name} (left {N.left})")
    if M.is_unit():
        return shift(N, M.shift)
    if N.is_unit():
        return shift(M, N.shift)
    size = len(N)
    actions: list[Mat] = []
    for g in range(len(N.right.generators())):
        rows: Mat = [{} for _ in range(len(M) * size)]
        for c, row in enumerate(N.action(g)):
            for d, p in row.items():
                pushed = M.right_matrix(p)
                for a, prow in enumerate(pushed):
                    target = rows[a * size + c]
                    for b, q in prow.items():
                        target[b * size + d] = q
        actions.append(rows)
    labels = [f"{a}⊗{b}" for a, b in product(M.labels, N.labels)]
    degrees = [a + b for a, b in product(M.base_degrees, N.base_degrees)]
    words = M.word + N.word if M.word is not None and N.word is not None else None
    entries = (
        [a + b for a, b in product(M.entries, N.entries)] if M.entries is not None and N.entries is not None else None
    )
    name = f"{M.name}*{N.name}"
    return BimoduleObj(M.left, N.right, labels, degrees, actions, M.shift + N.shift, words, entries, name)


def direct_sum(Ms: Sequence[BimoduleObj]) -> BimoduleObj:
    if not Ms:
        raise MorphismError("direct sum of nothing")
    left, right = Ms[0].left, Ms[0].right
    if any(M.left != left or M.right != right for M in Ms):
        raise RingMismatchError("direct summands live over different rings")
    labels, degrees, offsets = [], [], []
    for k, M in enumerate(Ms):
        offsets.append(len(labels))
        labels.extend(f"{k}:{a}" for a in M.labels)
        degrees.extend(M.degrees)
    actions = []
    for g in range(len(right.generators())):
        rows: Mat = []
        for M, off in zip(Ms, offsets):
            rows.extend({b + off: p for b, p in row.items()} for row in M.action(g))
        actions.append(rows)
    return BimoduleObj(left, right, labels, degrees, actions, 0, None, None, "+".join(M.name for M in Ms))


# ---------------------------------- Morphisms ---------------------------------- #


class Morphism:
    def __init__(self, source: BimoduleObj, target: BimoduleObj, degree: int, matrix: Mat, name: str = ""):
        if source.left != target.left:
            raise RingMismatchError(f"{source.name} and {target.name} have different left rings")
        if len(matrix) != len(source):
            raise MorphismError(f"matrix has {len(matrix)} rows, source has rank {len(source)}")
        self.source = source
        self.target = target
        self.degree = degree
        self.matrix: Mat = [{j: p for j, p in row.items() if p} for row in matrix]
        self.name = name

    def __repr__(self):
        return f"Morphism({self.name or '?'}: {self.source.name} -> {self.target.name}, deg {self.degree})"

    @classmethod
    def identity(cls, M: BimoduleObj):
        return cls(M, M, 0, mat_identity(len(M), M.n), f"id_{M.name}")

    @classmethod
    def zero(cls, source: BimoduleObj, target: BimoduleObj, degree: int = 0):
        return cls(source, target, degree, [{} for _ in range(len(source))], "0")

    @classmethod
    def from_rule(
        cls,
        source: BimoduleObj,
        target: BimoduleObj,
        degree: int,
        rule: Callable[..., Vec],
        name: str = "",
    ):
        """Build a map from its value on the pure tensor of every source basis element."""
        if source.entries is None:
            raise MorphismError(f"{source.name} has no pure tensor basis")
        return cls(source, target, degree, [rule(*e) for e in source.entries], name)

    def row(self, a: int) -> Vec:
        return self.matrix[a]

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for a, f in v.items():
            out = vec_add(out, vec_lmul(f, self.matrix[a]))
        return out

    def is_zero(self):
        return mat_is_zero(self.matrix)

    def _same_shape(self, other: "Morphism"):
        if len(self.source) != len(other.source) or len(self.target) != len(other.target):
            raise MorphismError(f"{self!r} and {other!r} have different shapes")

    def __add__(self, other: "Morphism"):
        self._same_shape(other)
        return Morphism(self.source, self.target, self.degree, mat_add(self.matrix, other.matrix), self.name)

    def __sub__(self, other: "Morphism"):
        self._same_shape(other)
        return Morphism(self.source, self.target, self.degree, mat_add(self.matrix, other.matrix, -1), self.name)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: Fraction | int):
        return Morphism(self.source, self.target, self.degree, [vec_scale(r, c) for r in self.matrix], self.name)

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            len(self.source) == len(other.source)
            and len(self.target) == len(other.target)
            and all(a == b for a, b in zip(self.matrix, other.matrix))
        )

    __hash__ = None  # type: ignore

    def renamed(self, name: str) -> "Morphism":
        return Morphism(self.source, self.target, self.degree, self.matrix, name)

    def with_shifts(self, source: int = 0, target: int = 0) -> "Morphism":
        """Same matrix between shifted objects; the degree absorbs the difference."""
        return Morphism(
            shift(self.source, source), shift(self.target, target), self.degree + target - source, self.matrix, self.name
        )

    def between(self, source: BimoduleObj, target: BimoduleObj) -> "Morphism":
        """Same matrix, reinterpreted between objects with identical structure up to shift."""
        if len(source) != len(self.source) or len(target) != len(self.target):
            raise MorphismError(f"cannot move {self!r} onto {source.name} -> {target.name}")
        src_shift = source.degrees[0] - self.source.degrees[0] if len(source) else 0
        tgt_shift = target.degrees[0] - self.target.degrees[0] if len(target) else 0
        return Morphism(source, target, self.degree + tgt_shift - src_shift, self.matrix, self.name)

    def scalar(self) -> Fraction | None:
        """c when the matrix is c times the identity, None otherwise."""
        if len(self.source) != len(self.target):
            return None
        c = self.matrix[0].get(0).constant_term() if self.matrix and self.matrix[0].get(0) else Fraction(0)
        expected = mat_identity(len(self.source), self.source.n)
        if all(row == vec_scale(e, c) for row, e in zip(self.matrix, expected)):
            return c
        return None

    def to_document(self) -> MorphismDocument:
        return MorphismDocument(
            name=self.name,
            source=self.source.to_document(),
            target=self.target.to_document(),
            degree=self.degree,
            matrix=[[str(row.get(j, "0")) for j in range(len(self.target))] for row in self.matrix],
        )


def compose(first: Morphism, second: Morphism) -> Morphism:
    """second o first."""
    if len(first.target) != len(second.source) or first.target.degrees != second.source.degrees:
        raise MorphismError(f"cannot compose {first!r} with {second!r}")
    name = f"{second.name}∘{first.name}" if first.name and second.name else ""
    return Morphism(first.source, second.target, first.degree + second.degree, mat_mul(first.matrix, second.matrix), name)


def chain(*maps: Morphism) -> Morphism:
    out = maps[0]
    for m in maps[1:]:
        out = compose(out, m)
    return out


def tensor_elements(M: BimoduleObj, N: BimoduleObj, u: Vec, w: Vec) -> Vec:
    """u (x) w in M (x) N, pushing the left coefficients of w into M."""
    if M.is_unit():
        f = u.get(0)
        return vec_lmul(f, w) if f else {}
    if N.is_unit():
        f = w.get(0)
        return M.act_right(u, f) if f else {}
    size = len(N)
    out: Vec = {}
    for d, coeff in w.items():
        for b, p in M.act_right(u, coeff).items():
            out[b * size + d] = p
    return out


def tensor_morphisms(phi: Morphism, psi: Morphism) -> Morphism:
    source = tensor(phi.source, psi.source)
    target = tensor(phi.target, psi.target)
    rows: Mat = []
    for a in range(len(phi.source)):
        for c in range(len(psi.source)):
            rows.append(tensor_elements(phi.target, psi.target, phi.row(a), psi.row(c)))
    name = f"{phi.name}⊗{psi.name}" if phi.name and psi.name else ""
    return Morphism(source, target, phi.degree + psi.degree, rows, name)


def whisker(left: BimoduleObj | None, phi: Morphism, right: BimoduleObj | None = None) -> Morphism:
    """id_left (x) phi (x) id_right."""
    out = phi
    if left is not None:
        out = tensor_morphisms(Morphism.identity(left), out)
    if right is not None:
        out = tensor_morphisms(out, Morphism.identity(right))
    return out


# ---------------------------------- Verification ---------------------------------- #


def verify_morphism(phi: Morphism) -> MorphismReport:
    S, T = phi.source, phi.target
    for a, row in enumerate(phi.matrix):
        for b, p in row.items():
            expected = phi.degree + S.degree(a) - T.degree(b)
            if not p.is_homogeneous_of(expected):
                return MorphismReport(
                    name=phi.name,
                    passed=False,
                    reason="inhomogeneous entry",
                    witness=Witness(generator=None, row=a, column=b, left=str(p), right=f"degree {expected}"),
                )
    if S.right != T.right:
        return MorphismReport(name=phi.name, passed=False, reason="different right rings")
    names = [str(g) for g in S.right.generators()]
    for g in range(len(names)):
        lhs = mat_mul(S.action(g), phi.matrix)
        rhs = mat_mul(phi.matrix, T.action(g))
        for a, (u, v) in enumerate(zip(lhs, rhs)):
            if u != v:
                b = min(set(u) ^ set(v) | {k for k in u if k in v and u[k] != v[k]})
                return MorphismReport(
                    name=phi.name,
                    passed=False,
                    reason="does not commute with the right action",
                    witness=Witness(
                        generator=names[g], row=a, column=b, left=str(u.get(b, 0)), right=str(v.get(b, 0))
                    ),
                )
    return MorphismReport(name=phi.name, passed=True)


# ---------------------------------- Hom spaces ---------------------------------- #


def _check_hom_rings(M: BimoduleObj, N: BimoduleObj):
    if M.left != N.left or M.right != N.right:
        raise RingMismatchError(f"{M.name} and {N.name} are bimodules over different rings")


def _solve_maps(M: BimoduleObj, N: BimoduleObj, slots: dict[int, list[tuple[int, int, SkewPoly]]], count: int):
    """Nullspace of the intertwining equations for maps whose entries are spanned by `slots`."""
    equations: dict[tuple, Row] = {}

    def add(key, poly: SkewPoly, unknown: int, sign: int):
        for m, c in poly.terms.items():
            row = equations.setdefault(key + (m,), {})
            row[unknown] = row.get(unknown, 0) + sign * c

    for g in range(len(M.right.generators())):
        A, B = M.action(g), N.action(g)
        for a in range(len(M)):
            for b, coeff in A[a].items():
                for c, unknown, poly in slots.get(b, ()):
                    add((g, a, c), coeff * poly, unknown, 1)
            for b, unknown, poly in slots.get(a, ()):
                for c, coeff in B[b].items():
                    add((g, a, c), poly * coeff, unknown, -1)
    return nullspace(list(equations.values()), count)


def _vectors_to_maps(M, N, d, vectors, unknowns) -> list[Morphism]:
    out = []
    for v in vectors:
        rows: Mat = [{} for _ in range(len(M))]
        for j, c in v.items():
            a, b, poly = unknowns[j]
            rows[a] = vec_add(rows[a], {b: poly}, c)
        out.append(Morphism(M, N, d, rows))
    return out


def hom_basis(M: BimoduleObj, N: BimoduleObj, d: int) -> list[Morphism]:
    """Basis of the degree-d bimodule maps M -> N."""
    _check_hom_rings(M, N)
    unknowns: list[tuple[int, int, SkewPoly]] = []
    slots: dict[int, list[tuple[int, int, SkewPoly]]] = {}
    for a, b in product(range(len(M)), range(len(N))):
        e = d + M.degree(a) - N.degree(b)
        if e < 0 or e % 2:
            continue
        for poly in M.left.slice(e):
            slots.setdefault(a, []).append((b, len(unknowns), poly))
            unknowns.append((a, b, poly))
    if not unknowns:
        return []
    vectors = _solve_maps(M, N, slots, len(unknowns))
    logger.debug("Hom^%d(%s, %s): %d unknowns, dim %d", d, M.name, N.name, len(unknowns), len(vectors))
    return _vectors_to_maps(M, N, d, vectors, unknowns)


def hom_dimension_unpruned(M: BimoduleObj, N: BimoduleObj, d: int, max_entry_degree: int) -> int:
    """
    Dimension of degree-d maps found without using the degree of each entry:
    every entry ranges over all left ring elements up to max_entry_degree and the
    degree-d part of the solution space is read off afterwards.
    """
    _check_hom_rings(M, N)
    unknowns: list[tuple[int, int, SkewPoly]] = []
    slots: dict[int, list[tuple[int, int, SkewPoly]]] = {}
    for a, b in product(range(len(M)), range(len(N))):
        for e in range(0, max_entry_degree + 1, 2):
            for poly in M.left.slice(e):
                slots.setdefault(a, []).append((b, len(unknowns), poly))
                unknowns.append((a, b, poly))
    vectors = _solve_maps(M, N, slots, len(unknowns))
    keep = [
        j for j, (a, b, poly) in enumerate(unknowns) if poly.homogeneous_degree() - M.degree(a) + N.degree(b) == d
    ]
    index = {j: k for k, j in enumerate(keep)}
    projected = [{index[j]: c for j, c in v.items() if j in index} for v in vectors]
    return rank(projected, len(keep))


def graded_hom_series(M: BimoduleObj, N: BimoduleObj, d_max: int, d_min: int | None = None) -> GradedDimSeries:
    _check_hom_rings(M, N)
    if d_min is None:
        d_min = min(N.degrees) - max(M.degrees)
    degrees = list(range(d_min, d_max + 1))

    def dim(d: int) -> int:
        return len(hom_basis(M, N, d))

    if MAX_WORKERS > 1 and len(degrees) > 1:
        with ThreadPool(min(MAX_WORKERS, len(degrees))) as pool:
            dims = pool.map(dim, degrees)
    else:
        dims = [dim(d) for d in degrees]
    return GradedDimSeries(dims={d: k for d, k in zip(degrees, dims) if k}, cutoff=d_max)


def generic_combination(maps: Sequence[Morphism]) -> Morphism | None:
    if not maps:
        return None
    out = maps[0]
    for k, phi in enumerate(maps[1:], start=2):
        out = out + phi.scale(k)
    return out


def solve_combination(maps: Sequence[Morphism], target: Morphism) -> Row | None:
    """Coefficients t_j with sum_j t_j maps_j = target, compared coefficient by coefficient, or None."""
    equations: dict[tuple, Row] = {}
    rhs: dict[tuple, Fraction] = {}
    for j, phi in enumerate(maps):
        for a in range(len(phi.source)):
            for b, p in phi.row(a).items():
                for m, c in p.terms.items():
                    equations.setdefault((a, b, m), {})[j] = c
    for a in range(len(target.source)):
        for b, p in target.row(a).items():
            for m, c in p.terms.items():
                equations.setdefault((a, b, m), {})
                rhs[(a, b, m)] = c
    keys = list(equations)
    return solve([equations[k] for k in keys], [rhs.get(k, Fraction(0)) for k in keys], len(maps))


def find_inverse(phi: Morphism) -> Morphism | None:
    """Degree-0 two-sided inverse of phi, if any."""
    candidates = hom_basis(phi.target, phi.source, -phi.degree)
    if not candidates:
        return None
    t = solve_combination([compose(phi, psi) for psi in candidates], Morphism.identity(phi.source))
    if t is None:
        return None
    psi = Morphism.zero(phi.target, phi.source, -phi.degree)
    for j, c in t.items():
        psi = psi + candidates[j].scale(c)
    if compose(psi, phi) != Morphism.identity(phi.target):
        return None
    return psi


def is_isomorphic(M: BimoduleObj, N: BimoduleObj) -> bool:
    if len(M) != len(N) or sorted(M.degrees) != sorted(N.degrees):
        return False
    phi = generic_combination(hom_basis(M, N, 0))
    return phi is not None and find_inverse(phi) is not None


# ---------------------------------- Idempotents ---------------------------------- #


def express(target: Vec, degree: int, gens: Sequence[Vec], gen_degrees: Sequence[int], M: BimoduleObj) -> Vec | None:
    """Left coefficients c_j with sum_j c_j gens_j = target, degreewise, or None."""
    unknowns: list[tuple[int, SkewPoly]] = []
    for j, dj in enumerate(gen_degrees):
        e = degree - dj
        if e < 0 or e % 2:
            continue
        for poly in M.left.slice(e):
            unknowns.append((j, poly))
    columns: dict[tuple[int, tuple[int, ...]], Row] = {}
    for k, (j, poly) in enumerate(unknowns):
        for a, p in vec_lmul(poly, gens[j]).items():
            for m, c in p.terms.items():
                columns.setdefault((a, m), {})[k] = c
    rhs_terms = {(a, m): c for a, p in target.items() for m, c in p.terms.items()}
    keys = sorted(set(columns) | set(rhs_terms))
    if not unknowns:
        return {} if not rhs_terms else None
    t = solve([columns.get(k, {}) for k in keys], [rhs_terms.get(k, Fraction(0)) for k in keys], len(unknowns))
    if t is None:
        return None
    out: Vec = {}
    for k, c in t.items():
        j, poly = unknowns[k]
        out = vec_add(out, {j: poly}, c)
    return out


def split_idempotent(e: Morphism) -> tuple[BimoduleObj, Morphism, Morphism]:
    """
    Image of a degree-0 idempotent as a free bimodule with inclusion and projection.
    Generators are picked among the images of basis elements, lowest degree first,
    then leftmost.
    """
    M = e.source
    if e.degree != 0 or len(e.target) != len(M) or compose(e, e) != e:
        raise NotIdempotentError(f"{e!r} is not a degree-0 idempotent")
    if e == Morphism.identity(M):
        ident = Morphism.identity(M)
        return M, ident, ident
    order = sorted(range(len(M)), key=lambda a: (M.degree(a), a))
    gens: list[Vec] = []
    gen_degrees: list[int] = []
    for a in order:
        image = e.row(a)
        if not image:
            continue
        if express(image, M.degree(a), gens, gen_degrees, M) is None:
            gens.append(image)
            gen_degrees.append(M.degree(a))
    actions: list[Mat] = []
    for g in range(len(M.right.generators())):
        rows: Mat = []
        for v, dv in zip(gens, gen_degrees):
            moved = mat_mul([v], M.action(g))[0]
            deg = dv + monomial_degree(M.right.generators()[g].leading()[0])
            coeffs = express(moved, deg, gens, gen_degrees, M)
            if coeffs is None:
                raise NotIdempotentError("image of the idempotent is not closed under the right action")
            rows.append(coeffs)
        actions.append(rows)
    summand = BimoduleObj(
        M.left, M.right, [f"e({k})" for k in range(len(gens))], gen_degrees, actions, 0, None, None, f"im({e.name or 'e'})"
    )
    incl = Morphism(summand, M, 0, gens, "incl")
    proj_rows = []
    for a in range(len(M)):
        coeffs = express(e.row(a), M.degree(a), gens, gen_degrees, M)
        proj_rows.append(coeffs or {})
    proj = Morphism(M, summand, 0, proj_rows, "proj")
    return summand, incl, proj
