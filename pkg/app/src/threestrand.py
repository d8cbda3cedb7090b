"""
Degreewise computations with three strands.

R3 carries two transpositions and two Demazure operators. The bimodules B1, B2
and Bbar1 = B1 * U1 are built from the same base tags as the two-strand ones;
B_121hat = R3 (x) R3 over the odd symmetric functions R^[2] has no generating set
for its middle ring, so it is handled one degree at a time as a quotient of
R3 (x)_k R3.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from multiprocessing.pool import ThreadPool
from typing import Literal, Sequence

from tqdm import tqdm

from bimod import (
    BimoduleObj,
    Morphism,
    Vec,
    compose,
    generic_combination,
    hom_basis,
    solve_combination,
    vec_lmul,
    word,
)
from models import GradedDimSeries, ObstructionReport
from skewpoly import Monomial, SkewPoly, demazure, monomials
from utils.config import DEFAULT_MAX_DEGREE, MAX_WORKERS, SHOW_PROGRESS, get_logger
from utils.linalg import Row, nullspace, rank

logger = get_logger("threestrand")

N = 3
MIN_OBSTRUCTION_DEGREE = 8

Which = Literal[1, 2, "both"]


# ---------------------------------- Invariant slices ---------------------------------- #


@dataclass(frozen=True)
class DegSlice:
    """Row basis of a subspace of the degree-d part of R3 in the monomial basis."""

    degree: int
    basis: tuple[Row, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient(self) -> list[Monomial]:
        return monomials(N, self.degree)

    def elements(self) -> list[SkewPoly]:
        ms = self.ambient
        return [SkewPoly(N, {ms[j]: c for j, c in v.items()}) for v in self.basis]

    def contains(self, p: SkewPoly) -> bool:
        ms = self.ambient
        index = {m: j for j, m in enumerate(ms)}
        target = {index[m]: c for m, c in p.terms.items()}
        return rank([*self.basis, target], len(ms)) == self.dim


def _coordinates(p: SkewPoly, index: dict[Monomial, int]) -> Row:
    return {index[m]: c for m, c in p.terms.items()}


def _restricted_kernel(i: int, d: int, inside: Sequence[Row]) -> list[Row]:
    """Kernel of d_i restricted to the span of `inside`, as rows over the monomials of degree d."""
    source, below = monomials(N, d), monomials(N, d - 2) if d >= 2 else []
    below_index = {m: j for j, m in enumerate(below)}
    images: list[Row] = []
    for v in inside:
        p = SkewPoly(N, {source[j]: c for j, c in v.items()})
        images.append(_coordinates(demazure(i, p), below_index))
    # columns are the vectors of `inside`
    rows: list[Row] = [{} for _ in below]
    for k, image in enumerate(images):
        for j, c in image.items():
            rows[j][k] = c
    out = []
    for w in nullspace(rows, len(inside)):
        combo: Row = {}
        for k, c in w.items():
            for j, e in inside[k].items():
                combo[j] = combo.get(j, 0) + c * e
        out.append({j: c for j, c in combo.items() if c})
    return out


@lru_cache(maxsize=None)
def invariant_slice(which: Which, d: int, order: tuple[int, ...] = (1, 2)) -> DegSlice:
    """
    Degree-d part of the kernel of d1, of d2, or of both. For both, kernels are
    intersected in the given order.
    """
    ops = (which,) if which in (1, 2) else order
    space: list[Row] = [{j: Fraction(1)} for j in range(len(monomials(N, d)))]
    for i in ops:
        space = _restricted_kernel(i, d, space)
    return DegSlice(d, tuple(space))


def invariant_dims(which: Which, d_max: int) -> dict[int, int]:
    return {d: invariant_slice(which, d).dim for d in range(0, d_max + 1, 2)}


# ---------------------------------- Bimodules ---------------------------------- #

WORD_FACTORS = {"B1": ("Ind1", "Res1"), "B2": ("Ind2", "Res2"), "U1": ("U1",), "U2": ("U2",)}


@lru_cache(maxsize=None)
def bimodule_word(factors: tuple[str, ...]) -> BimoduleObj:
    """Tensor word over B1, B2, U1, U2; every B contributes a shift of -1."""
    if not factors:
        return word("UnitR3")
    tags: list[str] = []
    for f in factors:
        if f not in WORD_FACTORS:
            raise ValueError(f"unknown three-strand factor {f!r}, expected one of {', '.join(WORD_FACTORS)}")
        tags.extend(WORD_FACTORS[f])
    shift = -sum(1 for f in factors if f.startswith("B"))
    return word(*tags, shift=shift, name="*".join(factors))


def bimodule_slice(factors: Sequence[str], d: int) -> int:
    return bimodule_word(tuple(factors)).graded_dims(d, d)[d]


def _degree_part(M: BimoduleObj, d: int) -> list[tuple[int, SkewPoly]]:
    """Spanning pairs (basis element a, left coefficient) of the degree-d part of M."""
    out = []
    for a in range(len(M)):
        e = d - M.degree(a)
        if e < 0 or e % 2:
            continue
        out.extend((a, p) for p in M.left.slice(e))
    return out


def _flatten(v: Vec, index: dict[tuple[int, Monomial], int]) -> Row:
    out: Row = {}
    for a, p in v.items():
        for m, c in p.terms.items():
            key = (a, m)
            if key not in index:
                index[key] = len(index)
            out[index[key]] = c
    return out


# ---------------------------------- B_121hat ---------------------------------- #

HAT_SHIFT = -3


@dataclass(frozen=True)
class PresentedModule:
    """R3 (x)_A R3 {shift} for A the common kernel of `fixed`, presented one degree at a time."""

    fixed: Which = "both"
    shift: int = HAT_SHIFT

    def _pairs(self, e: int) -> list[tuple[Monomial, Monomial]]:
        return [(m, w) for a in range(0, e + 1, 2) for m in monomials(N, a) for w in monomials(N, e - a)]

    def relations(self, e: int) -> tuple[list[Row], int]:
        """rf (x) r' - r (x) fr' for f in A of positive degree, over the pure tensors of degree e."""
        pairs = self._pairs(e)
        index = {pair: j for j, pair in enumerate(pairs)}
        rows: list[Row] = []
        for k in range(2, e + 1, 2):
            for f in invariant_slice(self.fixed, k).elements():
                for a in range(0, e - k + 1, 2):
                    for r, w in product(monomials(N, a), monomials(N, e - k - a)):
                        row: Row = {}
                        left = SkewPoly.monomial(r) * f
                        right = f * SkewPoly.monomial(w)
                        for m, c in left.terms.items():
                            j = index[(m, w)]
                            row[j] = row.get(j, 0) + c
                        for m, c in right.terms.items():
                            j = index[(r, m)]
                            row[j] = row.get(j, 0) - c
                        if any(row.values()):
                            rows.append(row)
        return rows, len(pairs)

    def dimension(self, d: int) -> int:
        e = d - self.shift
        if e < 0 or e % 2:
            return 0
        rows, size = self.relations(e)
        return size - rank(rows, size)

    def pairs(self, d: int) -> list[tuple[Monomial, Monomial]]:
        e = d - self.shift
        return self._pairs(e) if e >= 0 and e % 2 == 0 else []


def _parallel(f, degrees: list[int], desc: str) -> list:
    if MAX_WORKERS > 1 and len(degrees) > 1:
        with ThreadPool(min(MAX_WORKERS, len(degrees))) as pool:
            return list(tqdm(pool.imap(f, degrees), total=len(degrees), desc=desc, disable=not SHOW_PROGRESS))
    return [f(d) for d in tqdm(degrees, desc=desc, disable=not SHOW_PROGRESS)]


def b121hat_dims(d_max: int) -> GradedDimSeries:
    hat = PresentedModule()
    degrees = list(range(HAT_SHIFT, d_max + 1, 2))
    dims = _parallel(hat.dimension, degrees, "B_121hat")
    return GradedDimSeries(dims={d: k for d, k in zip(degrees, dims) if k}, cutoff=d_max)


# ---------------------------------- The obstruction ---------------------------------- #


def inclusion_candidates(M: BimoduleObj, d_max: int) -> list[Vec]:
    """
    Images of the generator 1 (x) 1 of B_121hat under degree-0 maps into M: elements v
    of degree -3 with f v = v f for every f in R^[2] of positive degree up to d_max.
    """
    unknowns = _degree_part(M, HAT_SHIFT)
    index: dict[tuple[int, Monomial], int] = {}
    equations: dict[int, Row] = {}
    for k in range(2, d_max + 1, 2):
        for f in invariant_slice("both", k).elements():
            for j, (a, p) in enumerate(unknowns):
                commutator = vec_lmul(f, {a: p})
                for b, q in M.act_right({a: p}, f).items():
                    commutator[b] = commutator.get(b, SkewPoly.zero(N)) - q
                for key, c in _flatten(commutator, index).items():
                    row = equations.setdefault(key, {})
                    row[j] = row.get(j, 0) + c
    out = []
    for v in nullspace(list(equations.values()), len(unknowns)):
        image: Vec = {}
        for j, c in v.items():
            a, p = unknowns[j]
            image[a] = image.get(a, SkewPoly.zero(N)) + p.scale(c)
        out.append({a: p for a, p in image.items() if p})
    return out


def _image_rank(M: BimoduleObj, v: Vec, hat: PresentedModule, d: int) -> int:
    """Rank of r (x) r' -> r v r' on the degree-d part of B_121hat."""
    index: dict[tuple[int, Monomial], int] = {}
    rows = []
    for r, w in hat.pairs(d):
        moved = vec_lmul(SkewPoly.monomial(r), M.act_right(v, SkewPoly.monomial(w)))
        rows.append(_flatten(moved, index))
    return rank(rows, len(index))


def _quotient_map(M: BimoduleObj, target: BimoduleObj, v: Vec) -> Morphism | None:
    """A degree-0 map M -> target killing v and hitting the lowest generator of target."""
    candidates = hom_basis(M, target, 0)
    index: dict[tuple[int, Monomial], int] = {}
    columns = [_flatten(pi.apply(v), index) for pi in candidates]
    rows: list[Row] = [{} for _ in index]
    for j, col in enumerate(columns):
        for i, c in col.items():
            rows[i][j] = c
    killers = []
    for w in nullspace(rows, len(candidates)):
        pi = Morphism.zero(M, target, 0)
        for j, c in w.items():
            pi = pi + candidates[j].scale(c)
        killers.append(pi)
    pi = generic_combination(killers)
    if pi is None:
        return None
    low = min(target.degrees)
    image_index: dict[tuple[int, Monomial], int] = {}
    images = [_flatten(pi.apply({a: p}), image_index) for a, p in _degree_part(M, low)]
    if rank(images, len(image_index)) != target.graded_dims(low, low)[low]:
        return None
    return pi


def _morphism_row(phi: Morphism, index: dict[tuple, int]) -> Row:
    out: Row = {}
    for a in range(len(phi.source)):
        for b, p in phi.row(a).items():
            for m, c in p.terms.items():
                out[index.setdefault((a, b, m), len(index))] = c
    return out


def section_dimension(pi: Morphism) -> int:
    """
    Size of the space of degree-0 sections sigma with pi o sigma = id.

    Returns 0 when there is none. Otherwise the sections form an affine space
    and the result is 1 + its dimension, so a unique section reports 1 and the
    raw nullspace dimension is the result minus one.
    """
    sections = hom_basis(pi.target, pi.source, 0)
    composites = [compose(sigma, pi) for sigma in sections]
    if solve_combination(composites, Morphism.identity(pi.target)) is None:
        return 0
    # sigma -> pi o sigma is affine, its fibres are cosets of the kernel
    index: dict[tuple, int] = {}
    rows = [_morphism_row(c, index) for c in composites]
    return 1 + len(sections) - rank(rows, len(index))


def obstruction_report(d_max: int = DEFAULT_MAX_DEGREE) -> ObstructionReport:
    """
    Checks that 0 -> B_121hat -> B1*B2*B1 -> Bbar1 -> 0 is exact in degrees up to d_max
    and that the quotient map admits no section.
    """
    M = bimodule_word(("B1", "B2", "B1"))
    quotient = bimodule_word(("B1", "U1"))
    report = ObstructionReport(
        max_degree=d_max,
        lowest_degree=HAT_SHIFT,
        inclusion_dim=0,
        injective_upto=None,
        cokernel_match=False,
        cokernel_dims={},
        expected_cokernel_dims={},
        section_dim=0,
        insufficient_degree=d_max < MIN_OBSTRUCTION_DEGREE,
    )
    if report.insufficient_degree:
        logger.warning("max degree %d is below %d, R^[2] is not constrained enough", d_max, MIN_OBSTRUCTION_DEGREE)

    candidates = inclusion_candidates(M, d_max)
    report.inclusion_dim = len(candidates)
    if len(candidates) != 1:
        logger.warning("degree-0 maps B_121hat -> B1*B2*B1 form a space of dimension %d", len(candidates))
        return report
    v = candidates[0]

    hat = PresentedModule()
    degrees = list(range(HAT_SHIFT, d_max + 1, 2))
    hat_dims = _parallel(hat.dimension, degrees, "B_121hat")
    ranks = _parallel(lambda d: _image_rank(M, v, hat, d), degrees, "inclusion")
    for d, dim, r in zip(degrees, hat_dims, ranks):
        if dim != r:
            break
        report.injective_upto = d
    full = M.graded_dims(HAT_SHIFT, d_max)
    expected = quotient.graded_dims(HAT_SHIFT, d_max)
    report.cokernel_dims = {d: full[d] - r for d, r in zip(degrees, ranks) if full[d] - r}
    report.expected_cokernel_dims = {d: expected[d] for d in degrees if expected[d]}
    report.cokernel_match = report.cokernel_dims == report.expected_cokernel_dims

    pi = _quotient_map(M, quotient, v)
    if pi is None:
        logger.warning("no surjection B1*B2*B1 -> Bbar1 kills the image of B_121hat")
        report.quotient_found = False
        return report
    report.section_dim = section_dimension(pi)
    logger.info("obstruction up to degree %d: %s", d_max, report.model_dump())
    return report
