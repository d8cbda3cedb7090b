"""
Bounded complexes of bimodules, the odd Rouquier complexes and their minimal forms.

A complex keeps, per cohomological degree, a list of summands (tensor words in
U, B, Bbar with a shift) and the differential as blocks between summands of
neighbouring degrees. Every block is a degree-0 Morphism.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from tqdm import tqdm

from bimod import (
    BimoduleObj,
    Morphism,
    Vec,
    chain,
    is_isomorphic,
    shift,
    tensor,
    tensor_morphisms,
    vec_add,
    vec_ratio,
    verify_morphism,
    whisker,
)
from calculus import BBAR, R_, decompose_pair, label_object, named
from errors import ComplexError, ExpressionError, PivotError, UnknownSummandError
from models import (
    ComplexDocument,
    DifferentialEntry,
    EliminationStep,
    MorphismReport,
    ReductionTrace,
    ShapeEntry,
    ShapeReport,
    SummandDocument,
)
from skewpoly import one, x
from utils.config import CHECK_EVERY_STEP, SHOW_PROGRESS, get_logger

logger = get_logger("complexes")

Blocks = dict[tuple[int, int], Morphism]


# ---------------------------------- Summands ---------------------------------- #


@dataclass(frozen=True, order=True)
class Summand:
    """labels[0] * labels[1] * ... {shift}; the empty word is R."""

    labels: tuple[str, ...] = ()
    shift: int = 0

    @property
    def label(self) -> str:
        return "*".join(self.labels) if self.labels else "R"

    @property
    def obj(self) -> BimoduleObj:
        return summand_object(self)

    def is_canonical(self) -> bool:
        return len(self.labels) <= 1

    def __str__(self):
        return f"{self.label}{{{self.shift}}}" if self.shift else self.label

    def to_document(self) -> SummandDocument:
        return SummandDocument(label=self.label, shift=self.shift)


@lru_cache(maxsize=None)
def summand_object(s: Summand) -> BimoduleObj:
    obj = R_
    for label in s.labels:
        obj = tensor(obj, label_object(label))
    return shift(obj, s.shift)


def _times(s: Summand, t: Summand) -> Summand:
    return Summand(s.labels + t.labels, s.shift + t.shift)


_FACTOR = re.compile(r"\s*([A-Za-z]+)\s*(?:\{\s*(-?\d+)\s*\}\s*)?$")
WORD_LABELS = ("R", "U", "B", "Bbar")


def parse_word(text: str) -> Summand:
    """`B*Bbar{2}*U` style words; shifts on any factor add up and R factors are dropped."""
    labels: list[str] = []
    total = 0
    for factor in text.split("*"):
        match = _FACTOR.match(factor)
        if match is None:
            raise ExpressionError(f"cannot parse {factor!r} in word {text!r}")
        label, amount = match.groups()
        if label not in WORD_LABELS:
            raise UnknownSummandError(f"unknown label {label!r}, expected one of {', '.join(WORD_LABELS)}")
        if label != "R":
            labels.append(label)
        total += int(amount or 0)
    return Summand(tuple(labels), total)


# ---------------------------------- Complexes ---------------------------------- #


@dataclass
class Complex:
    terms: dict[int, list[Summand]]
    diffs: dict[int, Blocks] = field(default_factory=dict)

    def degrees(self) -> list[int]:
        return sorted(n for n, ts in self.terms.items() if ts)

    def block(self, n: int, a: int, b: int) -> Morphism | None:
        return self.diffs.get(n, {}).get((a, b))

    def pruned(self) -> "Complex":
        terms = {n: list(ts) for n, ts in self.terms.items() if ts}
        diffs = {n: dict(bs) for n, bs in self.diffs.items() if bs}
        return Complex(terms, diffs)

    def check_d_squared(self) -> tuple[int, int, int] | None:
        """First (degree, source, target) where d o d has a nonzero block, None when d^2 = 0."""
        for n in self.degrees():
            for a in range(len(self.terms[n])):
                for c in range(len(self.terms.get(n + 2, []))):
                    total: Morphism | None = None
                    for b in range(len(self.terms.get(n + 1, []))):
                        first, second = self.block(n, a, b), self.block(n + 1, b, c)
                        if first is None or second is None:
                            continue
                        composite = chain(first, second)
                        total = composite if total is None else total + composite
                    if total is not None and not total.is_zero():
                        return n, a, c
        return None

    def verify(self) -> list[MorphismReport]:
        """Failing differential blocks; an empty list means every block is a degree-0 bimodule map."""
        bad = []
        for n, blocks in sorted(self.diffs.items()):
            for (a, b), phi in sorted(blocks.items()):
                report = verify_morphism(phi)
                if not report.passed or phi.degree != 0:
                    report.name = f"d^{n}[{a},{b}]"
                    report.passed = False
                    bad.append(report)
        return bad

    def shape(self) -> list[ShapeEntry]:
        out = []
        for n in self.degrees():
            for s in self.terms[n]:
                if not s.is_canonical():
                    raise ComplexError(f"summand {s} in degree {n} is not decomposed")
                out.append(ShapeEntry(degree=n, label=s.label, shift=s.shift))
        return out

    def to_document(self) -> ComplexDocument:
        terms = {n: [s.to_document() for s in self.terms[n]] for n in self.degrees()}
        differentials = {
            n: [DifferentialEntry(source=a, target=b, matrix=phi.to_document().matrix) for (a, b), phi in sorted(bs.items())]
            for n, bs in sorted(self.diffs.items())
            if bs
        }
        return ComplexDocument(terms=terms, differentials=differentials)

    def __str__(self):
        parts = []
        for n in self.degrees():
            parts.append(" ⊕ ".join(str(s) for s in self.terms[n]))
        return " → ".join(parts) if parts else "0"


def unit_complex() -> Complex:
    return Complex({0: [Summand()]})


def rouquier() -> Complex:
    """B -> R{-1}, with B in degree 0."""
    return Complex({0: [Summand(("B",))], 1: [Summand((), -1)]}, {0: {(0, 0): named("m").with_shifts(target=-1)}})


def rouquier_inv() -> Complex:
    """R{1} -> Bbar, with Bbar in degree 0."""
    return Complex(
        {-1: [Summand((), 1)], 0: [Summand(("Bbar",))]}, {-1: {(0, 0): named("delta_bar").with_shifts(source=1)}}
    )


def tensor_complexes(C: Complex, D: Complex) -> Complex:
    """
    Total complex of C (x) D. Summands of a degree are ordered by the C-degree,
    then by position in C, then by position in D. The differential along D picks
    up the sign (-1)^i of the C-degree i.
    """
    terms: dict[int, list[Summand]] = {}
    where: dict[tuple[int, int, int, int], int] = {}
    for i in C.degrees():
        for j in D.degrees():
            for a, s in enumerate(C.terms[i]):
                for b, t in enumerate(D.terms[j]):
                    slot = terms.setdefault(i + j, [])
                    where[(i, a, j, b)] = len(slot)
                    slot.append(_times(s, t))
    diffs: dict[int, Blocks] = {}
    for (i, a, j, b), pos in where.items():
        s, t = C.terms[i][a], D.terms[j][b]
        for (a0, a2), phi in C.diffs.get(i, {}).items():
            if a0 == a:
                target = where[(i + 1, a2, j, b)]
                diffs.setdefault(i + j, {})[(pos, target)] = tensor_morphisms(phi, Morphism.identity(t.obj))
        for (b0, b2), psi in D.diffs.get(j, {}).items():
            if b0 == b:
                target = where[(i, a, j + 1, b2)]
                block = tensor_morphisms(Morphism.identity(s.obj), psi)
                diffs.setdefault(i + j, {})[(pos, target)] = block if i % 2 == 0 else -block
    return Complex(terms, diffs)


# ---------------------------------- Decomposition ---------------------------------- #


def split_summand(s: Summand) -> list[tuple[Summand, Morphism, Morphism]]:
    """Canonical summands of s with their inclusions into and projections from s.obj."""
    if s.is_canonical():
        ident = Morphism.identity(s.obj)
        return [(s, ident, ident)]
    rest = s.labels[2:]
    rest_obj = summand_object(Summand(rest)) if rest else None
    out = []
    for piece in decompose_pair(*s.labels[:2]):
        incl, proj = piece.incl, piece.proj
        if rest_obj is not None:
            incl, proj = whisker(None, incl, rest_obj), whisker(None, proj, rest_obj)
        incl, proj = incl.with_shifts(s.shift, s.shift), proj.with_shifts(s.shift, s.shift)
        head = () if piece.label == "R" else (piece.label,)
        smaller = Summand(head + rest, s.shift + piece.shift)
        for leaf, leaf_incl, leaf_proj in split_summand(smaller):
            out.append((leaf, chain(leaf_incl, incl), chain(proj, leaf_proj)))
    return out


def decompose(C: Complex) -> Complex:
    """Replace every summand by its canonical summands R, U, B, Bbar and conjugate the differential."""
    pieces = {n: [split_summand(s) for s in C.terms[n]] for n in C.degrees()}
    terms: dict[int, list[Summand]] = {}
    where: dict[tuple[int, int], list[int]] = {}
    for n, per_summand in pieces.items():
        slot = terms.setdefault(n, [])
        for a, leaves in enumerate(per_summand):
            where[(n, a)] = list(range(len(slot), len(slot) + len(leaves)))
            slot.extend(leaf for leaf, _, _ in leaves)
    diffs: dict[int, Blocks] = {}
    for n, blocks in C.diffs.items():
        for (a, b), phi in blocks.items():
            for k, (_, incl, _) in enumerate(pieces[n][a]):
                for l, (_, _, proj) in enumerate(pieces[n + 1][b]):
                    block = chain(incl, phi, proj)
                    if not block.is_zero():
                        diffs.setdefault(n, {})[(where[(n, a)][k], where[(n + 1, b)][l])] = block
    return Complex(terms, diffs)


# ---------------------------------- Gaussian elimination ---------------------------------- #


def _drop(i: int, removed: int) -> int:
    return i - 1 if i > removed else i


def gaussian_eliminate(C: Complex, n: int, a: int, b: int) -> Complex:
    """
    Cancel the isomorphism from summand a in degree n to summand b in degree n+1.
    The block must be a nonzero scalar multiple of the identity between equal summands.
    """
    phi = C.block(n, a, b)
    if phi is None or C.terms[n][a] != C.terms[n + 1][b]:
        raise PivotError(f"d^{n}[{a},{b}] does not join two copies of the same summand")
    c = phi.scalar()
    if not c:
        raise PivotError(f"d^{n}[{a},{b}] is not an invertible scalar")
    inverse = Morphism.identity(phi.target).scale(1 / c)
    terms = dict(C.terms)
    terms[n] = [s for k, s in enumerate(C.terms[n]) if k != a]
    terms[n + 1] = [s for k, s in enumerate(C.terms[n + 1]) if k != b]
    diffs: dict[int, Blocks] = {}
    for k, blocks in C.diffs.items():
        kept: Blocks = {}
        for (s, t), block in blocks.items():
            if k == n - 1:
                if t != a:
                    kept[(s, _drop(t, a))] = block
            elif k == n:
                if s != a and t != b:
                    kept[(_drop(s, a), _drop(t, b))] = block
            elif k == n + 1:
                if s != b:
                    kept[(_drop(s, b), t)] = block
            else:
                kept[(s, t)] = block
        diffs[k] = kept
    into = {s: block for (s, t), block in C.diffs[n].items() if t == b and s != a}
    out_of = {t: block for (s, t), block in C.diffs[n].items() if s == a and t != b}
    for s, delta in into.items():
        for t, gamma in out_of.items():
            key = (_drop(s, a), _drop(t, b))
            correction = chain(delta, inverse, gamma)
            updated = diffs[n][key] - correction if key in diffs[n] else -correction
            if updated.is_zero():
                diffs[n].pop(key, None)
            else:
                diffs[n][key] = updated
    return Complex(terms, diffs).pruned()


def _find_pivot(C: Complex) -> tuple[int, int, int, Fraction] | None:
    for n in sorted(C.diffs):
        for (a, b), phi in sorted(C.diffs[n].items()):
            if C.terms[n][a] != C.terms[n + 1][b]:
                continue
            c = phi.scalar()
            if c:
                return n, a, b, c
    return None


def reduce(C: Complex, check: bool = CHECK_EVERY_STEP) -> tuple[Complex, ReductionTrace]:
    """Decompose, then cancel invertible scalar blocks until none are left."""
    C = decompose(C)
    trace = ReductionTrace(checked_every_step=check)
    while (pivot := _find_pivot(C)) is not None:
        n, a, b, c = pivot
        trace.steps.append(
            EliminationStep(
                degree=n, source=C.terms[n][a].to_document(), target=C.terms[n + 1][b].to_document(), scalar=str(c)
            )
        )
        C = gaussian_eliminate(C, n, a, b)
        if check and (bad := C.check_d_squared()) is not None:
            raise ComplexError(f"d^2 != 0 at degree {bad[0]} after eliminating d^{n}[{a},{b}]")
    logger.debug("reduced after %d eliminations: %s", len(trace.steps), C)
    return C, trace


def reduce_power(n: int, inverse: bool = False) -> tuple[Complex, ReductionTrace]:
    """Minimal complex of the n-th tensor power of R (or R'), reducing after every factor."""
    if n < 1:
        raise ComplexError(f"power must be positive, got {n}")
    factor = rouquier_inv() if inverse else rouquier()
    C, trace = reduce(factor)
    for _ in tqdm(range(n - 1), desc="powers", disable=not SHOW_PROGRESS):
        C, more = reduce(tensor_complexes(C, factor))
        trace.steps.extend(more.steps)
    return C, trace


def rouquier_power(n: int, inverse: bool = False) -> Complex:
    return reduce_power(n, inverse)[0]


# ---------------------------------- Minimal forms ---------------------------------- #


def expected_shape(n: int, inverse: bool = False) -> list[ShapeEntry]:
    """
    R^n: B and Bbar alternate down from degree n-1, ending in R{-n} at degree n.
    R'^n: R{n} at degree -n, then Bbar and B alternate up to degree 0.
    """
    if inverse:
        out = [ShapeEntry(degree=-n, label="R", shift=n)]
        for t in range(n):
            out.append(ShapeEntry(degree=t + 1 - n, label="Bbar" if t % 2 == 0 else "B", shift=n - 1 - 2 * t))
        return out
    out = []
    for k in range(n):
        t = n - 1 - k
        out.append(ShapeEntry(degree=k, label="B" if t % 2 == 0 else "Bbar", shift=1 - n + 2 * t))
    out.append(ShapeEntry(degree=n, label="R", shift=-n))
    return out


def _generator_images() -> dict[tuple[str, str], Vec]:
    """Image of the lowest generator under a differential between canonical summands, up to a scalar."""
    ONE, x1, x2 = one(), x(1), x(2)
    return {
        ("B", "Bbar"): vec_add(BBAR.element(ONE, ONE, x1), BBAR.element(x2, ONE, ONE)),
        ("Bbar", "B"): named("delta").row(0),
        ("B", "R"): {0: ONE},
        ("R", "Bbar"): named("delta_bar").row(0),
    }


def _same_class(s: Summand, entry: ShapeEntry) -> bool:
    if s.label == entry.label and s.shift == entry.shift:
        return True
    expected = summand_object(Summand(() if entry.label == "R" else (entry.label,), entry.shift))
    return is_isomorphic(s.obj, expected)


def _generator_map(src: Summand, tgt: Summand, image: Vec) -> Morphism:
    """The bimodule map sending the lowest generator of src to image; basis elements differ from it on the right."""
    source, target = src.obj, tgt.obj
    return Morphism(source, target, 0, [target.act_right(image, e[-1]) for e in source.entries])


def _match_degree(summands: list[Summand], entries: list[ShapeEntry]) -> str | None:
    unmatched = list(summands)
    for entry in entries:
        hit = next((s for s in unmatched if _same_class(s, entry)), None)
        if hit is None:
            return f"no summand {entry.label}{{{entry.shift}}}"
        unmatched.remove(hit)
    if unmatched:
        return f"extra {', '.join(map(str, unmatched))}"
    return None


def matches_shape(C: Complex, expected: list[ShapeEntry], check_images: bool = True) -> ShapeReport:
    """
    Compares the summands of every degree with the expected ones as multisets of
    isomorphism classes. Differentials between summands with a stated generator
    image must equal that map up to one nonzero scalar over the whole block, the
    only freedom left since End^0 of B and Bbar is one-dimensional.
    """
    found = [ShapeEntry(degree=n, label=s.label, shift=s.shift) for n in C.degrees() for s in C.terms[n]]
    report = ShapeReport(passed=False, expected=expected, found=found)
    wanted: dict[int, list[ShapeEntry]] = {}
    for entry in expected:
        wanted.setdefault(entry.degree, []).append(entry)
    for n in sorted(set(C.degrees()) | set(wanted)):
        problem = _match_degree(C.terms.get(n, []), wanted.get(n, []))
        if problem is not None:
            report.reason = f"degree {n}: {problem}"
            return report
    if check_images:
        images = _generator_images()
        for n in C.degrees():
            for (a, src), (b, tgt) in product(enumerate(C.terms[n]), enumerate(C.terms.get(n + 1, []))):
                image = images.get((src.label, tgt.label))
                if image is None:
                    continue
                block = C.block(n, a, b)
                c = vec_ratio(block.row(0), image) if block is not None else None
                if c is None or block != _generator_map(src, tgt, image).scale(c):
                    report.reason = f"differential {src} -> {tgt} out of degree {n} is not the expected map"
                    return report
    report.passed = True
    return report
