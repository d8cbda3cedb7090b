"""
Generating morphisms of the two-strand diagrammatic calculus and the relations they satisfy.

Every diagram is a composite of the primitive maps below, written on tensor
words of Ind, Res, U, Us. Pure tensors follow the word order, so on
B = Ind*Res{-1} the entries (f, g) stand for f (x) g and on
Bbar = Ind*Us*Res{-1} the entries (f, u, g) stand for f (x) u.1s (x) g.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from tqdm import tqdm

from bimod import (
    BimoduleObj,
    Morphism,
    Vec,
    base,
    chain,
    compose,
    shift,
    tensor,
    tensor_morphisms,
    vec_add,
    vec_lmul,
    vec_scale,
    verify_morphism,
    whisker,
    word,
)
from errors import MorphismError, SoergelError, UnknownMapError
from models import Label, MorphismReport, RelationReport, Witness
from skewpoly import SkewPoly, act_s, demazure, one, x
from utils.config import SHOW_PROGRESS, get_logger

logger = get_logger("calculus")

x1, x2 = x(1), x(2)
ONE = one()

# ---------------------------------- Objects ---------------------------------- #

R_ = base("UnitR")
RS_ = base("UnitRs")
IND, RES, U, US = base("Ind"), base("Res"), base("U"), base("Us")

B = word("Ind", "Res", shift=-1, name="B")
BBAR = word("Ind", "Us", "Res", shift=-1, name="Bbar")
BB = tensor(B, B)
UB = tensor(U, B)
BU = tensor(B, U)
B_BBAR = tensor(B, BBAR)
BBAR_B = tensor(BBAR, B)
U_BBAR = tensor(U, BBAR)
BBAR_U = tensor(BBAR, U)

UU = word("U", "U")
USUS = word("Us", "Us")
IND_RES = word("Ind", "Res")
RES_IND = word("Res", "Ind")
U_IND = word("U", "Ind")
IND_US = word("Ind", "Us")
US_RES = word("Us", "Res")
RES_U = word("Res", "U")
RES_U_IND = word("Res", "U", "Ind")
U_IND_RES = word("U", "Ind", "Res")
US_RES_U = word("Us", "Res", "U")
U_IND_US = word("U", "Ind", "Us")

LABEL_OBJECTS: dict[str, BimoduleObj] = {"R": R_, "U": U, "B": B, "Bbar": BBAR}


def label_object(label: Label) -> BimoduleObj:
    return LABEL_OBJECTS[label]


def _ring(p: SkewPoly) -> Vec:
    return {0: p} if p else {}


# ---------------------------------- Primitive maps ---------------------------------- #

# images of 1u under the dot and of 1 under the twisted balanced cup
_DELTA_IMAGE = vec_add(B.element(ONE, x2), B.element(x2, ONE), -1)
_BETA1_IMAGE = vec_add(U_IND_RES.element(ONE, x1, ONE), U_IND_RES.element(ONE, ONE, x1), -1)
# merge o incl_second = id on U*B
_SECOND_GENERATOR = vec_add(BB.element(ONE, x2, ONE, ONE), BB.element(ONE, ONE, ONE, x2), -1)


def _mult() -> Morphism:
    return Morphism.from_rule(B, R_, 1, lambda f, g: _ring(f * g), "m")


def _delta() -> Morphism:
    return Morphism.from_rule(U, B, 1, lambda a: vec_lmul(a, _DELTA_IMAGE), "delta")


def _split() -> Morphism:
    return Morphism.from_rule(B, BB, -1, lambda f, g: BB.element(f, ONE, ONE, g), "split")


def _id_m() -> Morphism:
    return Morphism.from_rule(BB, B, 1, lambda f, g, h, k: B.element(f, g * h * k), "id⊗m")


def _merge() -> Morphism:
    return Morphism.from_rule(BB, UB, -1, lambda f, g, h, k: UB.element(f, demazure(1, g * h), k), "merge")


def _incl_second() -> Morphism:
    return Morphism.from_rule(
        UB, BB, 1, lambda a, f, g: BB.act_right(vec_lmul(a * act_s(1, f), _SECOND_GENERATOR), g), "incl_second"
    )


# U*B = Bbar = B*U


def _ub_bbar() -> Morphism:
    return Morphism.from_rule(UB, BBAR, 0, lambda a, f, g: BBAR.element(a * act_s(1, f), ONE, g), "ub→bbar")


def _bbar_ub() -> Morphism:
    return Morphism.from_rule(BBAR, UB, 0, lambda f, u, g: UB.element(f * u, ONE, g), "bbar→ub")


def _bbar_bu() -> Morphism:
    return Morphism.from_rule(BBAR, BU, 0, lambda f, u, g: BU.element(f * u, act_s(1, g), ONE), "bbar→bu")


def _bu_bbar() -> Morphism:
    return Morphism.from_rule(BU, BBAR, 0, lambda f, g, a: BBAR.element(f, ONE, act_s(1, g * a)), "bu→bbar")


# strand crossings


def _cross_u_ind() -> Morphism:
    return Morphism.from_rule(U_IND, IND_US, 0, lambda a, g: IND_US.element(a * act_s(1, g), ONE), "cross_u_ind")


def _cross_ind_u() -> Morphism:
    return Morphism.from_rule(IND_US, U_IND, 0, lambda f, u: U_IND.element(f * u, ONE), "cross_ind_u")


def _cross_us_res() -> Morphism:
    return Morphism.from_rule(US_RES, RES_U, 0, lambda u, f: RES_U.element(u * act_s(1, f), ONE), "cross_us_res")


def _cross_res_u() -> Morphism:
    return Morphism.from_rule(RES_U, US_RES, 0, lambda g, a: US_RES.element(ONE, act_s(1, g * a)), "cross_res_u")


# cups and caps of the transposition bimodules


def _cup_u() -> Morphism:
    return Morphism.from_rule(R_, UU, 0, lambda a: UU.element(a, ONE), "cupU")


def _cap_u() -> Morphism:
    return Morphism.from_rule(UU, R_, 0, lambda a, b: _ring(a * act_s(1, b)), "capU")


def _cup_us() -> Morphism:
    return Morphism.from_rule(RS_, USUS, 0, lambda a: USUS.element(a, ONE), "cupUs")


def _cap_us() -> Morphism:
    return Morphism.from_rule(USUS, RS_, 0, lambda a, b: _ring(a * act_s(1, b)), "capUs")


def _mixed_cap_res() -> Morphism:
    return Morphism.from_rule(US_RES_U, RES, 0, lambda u, g, a: RES.element(u * act_s(1, g * a)), "mixed_cap_res")


def _mixed_cup_res() -> Morphism:
    return Morphism.from_rule(RES, US_RES_U, 0, lambda g: US_RES_U.element(ONE, act_s(1, g), ONE), "mixed_cup_res")


def _mixed_cap_ind() -> Morphism:
    return Morphism.from_rule(U_IND_US, IND, 0, lambda a, f, u: IND.element(a * act_s(1, f * u)), "mixed_cap_ind")


def _mixed_cup_ind() -> Morphism:
    return Morphism.from_rule(IND, U_IND_US, 0, lambda f: U_IND_US.element(f, ONE, ONE), "mixed_cup_ind")


# adjunctions between induction and restriction


def _alpha0() -> Morphism:
    return Morphism.from_rule(IND_RES, R_, 0, lambda f, g: _ring(f * g), "alpha0")


def _beta0() -> Morphism:
    return Morphism.from_rule(RS_, RES_IND, 0, lambda c: RES_IND.element(c, ONE), "beta0")


def _dsecond() -> Morphism:
    return Morphism.from_rule(
        RES_U_IND, RS_, -2, lambda f, a, g: _ring(demazure(1, act_s(1, f * a) * g)), "dsecond"
    )


def _dprime() -> Morphism:
    return Morphism.from_rule(RES_IND, US, -2, lambda f, g: _ring(act_s(1, demazure(1, f * g))), "dprime")


def _beta1() -> Morphism:
    return Morphism.from_rule(R_, U_IND_RES, 2, lambda a: vec_lmul(a, _BETA1_IMAGE), "beta1")


# biadjunction between B and Bbar, on the words B*Bbar and Bbar*B


def _alpha2() -> Morphism:
    return Morphism.from_rule(
        B_BBAR, R_, 0, lambda a, f, g, u, h: _ring(a * demazure(1, act_s(1, f * g * u)) * h), "alpha2"
    )


def _beta2() -> Morphism:
    image = vec_add(BBAR_B.element(x1, ONE, ONE, ONE, ONE), BBAR_B.element(ONE, ONE, ONE, ONE, x2))
    return Morphism.from_rule(R_, BBAR_B, 0, lambda a: vec_lmul(a, vec_scale(image, -1)), "beta2")


def _alpha3() -> Morphism:
    return Morphism.from_rule(BBAR_B, R_, 0, lambda a, u, h, f, g: _ring(a * u * demazure(1, h * f) * g), "alpha3")


def _beta3() -> Morphism:
    image = vec_add(B_BBAR.element(x1, ONE, ONE, ONE, ONE), B_BBAR.element(ONE, ONE, ONE, ONE, x2))
    return Morphism.from_rule(R_, B_BBAR, 0, lambda a: vec_lmul(a, image), "beta3")


# orientation-reversal vertices with the orange line on the outside of U*Bbar and Bbar*U


def _ubbar_b() -> Morphism:
    return Morphism.from_rule(U_BBAR, B, 0, lambda a, f, u, g: B.element(a * act_s(1, f * u), g), "ubbar→b")


def _b_ubbar() -> Morphism:
    return Morphism.from_rule(B, U_BBAR, 0, lambda f, g: U_BBAR.element(f, ONE, ONE, g), "b→ubbar")


def _bbaru_b() -> Morphism:
    return Morphism.from_rule(BBAR_U, B, 0, lambda f, u, g, a: B.element(f * u, act_s(1, g * a)), "bbaru→b")


def _b_bbaru() -> Morphism:
    return Morphism.from_rule(B, BBAR_U, 0, lambda f, g: BBAR_U.element(f, ONE, act_s(1, g), ONE), "b→bbaru")


# oriented vertices with one downward strand


def _m_bar() -> Morphism:
    return Morphism.from_rule(BBAR, U, 1, lambda f, u, g: U.element(f * u * act_s(1, g)), "m_bar")


def _vertex_in() -> Morphism:
    def rule(f, g, h, u, k):
        return vec_scale(B.element(f * act_s(1, demazure(1, g * h * u)), k), -1)

    return Morphism.from_rule(B_BBAR, B, -1, rule, "vertex_in")


def _vertex_out() -> Morphism:
    return Morphism.from_rule(BBAR, B_BBAR, -1, lambda f, u, g: B_BBAR.element(f * u, ONE, ONE, ONE, g), "vertex_out")


_PRIMITIVES: dict[str, Callable[[], Morphism]] = {
    "m": _mult,
    "delta": _delta,
    "split": _split,
    "id_m": _id_m,
    "merge": _merge,
    "incl_second": _incl_second,
    "ub_bbar": _ub_bbar,
    "bbar_ub": _bbar_ub,
    "bbar_bu": _bbar_bu,
    "bu_bbar": _bu_bbar,
    "cross_u_ind": _cross_u_ind,
    "cross_ind_u": _cross_ind_u,
    "cross_us_res": _cross_us_res,
    "cross_res_u": _cross_res_u,
    "cupU": _cup_u,
    "capU": _cap_u,
    "cupUs": _cup_us,
    "capUs": _cap_us,
    "mixed_cap_res": _mixed_cap_res,
    "mixed_cup_res": _mixed_cup_res,
    "mixed_cap_ind": _mixed_cap_ind,
    "mixed_cup_ind": _mixed_cup_ind,
    "alpha0": _alpha0,
    "beta0": _beta0,
    "dsecond": _dsecond,
    "dprime": _dprime,
    "beta1": _beta1,
    "alpha2": _alpha2,
    "beta2": _beta2,
    "alpha3": _alpha3,
    "beta3": _beta3,
    "ubbar_b": _ubbar_b,
    "b_ubbar": _b_ubbar,
    "bbaru_b": _bbaru_b,
    "b_bbaru": _b_bbaru,
    "m_bar": _m_bar,
    "vertex_in": _vertex_in,
    "vertex_out": _vertex_out,
}


# ---------------------------------- Composite maps ---------------------------------- #


def _alpha1() -> Morphism:
    return _named("dsecond").renamed("alpha1")


def _beta1_tilde() -> Morphism:
    return chain(_named("beta1"), whisker(None, _named("cross_u_ind"), RES)).renamed("beta1_tilde")


def _psi_ur() -> Morphism:
    slide = chain(whisker(None, _named("cross_u_ind"), RES), whisker(IND, _named("cross_us_res")))
    return slide.with_shifts(-1, -1).renamed("psi_ur")


def _psi_ru() -> Morphism:
    slide = chain(whisker(IND, _named("cross_res_u")), whisker(None, _named("cross_ind_u"), RES))
    return slide.with_shifts(-1, -1).renamed("psi_ru")


def _psi_down_ur() -> Morphism:
    return chain(_named("ubbar_b"), _named("b_bbaru")).renamed("psi_down_ur")


def _psi_down_ru() -> Morphism:
    return chain(_named("bbaru_b"), _named("b_ubbar")).renamed("psi_down_ru")


def _delta_bar() -> Morphism:
    return chain(_named("cupU"), whisker(None, _named("delta"), U), _named("bu_bbar")).renamed("delta_bar")


def _e_first() -> Morphism:
    return chain(_named("id_m"), _named("split")).renamed("e_first")


def _e_second() -> Morphism:
    return chain(_named("merge"), _named("incl_second")).renamed("e_second")


def _extra_deg2() -> Morphism:
    return chain(_named("bbar_ub"), whisker(None, _named("delta"), B), _named("id_m")).renamed("extra_deg2")


_COMPOSITES: dict[str, Callable[[], Morphism]] = {
    "alpha1": _alpha1,
    "beta1_tilde": _beta1_tilde,
    "psi_ur": _psi_ur,
    "psi_ru": _psi_ru,
    "psi_down_ur": _psi_down_ur,
    "psi_down_ru": _psi_down_ru,
    "delta_bar": _delta_bar,
    "e_first": _e_first,
    "e_second": _e_second,
    "extra_deg2": _extra_deg2,
}

# internal degree of every catalog map
DEGREES: dict[str, int] = {
    "m": 1,
    "delta": 1,
    "delta_bar": 1,
    "split": -1,
    "merge": -1,
    "id_m": 1,
    "incl_second": 1,
    "alpha0": 0,
    "beta0": 0,
    "alpha1": -2,
    "dsecond": -2,
    "dprime": -2,
    "beta1": 2,
    "beta1_tilde": 2,
    "alpha2": 0,
    "beta2": 0,
    "alpha3": 0,
    "beta3": 0,
    "m_bar": 1,
    "vertex_in": -1,
    "vertex_out": -1,
    "e_first": 0,
    "e_second": 0,
    "extra_deg2": 2,
    "d0": 0,
    "d1": 0,
    "d2": 0,
    "d3": 0,
    "h0": 0,
    "h3": 0,
    "d3prime": 0,
    "j": 0,
}

# the maps with a downward strand, two rows of six
ORIENTED_DEGREES: dict[str, int] = {
    "alpha2": 0,
    "beta2": 0,
    "alpha3": 0,
    "beta3": 0,
    "m_bar": 1,
    "delta_bar": 1,
    "ubbar_b": 0,
    "bbaru_b": 0,
    "vertex_in": -1,
    "vertex_out": -1,
    "psi_down_ur": 0,
    "psi_down_ru": 0,
}

# How each picture of the calculus is read. Strands are read bottom to top, blue lines
# are B (upward) or Bbar (downward), the dashed orange line is U.
DIAGRAMS: dict[str, str] = {
    "upward strand ending in a dot": "m",
    "upward strand starting at a dot, orange line below": "delta",
    "downward strand ending in a dot, orange line out": "m_bar",
    "downward strand starting at a dot": "delta_bar",
    "upward strand splitting in two": "split",
    "two upward strands merging, orange line to the left": "merge",
    "cap with an upward left leg": "alpha2",
    "cup with a downward left leg": "beta2",
    "cap with a downward left leg": "alpha3",
    "cup with an upward left leg": "beta3",
    "orange line ending on an upward strand from the left": "ub_bbar",
    "orange line leaving an upward strand to the left": "bbar_ub",
    "orange line ending on an upward strand from the right": "bu_bbar",
    "orange line leaving an upward strand to the right": "bbar_bu",
    "orange line ending on a downward strand from the left": "ubbar_b",
    "orange line leaving a downward strand to the left": "b_ubbar",
    "orange line ending on a downward strand from the right": "bbaru_b",
    "orange line leaving a downward strand to the right": "b_bbaru",
    "upward and downward strand merging into an upward one": "vertex_in",
    "downward strand splitting off an upward one": "vertex_out",
    "orange line crossing an upward strand": "psi_ur",
    "orange line crossing a downward strand": "psi_down_ur",
    "orange cup": "cupU",
    "orange cap": "capU",
    "twisted balanced cup": "beta1_tilde",
    # read as (bu_bbar)(id_B * m_bar)
    "rotated vertex with a dot and an orange segment": "d3prime",
    "oriented cup on B*Bbar": "j",
}


# ---------------------------------- Decompositions ---------------------------------- #


@dataclass(frozen=True)
class Piece:
    """A summand label{shift} of a tensor product with its inclusion and projection."""

    label: Label
    shift: int
    incl: Morphism
    proj: Morphism


def decomposition_BB() -> list[Piece]:
    """B*B = B{-1} + Bbar{1}, realized by the two idempotents."""
    first = Piece(
        "B", -1, _named("split").with_shifts(source=-1), _named("id_m").with_shifts(target=-1)
    )
    second = Piece(
        "Bbar",
        1,
        chain(_named("bbar_ub"), _named("incl_second")).with_shifts(source=1),
        chain(_named("merge"), _named("ub_bbar")).with_shifts(target=1),
    )
    return [first, second]


def _to_canonical(left_u: bool, label: Label, right_u: bool) -> tuple[Label, Morphism, Morphism]:
    """Isomorphism U^a*label*U^b -> canonical label, with its inverse."""
    match (left_u, label, right_u):
        case (False, _, False):
            ident = Morphism.identity(label_object(label))
            return label, ident, ident
        case (True, "B", False):
            return "Bbar", _named("ub_bbar"), _named("bbar_ub")
        case (False, "B", True):
            return "Bbar", _named("bu_bbar"), _named("bbar_bu")
        case (True, "Bbar", False):
            return "B", _named("ubbar_b"), _named("b_ubbar")
        case (False, "Bbar", True):
            return "B", _named("bbaru_b"), _named("b_bbaru")
        case (True, "B", True):
            to = chain(whisker(None, _named("ub_bbar"), U), _named("bbaru_b"))
            back = chain(_named("b_bbaru"), whisker(None, _named("bbar_ub"), U))
            return "B", to, back
        case (True, "Bbar", True):
            to = chain(whisker(None, _named("ubbar_b"), U), _named("bu_bbar"))
            back = chain(_named("bbar_bu"), whisker(None, _named("b_ubbar"), U))
            return "Bbar", to, back
    raise MorphismError(f"no canonical form for U^{int(left_u)}*{label}*U^{int(right_u)}")


@lru_cache(maxsize=None)
def decompose_pair(left: Label, right: Label) -> tuple[Piece, ...]:
    """Canonical summands of left*right; labels among U, B, Bbar."""
    if left == "U" and right == "U":
        return (Piece("R", 0, _named("cupU"), _named("capU")),)
    if left == "U" or right == "U":
        label = right if left == "U" else left
        canon, to, back = _to_canonical(left == "U", label, right == "U")
        return (Piece(canon, 0, back, to),)
    if left not in ("B", "Bbar") or right not in ("B", "Bbar"):
        raise MorphismError(f"cannot decompose {left}*{right}")
    left_u, right_u = left == "Bbar", right == "Bbar"
    pre_left = _named("bbar_ub") if left_u else Morphism.identity(B)
    post_left = _named("ub_bbar") if left_u else Morphism.identity(B)
    pre_right = _named("bbar_bu") if right_u else Morphism.identity(B)
    post_right = _named("bu_bbar") if right_u else Morphism.identity(B)
    pre = tensor_morphisms(pre_left, pre_right)
    post = tensor_morphisms(post_left, post_right)
    pieces = []
    for piece in decomposition_BB():
        outer_left = U if left_u else None
        outer_right = U if right_u else None
        wi = whisker(outer_left, piece.incl, outer_right)
        wp = whisker(outer_left, piece.proj, outer_right)
        canon, to, back = _to_canonical(left_u, piece.label, right_u)
        k = piece.shift
        incl = chain(back.with_shifts(k, k), wi, post)
        proj = chain(pre, wp, to.with_shifts(k, k))
        pieces.append(Piece(canon, k, incl, proj))
    return tuple(pieces)


# ---------------------------------- Invertibility of the Rouquier complex ---------------------------------- #


def _homotopy_maps() -> dict[str, Morphism]:
    """The differentials of R*R' and the explicit splitting of its middle term."""
    m, delta_bar = _named("m"), _named("delta_bar")
    d0 = m.with_shifts(source=1).renamed("d0")
    d1 = tensor_morphisms(Morphism.identity(B), delta_bar.with_shifts(source=1)).renamed("d1")
    d2 = delta_bar.with_shifts(target=-1).renamed("d2")
    d3 = tensor_morphisms(m.with_shifts(target=-1), Morphism.identity(BBAR)).renamed("d3")
    h0 = _named("vertex_in").with_shifts(target=1).renamed("h0")
    h3 = _named("vertex_out").with_shifts(source=-1).renamed("h3")
    # dot on the downward strand, its orange line absorbed into B from the right
    d3prime = Morphism.from_rule(
        B_BBAR, BBAR, 1, lambda f, g, h, u, k: BBAR.element(f, ONE, act_s(1, g * h * u) * k), "d3prime"
    ).with_shifts(target=-1)
    # the cup against the orientation of beta3
    j = (-_named("beta3")).renamed("j")
    return {"d0": d0, "d1": d1, "d2": d2, "d3": d3, "h0": h0, "h3": h3, "d3prime": d3prime, "j": j}


_HOMOTOPY = ("d0", "d1", "d2", "d3", "h0", "h3", "d3prime", "j")


# ---------------------------------- Catalog ---------------------------------- #


@lru_cache(maxsize=None)
def _homotopy_cache() -> dict[str, Morphism]:
    return _homotopy_maps()


@lru_cache(maxsize=None)
def _named(ident: str) -> Morphism:
    if ident in _PRIMITIVES:
        return _PRIMITIVES[ident]()
    if ident in _COMPOSITES:
        return _COMPOSITES[ident]()
    if ident in _HOMOTOPY:
        return _homotopy_cache()[ident]
    raise UnknownMapError(f"no map named {ident!r}")


def named(ident: str) -> Morphism:
    """Catalog lookup; raises UnknownMapError for unknown identifiers."""
    return _named(ident)


def catalog() -> list[str]:
    return list(_PRIMITIVES) + list(_COMPOSITES) + list(_HOMOTOPY)


def verify_catalog() -> list[MorphismReport]:
    """Bimodule-map check of every catalog entry plus its expected degree."""
    reports = []
    for ident in tqdm(catalog(), desc="maps", disable=not SHOW_PROGRESS):
        phi = named(ident)
        report = verify_morphism(phi)
        report.name = ident
        expected = DEGREES.get(ident, 0)
        if report.passed and phi.degree != expected:
            report = MorphismReport(name=ident, passed=False, reason=f"degree {phi.degree}, expected {expected}")
        reports.append(report)
    return reports


def idempotents_BB() -> tuple[Morphism, Morphism]:
    return named("e_first"), named("e_second")


# ---------------------------------- Relations ---------------------------------- #


def _witness(lhs: Morphism, rhs: Morphism) -> Witness | None:
    if len(lhs.source) != len(rhs.source) or len(lhs.target) != len(rhs.target):
        return Witness(generator=None, row=-1, column=-1, left=repr(lhs), right=repr(rhs))
    for a, (u, v) in enumerate(zip(lhs.matrix, rhs.matrix)):
        if u != v:
            b = min(k for k in set(u) | set(v) if u.get(k) != v.get(k))
            return Witness(generator=None, row=a, column=b, left=str(u.get(b, 0)), right=str(v.get(b, 0)))
    return None


def compare(name: str, lhs_text: str, rhs_text: str, lhs: Morphism, rhs: Morphism) -> RelationReport:
    witness = _witness(lhs, rhs)
    return RelationReport(name=name, lhs=lhs_text, rhs=rhs_text, passed=witness is None, witness=witness)


def _zero_like(phi: Morphism) -> Morphism:
    return Morphism.zero(phi.source, phi.target, phi.degree)


def _ident(M: BimoduleObj) -> Morphism:
    return Morphism.identity(M)


Relation = tuple[str, str, str, Callable[[], tuple[Morphism, Morphism]]]


def _adjunction_relations() -> list[Relation]:
    n = named
    return [
        (
            "alpha0/beta0 zigzag on Ind",
            "(alpha0⊗id)(id⊗beta0)",
            "id_Ind",
            lambda: (chain(whisker(IND, n("beta0")), whisker(None, n("alpha0"), IND)), _ident(IND)),
        ),
        (
            "alpha0/beta0 zigzag on Res",
            "(id⊗alpha0)(beta0⊗id)",
            "id_Res",
            lambda: (chain(whisker(None, n("beta0"), RES), whisker(RES, n("alpha0"))), _ident(RES)),
        ),
        (
            "alpha1/beta1 zigzag on Res",
            "(alpha1⊗id)(id⊗beta1)",
            "id_Res",
            lambda: (chain(whisker(RES, n("beta1")), whisker(None, n("alpha1"), RES)), _ident(RES)),
        ),
        (
            "alpha1/beta1 zigzag on U*Ind",
            "(id⊗alpha1)(beta1⊗id)",
            "id_U*Ind",
            lambda: (chain(whisker(None, n("beta1"), U_IND), whisker(U_IND, n("alpha1"))), _ident(U_IND)),
        ),
        (
            "alpha2/beta2 zigzag on B",
            "(alpha2⊗id)(id⊗beta2)",
            "id_B",
            lambda: (chain(whisker(B, n("beta2")), whisker(None, n("alpha2"), B)), _ident(B)),
        ),
        (
            "alpha2/beta2 zigzag on Bbar",
            "(id⊗alpha2)(beta2⊗id)",
            "id_Bbar",
            lambda: (chain(whisker(None, n("beta2"), BBAR), whisker(BBAR, n("alpha2"))), _ident(BBAR)),
        ),
        (
            "alpha3/beta3 zigzag on Bbar",
            "(alpha3⊗id)(id⊗beta3)",
            "id_Bbar",
            lambda: (chain(whisker(BBAR, n("beta3")), whisker(None, n("alpha3"), BBAR)), _ident(BBAR)),
        ),
        (
            "alpha3/beta3 zigzag on B",
            "(id⊗alpha3)(beta3⊗id)",
            "id_B",
            lambda: (chain(whisker(None, n("beta3"), B), whisker(B, n("alpha3"))), _ident(B)),
        ),
        (
            "clockwise circle",
            "alpha2∘beta3",
            "0",
            lambda: (chain(n("beta3"), n("alpha2")), Morphism.zero(R_, R_)),
        ),
        (
            "counterclockwise circle",
            "alpha3∘beta2",
            "0",
            lambda: (chain(n("beta2"), n("alpha3")), Morphism.zero(R_, R_)),
        ),
    ]


def _inverse_pair(first: str, second: str, obj: BimoduleObj) -> Relation:
    return (
        f"{second}∘{first} is the identity",
        f"{second}∘{first}",
        f"id_{obj.name}",
        lambda: (chain(named(first), named(second)), _ident(obj)),
    )


def _crossing_relations() -> list[Relation]:
    return [
        _inverse_pair("cross_u_ind", "cross_ind_u", U_IND),
        _inverse_pair("cross_ind_u", "cross_u_ind", IND_US),
        _inverse_pair("cross_us_res", "cross_res_u", US_RES),
        _inverse_pair("cross_res_u", "cross_us_res", RES_U),
        _inverse_pair("psi_ur", "psi_ru", UB),
        _inverse_pair("psi_ru", "psi_ur", BU),
        _inverse_pair("psi_down_ur", "psi_down_ru", U_BBAR),
        _inverse_pair("psi_down_ru", "psi_down_ur", BBAR_U),
        _inverse_pair("cupU", "capU", R_),
        _inverse_pair("capU", "cupU", UU),
        _inverse_pair("cupUs", "capUs", RS_),
        _inverse_pair("capUs", "cupUs", USUS),
        _inverse_pair("mixed_cup_res", "mixed_cap_res", RES),
        _inverse_pair("mixed_cap_res", "mixed_cup_res", US_RES_U),
        _inverse_pair("mixed_cup_ind", "mixed_cap_ind", IND),
        _inverse_pair("mixed_cap_ind", "mixed_cup_ind", U_IND_US),
        _inverse_pair("ub_bbar", "bbar_ub", UB),
        _inverse_pair("bu_bbar", "bbar_bu", BU),
        _inverse_pair("ubbar_b", "b_ubbar", U_BBAR),
        _inverse_pair("b_ubbar", "ubbar_b", B),
        _inverse_pair("bbaru_b", "b_bbaru", BBAR_U),
        _inverse_pair("b_bbaru", "bbaru_b", B),
        (
            "sliding the crossings through B",
            "psi_ur",
            "(bbar→bu)∘(ub→bbar)",
            lambda: (named("psi_ur"), chain(named("ub_bbar"), named("bbar_bu"))),
        ),
    ]


def _reversal_relations() -> list[Relation]:
    """Each orientation-reversal vertex on a downward strand is an upward one bent by an orange cup or cap."""
    n = named
    return [
        (
            "orange line ending on a downward strand from the left",
            "ubbar→b",
            "(capU⊗id)(id⊗bbar→ub)",
            lambda: (n("ubbar_b"), chain(whisker(U, n("bbar_ub")), whisker(None, n("capU"), B))),
        ),
        (
            "orange line leaving a downward strand to the left",
            "b→ubbar",
            "(id⊗ub→bbar)(cupU⊗id)",
            lambda: (n("b_ubbar"), chain(whisker(None, n("cupU"), B), whisker(U, n("ub_bbar")))),
        ),
        (
            "orange line ending on a downward strand from the right",
            "bbaru→b",
            "(id⊗capU)(bbar→bu⊗id)",
            lambda: (n("bbaru_b"), chain(whisker(None, n("bbar_bu"), U), whisker(B, n("capU")))),
        ),
        (
            "orange line leaving a downward strand to the right",
            "b→bbaru",
            "(bu→bbar⊗id)(id⊗cupU)",
            lambda: (n("b_bbaru"), chain(whisker(B, n("cupU")), whisker(None, n("bu_bbar"), U))),
        ),
    ]


def _oriented_relations() -> list[Relation]:
    """Dots and trivalent vertices on downward strands."""
    n = named

    def down_dot_then_dot():
        composite = chain(n("delta_bar"), n("m_bar"))
        return composite, Morphism.zero(R_, U, 2)

    def merge_across_orange():
        transported = chain(
            whisker(B, n("bbar_bu")), whisker(None, n("merge"), U), whisker(U, n("bu_bbar")), n("ubbar_b")
        )
        return n("vertex_in"), -transported

    def split_with_bent_legs():
        bent = chain(
            whisker(BBAR, n("beta3")),
            whisker(BBAR, whisker(None, n("split"), BBAR)),
            whisker(None, n("alpha3"), B_BBAR),
        )
        return n("vertex_out"), bent

    def mirrored_split():
        lhs = chain(whisker(BBAR, n("split")), whisker(None, n("alpha3"), B))
        rhs = chain(whisker(None, n("bbar_ub"), B), whisker(U, n("merge")), whisker(None, n("capU"), B))
        return lhs, rhs

    return [
        (
            "dot on a downward strand",
            "m_bar",
            "(m⊗id)(bbar→bu)",
            lambda: (n("m_bar"), chain(n("bbar_bu"), whisker(None, n("m"), U))),
        ),
        ("two dots on a downward strand", "m_bar∘delta_bar", "0", down_dot_then_dot),
        (
            "starting dot through the counterclockwise cup",
            "(id⊗m)∘beta2",
            "delta_bar",
            lambda: (chain(n("beta2"), whisker(BBAR, n("m"))), n("delta_bar")),
        ),
        (
            "ending dot through the counterclockwise cap",
            "alpha3∘(delta_bar⊗id)",
            "-m",
            lambda: (chain(whisker(None, n("delta_bar"), B), n("alpha3")), -n("m")),
        ),
        (
            "ending dot through the clockwise cap",
            "alpha2∘(id⊗delta_bar)",
            "m",
            lambda: (chain(whisker(B, n("delta_bar")), n("alpha2")), n("m")),
        ),
        (
            "split rotated by the clockwise cap",
            "(id⊗alpha2)(split⊗id)",
            "vertex_in",
            lambda: (chain(whisker(None, n("split"), BBAR), whisker(B, n("alpha2"))), n("vertex_in")),
        ),
        (
            "merge carried across the orange line",
            "vertex_in",
            "-(ubbar→b)(id⊗bu→bbar)(merge⊗id)(id⊗bbar→bu)",
            merge_across_orange,
        ),
        (
            "split with the downward leg from bbar",
            "vertex_out",
            "(id⊗bu→bbar)(split⊗id)(bbar→bu)",
            lambda: (
                n("vertex_out"),
                chain(n("bbar_bu"), whisker(None, n("split"), U), whisker(B, n("bu_bbar"))),
            ),
        ),
        ("split with both legs bent", "vertex_out", "(alpha3⊗id)(id⊗split⊗id)(id⊗beta3)", split_with_bent_legs),
        (
            "split rotated by the counterclockwise cap",
            "(alpha3⊗id)(id⊗split)",
            "(capU⊗id)(id⊗merge)(bbar→ub⊗id)",
            mirrored_split,
        ),
    ]


def _sign_relations() -> list[Relation]:
    n = named

    def cup_against_cap():
        lhs = chain(whisker(U, n("beta1")), whisker(None, n("capU"), IND_RES))
        return lhs, -n("delta").with_shifts(target=1)

    def vertex_reflection():
        lhs = chain(
            whisker(RES_IND, n("cupUs")),
            whisker(RES, whisker(None, n("cross_ind_u"), US)),
            whisker(None, n("alpha1"), US),
        )
        return lhs, -n("dprime")

    return [
        ("dot from the twisted cup", "(capU⊗id)(id⊗beta1)", "-delta", cup_against_cap),
        ("dprime from the Us cup", "(alpha1⊗id)(id⊗cross⊗id)(id⊗cupUs)", "-dprime", vertex_reflection),
        (
            "balanced cup is the dotted U-cup",
            "beta1_tilde",
            "delta_bar",
            lambda: (n("beta1_tilde"), n("delta_bar").with_shifts(target=1)),
        ),
        (
            "dot then multiplication",
            "m∘delta",
            "0",
            lambda: (chain(n("delta"), n("m")), Morphism.zero(U, R_, 2)),
        ),
        (
            "dot then multiplication next to U",
            "(m⊗id)(delta⊗id)cupU",
            "0",
            lambda: (
                chain(n("cupU"), whisker(None, n("delta"), U), whisker(None, n("m"), U)),
                Morphism.zero(R_, U, 2),
            ),
        ),
    ]


def _exact_sequence_relations() -> list[Relation]:
    n = named

    def counit(left: bool):
        counit_map = whisker(None, n("m"), B) if left else whisker(B, n("m"))
        return chain(n("split"), counit_map), _ident(B)

    def coassociative():
        return chain(n("split"), whisker(None, n("split"), B)), chain(n("split"), whisker(B, n("split")))

    def merge_split():
        composite = chain(n("split"), n("merge"))
        return composite, _zero_like(composite)

    def merge_against_split():
        lhs = chain(whisker(B, n("split")), whisker(None, n("merge"), B))
        return lhs, chain(n("merge"), whisker(U, n("split")))

    def dotted_merge():
        lhs = chain(n("merge"), whisker(U, n("m")))
        rhs = chain(whisker(IND, n("dprime"), RES).with_shifts(-2, -1), n("m_bar"))
        return lhs, rhs

    def second_inclusion_dotted():
        lhs = chain(n("incl_second"), whisker(None, n("m"), B))
        return lhs, -chain(whisker(None, n("delta"), B), n("id_m"))

    return [
        ("split then multiply on the left", "(m⊗id)∘split", "id_B", lambda: counit(True)),
        ("split then multiply on the right", "(id⊗m)∘split", "id_B", lambda: counit(False)),
        ("coassociativity of split", "(split⊗id)∘split", "(id⊗split)∘split", coassociative),
        ("merge after split", "merge∘split", "0", merge_split),
        (
            "merge after a dot on the left strand",
            "merge∘(delta⊗id)",
            "id_U*B",
            lambda: (chain(whisker(None, n("delta"), B), n("merge")), _ident(UB)),
        ),
        (
            "merge after a dot on the right strand",
            "merge∘(id⊗delta)",
            "-psi_ru",
            lambda: (chain(whisker(B, n("delta")), n("merge")), -n("psi_ru")),
        ),
        ("id_m is the whiskered dot", "id_m", "id⊗m", lambda: (n("id_m"), whisker(B, n("m")))),
        (
            "multiplication is associative",
            "m∘(id⊗m)",
            "m∘(m⊗id)",
            lambda: (chain(n("id_m"), n("m")), chain(whisker(None, n("m"), B), n("m"))),
        ),
        ("merge commutes with a later split", "(merge⊗id)(id⊗split)", "(id⊗split)∘merge", merge_against_split),
        ("dot after merge", "(id⊗m)∘merge", "m_bar∘(id⊗dprime⊗id)", dotted_merge),
        ("dot after the second inclusion", "(m⊗id)∘incl_second", "-(id⊗m)(delta⊗id)", second_inclusion_dotted),
    ]


def _idempotent_relations() -> list[Relation]:
    def pieces():
        return decomposition_BB()

    def square(ident: str):
        e = named(ident)
        return compose(e, e), e

    def product(first: str, second: str):
        composite = compose(named(first), named(second))
        return composite, _zero_like(composite)

    def total():
        e1, e2 = idempotents_BB()
        return e1 + e2, _ident(BB)

    def retract(k: int):
        p = pieces()[k]
        return compose(p.incl, p.proj), _ident(p.incl.source)

    return [
        ("first idempotent", "e_first∘e_first", "e_first", lambda: square("e_first")),
        ("second idempotent", "e_second∘e_second", "e_second", lambda: square("e_second")),
        ("orthogonality", "e_second∘e_first", "0", lambda: product("e_first", "e_second")),
        ("orthogonality, reversed", "e_first∘e_second", "0", lambda: product("e_second", "e_first")),
        ("idempotents sum to the identity", "e_first + e_second", "id_B*B", total),
        ("B{-1} summand retracts", "proj∘incl", "id_B{-1}", lambda: retract(0)),
        ("Bbar{1} summand retracts", "proj∘incl", "id_Bbar{1}", lambda: retract(1)),
    ]


def _homotopy_relations() -> list[Relation]:
    n = named

    def ident_of(ident: str):
        return _ident(n(ident).source)

    def zero_of(composite: Morphism):
        return _zero_like(composite)

    return [
        ("h0 d1 = id", "h0∘d1", "id_B{1}", lambda: (compose(n("d1"), n("h0")), ident_of("d1"))),
        ("d2 = d3 j", "d2", "d3∘j", lambda: (n("d2"), compose(n("j"), n("d3")))),
        ("d3 h3 = id", "d3∘h3", "id_Bbar{-1}", lambda: (compose(n("h3"), n("d3")), ident_of("h3"))),
        ("h0 h3 = 0", "h0∘h3", "0", lambda: (lambda c: (c, zero_of(c)))(compose(n("h3"), n("h0")))),
        ("d3' d1 = 0", "d3'∘d1", "0", lambda: (lambda c: (c, zero_of(c)))(compose(n("d1"), n("d3prime")))),
        ("d3' h3 = id", "d3'∘h3", "id_Bbar{-1}", lambda: (compose(n("h3"), n("d3prime")), ident_of("h3"))),
        (
            "d1 h0 + h3 d3' = id",
            "d1∘h0 + h3∘d3'",
            "id_B*Bbar",
            lambda: (compose(n("h0"), n("d1")) + compose(n("d3prime"), n("h3")), ident_of("h0")),
        ),
        (
            "d3' is a dot on the downward strand",
            "d3'",
            "(bu→bbar)(id⊗m_bar)",
            lambda: (n("d3prime"), chain(whisker(B, n("m_bar")), n("bu_bbar"))),
        ),
        (
            "the square of R*R' commutes",
            "d3∘d1",
            "d2∘d0",
            lambda: (compose(n("d1"), n("d3")), compose(n("d0"), n("d2"))),
        ),
    ]


def relations() -> list[Relation]:
    return (
        _adjunction_relations()
        + _crossing_relations()
        + _reversal_relations()
        + _oriented_relations()
        + _sign_relations()
        + _exact_sequence_relations()
        + _idempotent_relations()
        + _homotopy_relations()
    )


def evaluate(relation: Relation) -> RelationReport:
    name, lhs_text, rhs_text, build = relation
    try:
        lhs, rhs = build()
    except SoergelError as e:
        logger.warning("relation %r could not be evaluated: %s", name, e)
        return RelationReport(name=name, lhs=lhs_text, rhs=rhs_text, passed=False)
    return compare(name, lhs_text, rhs_text, lhs, rhs)


def relation_suite() -> list[RelationReport]:
    reports = [evaluate(r) for r in tqdm(relations(), desc="relations", disable=not SHOW_PROGRESS)]
    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.warning("%d of %d relations failed: %s", len(failed), len(reports), ", ".join(failed))
    else:
        logger.info("all %d relations hold", len(reports))
    return reports


def negative_controls() -> list[RelationReport]:
    """Relations that must fail: a sign-flipped idempotent and a non-map into R."""
    e1, e2 = idempotents_BB()
    flipped = -e2
    fake = Morphism(B, shift(R_, -1), 2, [{0: x1}, {0: x1 * x1}], "fake")
    report = verify_morphism(fake)
    return [
        compare("sign-flipped second idempotent", "(-e_second)^2", "-e_second", compose(flipped, flipped), flipped),
        compare("sign-flipped decomposition", "e_first - e_second", "id_B*B", e1 + flipped, _ident(BB)),
        RelationReport(
            name="fake multiplication", lhs="1⊗1 ↦ x1", rhs="bimodule map", passed=report.passed, witness=report.witness
        ),
    ]

