"""
Split Grothendieck ring of two-strand odd Soergel bimodules.

K0 is free over Z[q, q^-1] on 1, b, c, bc with b = [B], c = [U], bc = [Bbar],
c^2 = 1 and b^2 = q^-1 b + q bc. The pairing ([M], [N]) is the graded dimension
of the space of all bimodule maps M -> N; its values are kept as numerators over
the fixed denominator (1 - q^4)^2.
"""

from dataclasses import dataclass
from itertools import product
from tokenize import TokenError

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from bimod import graded_hom_series
from complexes import Complex, Summand, parse_word
from errors import ExpressionError, UnknownSummandError
from models import HomCheckReport
from utils.config import get_logger

logger = get_logger("grothendieck")


# ---------------------------------- Laurent polynomials ---------------------------------- #


class LaurentPoly:
    """Integer Laurent polynomial in q, stored as exponent -> coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {k: int(c) for k, c in (coeffs or {}).items() if c}

    @classmethod
    def q(cls, n: int = 1):
        return cls({n: 1})

    @classmethod
    def const(cls, c: int):
        return cls({0: c})

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        other = _laurent(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_laurent(other))

    def __rsub__(self, other):
        return _laurent(other) - self

    def __mul__(self, other):
        other = _laurent(other)
        out: dict[int, int] = {}
        for (i, a), (j, b) in product(self.coeffs.items(), other.coeffs.items()):
            out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def bar(self) -> "LaurentPoly":
        return LaurentPoly({-k: c for k, c in self.coeffs.items()})

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit, i.e. of +-q^n."""
        if not self.is_monomial() or abs(next(iter(self.coeffs.values()))) != 1:
            raise ExpressionError(f"{self} is not invertible in Z[q, q^-1]")
        (k, c), = self.coeffs.items()
        return LaurentPoly({-k: c})

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = ""
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "q" if k == 1 else f"q^{k}"
                body = power if mag == 1 else f"{mag}{power}"
            out += f" {sign} {body}" if out else (f"-{body}" if c < 0 else body)
        return out


def _laurent(p) -> LaurentPoly:
    if isinstance(p, LaurentPoly):
        return p
    if isinstance(p, int):
        return LaurentPoly.const(p)
    raise TypeError(f"cannot treat {p!r} as a Laurent polynomial")


def _wrap(p: LaurentPoly) -> str:
    text = str(p)
    return f"({text})" if len(p.coeffs) > 1 else text


# ---------------------------------- K0 ---------------------------------- #

# basis element b^i c^j is the pair (i, j)
BASIS: tuple[tuple[int, int], ...] = ((0, 0), (1, 0), (0, 1), (1, 1))
BASIS_NAMES = {(0, 0): "1", (1, 0): "b", (0, 1): "c", (1, 1): "bc"}


class K0Elem:
    """Element of Z[q, q^-1]{1, b, c, bc}."""

    __slots__ = ("coords",)

    def __init__(self, coords: dict[tuple[int, int], LaurentPoly] | None = None):
        self.coords = {k: p for k, p in (coords or {}).items() if p}

    @classmethod
    def basis(cls, name: str):
        for k, v in BASIS_NAMES.items():
            if v == name:
                return cls({k: LaurentPoly.const(1)})
        raise ExpressionError(f"unknown basis element {name!r}")

    @classmethod
    def scalar(cls, p: LaurentPoly | int):
        return cls({(0, 0): _laurent(p)})

    def coefficient(self, name: str) -> LaurentPoly:
        for k, v in BASIS_NAMES.items():
            if v == name:
                return self.coords.get(k, LaurentPoly())
        raise ExpressionError(f"unknown basis element {name!r}")

    def is_scalar(self) -> bool:
        return set(self.coords) <= {(0, 0)}

    def __add__(self, other: "K0Elem"):
        out = dict(self.coords)
        for k, p in other.coords.items():
            out[k] = out.get(k, LaurentPoly()) + p
        return K0Elem(out)

    def __neg__(self):
        return K0Elem({k: -p for k, p in self.coords.items()})

    def __sub__(self, other: "K0Elem"):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return K0Elem({k: p * other for k, p in self.coords.items()})
        return k0_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = K0Elem.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, K0Elem):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def __repr__(self):
        return f"K0Elem({self})"

    def __str__(self):
        if not self.coords:
            return "0"
        parts = []
        for k in BASIS:
            p = self.coords.get(k)
            if p is None:
                continue
            name = BASIS_NAMES[k]
            if name == "1":
                parts.append(_wrap(p))
            elif p == 1:
                parts.append(name)
            elif p == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{_wrap(p)}*{name}")
        return " + ".join(parts).replace("+ -", "- ")


def _basis_product(u: tuple[int, int], v: tuple[int, int]) -> K0Elem:
    c = (u[1] + v[1]) % 2
    if u[0] + v[0] < 2:
        return K0Elem({(u[0] + v[0], c): LaurentPoly.const(1)})
    # b^2 = q^-1 b + q bc
    return K0Elem({(1, c): LaurentPoly.q(-1), (1, (c + 1) % 2): LaurentPoly.q(1)})


def k0_mul(x: K0Elem, y: K0Elem) -> K0Elem:
    out = K0Elem()
    for (u, p), (v, r) in product(x.coords.items(), y.coords.items()):
        out = out + _basis_product(u, v) * (p * r)
    return out


def k0_tau(x: K0Elem) -> K0Elem:
    """Semilinear antiinvolution: b -> bc, c -> c, q -> q^-1."""
    return K0Elem({(i, (i + j) % 2): p.bar() for (i, j), p in x.coords.items()})


# ---------------------------------- The pairing ---------------------------------- #

# (1, basis element), numerators over (1 - q^4)^2
TRACE_TABLE: dict[tuple[int, int], LaurentPoly] = {
    (0, 0): LaurentPoly.const(1),
    (1, 0): LaurentPoly.q(3),
    (0, 1): LaurentPoly(),
    (1, 1): LaurentPoly.q(1),
}


@dataclass(frozen=True)
class FormValue:
    """numerator / (1 - q^4)^2"""

    numerator: LaurentPoly

    def __add__(self, other: "FormValue"):
        return FormValue(self.numerator + other.numerator)

    def __neg__(self):
        return FormValue(-self.numerator)

    def __sub__(self, other: "FormValue"):
        return self + (-other)

    def scaled(self, p: LaurentPoly) -> "FormValue":
        return FormValue(self.numerator * p)

    def series(self, cutoff: int) -> dict[int, int]:
        """Coefficients of the power series expansion up to q^cutoff; 1/(1-t)^2 = sum (k+1) t^k."""
        out: dict[int, int] = {}
        for e, c in self.numerator.coeffs.items():
            k = 0
            while e + 4 * k <= cutoff:
                out[e + 4 * k] = out.get(e + 4 * k, 0) + c * (k + 1)
                k += 1
        return {d: n for d, n in sorted(out.items()) if n}

    def __str__(self):
        if not self.numerator:
            return "0"
        return f"{_wrap(self.numerator)}/(1 - q^4)^2"


def trace(a: K0Elem) -> FormValue:
    total = LaurentPoly()
    for k, p in a.coords.items():
        total = total + p * TRACE_TABLE[k]
    return FormValue(total)


def form(x: K0Elem, y: K0Elem) -> FormValue:
    """Antilinear in x, linear in y, with (xm, n) = (m, tau(x) n)."""
    return trace(k0_mul(k0_tau(x), y))


# ---------------------------------- Classes of bimodules and complexes ---------------------------------- #

_LABEL_CLASSES = {"R": (0, 0), "B": (1, 0), "U": (0, 1), "Bbar": (1, 1)}


def class_of(s: Summand) -> K0Elem:
    out = K0Elem.scalar(LaurentPoly.q(s.shift))
    for label in s.labels:
        if label not in _LABEL_CLASSES:
            raise UnknownSummandError(f"no class for summand label {label!r}")
        out = out * K0Elem({_LABEL_CLASSES[label]: LaurentPoly.const(1)})
    return out


def euler_class(C: Complex) -> K0Elem:
    out = K0Elem()
    for n in C.degrees():
        for s in C.terms[n]:
            cls = class_of(s)
            out = out + (cls if n % 2 == 0 else -cls)
    return out


def check_against_hom(source: str, target: str, d_max: int) -> HomCheckReport:
    """Compare the series of ([source], [target]) with the computed graded Hom dimensions."""
    s, t = parse_word(source), parse_word(target)
    expected = form(class_of(s), class_of(t)).series(d_max)
    computed = graded_hom_series(s.obj, t.obj, d_max)
    passed = expected == computed.dims
    if not passed:
        logger.warning("Hom(%s, %s) disagrees with the pairing: %s vs %s", source, target, computed.dims, expected)
    return HomCheckReport(
        source=source, target=target, cutoff=d_max, expected=expected, computed=computed.dims, passed=passed
    )


# ---------------------------------- Expressions ---------------------------------- #

_SYMBOLS = {name: sympy.Symbol(name) for name in ("b", "c", "bc", "q")}
_FUNCTIONS = {name: sympy.Function(name) for name in ("tau", "form", "trace")}
_TRANSFORMS = standard_transformations + (convert_xor,)


def _to_value(node) -> K0Elem | FormValue:
    if isinstance(node, sympy.Integer):
        return K0Elem.scalar(int(node))
    if isinstance(node, sympy.Symbol):
        if node.name == "q":
            return K0Elem.scalar(LaurentPoly.q())
        return K0Elem.basis(node.name)
    if isinstance(node, sympy.Add):
        values = [_to_value(a) for a in node.args]
        out = values[0]
        for v in values[1:]:
            if type(v) is not type(out):
                raise ExpressionError("cannot add a pairing value to a K0 element")
            out = out + v
        return out
    if isinstance(node, sympy.Mul):
        out = _to_value(node.args[0])
        for arg in node.args[1:]:
            out = _times(out, _to_value(arg))
        return out
    if isinstance(node, sympy.Pow):
        base, exponent = node.args[0], node.args[1].doit()
        if not exponent.is_Integer:
            raise ExpressionError(f"exponent {exponent} is not an integer")
        value = _to_value(base)
        n = int(exponent)
        if not isinstance(value, K0Elem):
            raise ExpressionError("cannot raise a pairing value to a power")
        if n >= 0:
            return value**n
        if not value.is_scalar():
            raise ExpressionError(f"{base} is not invertible")
        return K0Elem.scalar(value.coefficient("1").inverse()) ** (-n)
    if node.func == _FUNCTIONS["tau"] and len(node.args) == 1:
        return k0_tau(_k0_argument(node.args[0]))
    if node.func == _FUNCTIONS["trace"] and len(node.args) == 1:
        return trace(_k0_argument(node.args[0]))
    if node.func == _FUNCTIONS["form"] and len(node.args) == 2:
        return form(_k0_argument(node.args[0]), _k0_argument(node.args[1]))
    raise ExpressionError(f"unsupported expression {node}")


def _k0_argument(node) -> K0Elem:
    value = _to_value(node)
    if not isinstance(value, K0Elem):
        raise ExpressionError(f"{node} must be an element of K0")
    return value


def _times(u: K0Elem | FormValue, v: K0Elem | FormValue) -> K0Elem | FormValue:
    if isinstance(u, K0Elem) and isinstance(v, K0Elem):
        return u * v
    if isinstance(u, FormValue) and isinstance(v, FormValue):
        raise ExpressionError("cannot multiply two pairing values")
    value, scalar = (u, v) if isinstance(u, FormValue) else (v, u)
    if not scalar.is_scalar():
        raise ExpressionError("pairing values can only be scaled by Laurent polynomials")
    return value.scaled(scalar.coefficient("1"))


def evaluate(text: str) -> K0Elem | FormValue:
    """Evaluate expressions such as `b*b`, `tau(q*b)`, `form(b, 1)` or `trace(b*c)`."""
    try:
        node = parse_expr(text, local_dict={**_SYMBOLS, **_FUNCTIONS}, transformations=_TRANSFORMS, evaluate=False)
    except (SyntaxError, TypeError, sympy.SympifyError, TokenError) as e:
        raise ExpressionError(f"cannot parse {text!r}: {e}") from e
    return _to_value(node)
