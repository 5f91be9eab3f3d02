"""
Sparse Laurent polynomials over an involutive field and their fractions

K[t1^±1, ..., tr^±1] and its quotient field K(t1, ..., tr). A Laurent
polynomial is a sympy polynomial over the field's domain with no variable
dividing it, times a monomial shift. Fractions are reduced with sympy's
gcd and their denominators unit-normalized, so equal fractions compare
and hash equal at every rank.
"""

import logging
import re
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains.polynomialring import PolynomialRing
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement

from errors import (
    ExponentOverflowError,
    NotDivisibleError,
    ParseError,
    ShapeError,
    UndefinedDegreeError,
    UnsupportedError,
)
from fields import FieldKind, InvolutiveField

logger = logging.getLogger(__name__)

EXPONENT_LIMIT = 2 ** 31

Exponent = Tuple[int, ...]


def _is_scalar(x: Any) -> bool:
    return not isinstance(x, (LaurentPolynomial, RationalFunction, PolyElement)) and not hasattr(x, "shape")


def _check_exponent(e: Exponent) -> Exponent:
    for k in e:
        if not -EXPONENT_LIMIT <= k < EXPONENT_LIMIT:
            raise ExponentOverflowError("exponent outside the signed 32-bit range", str(e))
    return e


def _add_exponents(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _sub_exponents(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _neg_exponent(a: Exponent) -> Exponent:
    return tuple(-x for x in a)


def _variable_names(rank: int) -> List[str]:
    return ["t"] if rank == 1 else [f"t{k + 1}" for k in range(rank)]


@lru_cache(maxsize=None)
def polynomial_domain(field: InvolutiveField, rank: int) -> PolynomialRing:
    """The sympy domain K[t1, ..., tr] holding the polynomial parts"""
    return field.domain.poly_ring(*_variable_names(rank))


class LaurentPolynomial:
    """Element of K[F], F free abelian of the given rank"""

    __slots__ = ("field", "rank", "_poly", "_shift")

    def __init__(self, field: InvolutiveField, rank: int, terms: Optional[Mapping[Sequence[int], Any]] = None):
        if rank < 1:
            raise ShapeError("Laurent polynomial rank must be at least 1", str(rank))
        clean: Dict[Exponent, Any] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != rank:
                raise ShapeError(f"exponent vector of length {len(e)} in rank {rank}", str(e))
            c = field.coerce(c)
            if c:
                clean[_check_exponent(e)] = c
        low = tuple(min(e[k] for e in clean) for k in range(rank)) if clean else (0,) * rank
        ring = polynomial_domain(field, rank).ring
        poly = ring.from_dict({_sub_exponents(e, low): c for e, c in clean.items()})
        self.field = field
        self.rank = rank
        self._poly = poly
        self._shift = low

    @classmethod
    def _make(cls, field: InvolutiveField, rank: int, poly: PolyElement, shift: Exponent) -> "LaurentPolynomial":
        """Wrap a polynomial that no variable divides"""
        p = cls.__new__(cls)
        p.field = field
        p.rank = rank
        p._poly = poly
        p._shift = tuple(shift) if poly else (0,) * rank
        return p

    @classmethod
    def from_polynomial(cls, field: InvolutiveField, rank: int, poly: PolyElement, shift: Optional[Sequence[int]] = None) -> "LaurentPolynomial":
        """t^shift * poly for an arbitrary element of polynomial_domain(field, rank)"""
        shift = tuple(shift) if shift is not None else (0,) * rank
        if not poly:
            return cls.zero(field, rank)
        ring = polynomial_domain(field, rank).ring
        if poly.ring != ring:
            poly = ring.from_dict(dict(poly))
        low = tuple(min(m[k] for m in poly.itermonoms()) for k in range(rank))
        if any(low):
            poly = ring.from_dict({_sub_exponents(m, low): c for m, c in poly.items()})
        return cls._make(field, rank, poly, _check_exponent(_add_exponents(shift, low)))

    @classmethod
    def zero(cls, field: InvolutiveField, rank: int = 1) -> "LaurentPolynomial":
        return cls._make(field, rank, polynomial_domain(field, rank).ring.zero, (0,) * rank)

    @classmethod
    def one(cls, field: InvolutiveField, rank: int = 1) -> "LaurentPolynomial":
        return cls._make(field, rank, polynomial_domain(field, rank).ring.one, (0,) * rank)

    @classmethod
    def constant(cls, field: InvolutiveField, rank: int, c: Any) -> "LaurentPolynomial":
        return cls(field, rank, {(0,) * rank: c})

    @classmethod
    def monomial(cls, field: InvolutiveField, exponent: Sequence[int], coefficient: Any = 1) -> "LaurentPolynomial":
        return cls(field, len(exponent), {tuple(exponent): coefficient})

    @classmethod
    def variable(cls, field: InvolutiveField, rank: int = 1, index: int = 0) -> "LaurentPolynomial":
        e = [0] * rank
        e[index] = 1
        return cls.monomial(field, e)

    @classmethod
    def from_coefficients(cls, field: InvolutiveField, coefficients: Sequence[Any], shift: int = 0) -> "LaurentPolynomial":
        """Rank-1 polynomial sum_k coefficients[k] * t^(k + shift)"""
        return cls(field, 1, {(k + shift,): c for k, c in enumerate(coefficients)})

    # Structure

    @property
    def polynomial(self) -> PolyElement:
        """The sympy polynomial part; self = t^shift * polynomial"""
        return self._poly

    @property
    def shift_exponent(self) -> Exponent:
        return self._shift

    @property
    def terms(self) -> Mapping[Exponent, Any]:
        return {_add_exponents(m, self._shift): c for m, c in self._poly.items()}

    def items(self) -> List[Tuple[Exponent, Any]]:
        return sorted(self.terms.items())

    def coefficient(self, exponent: Sequence[int]) -> Any:
        m = _sub_exponents(tuple(exponent), self._shift)
        if any(k < 0 for k in m):
            return self.field.zero
        return self._poly.get(m, self.field.zero)

    @property
    def is_zero(self) -> bool:
        return not self._poly

    @property
    def is_monomial(self) -> bool:
        return len(self._poly) == 1

    @property
    def is_constant(self) -> bool:
        return not self._poly or (self.is_monomial and not any(self._shift))

    @property
    def is_one(self) -> bool:
        return self.is_constant and self._poly == self._poly.ring.one

    def monomial_parts(self) -> Tuple[Any, Exponent]:
        if not self.is_monomial:
            raise ValueError("not a monomial")
        (m, c), = self._poly.items()
        return c, _add_exponents(m, self._shift)

    def _require_rank_one(self, operation: str):
        if self.rank != 1:
            raise UnsupportedError(f"{operation} is only defined in rank 1", str(self.rank))

    def min_exponent(self) -> int:
        self._require_rank_one("min_exponent")
        if not self._poly:
            raise UndefinedDegreeError("zero polynomial has no exponents")
        return self._shift[0]

    def max_exponent(self) -> int:
        self._require_rank_one("max_exponent")
        if not self._poly:
            raise UndefinedDegreeError("zero polynomial has no exponents")
        return self._shift[0] + self._poly.degree()

    def degree(self) -> int:
        """Highest minus lowest exponent (rank 1)"""
        self._require_rank_one("degree")
        if not self._poly:
            raise UndefinedDegreeError("degree of the zero polynomial")
        return self._poly.degree()

    def to_polynomial(self) -> PolyElement:
        """The same element as a sympy polynomial; every exponent must be non-negative"""
        if any(k < 0 for k in self._shift):
            raise NotDivisibleError("Laurent polynomial has negative exponents", str(self))
        return self._poly.mul_monom(self._shift)

    # Arithmetic

    def _lift(self, other: Any) -> Optional["LaurentPolynomial"]:
        if isinstance(other, LaurentPolynomial):
            if other.rank != self.rank or other.field != self.field:
                raise ShapeError("Laurent polynomials over different rings", f"{self.field}/{self.rank} vs {other.field}/{other.rank}")
            return other
        if isinstance(other, RationalFunction):
            return None
        if _is_scalar(other):
            return LaurentPolynomial.constant(self.field, self.rank, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o._poly:
            return self
        if not self._poly:
            return o
        low = tuple(min(a, b) for a, b in zip(self._shift, o._shift))
        total = self._poly.mul_monom(_sub_exponents(self._shift, low)) + o._poly.mul_monom(_sub_exponents(o._shift, low))
        return LaurentPolynomial.from_polynomial(self.field, self.rank, total, low)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._make(self.field, self.rank, -self._poly, self._shift)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        # a product of polynomials prime to every variable stays prime to them
        shift = _check_exponent(_add_exponents(self._shift, o._shift))
        return LaurentPolynomial._make(self.field, self.rank, self._poly * o._poly, shift)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial:
                raise NotDivisibleError("only monomials are invertible in the Laurent ring", str(self))
            c, e = self.monomial_parts()
            return LaurentPolynomial.monomial(self.field, [k * n for k in e], self.field.inv(c) ** -n)
        shift = _check_exponent(tuple(k * n for k in self._shift))
        return LaurentPolynomial._make(self.field, self.rank, self._poly ** n, shift)

    def __truediv__(self, other):
        if isinstance(other, (LaurentPolynomial, RationalFunction)):
            return NotImplemented
        inv = self.field.inv(self.field.coerce(other))
        return LaurentPolynomial._make(self.field, self.rank, self._poly.mul_ground(inv), self._shift)

    def __bool__(self) -> bool:
        return bool(self._poly)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self.rank == other.rank and self._shift == other._shift and self._poly == other._poly
        if isinstance(other, RationalFunction):
            return NotImplemented
        if _is_scalar(other):
            return self == LaurentPolynomial.constant(self.field, self.rank, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.rank, self._shift, frozenset(self._poly.items())))

    def __repr__(self) -> str:
        return f"LaurentPolynomial({format_laurent(self)!r}, field={self.field.spec})"

    def __str__(self) -> str:
        return format_laurent(self)

    # Ring maps

    def shift(self, exponent: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial t^exponent"""
        shift = _check_exponent(_add_exponents(self._shift, tuple(exponent)))
        return LaurentPolynomial._make(self.field, self.rank, self._poly, shift)

    def involute(self) -> "LaurentPolynomial":
        conj = self.field.conj
        return LaurentPolynomial(self.field, self.rank, {_neg_exponent(e): conj(c) for e, c in self.terms.items()})

    def unit_normalize(self) -> Tuple["LaurentPolynomial", "LaurentPolynomial"]:
        """
        Split off a unit: self = unit * canonical

        The canonical factor has lowest exponent 0 in every variable and
        coefficient 1 on its lexicographically lowest term (for rank 1,
        the lowest-degree coefficient).
        """
        if not self._poly:
            raise UndefinedDegreeError("cannot normalize the zero polynomial")
        lead = self._poly[min(self._poly.itermonoms())]
        canonical = LaurentPolynomial._make(self.field, self.rank, self._poly.mul_ground(self.field.inv(lead)), (0,) * self.rank)
        return canonical, LaurentPolynomial.monomial(self.field, self._shift, lead)


# Module-level operations


def involute(x):
    return x.involute()


def degree(p: LaurentPolynomial) -> int:
    return p.degree()


def unit_normalize(p: LaurentPolynomial) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    return p.unit_normalize()


def laurent_divmod(a: LaurentPolynomial, b: LaurentPolynomial) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    """
    Euclidean division in K[t^±1]

    Returns (q, r) with a = q*b + r and r = 0 or degree(r) < degree(b).
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    b._require_rank_one("laurent_divmod")
    if not a:
        return a, a
    q, r = a._poly.div(b._poly)
    return (
        LaurentPolynomial.from_polynomial(a.field, 1, q, _sub_exponents(a._shift, b._shift)),
        LaurentPolynomial.from_polynomial(a.field, 1, r, a._shift),
    )


def laurent_gcd(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Greatest common divisor in K[t1^±1, ..., tr^±1], unit-normalized; gcd(0, 0) = 0"""
    if not a and not b:
        return a
    if not a:
        return b.unit_normalize()[0]
    if not b:
        return a.unit_normalize()[0]
    g = a._poly.gcd(b._poly)
    return LaurentPolynomial.from_polynomial(a.field, a.rank, g).unit_normalize()[0]


def laurent_lcm(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Least common multiple of nonzero Laurent polynomials, unit-normalized"""
    if not a or not b:
        raise ZeroDivisionError("lcm with the zero polynomial")
    return LaurentPolynomial.from_polynomial(a.field, a.rank, a._poly.lcm(b._poly)).unit_normalize()[0]


def exquo(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Exact quotient a/b in the Laurent ring of any rank"""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return a
    # b prime to every variable, so a/b is Laurent exactly when the polynomial parts divide
    try:
        q = a._poly.exquo(b._poly)
    except ExactQuotientFailed as e:
        raise NotDivisibleError("polynomial does not divide", f"({a}) / ({b})") from e
    return LaurentPolynomial._make(a.field, a.rank, q, _check_exponent(_sub_exponents(a._shift, b._shift)))


class RationalFunction:
    """Element of K(F): a reduced numerator over a unit-normalized denominator"""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: LaurentPolynomial, denominator: Optional[LaurentPolynomial] = None):
        if denominator is None:
            denominator = LaurentPolynomial.one(numerator.field, numerator.rank)
        if not denominator:
            raise ZeroDivisionError("rational function with zero denominator")
        if numerator.rank != denominator.rank:
            raise ShapeError("numerator and denominator ranks differ")
        if not numerator:
            denominator = LaurentPolynomial.one(numerator.field, numerator.rank)
        else:
            if not denominator.is_monomial:
                _, p, q = numerator._poly.cofactors(denominator._poly)
                shift = _sub_exponents(numerator._shift, denominator._shift)
                numerator = LaurentPolynomial.from_polynomial(numerator.field, numerator.rank, p, shift)
                denominator = LaurentPolynomial.from_polynomial(numerator.field, numerator.rank, q)
            canonical, unit = denominator.unit_normalize()
            numerator = exquo(numerator, unit)
            denominator = canonical
        self.numerator = numerator
        self.denominator = denominator

    @property
    def field(self) -> InvolutiveField:
        return self.numerator.field

    @property
    def rank(self) -> int:
        return self.numerator.rank

    def _lift(self, other: Any) -> Optional["RationalFunction"]:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPolynomial):
            return RationalFunction(other)
        if _is_scalar(other):
            return RationalFunction(LaurentPolynomial.constant(self.field, self.rank, other))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.denominator == o.denominator:
            return RationalFunction(self.numerator + o.numerator, self.denominator)
        return RationalFunction(
            self.numerator * o.denominator + o.numerator * self.denominator,
            self.denominator * o.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.numerator = -self.numerator
        r.denominator = self.denominator
        return r

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.numerator:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        return RationalFunction(self.numerator ** n, self.denominator ** n)

    def __bool__(self) -> bool:
        return bool(self.numerator)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.numerator == o.numerator and self.denominator == o.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        return f"RationalFunction({format_rational(self)!r}, field={self.field.spec})"

    def __str__(self) -> str:
        return format_rational(self)

    def involute(self) -> "RationalFunction":
        return RationalFunction(self.numerator.involute(), self.denominator.involute())

    def degree(self) -> int:
        """degree(numerator) - degree(denominator), rank 1"""
        if not self.numerator:
            raise UndefinedDegreeError("degree of the zero rational function")
        return self.numerator.degree() - self.denominator.degree()

    def as_polynomial(self) -> Optional[LaurentPolynomial]:
        """The Laurent polynomial equal to self, if there is one"""
        return self.numerator if self.denominator.is_one else None

    def is_monomial_unit(self) -> Optional[Tuple[Any, Exponent]]:
        p = self.as_polynomial()
        if p is None or not p.is_monomial:
            return None
        return p.monomial_parts()


def degree_rational(f: RationalFunction) -> int:
    return f.degree()


def is_monomial_unit(f) -> Optional[Tuple[Any, Exponent]]:
    if isinstance(f, LaurentPolynomial):
        f = RationalFunction(f)
    return f.is_monomial_unit()


# Ring descriptors consumed by the matrix routines


class LaurentRing:
    """K[t1^±1, ..., tr^±1]; Euclidean when rank is 1"""

    is_field = False

    def __init__(self, field: InvolutiveField, rank: int = 1):
        self.field = field
        self.rank = rank

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentRing) and (self.field, self.rank) == (other.field, other.rank)

    def __hash__(self) -> int:
        return hash(("laurent", self.field, self.rank))

    def __repr__(self) -> str:
        return f"LaurentRing({self.field.spec}, rank={self.rank})"

    @property
    def zero(self) -> LaurentPolynomial:
        return LaurentPolynomial.zero(self.field, self.rank)

    @property
    def one(self) -> LaurentPolynomial:
        return LaurentPolynomial.one(self.field, self.rank)

    @property
    def is_euclidean(self) -> bool:
        return self.rank == 1

    @property
    def domain(self) -> PolynomialRing:
        return polynomial_domain(self.field, self.rank)

    def coerce(self, value: Any) -> LaurentPolynomial:
        if isinstance(value, LaurentPolynomial):
            return value
        return LaurentPolynomial.constant(self.field, self.rank, value)

    def is_zero(self, x: LaurentPolynomial) -> bool:
        return not x

    def conj(self, x: LaurentPolynomial) -> LaurentPolynomial:
        return x.involute()

    def exquo(self, a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
        return exquo(a, b)

    def inv(self, a: LaurentPolynomial) -> LaurentPolynomial:
        return a ** -1

    def canonical(self, a: LaurentPolynomial) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
        """(canonical associate, unit) with a = unit * canonical"""
        if not a:
            return a, self.one
        return a.unit_normalize()


class FractionField:
    """K(t1, ..., tr), the quotient field of LaurentRing"""

    is_field = True

    def __init__(self, field: InvolutiveField, rank: int = 1):
        self.field = field
        self.rank = rank

    def __eq__(self, other) -> bool:
        return isinstance(other, FractionField) and (self.field, self.rank) == (other.field, other.rank)

    def __hash__(self) -> int:
        return hash(("fractions", self.field, self.rank))

    def __repr__(self) -> str:
        return f"FractionField({self.field.spec}, rank={self.rank})"

    @property
    def spec(self) -> str:
        return f"{self.field.spec}({','.join(_variable_names(self.rank))})"

    @property
    def zero(self) -> RationalFunction:
        return RationalFunction(LaurentPolynomial.zero(self.field, self.rank))

    @property
    def one(self) -> RationalFunction:
        return RationalFunction(LaurentPolynomial.one(self.field, self.rank))

    def coerce(self, value: Any) -> RationalFunction:
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, LaurentPolynomial):
            return RationalFunction(value)
        return RationalFunction(LaurentPolynomial.constant(self.field, self.rank, value))

    __call__ = coerce

    def is_zero(self, x: RationalFunction) -> bool:
        return not x

    def conj(self, x: RationalFunction) -> RationalFunction:
        return x.involute()

    def inv(self, x: RationalFunction) -> RationalFunction:
        return x.inverse()

    def exquo(self, a: RationalFunction, b: RationalFunction) -> RationalFunction:
        return a / b


# Text syntax


def _format_monomial(e: Exponent) -> str:
    names = _variable_names(len(e))
    parts = []
    for name, k in zip(names, e):
        if k == 0:
            continue
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def _format_coefficient(field: InvolutiveField, c: Any) -> str:
    s = field.format_element(c)
    if field.kind == FieldKind.GAUSSIAN_RATIONALS and c.x and c.y:
        return f"({s})"
    return s


def format_laurent(p: LaurentPolynomial) -> str:
    """Terms in ascending exponent order, e.g. "1 - t + t^2" or "3*t1^-2*t2" """
    if not p:
        return "0"
    out = []
    for e, c in p.items():
        mono = _format_monomial(e)
        coef = _format_coefficient(p.field, c)
        negative = coef.startswith("-")
        if negative:
            coef = coef[1:]
        if not mono:
            body = coef
        elif coef == "1":
            body = mono
        else:
            body = f"{coef}*{mono}"
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def format_rational(f: RationalFunction) -> str:
    """Numerator, then "/(denominator)" unless the denominator is 1"""
    num = format_laurent(f.numerator)
    if f.denominator.is_one:
        return num
    if len(f.numerator.polynomial) > 1 or num.startswith("-"):
        num = f"({num})"
    return f"{num}/({format_laurent(f.denominator)})"


def _strip_outer(s: str) -> str:
    while s.startswith("(") and s.endswith(")"):
        depth = 0
        for idx, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and idx < len(s) - 1:
                return s
        s = s[1:-1]
    return s


_VARIABLE_RE = re.compile(r"^(t\d*)(?:\^\(?([+-]?\d+)\)?)?$")


def _split_top_level(s: str, separators: str) -> List[str]:
    parts, depth, start = [], 0, 0
    for idx, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in separators and depth == 0 and idx > start and s[idx - 1] not in "^*":
            parts.append(s[start:idx])
            start = idx
    parts.append(s[start:])
    return parts


def parse_laurent(text: str, field: InvolutiveField, rank: int = 1) -> LaurentPolynomial:
    """
    Parse the polynomial text syntax

    Args:
        text: "+"/"-" separated terms such as "3*t1^-2*t2^1", "(2+i)*t", "t^2 - t + 1"
        field: coefficient field
        rank: number of variables; rank 1 uses "t", higher ranks "t1".."tr"

    Returns:
        The parsed LaurentPolynomial
    """
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    names = _variable_names(rank)
    if rank == 1:
        names = names + ["t1"]
    result = LaurentPolynomial.zero(field, rank)
    for term in _split_top_level(s, "+-"):
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        if not term:
            raise ParseError("dangling sign in polynomial", text)
        exponent = [0] * rank
        coefficient = field.one
        for factor in _split_top_level(term, "*"):
            factor = factor.lstrip("*")
            m = _VARIABLE_RE.match(factor)
            if m:
                name = m.group(1)
                if name not in names:
                    raise ParseError(f"unknown variable for rank {rank}", name)
                index = 0 if rank == 1 else names.index(name)
                exponent[index] += int(m.group(2)) if m.group(2) is not None else 1
            else:
                coefficient = coefficient * field.parse_element(factor)
        result = result + LaurentPolynomial.monomial(field, exponent, coefficient * sign)
    return result


def parse_rational(text: str, field: InvolutiveField, rank: int = 1) -> RationalFunction:
    """Parse "num" or "num/(den)"; the fraction bar is the top-level "/" followed by "(" """
    s = text.replace(" ", "")
    depth = 0
    for idx, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and s[idx + 1: idx + 2] == "(":
            num = parse_laurent(_strip_outer(s[:idx]), field, rank)
            den = parse_laurent(_strip_outer(s[idx + 1:]), field, rank)
            return RationalFunction(num, den)
    return RationalFunction(parse_laurent(_strip_outer(s), field, rank))


def random_laurent(field: InvolutiveField, rng, rank: int = 1, terms: int = 3, spread: int = 3) -> LaurentPolynomial:
    """Random polynomial with up to the given number of terms and exponents in [-spread, spread]"""
    data = {}
    for _ in range(terms):
        e = tuple(rng.randint(-spread, spread) for _ in range(rank))
        data[e] = field.random_element(rng)
    return LaurentPolynomial(field, rank, data)
