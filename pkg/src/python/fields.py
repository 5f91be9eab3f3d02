"""
Involutive coefficient fields: rationals, prime fields and gaussian rationals

Elements are sympy domain elements (QQ, GF(p) and QQ_I); InvolutiveField
adds the involution, the text syntax and the ring interface the matrix
routines use.
"""

import logging
import random
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Iterator, List, Optional

from sympy import isprime
from sympy.polys.domains import GF, QQ, QQ_I, ZZ
from sympy.polys.domains.domain import Domain

from errors import FieldSpecError, ParseError

logger = logging.getLogger(__name__)

MAX_MODULUS = 2 ** 31

FieldElement = Any


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


class FieldKind(str, Enum):
    RATIONALS = "rationals"
    PRIME_FIELD = "prime_field"
    GAUSSIAN_RATIONALS = "gaussian_rationals"


@lru_cache(maxsize=None)
def _domain(kind: FieldKind, modulus: Optional[int]) -> Domain:
    if kind == FieldKind.RATIONALS:
        return QQ
    if kind == FieldKind.PRIME_FIELD:
        return GF(modulus)
    return QQ_I


_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")
_UNSIGNED_RATIONAL = r"\d+(?:/\d+)?"
_GAUSSIAN_RE = re.compile(
    rf"^(?P<re>[+-]?{_UNSIGNED_RATIONAL})?(?:(?P<sign>[+-])?(?P<im>{_UNSIGNED_RATIONAL})?\*?i)?$"
)


def _parse_rational(text: str) -> Any:
    """A QQ element from "n" or "n/d"; a zero denominator is a parse error"""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError("invalid rational number", text)
    numerator = int(m.group(1))
    denominator = int(m.group(2)) if m.group(2) is not None else 1
    if denominator == 0:
        raise ParseError("zero denominator", text)
    return QQ(numerator, denominator)


def _imaginary_text(im: Any) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}i"


def format_gaussian(z: Any) -> str:
    if not z.y:
        return str(z.x)
    if not z.x:
        return _imaginary_text(z.y)
    imag = _imaginary_text(z.y)
    if not imag.startswith("-"):
        imag = "+" + imag
    return f"{z.x}{imag}"


@dataclass(frozen=True)
class InvolutiveField:
    """
    A coefficient field with an involution

    Doubles as the ring descriptor used by matrices: zero, one, is_zero,
    exquo and inv are the operations the elimination routines need, and
    domain is the sympy domain the elements live in.
    """

    kind: FieldKind
    modulus: Optional[int] = None
    trivial_involution: bool = False

    def __post_init__(self):
        if self.kind == FieldKind.PRIME_FIELD:
            if self.modulus is None or self.modulus >= MAX_MODULUS or not is_prime(self.modulus):
                raise FieldSpecError("prime field needs a prime modulus below 2^31", str(self.modulus))
        elif self.modulus is not None:
            raise FieldSpecError("modulus only applies to prime fields", str(self.modulus))

    # Descriptor

    @property
    def domain(self) -> Domain:
        return _domain(self.kind, self.modulus)

    @property
    def spec(self) -> str:
        if self.kind == FieldKind.RATIONALS:
            return "Q"
        if self.kind == FieldKind.PRIME_FIELD:
            return f"Fp:{self.modulus}"
        return "Qi:trivial" if self.trivial_involution else "Qi"

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind == FieldKind.PRIME_FIELD else 0

    @property
    def is_finite(self) -> bool:
        return self.kind == FieldKind.PRIME_FIELD

    @property
    def order(self) -> Optional[int]:
        return self.modulus if self.is_finite else None

    @property
    def has_trivial_involution(self) -> bool:
        return self.kind != FieldKind.GAUSSIAN_RATIONALS or self.trivial_involution

    is_field = True

    def __str__(self) -> str:
        return self.spec

    # Elements

    @property
    def zero(self) -> FieldElement:
        return self.domain.zero

    @property
    def one(self) -> FieldElement:
        return self.domain.one

    def coerce(self, value: Any) -> FieldElement:
        """Bring an int, a QQ element or an element of this field into the field's domain"""
        dom = self.domain
        if isinstance(value, bool):
            value = int(value)
        if dom.of_type(value):
            return value
        if isinstance(value, int):
            return dom(value)
        if QQ.of_type(value):
            if self.kind == FieldKind.PRIME_FIELD:
                den = dom(int(value.denominator))
                if not den:
                    raise ZeroDivisionError(f"denominator {value.denominator} vanishes in {self.spec}")
                return dom(int(value.numerator)) / den
            return dom(value)
        if ZZ.of_type(value):
            return dom(int(value))
        if self.kind == FieldKind.RATIONALS and QQ_I.of_type(value) and not value.y:
            return value.x
        raise TypeError(f"cannot interpret {value!r} as an element of {self.spec}")

    __call__ = coerce

    def gaussian(self, re: Any, im: Any = 0) -> FieldElement:
        """re + im*i; only meaningful over the gaussian rationals"""
        if self.kind != FieldKind.GAUSSIAN_RATIONALS:
            raise TypeError(f"{self.spec} has no imaginary unit")
        return QQ_I(QQ.convert(re), QQ.convert(im))

    def conj(self, x: FieldElement) -> FieldElement:
        if self.has_trivial_involution:
            return x
        return QQ_I(x.x, -x.y)

    def norm(self, x: FieldElement) -> FieldElement:
        """x * conj(x), as an element of this field"""
        return x * self.conj(x)

    def is_zero(self, x: FieldElement) -> bool:
        return not x

    def inv(self, x: FieldElement) -> FieldElement:
        if not x:
            raise ZeroDivisionError(f"zero has no inverse in {self.spec}")
        return self.domain.one / x

    def exquo(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return a * self.inv(b)

    def to_int(self, x: FieldElement) -> int:
        """Representative in [0, p) of a prime field element"""
        return int(x) % self.modulus

    def elements(self) -> Iterator[FieldElement]:
        if not self.is_finite:
            raise ValueError(f"{self.spec} is infinite")
        dom = self.domain
        for v in range(self.modulus):
            yield dom(v)

    def nonzero_elements(self) -> List[FieldElement]:
        return [x for x in self.elements() if x]

    def random_element(self, rng: random.Random, nonzero: bool = False, bound: int = 5) -> FieldElement:
        while True:
            if self.kind == FieldKind.PRIME_FIELD:
                x = self.domain(rng.randrange(self.modulus))
            elif self.kind == FieldKind.RATIONALS:
                x = QQ(rng.randint(-bound, bound), rng.randint(1, 3))
            else:
                x = QQ_I(
                    QQ(rng.randint(-bound, bound), rng.randint(1, 2)),
                    QQ(rng.randint(-bound, bound), rng.randint(1, 2)),
                )
            if x or not nonzero:
                return x

    # Text

    def parse_element(self, text: str) -> FieldElement:
        s = text.strip().replace(" ", "")
        while s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if not s:
            raise ParseError("empty coefficient", text)
        if self.kind == FieldKind.GAUSSIAN_RATIONALS:
            m = _GAUSSIAN_RE.match(s)
            if not m or (m.group("re") is None and "i" not in s):
                raise ParseError(f"invalid element of {self.spec}", text)
            real = _parse_rational(m.group("re")) if m.group("re") else QQ.zero
            imag = QQ.zero
            if "i" in s:
                imag = _parse_rational(m.group("im")) if m.group("im") else QQ.one
                if m.group("sign") == "-":
                    imag = -imag
                elif m.group("sign") is None and m.group("re") is not None and m.group("im") is None:
                    # "3i" is read by the regex as re="3" followed by a bare "i"
                    real, imag = QQ.zero, real
            return QQ_I(real, imag)
        if "i" in s:
            raise ParseError(f"imaginary unit in {self.spec}", text)
        try:
            return self.coerce(_parse_rational(s))
        except ZeroDivisionError as e:
            raise ParseError(f"coefficient does not exist in {self.spec}", text) from e

    def format_element(self, x: FieldElement) -> str:
        if self.kind == FieldKind.PRIME_FIELD:
            return str(self.to_int(x))
        if self.kind == FieldKind.GAUSSIAN_RATIONALS:
            return format_gaussian(x)
        return str(x)


RATIONALS = InvolutiveField(FieldKind.RATIONALS)
GAUSSIAN_RATIONALS = InvolutiveField(FieldKind.GAUSSIAN_RATIONALS)


def prime_field(p: int) -> InvolutiveField:
    return InvolutiveField(FieldKind.PRIME_FIELD, modulus=p)


def parse_field_spec(spec: str) -> InvolutiveField:
    """
    Parse a field specifier

    Args:
        spec: "Q", "Fp:<prime>", "Qi" or "Qi:trivial"

    Returns:
        The corresponding InvolutiveField
    """
    s = spec.strip()
    if s == "Q":
        return RATIONALS
    if s == "Qi":
        return GAUSSIAN_RATIONALS
    if s == "Qi:trivial":
        return InvolutiveField(FieldKind.GAUSSIAN_RATIONALS, trivial_involution=True)
    if s.startswith("Fp:"):
        try:
            p = int(s[3:])
        except ValueError as e:
            raise FieldSpecError("unknown field specifier", spec) from e
        return prime_field(p)
    raise FieldSpecError("unknown field specifier", spec)
