"""
Dense exact matrices over fields, Laurent rings and fraction fields

Every matrix carries a ring descriptor (an InvolutiveField, LaurentRing,
FractionField or IntegerRing) exposing zero, one, is_zero, exquo, inv and
conj. Determinants, row reduction and Smith forms are delegated to sympy's
DomainMatrix: field matrices directly, Laurent and fraction matrices after
scaling each row by a unit into the polynomial domain K[t1, ..., tr].
"""

import logging
import random
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from errors import NotDivisibleError, ShapeError, SingularMatrixError
from laurent import FractionField, LaurentPolynomial, LaurentRing, exquo, laurent_lcm

logger = logging.getLogger(__name__)


class IntegerRing:
    """The integers, used for abelianization"""

    is_field = False
    is_euclidean = True
    domain = ZZ
    zero = 0
    one = 1

    def __repr__(self) -> str:
        return "IntegerRing()"

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerRing)

    def __hash__(self) -> int:
        return hash("integers")

    def coerce(self, value: Any) -> int:
        if isinstance(value, int):
            return value
        if ZZ.of_type(value):
            return int(value)
        raise TypeError(f"cannot interpret {value!r} as an integer")

    def is_zero(self, x: int) -> bool:
        return x == 0

    def conj(self, x: int) -> int:
        return x

    def exquo(self, a: int, b: int) -> int:
        q, r = divmod(a, b)
        if r:
            raise NotDivisibleError("integer does not divide", f"{a} / {b}")
        return q

    def inv(self, a: int) -> int:
        if a not in (1, -1):
            raise NotDivisibleError("integer is not a unit", str(a))
        return a

    def canonical(self, a: int) -> Tuple[int, int]:
        return (abs(a), -1 if a < 0 else 1)


INTEGERS = IntegerRing()


class ExactMatrix:
    """Immutable rows x cols matrix with entries in a single ring"""

    __slots__ = ("ring", "rows", "cols", "_data")

    def __init__(self, ring: Any, data: Sequence[Sequence[Any]], cols: Optional[int] = None):
        rows = len(data)
        if rows:
            cols = len(data[0])
        elif cols is None:
            cols = 0
        for r in data:
            if len(r) != cols:
                raise ShapeError("ragged matrix rows", f"expected {cols} columns, got {len(r)}")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self._data = tuple(tuple(ring.coerce(x) for x in r) for r in data)

    @classmethod
    def _make(cls, ring: Any, data: List[List[Any]], rows: int, cols: int) -> "ExactMatrix":
        m = cls.__new__(cls)
        m.ring = ring
        m.rows = rows
        m.cols = cols
        m._data = tuple(tuple(r) for r in data)
        return m

    @classmethod
    def zeros(cls, ring: Any, rows: int, cols: int) -> "ExactMatrix":
        z = ring.zero
        return cls._make(ring, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, ring: Any, n: int) -> "ExactMatrix":
        z, o = ring.zero, ring.one
        return cls._make(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, ring: Any, entries: Sequence[Any]) -> "ExactMatrix":
        n = len(entries)
        z = ring.zero
        return cls._make(ring, [[ring.coerce(entries[i]) if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, ring: Any, columns: Sequence[Sequence[Any]], rows: int) -> "ExactMatrix":
        if not columns:
            return cls.zeros(ring, rows, 0)
        return cls(ring, [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def block(cls, ring: Any, grid: Sequence[Sequence["ExactMatrix"]]) -> "ExactMatrix":
        """Assemble a block matrix; blocks in a block-row share their row count"""
        data: List[List[Any]] = []
        cols = sum(b.cols for b in grid[0]) if grid else 0
        for block_row in grid:
            height = block_row[0].rows
            for i in range(height):
                row: List[Any] = []
                for b in block_row:
                    if b.rows != height:
                        raise ShapeError("block rows of different heights")
                    row.extend(b._data[i])
                data.append(row)
        return cls._make(ring, data, len(data), cols)

    # Access

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Any:
        i, j = index
        return self._data[i][j]

    def row(self, i: int) -> Tuple[Any, ...]:
        return self._data[i]

    def column(self, j: int) -> Tuple[Any, ...]:
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> List[List[Any]]:
        return [list(r) for r in self._data]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix._make(self.ring, [[self._data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def select_columns(self, cols: Sequence[int]) -> "ExactMatrix":
        return self.submatrix(range(self.rows), cols)

    def select_rows(self, rows: Sequence[int]) -> "ExactMatrix":
        return self.submatrix(rows, range(self.cols))

    def hstack(self, *others: "ExactMatrix") -> "ExactMatrix":
        data = self.to_lists()
        cols = self.cols
        for o in others:
            if o.rows != self.rows:
                raise ShapeError("hstack of matrices with different row counts", f"{self.shape} vs {o.shape}")
            for i in range(self.rows):
                data[i].extend(o._data[i])
            cols += o.cols
        return ExactMatrix._make(self.ring, data, self.rows, cols)

    def vstack(self, *others: "ExactMatrix") -> "ExactMatrix":
        data = self.to_lists()
        for o in others:
            if o.cols != self.cols:
                raise ShapeError("vstack of matrices with different column counts", f"{self.shape} vs {o.shape}")
            data.extend(o.to_lists())
        return ExactMatrix._make(self.ring, data, len(data), self.cols)

    # Algebra

    def transpose(self) -> "ExactMatrix":
        if not self.rows:
            return ExactMatrix._make(self.ring, [[] for _ in range(self.cols)], self.cols, 0)
        return ExactMatrix._make(self.ring, [list(c) for c in zip(*self._data)], self.cols, self.rows)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conj(self) -> "ExactMatrix":
        return self.map(self.ring.conj)

    def conj_transpose(self) -> "ExactMatrix":
        return self.transpose().conj()

    def map(self, fn: Callable[[Any], Any], ring: Any = None) -> "ExactMatrix":
        ring = self.ring if ring is None else ring
        return ExactMatrix._make(ring, [[fn(x) for x in r] for r in self._data], self.rows, self.cols)

    def change_ring(self, ring: Any) -> "ExactMatrix":
        return self.map(ring.coerce, ring)

    def _check_same_shape(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            raise ShapeError("matrix shapes differ", f"{self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        return ExactMatrix._make(
            self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.rows, self.cols
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        return ExactMatrix._make(
            self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.rows, self.cols
        )

    def __neg__(self) -> "ExactMatrix":
        return self.map(lambda x: -x)

    def scale(self, c: Any) -> "ExactMatrix":
        return self.map(lambda x: c * x)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ShapeError("matrix product shapes do not chain", f"{self.shape} @ {other.shape}")
        zero = self.ring.zero
        other_cols = list(zip(*other._data)) if other.rows else [()] * other.cols
        data = []
        for r in self._data:
            out = []
            for c in other_cols:
                s = zero
                for a, b in zip(r, c):
                    if a and b:
                        s = s + a * b
                out.append(s)
            data.append(out)
        return ExactMatrix._make(self.ring, data, self.rows, other.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"ExactMatrix[{self.rows}x{self.cols}]({body})"

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def is_identity(self) -> bool:
        return self.is_square and self == ExactMatrix.identity(self.ring, self.rows)

    def det(self) -> Any:
        return det(self)

    def inverse(self) -> "ExactMatrix":
        return inverse(self)

    def rank(self) -> int:
        return rank(self)


# Conversion to sympy domain matrices


def _domain_matrix(M: ExactMatrix) -> DomainMatrix:
    """M over the sympy domain of its ring; entries of fields and ZZ are already domain elements"""
    dom = M.ring.domain
    if isinstance(M.ring, IntegerRing):
        rows = [[ZZ(x) for x in r] for r in M._data]
    else:
        rows = [list(r) for r in M._data]
    return DomainMatrix(rows, M.shape, dom)


def _polynomial_rows(M: ExactMatrix) -> Tuple[DomainMatrix, List[LaurentPolynomial]]:
    """
    Scale each row of a Laurent or fraction matrix into K[t1, ..., tr]

    Returns P over polynomial_domain and the nonzero row factors u_i with
    P[i] = u_i * M[i].
    """
    ring = M.ring
    rank_ = ring.rank
    one = LaurentPolynomial.one(ring.field, rank_)
    rows: List[List[LaurentPolynomial]] = []
    units: List[LaurentPolynomial] = []
    for r in M._data:
        if isinstance(ring, FractionField):
            denominators = [x.denominator for x in r if x]
            scale = one
            for d in denominators:
                scale = laurent_lcm(scale, d)
            row = [exquo(x.numerator * scale, x.denominator) for x in r]
        else:
            scale = one
            row = list(r)
        nonzero = [x for x in row if x]
        low = tuple(min(x.shift_exponent[k] for x in nonzero) for k in range(rank_)) if nonzero else (0,) * rank_
        shift = tuple(-k for k in low)
        rows.append([x.shift(shift) for x in row])
        units.append(scale.shift(shift))
    data = [[x.to_polynomial() for x in row] for row in rows]
    return DomainMatrix(data, M.shape, LaurentRing(ring.field, rank_).domain), units


def _laurent(ring: Any, p: Any) -> LaurentPolynomial:
    return LaurentPolynomial.from_polynomial(ring.field, ring.rank, p)


# Determinants


def det(M: ExactMatrix) -> Any:
    """
    Exact determinant

    Field and integer matrices go to DomainMatrix.det directly. Laurent
    and fraction matrices are first scaled row by row into the polynomial
    domain, whose determinant is computed fraction-free.
    """
    if not M.is_square:
        raise ShapeError("determinant of a non-square matrix", f"{M.rows}x{M.cols}")
    ring = M.ring
    if M.rows == 0:
        return ring.one
    if isinstance(ring, (LaurentRing, FractionField)):
        P, units = _polynomial_rows(M)
        value = _laurent(ring, P.det())
        scale = LaurentPolynomial.one(ring.field, ring.rank)
        for u in units:
            scale = scale * u
        if isinstance(ring, FractionField):
            return ring.coerce(value) / ring.coerce(scale)
        return exquo(value, scale)
    return ring.coerce(_domain_matrix(M).det())


# Elimination over fields


def _rref(M: ExactMatrix) -> Tuple[List[List[Any]], List[int]]:
    """Reduced row echelon form and pivot columns, left to right"""
    ring = M.ring
    if M.rows == 0 or M.cols == 0:
        return M.to_lists(), []
    if isinstance(ring, FractionField):
        P, _ = _polynomial_rows(M)
        R, den, pivots = P.rref_den()
        d = ring.coerce(_laurent(ring, den))
        data = [[ring.coerce(_laurent(ring, x)) / d for x in row] for row in R.to_list()]
        return data, list(pivots)
    R, pivots = _domain_matrix(M).rref()
    return R.to_list(), list(pivots)


def _require_field(M: ExactMatrix, operation: str):
    if not M.ring.is_field:
        raise ShapeError(f"{operation} needs entries in a field", repr(M.ring))


def pivot_columns(M: ExactMatrix) -> List[int]:
    """Columns that are independent of all earlier columns (left-to-right elimination)"""
    _require_field(M, "pivot_columns")
    return _rref(M)[1]


def rank(M: ExactMatrix) -> int:
    _require_field(M, "rank")
    return len(pivot_columns(M))


def nullspace(M: ExactMatrix) -> ExactMatrix:
    """Matrix whose columns are a basis of {x : Mx = 0}"""
    _require_field(M, "nullspace")
    ring = M.ring
    a, pivots = _rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    columns = []
    for f in free:
        v = [ring.zero] * M.cols
        v[f] = ring.one
        for row, p in enumerate(pivots):
            v[p] = -a[row][f]
        columns.append(v)
    return ExactMatrix.from_columns(ring, columns, M.cols)


def left_nullspace(M: ExactMatrix) -> ExactMatrix:
    """Matrix whose rows are a basis of {y : yM = 0}"""
    return nullspace(M.transpose()).transpose()


def solve(M: ExactMatrix, B: ExactMatrix) -> Optional[ExactMatrix]:
    """One solution X of MX = B, or None when the system is inconsistent"""
    _require_field(M, "solve")
    if B.rows != M.rows:
        raise ShapeError("right-hand side has the wrong number of rows", f"{M.shape} vs {B.shape}")
    ring = M.ring
    a, pivots = _rref(M.hstack(B))
    if any(p >= M.cols for p in pivots):
        return None
    X = [[ring.zero] * B.cols for _ in range(M.cols)]
    for row, p in enumerate(pivots):
        X[p] = list(a[row][M.cols:])
    return ExactMatrix._make(ring, X, M.cols, B.cols)


def inverse(M: ExactMatrix) -> ExactMatrix:
    if not M.is_square:
        raise ShapeError("inverse of a non-square matrix", f"{M.rows}x{M.cols}")
    _require_field(M, "inverse")
    X = solve(M, ExactMatrix.identity(M.ring, M.rows))
    if X is None:
        raise SingularMatrixError("matrix is singular", f"{M.rows}x{M.cols}")
    return X


def random_matrix(ring: Any, rng: random.Random, rows: int, cols: int) -> ExactMatrix:
    """Random matrix over an InvolutiveField"""
    return ExactMatrix(ring, [[ring.random_element(rng) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_invertible(ring: Any, rng: random.Random, n: int) -> ExactMatrix:
    while True:
        M = random_matrix(ring, rng, n, n)
        if n == 0 or det(M):
            return M


# Smith normal form over Euclidean rings


@dataclass(frozen=True)
class SmithForm:
    """left * M * right = diag(divisors), with right_inverse = right^-1"""

    divisors: Tuple[Any, ...]
    left: ExactMatrix
    right: ExactMatrix
    right_inverse: ExactMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d)


def smith_form(M: ExactMatrix) -> SmithForm:
    """
    Smith normal form with transforms

    Args:
        M: matrix over a Euclidean ring (IntegerRing or rank-1 LaurentRing)

    Returns:
        SmithForm whose divisors satisfy d1 | d2 | ... and are canonical
        associates; zero divisors trail for rank-deficient matrices
    """
    ring = M.ring
    if not getattr(ring, "is_euclidean", False):
        raise ShapeError("Smith normal form needs a Euclidean ring", repr(ring))
    r, c = M.shape
    if r == 0 or c == 0:
        return SmithForm(
            divisors=(),
            left=ExactMatrix.identity(ring, r),
            right=ExactMatrix.identity(ring, c),
            right_inverse=ExactMatrix.identity(ring, c),
        )
    if isinstance(ring, LaurentRing):
        dm, units = _polynomial_rows(M)

        def convert(x):
            return _laurent(ring, x)
    else:
        dm = _domain_matrix(M)
        units = [ring.one] * r
        convert = ring.coerce
    dom = dm.domain
    smf, s, t = smith_normal_decomp(dm)
    t_inv, den = t.inv_den()
    diagonal = smf.to_list()
    divisors = [convert(diagonal[k][k]) for k in range(min(r, c))]
    U = [[convert(x) * units[j] for j, x in enumerate(row)] for row in s.to_list()]
    V = [[convert(x) for x in row] for row in t.to_list()]
    W = [[convert(dom.exquo(x, den)) for x in row] for row in t_inv.to_list()]
    for k, d in enumerate(divisors):
        if ring.is_zero(d):
            continue
        canonical, unit = ring.canonical(d)
        inv = ring.inv(unit)
        divisors[k] = canonical
        U[k] = [x * inv for x in U[k]]
    logger.debug(f"Smith form of {r}x{c} matrix over {ring!r}: {sum(1 for d in divisors if d)} nonzero divisors")
    return SmithForm(
        divisors=tuple(divisors),
        left=ExactMatrix._make(ring, U, r, r),
        right=ExactMatrix._make(ring, V, c, c),
        right_inverse=ExactMatrix._make(ring, W, c, c),
    )


def snf_univariate(M: ExactMatrix) -> List[LaurentPolynomial]:
    """Elementary divisors of a matrix over K[t^±1]"""
    if not isinstance(M.ring, LaurentRing) or M.ring.rank != 1:
        raise ShapeError("snf_univariate needs rank-1 Laurent entries", repr(M.ring))
    return list(smith_form(M).divisors)


def presentation_order(M: ExactMatrix) -> Any:
    """
    Order of the module presented by M (generators = rows, relations = columns)

    Product of the elementary divisors, zero when the module has free rank.
    """
    ring = M.ring
    if M.rows == 0:
        return ring.one
    if M.cols < M.rows:
        return ring.zero
    result = ring.one
    for d in smith_form(M).divisors:
        result = result * d
    if ring.is_zero(result):
        return ring.zero
    return ring.canonical(result)[0]
