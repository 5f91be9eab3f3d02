"""
Torsion of based chain complexes

A complex C_m -> ... -> C_1 -> C_0 stores d_i : C_{i+1} -> C_i as a
dim C_i x dim C_{i+1} matrix in the distinguished bases. Torsion is the
alternating product over degrees of det[b_i h_i b'_{i-1} / c_i] raised to
(-1)^(i+1), where b_i spans the image of d_i and b'_i lifts it.
"""

import json
import logging
import random
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from errors import (
    ChainComplexError,
    IncompatibleBasesError,
    MissingHomologyBasisError,
    ParseError,
    ShapeError,
    SingularMatrixError,
)
from fields import InvolutiveField, RATIONALS, parse_field_spec
from laurent import FractionField, LaurentPolynomial, format_rational, parse_rational
from linalg import ExactMatrix, det, inverse, nullspace, pivot_columns, random_invertible, random_matrix, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorsionValue:
    value: Any
    acyclic: bool

    def __bool__(self) -> bool:
        return bool(self.value)


@dataclass(frozen=True)
class SignData:
    alpha: Tuple[int, ...]
    beta: Tuple[int, ...]
    eta: int
    r: int


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    dimension: int
    representatives: ExactMatrix


class BasedChainComplex:
    """Finite chain complex of based vector spaces over a field"""

    def __init__(
        self,
        ring: Any,
        dims: Sequence[int],
        boundaries: Sequence[ExactMatrix],
        homology_bases: Optional[Sequence[ExactMatrix]] = None,
        validate: bool = True,
    ):
        if not dims:
            raise ChainComplexError("a complex needs at least one chain group")
        if len(boundaries) != len(dims) - 1:
            raise ChainComplexError(
                f"{len(dims)} chain groups need {len(dims) - 1} boundary maps, got {len(boundaries)}"
            )
        self.ring = ring
        self.dims = tuple(dims)
        self.boundaries = tuple(boundaries)
        self.homology_bases = tuple(homology_bases) if homology_bases is not None else None
        if validate:
            self.validate()

    @property
    def length(self) -> int:
        return len(self.dims) - 1

    def boundary(self, i: int) -> ExactMatrix:
        """d_i : C_{i+1} -> C_i; zero outside 0 <= i < m"""
        if 0 <= i < self.length:
            return self.boundaries[i]
        rows = self.dims[i] if 0 <= i <= self.length else 0
        cols = self.dims[i + 1] if 0 <= i + 1 <= self.length else 0
        return ExactMatrix.zeros(self.ring, rows, cols)

    def validate(self):
        for i, d in enumerate(self.boundaries):
            if d.shape != (self.dims[i], self.dims[i + 1]):
                raise ShapeError(
                    f"boundary {i} has shape {d.shape}, expected ({self.dims[i]}, {self.dims[i + 1]})"
                )
        for i in range(1, self.length):
            if not (self.boundaries[i - 1] @ self.boundaries[i]).is_zero():
                raise ChainComplexError(f"boundary maps {i - 1} and {i} do not compose to zero")
        if self.homology_bases is None:
            return
        if len(self.homology_bases) != len(self.dims):
            raise ChainComplexError("one homology basis matrix per degree is required")
        for group in homology(self):
            h = self.homology_bases[group.degree]
            if h.rows != self.dims[group.degree] or h.cols != group.dimension:
                raise ChainComplexError(
                    f"homology basis in degree {group.degree} has shape {h.shape}, "
                    f"expected ({self.dims[group.degree]}, {group.dimension})"
                )
            if not (self.boundary(group.degree - 1) @ h).is_zero():
                raise ChainComplexError(f"homology basis in degree {group.degree} contains a non-cycle")
            b = image_basis(self, group.degree)
            if len(pivot_columns(b.hstack(h))) != b.cols + h.cols:
                raise ChainComplexError(f"homology basis in degree {group.degree} is dependent modulo boundaries")

    def homology_dimensions(self) -> Tuple[int, ...]:
        return tuple(g.dimension for g in homology(self))

    def is_acyclic(self) -> bool:
        return not any(self.homology_dimensions())

    def with_homology_bases(self, bases: Optional[Sequence[ExactMatrix]]) -> "BasedChainComplex":
        return BasedChainComplex(self.ring, self.dims, self.boundaries, bases)

    def __repr__(self) -> str:
        return f"BasedChainComplex(dims={self.dims}, ring={self.ring!r})"


def image_basis(C: BasedChainComplex, i: int) -> ExactMatrix:
    """b_i: the pivot columns of d_i"""
    d = C.boundary(i)
    return d.select_columns(pivot_columns(d))


def _selection(ring: Any, n: int, indices: Sequence[int]) -> ExactMatrix:
    return ExactMatrix.from_columns(
        ring, [[ring.one if r == k else ring.zero for r in range(n)] for k in indices], n
    )


def homology(C: BasedChainComplex) -> List[HomologyGroup]:
    """Per degree: dim H_i = dim ker d_{i-1} - rank d_i, with cycle representatives"""
    groups = []
    for i in range(C.length + 1):
        cycles = nullspace(C.boundary(i - 1))
        b = image_basis(C, i)
        pivots = pivot_columns(b.hstack(cycles))
        chosen = [p - b.cols for p in pivots if p >= b.cols]
        reps = cycles.select_columns(chosen)
        groups.append(HomologyGroup(degree=i, dimension=len(chosen), representatives=reps))
    return groups


def _lifts(C: BasedChainComplex, rng: Optional[random.Random]) -> Dict[int, ExactMatrix]:
    """b'_i in C_{i+1}; standard pivot vectors, optionally mixed at random"""
    lifts = {}
    for i in range(C.length):
        d = C.boundary(i)
        pivots = pivot_columns(d)
        lift = _selection(C.ring, C.dims[i + 1], pivots)
        if rng is not None and pivots:
            lift = lift @ _random_invertible_over(C.ring, rng, len(pivots))
            kernel = nullspace(d)
            if kernel.cols:
                lift = lift + kernel @ _random_matrix_over(C.ring, rng, kernel.cols, len(pivots))
        lifts[i] = lift
    return lifts


def _random_matrix_over(ring: Any, rng: random.Random, rows: int, cols: int) -> ExactMatrix:
    if isinstance(ring, FractionField):
        base = random_matrix(ring.field, rng, rows, cols)
        return base.map(ring.coerce, ring)
    return random_matrix(ring, rng, rows, cols)


def _random_invertible_over(ring: Any, rng: random.Random, n: int) -> ExactMatrix:
    if isinstance(ring, FractionField):
        return random_invertible(ring.field, rng, n).map(ring.coerce, ring)
    return random_invertible(ring, rng, n)


def _frame(C: BasedChainComplex, i: int, lifts: Dict[int, ExactMatrix], h: Optional[ExactMatrix]) -> ExactMatrix:
    """The matrix [b_i h_i b'_{i-1}] expressed in c_i"""
    parts = []
    if i in lifts:
        parts.append(C.boundary(i) @ lifts[i])
    if h is not None and h.cols:
        parts.append(h)
    if i - 1 in lifts:
        parts.append(lifts[i - 1])
    frame = ExactMatrix.zeros(C.ring, C.dims[i], 0)
    return frame.hstack(*parts) if parts else frame


def torsion(C: BasedChainComplex, rng: Optional[random.Random] = None) -> TorsionValue:
    """
    Torsion of a based complex

    Args:
        C: the complex; homology bases are required unless it is acyclic
        rng: when given, b_i and b'_i are randomized instead of taken from pivots

    Returns:
        TorsionValue, never zero
    """
    dims_h = C.homology_dimensions()
    acyclic = not any(dims_h)
    if not acyclic and C.homology_bases is None:
        raise MissingHomologyBasisError("torsion of a non-acyclic complex needs homology bases", str(dims_h))
    ring = C.ring
    lifts = _lifts(C, rng)
    value = ring.one
    for i in range(C.length + 1):
        h = C.homology_bases[i] if C.homology_bases is not None else None
        frame = _frame(C, i, lifts, h)
        if frame.cols != C.dims[i]:
            raise ChainComplexError(f"degree {i}: frame has {frame.cols} vectors for dimension {C.dims[i]}")
        d = det(frame)
        if ring.is_zero(d):
            raise ChainComplexError(f"degree {i}: b, h and b' do not form a basis")
        value = value * d if i % 2 == 1 else value / d
    return TorsionValue(value=value, acyclic=acyclic)


def invariant_torsion(C: BasedChainComplex) -> TorsionValue:
    """Torsion with the convention that a non-acyclic complex without homology bases has torsion zero"""
    if C.homology_bases is None and not C.is_acyclic():
        return TorsionValue(value=C.ring.zero, acyclic=False)
    return torsion(C)


def _alternating_sums(dims: Sequence[int]) -> Tuple[int, ...]:
    out, running = [], 0
    for d in dims:
        running = d - running
        out.append(running)
    return tuple(out)


def sign_data(C: BasedChainComplex) -> SignData:
    """alpha_i, beta_i, eta and r from the chain and homology dimensions"""
    alpha = _alternating_sums(C.dims)
    beta = _alternating_sums(C.homology_dimensions())
    m = C.length
    eta = sum(a * b for a, b in zip(alpha, beta))
    r = 0
    for i in range(m + 1):
        if i > 0:
            r += alpha[i] * alpha[i - 1] + beta[i] * beta[i - 1]
    for i in range(m // 2 + 1):
        r += alpha[2 * i] + beta[2 * i]
    return SignData(alpha=alpha, beta=beta, eta=eta, r=r)


def r_invariant(C: BasedChainComplex) -> int:
    return sign_data(C).r


def sign_refined_torsion(C: BasedChainComplex, rng: Optional[random.Random] = None) -> TorsionValue:
    t = torsion(C, rng)
    if sign_data(C).eta % 2:
        return TorsionValue(value=-t.value, acyclic=t.acyclic)
    return t


def base_change(C: BasedChainComplex, degree: int, P: ExactMatrix) -> BasedChainComplex:
    """
    Re-express C in the basis of C_degree whose vectors are the columns of P
    """
    if not P.is_square or P.rows != C.dims[degree]:
        raise ShapeError(f"base change in degree {degree} needs a {C.dims[degree]}x{C.dims[degree]} matrix")
    if C.ring.is_zero(det(P)):
        raise SingularMatrixError("base change matrix is singular", f"degree {degree}")
    P_inv = inverse(P)
    boundaries = list(C.boundaries)
    if degree < C.length:
        boundaries[degree] = P_inv @ boundaries[degree]
    if degree >= 1:
        boundaries[degree - 1] = boundaries[degree - 1] @ P
    bases = None
    if C.homology_bases is not None:
        bases = list(C.homology_bases)
        bases[degree] = P_inv @ bases[degree]
    return BasedChainComplex(C.ring, C.dims, boundaries, bases)


def dual_complex(C: BasedChainComplex) -> BasedChainComplex:
    """
    C*_i = conjugate dual of C_{m-i} with boundary (-1)^(m-i) conj(d_{m-i-1})^T

    Dual homology bases are the cocycles taking the value 1 on one h vector
    and 0 on the rest of the frame [b h b'].
    """
    m = C.length
    ring = C.ring
    dims = tuple(reversed(C.dims))
    boundaries = []
    for i in range(m):
        d = C.boundary(m - i - 1).conj_transpose()
        boundaries.append(d if (m - i) % 2 == 0 else -d)
    bases = None
    if C.homology_bases is not None:
        lifts = _lifts(C, None)
        bases = []
        for i in range(m + 1):
            k = m - i
            h = C.homology_bases[k]
            frame = _frame(C, k, lifts, h)
            offset = C.boundary(k).select_columns(pivot_columns(C.boundary(k))).cols
            rows = inverse(frame).select_rows(range(offset, offset + h.cols))
            bases.append(rows.conj_transpose())
    logger.debug(f"Dual of complex with dims {C.dims}")
    return BasedChainComplex(ring, dims, boundaries, bases)


def check_duality_lemma(C: BasedChainComplex) -> bool:
    """tau(C) == (-1)^r(C) * conj(tau(C*))^((-1)^(m+1))"""
    lhs = torsion(C).value
    rhs = C.ring.conj(torsion(dual_complex(C)).value)
    if (C.length + 1) % 2 == 1:
        rhs = C.ring.one / rhs
    if r_invariant(C) % 2:
        rhs = -rhs
    holds = lhs == rhs
    if not holds:
        logger.warning(f"Duality identity fails for complex with dims {C.dims}")
    return holds


# Short exact sequences


def _pad(C: BasedChainComplex, length: int) -> BasedChainComplex:
    if C.length == length:
        return C
    extra = length - C.length
    dims = C.dims + (0,) * extra
    boundaries = list(C.boundaries)
    for i in range(C.length, length):
        boundaries.append(ExactMatrix.zeros(C.ring, dims[i], dims[i + 1]))
    bases = None
    if C.homology_bases is not None:
        bases = list(C.homology_bases) + [ExactMatrix.zeros(C.ring, 0, 0)] * extra
    return BasedChainComplex(C.ring, dims, boundaries, bases)


def _ensure_bases(C: BasedChainComplex) -> BasedChainComplex:
    if C.homology_bases is not None:
        return C
    return C.with_homology_bases([g.representatives for g in homology(C)])


def _homology_coordinates(C: BasedChainComplex, i: int, cycles: ExactMatrix) -> ExactMatrix:
    """Coordinates of cycle classes in the basis h_i"""
    b = image_basis(C, i)
    h = C.homology_bases[i]
    X = solve(b.hstack(h), cycles)
    if X is None:
        raise ChainComplexError(f"degree {i}: vector is not a cycle")
    return X.select_rows(range(b.cols, b.cols + h.cols))


def check_compatible(sub: BasedChainComplex, total: BasedChainComplex, quotient: BasedChainComplex):
    """Bases of total must be {i(c'), d} with d mapping onto c''"""
    for i in range(total.length + 1):
        if total.dims[i] != sub.dims[i] + quotient.dims[i]:
            raise IncompatibleBasesError(f"degree {i}: dimensions {sub.dims[i]} + {quotient.dims[i]} != {total.dims[i]}")
    for i in range(total.length):
        d = total.boundary(i)
        top, bottom = range(sub.dims[i]), range(sub.dims[i], total.dims[i])
        left, right = range(sub.dims[i + 1]), range(sub.dims[i + 1], total.dims[i + 1])
        if d.submatrix(top, left) != sub.boundary(i):
            raise IncompatibleBasesError(f"boundary {i} does not restrict to the subcomplex boundary")
        if not d.submatrix(bottom, left).is_zero():
            raise IncompatibleBasesError(f"boundary {i} does not preserve the subcomplex")
        if d.submatrix(bottom, right) != quotient.boundary(i):
            raise IncompatibleBasesError(f"boundary {i} does not induce the quotient boundary")


def long_exact_sequence(
    sub: BasedChainComplex, total: BasedChainComplex, quotient: BasedChainComplex
) -> BasedChainComplex:
    """
    The homology sequence as an acyclic based complex

    Graded by H_i(C'') in degree 3i, H_i(C) in 3i+1 and H_i(C') in 3i+2,
    with bases taken from the three homology bases.
    """
    ring = total.ring
    m = total.length
    dims: List[int] = []
    for i in range(m + 1):
        dims += [quotient.homology_bases[i].cols, total.homology_bases[i].cols, sub.homology_bases[i].cols]
    boundaries: List[ExactMatrix] = []
    for i in range(m + 1):
        h_sub, h_tot, h_quo = sub.homology_bases[i], total.homology_bases[i], quotient.homology_bases[i]
        # H_i(C) -> H_i(C'')
        projected = h_tot.select_rows(range(sub.dims[i], total.dims[i]))
        boundaries.append(_homology_coordinates(quotient, i, projected))
        # H_i(C') -> H_i(C)
        included = h_sub.vstack(ExactMatrix.zeros(ring, quotient.dims[i], h_sub.cols))
        boundaries.append(_homology_coordinates(total, i, included))
        # H_{i+1}(C'') -> H_i(C'), the zig-zag
        if i < m:
            h_next = quotient.homology_bases[i + 1]
            lifted = ExactMatrix.zeros(ring, sub.dims[i + 1], h_next.cols).vstack(h_next)
            pushed = (total.boundary(i) @ lifted).select_rows(range(sub.dims[i]))
            boundaries.append(_homology_coordinates(sub, i, pushed))
    return BasedChainComplex(ring, dims, boundaries)


@dataclass(frozen=True)
class SESTerms:
    total: Any
    sub: Any
    quotient: Any
    sequence: Any
    nu: int
    mu: int

    @property
    def holds(self) -> bool:
        rhs = self.sub * self.quotient * self.sequence
        if (self.nu + self.mu) % 2:
            rhs = -rhs
        return self.total == rhs


def ses_terms(sub: BasedChainComplex, total: BasedChainComplex, quotient: BasedChainComplex) -> SESTerms:
    m = max(sub.length, total.length, quotient.length)
    sub, total, quotient = (_ensure_bases(_pad(C, m)) for C in (sub, total, quotient))
    check_compatible(sub, total, quotient)
    a_sub, a_quo = sign_data(sub).alpha, sign_data(quotient).alpha
    b_sub, b_tot, b_quo = sign_data(sub).beta, sign_data(total).beta, sign_data(quotient).beta
    nu = sum(a_quo[i] * a_sub[i - 1] for i in range(1, m + 1))
    mu = 0
    for i in range(m + 1):
        mu += (b_tot[i] + 1) * (b_sub[i] + b_quo[i])
        if i > 0:
            mu += b_sub[i - 1] * b_quo[i]
    sequence = long_exact_sequence(sub, total, quotient)
    return SESTerms(
        total=sign_refined_torsion(total).value,
        sub=sign_refined_torsion(sub).value,
        quotient=sign_refined_torsion(quotient).value,
        sequence=torsion(sequence).value,
        nu=nu,
        mu=mu,
    )


def ses_torsion_check(sub: BasedChainComplex, total: BasedChainComplex, quotient: BasedChainComplex) -> bool:
    terms = ses_terms(sub, total, quotient)
    if not terms.holds:
        logger.warning(f"Multiplicativity fails: nu={terms.nu}, mu={terms.mu}")
    return terms.holds


# Fixtures and generators


def torus_complex() -> BasedChainComplex:
    """0 -> Q(x,y) -> Q(x,y)^2 -> Q(x,y) -> 0 for the torus, standard bases"""
    K = FractionField(RATIONALS, 2)
    x = LaurentPolynomial.variable(RATIONALS, 2, 0)
    y = LaurentPolynomial.variable(RATIONALS, 2, 1)
    d0 = ExactMatrix(K, [[1 - x, 1 - y]])
    d1 = ExactMatrix(K, [[y - 1], [1 - x]])
    return BasedChainComplex(K, (1, 2, 1), (d0, d1))


def random_based_complex(
    field: InvolutiveField,
    rng: random.Random,
    length: Optional[int] = None,
    max_dim: int = 6,
    acyclic: bool = False,
) -> BasedChainComplex:
    """
    Random valid complex with chosen ranks, conjugated by random bases

    Non-acyclic results carry homology bases.
    """
    m = rng.randint(1, 5) if length is None else length
    ranks, homs = [], []
    previous = 0
    for i in range(m + 1):
        room = max_dim - previous
        h = 0 if acyclic else rng.randint(0, min(2, room))
        r = rng.randint(0, min(3, room - h)) if i < m else 0
        homs.append(h)
        ranks.append(r)
        previous = r
    dims = [ranks[i] + homs[i] + (ranks[i - 1] if i else 0) for i in range(m + 1)]
    frames = [random_invertible(field, rng, d) for d in dims]
    frame_inverses = [inverse(P) for P in frames]
    boundaries = []
    for i in range(m):
        E = [[field.zero] * dims[i + 1] for _ in range(dims[i])]
        offset = ranks[i + 1] + homs[i + 1]
        for k in range(ranks[i]):
            E[k][offset + k] = field.one
        boundaries.append(frames[i] @ ExactMatrix(field, E, cols=dims[i + 1]) @ frame_inverses[i + 1])
    bases = None
    if not acyclic:
        bases = []
        for i in range(m + 1):
            h = frames[i].select_columns(range(ranks[i], ranks[i] + homs[i]))
            if homs[i]:
                h = h @ random_invertible(field, rng, homs[i])
            bases.append(h)
    return BasedChainComplex(field, dims, boundaries, bases)


def random_short_exact_sequence(
    field: InvolutiveField, rng: random.Random, max_dim: int = 6
) -> Tuple[BasedChainComplex, BasedChainComplex, BasedChainComplex]:
    """
    A random subcomplex of a random complex, rebased compatibly

    Returns (C', C, C'') with C_i based by {i(c'_i), d_i}.
    """
    C = random_based_complex(field, rng, max_dim=max_dim)
    m = C.length
    spans: List[Optional[ExactMatrix]] = [None] * (m + 1)
    for i in range(m, -1, -1):
        k = rng.randint(0, C.dims[i])
        span = random_matrix(field, rng, C.dims[i], k)
        if i < m:
            span = span.hstack(C.boundary(i) @ spans[i + 1])
        spans[i] = span.select_columns(pivot_columns(span))
    frames, sub_dims = [], []
    for i in range(m + 1):
        s = spans[i]
        identity = ExactMatrix.identity(field, C.dims[i])
        pivots = pivot_columns(s.hstack(identity))
        frames.append(s.hstack(identity).select_columns(pivots))
        sub_dims.append(s.cols)
    boundaries = [inverse(frames[i]) @ C.boundary(i) @ frames[i + 1] for i in range(m)]
    total = BasedChainComplex(field, C.dims, boundaries)
    sub = BasedChainComplex(
        field,
        sub_dims,
        [d.submatrix(range(sub_dims[i]), range(sub_dims[i + 1])) for i, d in enumerate(boundaries)],
    )
    quotient = BasedChainComplex(
        field,
        [C.dims[i] - sub_dims[i] for i in range(m + 1)],
        [
            d.submatrix(range(sub_dims[i], C.dims[i]), range(sub_dims[i + 1], C.dims[i + 1]))
            for i, d in enumerate(boundaries)
        ],
    )
    return sub, total, quotient


# Serialization


def _ring_descriptor(ring: Any) -> Tuple[InvolutiveField, int]:
    if isinstance(ring, FractionField):
        return ring.field, ring.rank
    return ring, 0


def complex_to_json(C: BasedChainComplex) -> str:
    """JSON record: field spec, rank (0 for the bare field), dims, row-major boundaries, homology bases"""
    field, rank = _ring_descriptor(C.ring)
    text = (lambda x: format_rational(x)) if rank else field.format_element
    record = {
        "field": field.spec,
        "rank": rank,
        "dims": list(C.dims),
        "boundaries": [[[text(x) for x in row] for row in d.to_lists()] for d in C.boundaries],
        "homology_bases": None
        if C.homology_bases is None
        else [[[text(x) for x in row] for row in h.to_lists()] for h in C.homology_bases],
    }
    return json.dumps(record, indent=2)


def complex_from_json(text: str) -> BasedChainComplex:
    try:
        record = json.loads(text)
        field = parse_field_spec(record["field"])
        rank = int(record.get("rank", 0))
        dims = [int(d) for d in record["dims"]]
        ring = FractionField(field, rank) if rank else field
        parse = (lambda s: parse_rational(s, field, rank)) if rank else field.parse_element

        def matrix(rows, n_rows, n_cols):
            return ExactMatrix(ring, [[parse(x) for x in row] for row in rows], cols=n_cols)

        boundaries = [matrix(rows, dims[i], dims[i + 1]) for i, rows in enumerate(record["boundaries"])]
        bases = record.get("homology_bases")
        if bases is not None:
            bases = [ExactMatrix(ring, [[parse(x) for x in row] for row in h]) if h else None for h in bases]
            bases = [
                h if h is not None else ExactMatrix.zeros(ring, dims[i], 0)
                for i, h in enumerate(bases)
            ]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError("malformed complex record", str(e)) from e
    return BasedChainComplex(ring, dims, boundaries, bases)
