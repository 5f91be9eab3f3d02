"""
Linear representations of presented groups
"""

import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from errors import InputError, ParseError, PresentationError, UnsupportedError
from fields import RATIONALS, InvolutiveField, parse_field_spec
from fox import (
    AbelianizationMap,
    GeneratorImages,
    GroupPresentation,
    Word,
    check_relators,
    knot_table,
)
from laurent import LaurentPolynomial, LaurentRing
from linalg import ExactMatrix, det, inverse, nullspace, rank, solve

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parents[2] / "data"
REPS_DIR = DATA_DIR / "reps"

SUPPORTED_PRIMES = (3, 5, 7)
MAX_IRREDUCIBILITY_DIM = 3
DUALITY_SAMPLES = 100
EXHAUSTIVE_LIMIT = 10_000
KERNEL_WORD_LENGTH = 4


@dataclass(frozen=True)
class Representation:
    """
    A homomorphism from a presented group to GL(d, K)

    Construction checks shapes, inverts every image and evaluates every
    relator; an invalid assignment raises RelatorViolationError.
    """

    presentation: GroupPresentation
    field: InvolutiveField
    images: Tuple[ExactMatrix, ...]
    name: Optional[str] = None
    inverses: Tuple[ExactMatrix, ...] = dataclass_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        images = tuple(M.change_ring(self.field) for M in self.images)
        if len(images) != self.presentation.n:
            raise PresentationError(
                "representation needs one matrix per generator",
                f"{len(images)} matrices for {self.presentation.n} generators",
            )
        d = images[0].rows if images else 0
        for g, M in zip(self.presentation.generators, images):
            if M.shape != (d, d):
                raise PresentationError(f"image of {g} is not {d}x{d}", f"{M.rows}x{M.cols}")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "inverses", tuple(inverse(M) for M in images))
        self.validate()

    @property
    def dim(self) -> int:
        return self.images[0].rows if self.images else 0

    def label(self) -> str:
        return self.name or f"{self.presentation.label()} -> GL({self.dim}, {self.field.spec})"

    def generator_images(self) -> GeneratorImages:
        return GeneratorImages(ring=self.field, dim=self.dim, images=self.images, inverses=self.inverses)

    def evaluate(self, w: Word) -> ExactMatrix:
        return self.generator_images().evaluate(w)

    def validate(self):
        check_relators(self.presentation, self.generator_images())

    def determinants(self) -> Tuple[Any, ...]:
        return tuple(det(M) for M in self.images)

    def det_data(self) -> "DetSubgroupData":
        return det_subgroup(self.field, self.determinants())

    def is_special_linear(self) -> bool:
        return all(x == self.field.one for x in self.determinants())


def trivial_representation(P: GroupPresentation, field: InvolutiveField = RATIONALS, dim: int = 1) -> Representation:
    identity = ExactMatrix.identity(field, dim)
    return Representation(P, field, tuple(identity for _ in range(P.n)), name=f"trivial{dim}")


# Determinant subgroup


@dataclass(frozen=True)
class DetSubgroupData:
    """Generators of det(alpha(pi)) and, over finite fields, the subgroup itself"""

    field: InvolutiveField
    generators: Tuple[Any, ...]
    subgroup: Optional[FrozenSet[Any]] = None

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def contains(self, a: Any, bound: int = 8) -> bool:
        """
        Membership of a field element

        Exact over finite fields. Over infinite fields the search covers
        products of generator powers with exponents in [-bound, bound].
        """
        a = self.field.coerce(a)
        if a == self.field.one:
            return True
        if self.subgroup is not None:
            return a in self.subgroup
        if not a:
            return False
        k = len(self.generators)
        if k > 3:
            bound = min(bound, 2)
        for exps in itertools.product(range(-bound, bound + 1), repeat=k):
            value = self.field.one
            for g, e in zip(self.generators, exps):
                value = value * (g ** e if e >= 0 else self.field.inv(g) ** -e)
            if value == a:
                return True
        return False


def det_subgroup(field: InvolutiveField, determinants: Sequence[Any]) -> DetSubgroupData:
    one = field.one
    gens: List[Any] = []
    for x in determinants:
        x = field.coerce(x)
        if x != one and x not in gens:
            gens.append(x)
    subgroup = None
    if field.is_finite:
        found = {one}
        frontier = [one]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g
                    if y not in found:
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        subgroup = frozenset(found)
    return DetSubgroupData(field=field, generators=tuple(gens), subgroup=subgroup)


# Duality


def dual_representation(alpha: Representation) -> Representation:
    """g -> conj(alpha(g^-1))^T"""
    images = tuple(M.conj_transpose() for M in alpha.inverses)
    name = f"{alpha.name}^dual" if alpha.name else None
    return Representation(alpha.presentation, alpha.field, images, name=name)


@dataclass(frozen=True)
class DualityWitness:
    """Invertible P with P alpha(x) P^-1 = dual(x) for every generator"""

    matrix: ExactMatrix

    def verify(self, alpha: Representation, dual: Representation) -> bool:
        P = self.matrix
        return all(P @ A == B @ P for A, B in zip(alpha.images, dual.images))


@dataclass(frozen=True)
class DualitySearch:
    witness: Optional[DualityWitness]
    exhaustive: bool

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def probabilistic(self) -> bool:
        """Absence reported after sampling rather than exhausting the solution space"""
        return self.witness is None and not self.exhaustive


def _intertwiner_system(A_list: Sequence[ExactMatrix], B_list: Sequence[ExactMatrix], field: InvolutiveField) -> ExactMatrix:
    """Linear system in vec(P) (row-major) for P A = B P on every pair"""
    d = A_list[0].rows
    zero = field.zero
    rows = []
    for A, B in zip(A_list, B_list):
        for r in range(d):
            for c in range(d):
                row = [zero] * (d * d)
                for v in range(d):
                    row[r * d + v] = row[r * d + v] + A[v, c]
                for u in range(d):
                    row[u * d + c] = row[u * d + c] - B[r, u]
                rows.append(row)
    return ExactMatrix(field, rows, cols=d * d)


def _unvec(field: InvolutiveField, vector: Sequence[Any], d: int) -> ExactMatrix:
    return ExactMatrix(field, [list(vector[r * d:(r + 1) * d]) for r in range(d)], cols=d)


def find_conjugation_to_dual(alpha: Representation, rng: Optional[random.Random] = None, samples: int = DUALITY_SAMPLES) -> DualitySearch:
    """
    Search the intertwiner space between alpha and its dual for an invertible element

    Basis vectors are tried first. Small finite solution spaces are then
    enumerated completely; otherwise random combinations are sampled and a
    miss is reported as probabilistic.
    """
    field = alpha.field
    d = alpha.dim
    dual = dual_representation(alpha)
    if d == 0:
        return DualitySearch(DualityWitness(ExactMatrix.identity(field, 0)), exhaustive=True)
    system = _intertwiner_system(alpha.images, dual.images, field)
    N = nullspace(system)
    basis = [N.column(j) for j in range(N.cols)]
    s = len(basis)
    logger.debug(f"Intertwiner space of {alpha.label()} has dimension {s}")
    if s == 0:
        return DualitySearch(None, exhaustive=True)

    def attempt(coeffs: Sequence[Any]) -> Optional[DualityWitness]:
        vec = [field.zero] * (d * d)
        for c, b in zip(coeffs, basis):
            if c:
                vec = [x + c * y for x, y in zip(vec, b)]
        P = _unvec(field, vec, d)
        if det(P):
            return DualityWitness(P)
        return None

    for j in range(s):
        unit = [field.one if k == j else field.zero for k in range(s)]
        witness = attempt(unit)
        if witness is not None:
            return DualitySearch(witness, exhaustive=True)
    if s == 1:
        return DualitySearch(None, exhaustive=True)
    if field.is_finite and field.order ** s <= EXHAUSTIVE_LIMIT:
        for coeffs in itertools.product(list(field.elements()), repeat=s):
            witness = attempt(coeffs)
            if witness is not None:
                return DualitySearch(witness, exhaustive=True)
        return DualitySearch(None, exhaustive=True)
    rng = rng or random.Random(0)
    for _ in range(samples):
        witness = attempt([field.random_element(rng) for _ in range(s)])
        if witness is not None:
            return DualitySearch(witness, exhaustive=False)
    logger.info(f"No invertible intertwiner found for {alpha.label()} after {samples} samples")
    return DualitySearch(None, exhaustive=False)


# Twisting by the abelianization


def tensor_with_phi(alpha: Representation, phi: AbelianizationMap) -> GeneratorImages:
    """(alpha x phi)(g) = phi(g) alpha(g) with matrices over K[t^+-1]"""
    ring = LaurentRing(alpha.field, phi.rank)
    images, inverses = [], []
    for g in range(alpha.presentation.n):
        e = phi.images[g]
        t = LaurentPolynomial.monomial(alpha.field, e)
        t_inv = LaurentPolynomial.monomial(alpha.field, [-x for x in e])
        images.append(alpha.images[g].map(lambda x, t=t: t * x, ring))
        inverses.append(alpha.inverses[g].map(lambda x, t=t_inv: t * x, ring))
    return GeneratorImages(ring=ring, dim=alpha.dim, images=tuple(images), inverses=tuple(inverses))


def check_tensor_determinants(alpha: Representation, phi: AbelianizationMap) -> bool:
    """det((alpha x phi)(g)) = phi(g)^d det(alpha(g)) on every generator"""
    twisted = tensor_with_phi(alpha, phi)
    d = alpha.dim
    for g, M in enumerate(twisted.images):
        expected = LaurentPolynomial.monomial(alpha.field, [d * x for x in phi.images[g]], det(alpha.images[g]))
        if det(M) != expected:
            return False
    return True


# Symmetric powers


def _sym_matrix(A: ExactMatrix, basis: Sequence[Tuple[int, ...]], index: Dict[Tuple[int, ...], int]) -> ExactMatrix:
    ring = A.ring
    d = A.rows
    columns = []
    for mono in basis:
        poly: Dict[Tuple[int, ...], Any] = {(): ring.one}
        for e in mono:
            nxt: Dict[Tuple[int, ...], Any] = {}
            for key, c in poly.items():
                for i in range(d):
                    a = A[i, e]
                    if a:
                        nk = tuple(sorted(key + (i,)))
                        nxt[nk] = nxt.get(nk, ring.zero) + c * a
            poly = nxt
        col = [ring.zero] * len(basis)
        for key, c in poly.items():
            col[index[key]] = c
        columns.append(col)
    return ExactMatrix.from_columns(ring, columns, len(basis))


def sym_basis(d: int, k: int) -> List[Tuple[int, ...]]:
    """Monomial basis of Sym^k(K^d): non-decreasing index tuples"""
    return list(itertools.combinations_with_replacement(range(d), k))


def sym_power(alpha: Representation, k: int) -> Representation:
    """
    k-th symmetric power in the monomial basis

    Basis vector e_i acts as the variable x_i; a matrix A substitutes
    x_j -> sum_i A[i, j] x_i and the column of a monomial is its expansion.
    """
    if k < 1:
        raise ValueError(f"symmetric power needs k >= 1, got {k}")
    if k == 1:
        return alpha
    basis = sym_basis(alpha.dim, k)
    index = {m: n for n, m in enumerate(basis)}
    images = tuple(_sym_matrix(A, basis, index) for A in alpha.images)
    name = f"sym{k}({alpha.name})" if alpha.name else None
    return Representation(alpha.presentation, alpha.field, images, name=name)


# Irreducibility


def _flatten(M: ExactMatrix) -> List[Any]:
    return [x for row in M.to_lists() for x in row]


def algebra_dimension(alpha: Representation) -> int:
    """Dimension of the subalgebra of M_d(K) generated by the images"""
    field = alpha.field
    d = alpha.dim
    span: List[List[Any]] = []
    frontier = [ExactMatrix.identity(field, d)]

    def absorb(M: ExactMatrix) -> bool:
        candidate = span + [_flatten(M)]
        if rank(ExactMatrix(field, candidate, cols=d * d)) > len(span):
            span.append(candidate[-1])
            return True
        return False

    for M in frontier:
        absorb(M)
    while frontier and len(span) < d * d:
        nxt = []
        for M in frontier:
            for G in alpha.images:
                P = M @ G
                if absorb(P):
                    nxt.append(P)
                    if len(span) == d * d:
                        break
        frontier = nxt
    return len(span)


def is_irreducible(alpha: Representation) -> bool:
    """
    Absolute irreducibility for d <= 3

    The images generate all of M_d exactly when no common invariant
    subspace exists over the algebraic closure.
    """
    d = alpha.dim
    if d > MAX_IRREDUCIBILITY_DIM:
        raise UnsupportedError("irreducibility test supports dimension at most 3", str(d))
    if d <= 1:
        return True
    return algebra_dimension(alpha) == d * d


# Kernel of phi


@dataclass(frozen=True)
class KernelSearch:
    nontrivial: bool
    inconclusive: bool
    witness: Optional[Word] = None


def reduced_words(n: int, max_length: int):
    """All freely reduced words of length 1..max_length, shortest first"""
    layer = [Word()]
    letters = [(g, e) for g in range(n) for e in (1, -1)]
    for _ in range(max_length):
        nxt = []
        for w in layer:
            last = w.letters[-1] if w.letters else None
            for g, e in letters:
                if last is not None and last == (g, -e):
                    continue
                nxt.append(Word(w.letters + ((g, e),)))
        yield from nxt
        layer = nxt


def nontrivial_on_kernel(alpha: Representation, phi: AbelianizationMap, max_length: int = KERNEL_WORD_LENGTH) -> KernelSearch:
    """Bounded search for a word with zero phi-image and non-identity alpha-image"""
    identity = ExactMatrix.identity(alpha.field, alpha.dim)
    for w in reduced_words(alpha.presentation.n, max_length):
        if any(phi(w)):
            continue
        if alpha.evaluate(w) != identity:
            return KernelSearch(nontrivial=True, inconclusive=False, witness=w)
    return KernelSearch(nontrivial=False, inconclusive=True)


# SL(2, F_p) enumeration

Quad = Tuple[int, int, int, int]


def sl2_elements(p: int) -> List[Quad]:
    return [(a, b, c, d) for a, b, c, d in itertools.product(range(p), repeat=4) if (a * d - b * c) % p == 1]


def _mul(x: Quad, y: Quad, p: int) -> Quad:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def _inv(x: Quad, p: int) -> Quad:
    a, b, c, d = x
    return (d % p, -b % p, -c % p, a % p)


def _search_block(args) -> List[Tuple[Quad, Quad]]:
    relators, p, outer, elements = args
    identity = (1, 0, 0, 1)
    found = []
    for A in outer:
        table = {(0, 1): A, (0, -1): _inv(A, p)}
        for B in elements:
            table[(1, 1)] = B
            table[(1, -1)] = _inv(B, p)
            ok = True
            for r in relators:
                M = identity
                for letter in r:
                    M = _mul(M, table[letter], p)
                if M != identity:
                    ok = False
                    break
            if ok:
                found.append((A, B))
    return found


@dataclass(frozen=True)
class EnumeratedRepresentation:
    representation: Representation
    irreducible: bool


def _quad_matrix(field: InvolutiveField, q: Quad) -> ExactMatrix:
    return ExactMatrix(field, [[q[0], q[1]], [q[2], q[3]]])


def enumerate_sl2_reps(P: GroupPresentation, p: int, jobs: int = 1) -> List[EnumeratedRepresentation]:
    """
    All pairs in SL(2, F_p)^2 satisfying the relators, in lexicographic order

    The outer loop over the image of the first generator is split across
    worker processes when jobs > 1.
    """
    if P.n != 2:
        raise PresentationError("SL(2) enumeration needs a two-generator presentation", str(P.n))
    if p not in SUPPORTED_PRIMES:
        raise UnsupportedError("SL(2) enumeration supports p in {3, 5, 7}", str(p))
    elements = sl2_elements(p)
    relators = [tuple(r.letters) for r in P.relators]
    chunks = max(1, jobs) * 4
    size = -(-len(elements) // chunks)
    tasks = [(relators, p, elements[i:i + size], elements) for i in range(0, len(elements), size)]
    logger.info(f"Enumerating SL(2, F_{p}) representations of {P.label()}: {len(elements) ** 2} pairs, {jobs} jobs")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(_search_block, tasks))
    else:
        blocks = [_search_block(t) for t in tasks]
    field = parse_field_spec(f"Fp:{p}")
    out = []
    for n, (A, B) in enumerate(pair for block in blocks for pair in block):
        rep = Representation(P, field, (_quad_matrix(field, A), _quad_matrix(field, B)), name=f"{P.label()}/sl2_f{p}/{n}")
        out.append(EnumeratedRepresentation(rep, is_irreducible(rep)))
    logger.info(f"Found {len(out)} representations ({sum(e.irreducible for e in out)} irreducible)")
    return out


# Permutation representations


def permutation_matrix(field: InvolutiveField, perm: Sequence[int]) -> ExactMatrix:
    """Matrix sending e_k to e_perm[k]"""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise InputError("not a permutation of 0..n-1", repr(list(perm)))
    rows = [[field.zero] * n for _ in range(n)]
    for k, image in enumerate(perm):
        rows[image][k] = field.one
    return ExactMatrix(field, rows)


def permutation_representation(
    P: GroupPresentation,
    permutations: Sequence[Sequence[int]],
    field: InvolutiveField = RATIONALS,
    reduced: bool = False,
    name: Optional[str] = None,
) -> Representation:
    """
    Permutation representation of a finite quotient

    Matrices compose as functions (right to left), so the permutations must
    satisfy the relators under that composition. With reduced=True the
    representation is restricted to the sum-zero subspace, with basis
    e_k - e_last.
    """
    mats = [permutation_matrix(field, perm) for perm in permutations]
    if reduced:
        n = mats[0].rows if mats else 0
        columns = []
        for k in range(n - 1):
            col = [field.zero] * n
            col[k] = field.one
            col[n - 1] = -field.one
            columns.append(col)
        basis = ExactMatrix.from_columns(field, columns, n)
        mats = [solve(basis, M @ basis) for M in mats]
    return Representation(P, field, tuple(mats), name=name)


# Representation files


def _parse_matrix(text: str, field: InvolutiveField) -> ExactMatrix:
    rows = [r for r in text.split(";")]
    data = [[field.parse_element(x) for x in r.split(",")] for r in rows]
    if any(len(r) != len(data) for r in data):
        raise ParseError("representation matrices must be square", text)
    return ExactMatrix(field, data)


def parse_representation(text: str, presentation: Optional[GroupPresentation] = None) -> Representation:
    """
    Parse a representation file

    Lines: "field: Q", an optional "knot: <table name>" and "name:", then one
    "<generator>: r11, r12; r21, r22" line per generator (rows separated by
    ';'). The presentation argument takes precedence over the knot line.
    """
    meta: Dict[str, str] = {}
    matrices: Dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", line)
        key, value = (s.strip() for s in line.split(":", 1))
        if key in ("field", "knot", "name"):
            meta[key] = value
        else:
            matrices[key] = value
    if "field" not in meta:
        raise ParseError("representation file has no 'field:' line")
    field = parse_field_spec(meta["field"])
    if presentation is None:
        if "knot" not in meta:
            raise ParseError("representation file names no knot and no presentation was given")
        presentation = knot_table(meta["knot"])
    for key in matrices:
        if key not in presentation.generators:
            raise ParseError("representation assigns an unknown generator", key)
    missing = [g for g in presentation.generators if g not in matrices]
    if missing:
        raise ParseError("representation misses generators", " ".join(missing))
    images = tuple(_parse_matrix(matrices[g], field) for g in presentation.generators)
    return Representation(presentation, field, images, name=meta.get("name"))


def format_representation(alpha: Representation) -> str:
    lines = []
    if alpha.name:
        lines.append(f"name: {alpha.name}")
    if alpha.presentation.name:
        lines.append(f"knot: {alpha.presentation.name}")
    lines.append(f"field: {alpha.field.spec}")
    for g, M in zip(alpha.presentation.generators, alpha.images):
        rows = "; ".join(", ".join(alpha.field.format_element(x) for x in row) for row in M.to_lists())
        lines.append(f"{g}: {rows}")
    return "\n".join(lines) + "\n"


def resolve_representation_path(ref: str) -> Path:
    candidates = [Path(ref), REPS_DIR / ref, REPS_DIR / f"{ref}.rep"]
    for path in candidates:
        if path.is_file():
            return path
    raise InputError("representation file not found", ref)


def read_input_file(path: Path) -> str:
    """UTF-8 text of an input file; unreadable or undecodable files are input errors"""
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InputError("input file is not valid UTF-8", str(path)) from e
    except OSError as e:
        raise InputError(f"cannot read input file: {e.strerror}", str(path)) from e


def load_representation(ref: str, presentation: Optional[GroupPresentation] = None) -> Representation:
    """Load a representation from a path or the name of a shipped file"""
    path = resolve_representation_path(ref)
    logger.debug(f"Loading representation from {path}")
    return parse_representation(read_input_file(path), presentation)


def shipped_representations() -> List[str]:
    if not REPS_DIR.is_dir():
        return []
    return sorted(p.name for p in REPS_DIR.glob("*.rep"))
