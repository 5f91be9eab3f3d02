"""
Group presentations, Fox calculus and twisted presentation complexes
"""

import logging
import random
from dataclasses import dataclass, field as dataclass_field
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple


from errors import ParseError, PresentationError, RelatorViolationError, UnknownKnotError
from fields import RATIONALS, InvolutiveField
from laurent import FractionField, LaurentPolynomial, LaurentRing
from linalg import INTEGERS, ExactMatrix, det, inverse, rank, smith_form
from torsion import BasedChainComplex

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]


def _free_reduce(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in the generators; letters are (index, +1 or -1)"""

    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for g, e in self.letters:
            if e not in (1, -1) or g < 0:
                raise ValueError(f"invalid letter ({g}, {e})")
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "Word":
        return cls(((index, 1 if exponent > 0 else -1),) * abs(exponent))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def conjugate(self, by: "Word") -> "Word":
        return by * self * by.inverse()

    def max_index(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def exponent_sums(self, n: int) -> Tuple[int, ...]:
        sums = [0] * n
        for g, e in self.letters:
            sums[g] += e
        return tuple(sums)

    def format(self, names: Sequence[str]) -> str:
        return " ".join(names[g] if e == 1 else names[g].upper() for g, e in self.letters)


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Tokens are generator names; an uppercase name is the inverse"""
    text = text.strip()
    if not text or text == "1":
        return Word()
    tokens = text.split()
    if len(tokens) == 1 and all(len(n) == 1 for n in names):
        tokens = list(tokens[0])
    lookup: Dict[str, Letter] = {}
    for k, name in enumerate(names):
        lookup[name] = (k, 1)
        lookup[name.upper()] = (k, -1)
    letters = []
    for tok in tokens:
        if tok not in lookup:
            raise ParseError("unknown generator in word", tok)
        letters.append(lookup[tok])
    return Word(tuple(letters))


def random_word(rng: random.Random, n: int, length: int) -> Word:
    return Word(tuple((rng.randrange(n), rng.choice((1, -1))) for _ in range(length)))


@dataclass(frozen=True)
class GroupPresentation:
    """
    Finite presentation with optional topological metadata

    boundary_components is b0 of the boundary, thurston_norm is x(phi),
    components assigns each meridian generator to a link component and
    linking_numbers lists (i, j, lk) for component pairs i < j.
    """

    generators: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()
    name: Optional[str] = None
    boundary_components: Optional[int] = None
    thurston_norm: Optional[int] = None
    components: Optional[Tuple[int, ...]] = None
    linking_numbers: Tuple[Tuple[int, int, int], ...] = dataclass_field(default=())

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names", " ".join(self.generators))
        for r in self.relators:
            if r.max_index() >= len(self.generators):
                raise PresentationError("relator uses a generator outside the presentation", repr(r))
        if self.components is not None and len(self.components) != len(self.generators):
            raise PresentationError("components must list one entry per generator")

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def deficiency(self) -> int:
        return self.n - len(self.relators)

    @property
    def component_count(self) -> int:
        if self.components is None:
            return 1
        return max(self.components) + 1

    def linking_number(self, i: int, j: int) -> int:
        for a, b, lk in self.linking_numbers:
            if {a, b} == {i, j}:
                return lk
        return 0

    def format_word(self, w: Word) -> str:
        return w.format(self.generators)

    def label(self) -> str:
        return self.name or f"<{' '.join(self.generators)} | {len(self.relators)} relators>"


def parse_presentation(text: str) -> GroupPresentation:
    """
    Parse the presentation text format

    Lines: "gens: a b", then one "rel: a b a B A B" per relator; optional
    "name:", "b0:", "x:", "components: 1 2" (per generator, 1-based) and
    "lk: 1 2 0" (component pair and linking number). '#' starts a comment.
    """
    gens: Optional[List[str]] = None
    rel_lines: List[str] = []
    meta: Dict[str, str] = {}
    lks: List[Tuple[int, int, int]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", line)
        key, value = (s.strip() for s in line.split(":", 1))
        if key == "gens":
            gens = value.split()
            if not gens or any(not g.isalpha() or not g.islower() for g in gens):
                raise ParseError("generator names must be lowercase letters", value)
        elif key == "rel":
            rel_lines.append(value)
        elif key == "lk":
            try:
                i, j, lk = (int(v) for v in value.split())
            except ValueError as e:
                raise ParseError("lk line needs two component numbers and a linking number", value) from e
            lks.append((i - 1, j - 1, lk))
        elif key in ("name", "b0", "x", "components"):
            meta[key] = value
        else:
            raise ParseError("unknown presentation key", key)
    if gens is None:
        raise ParseError("presentation has no 'gens:' line")
    try:
        b0 = int(meta["b0"]) if "b0" in meta else None
        x = int(meta["x"]) if "x" in meta else None
        components = tuple(int(c) - 1 for c in meta["components"].split()) if "components" in meta else None
    except ValueError as e:
        raise ParseError("metadata values must be integers", str(e)) from e
    return GroupPresentation(
        generators=tuple(gens),
        relators=tuple(parse_word(r, gens) for r in rel_lines),
        name=meta.get("name"),
        boundary_components=b0,
        thurston_norm=x,
        components=components,
        linking_numbers=tuple(lks),
    )


def format_presentation(P: GroupPresentation) -> str:
    lines = []
    if P.name:
        lines.append(f"name: {P.name}")
    lines.append(f"gens: {' '.join(P.generators)}")
    lines += [f"rel: {P.format_word(r)}" for r in P.relators]
    if P.boundary_components is not None:
        lines.append(f"b0: {P.boundary_components}")
    if P.thurston_norm is not None:
        lines.append(f"x: {P.thurston_norm}")
    if P.components is not None:
        lines.append(f"components: {' '.join(str(c + 1) for c in P.components)}")
    lines += [f"lk: {i + 1} {j + 1} {lk}" for i, j, lk in P.linking_numbers]
    return "\n".join(lines) + "\n"


# Abelianization


@dataclass(frozen=True)
class AbelianizationMap:
    """Images of the generators in Z^rank"""

    images: Tuple[Tuple[int, ...], ...]
    rank: int
    torsion: Tuple[int, ...] = ()

    def __call__(self, w: Word) -> Tuple[int, ...]:
        out = [0] * self.rank
        for g, e in w:
            for k, v in enumerate(self.images[g]):
                out[k] += e * v
        return tuple(out)

    def monomial(self, w: Word, field: InvolutiveField) -> LaurentPolynomial:
        return LaurentPolynomial.monomial(field, self(w))


def _integer_inverse(M: List[List[int]]) -> Optional[List[List[int]]]:
    """Inverse of a unimodular integer matrix, None otherwise"""
    Q = ExactMatrix(RATIONALS, M)
    if abs(det(Q)) != 1:
        return None
    inv = inverse(Q)
    return [[int(x.numerator) for x in row] for row in inv.to_lists()]


def abelianization(P: GroupPresentation) -> AbelianizationMap:
    """
    The map onto the free part of H_1

    The torsion coefficients of H_1 are kept alongside the images.

    Link presentations with component metadata send each meridian to its
    own coordinate. Otherwise the exponent-sum matrix is brought to Smith
    form and coordinates are normalized so that generators become unit
    vectors where possible (knots: every meridian maps to +1).
    """
    n = P.n
    if P.components is not None:
        rank = P.component_count
        images = tuple(tuple(1 if k == c else 0 for k in range(rank)) for c in P.components)
        phi = AbelianizationMap(images=images, rank=rank)
    else:
        R = ExactMatrix(INTEGERS, [list(r.exponent_sums(n)) for r in P.relators], cols=n)
        snf = smith_form(R)
        rank = n - snf.rank
        if rank == 0:
            raise PresentationError("first homology has trivial free part", P.label())
        V = snf.right.to_lists()
        raw = [V[g][snf.rank:] for g in range(n)]
        basis_rows: List[int] = []
        for g in range(n):
            trial = basis_rows + [g]
            if len(trial) <= rank and _rank_of([raw[k] for k in trial]) == len(trial):
                basis_rows = trial
        images_list = raw
        if len(basis_rows) == rank:
            inv = _integer_inverse([raw[k] for k in basis_rows])
            if inv is not None:
                images_list = [[sum(row[a] * inv[a][b] for a in range(rank)) for b in range(rank)] for row in raw]
        if rank == 1:
            sign = next((1 if v[0] > 0 else -1 for v in images_list if v[0]), 1)
            images_list = [[sign * v[0]] for v in images_list]
        torsion = tuple(d for d in snf.divisors if d > 1)
        phi = AbelianizationMap(images=tuple(tuple(v) for v in images_list), rank=rank, torsion=torsion)
    for r in P.relators:
        if any(phi(r)):
            raise PresentationError("relator does not vanish in the abelianization", P.format_word(r))
    logger.debug(f"Abelianization of {P.label()}: rank {phi.rank}, images {phi.images}")
    return phi


def _rank_of(rows: List[List[int]]) -> int:
    if not rows:
        return 0
    return rank(ExactMatrix(RATIONALS, rows))


# Matrix images of generators and Fox calculus


@dataclass(frozen=True)
class GeneratorImages:
    """Invertible d x d matrices (and their inverses) assigned to the generators"""

    ring: object
    dim: int
    images: Tuple[ExactMatrix, ...]
    inverses: Tuple[ExactMatrix, ...]

    @classmethod
    def from_matrices(cls, ring, images: Sequence[ExactMatrix]) -> "GeneratorImages":
        images = tuple(images)
        dim = images[0].rows if images else 0
        return cls(ring=ring, dim=dim, images=images, inverses=tuple(inverse(M) for M in images))

    def identity(self) -> ExactMatrix:
        return ExactMatrix.identity(self.ring, self.dim)

    def evaluate(self, w: Word) -> ExactMatrix:
        result = self.identity()
        for g, e in w:
            result = result @ (self.images[g] if e == 1 else self.inverses[g])
        return result


def fox_derivative_eval(w: Word, j: int, rho: GeneratorImages) -> ExactMatrix:
    """
    Image of the Fox derivative dw/dx_j

    Uses d(uv) = du + u dv, dx_i/dx_j = delta_ij and
    dx_i^-1/dx_j = -delta_ij x_i^-1, read left to right.
    """
    if not 0 <= j < len(rho.images):
        raise PresentationError("generator index out of range", str(j))
    return fox_row(w, rho)[j]


def fox_row(w: Word, rho: GeneratorImages) -> List[ExactMatrix]:
    """All Fox derivatives of w in one pass"""
    n = len(rho.images)
    if w.max_index() >= n:
        raise PresentationError("word uses a generator without an image", str(w.max_index()))
    zero = ExactMatrix.zeros(rho.ring, rho.dim, rho.dim)
    derivs = [zero] * n
    prefix = rho.identity()
    for g, e in w:
        if e == 1:
            derivs[g] = derivs[g] + prefix
            prefix = prefix @ rho.images[g]
        else:
            prefix = prefix @ rho.inverses[g]
            derivs[g] = derivs[g] - prefix
    return derivs


def fox_jacobian(P: GroupPresentation, rho: GeneratorImages) -> ExactMatrix:
    """Rows are relators, block columns generators, block (k, j) = rho(dr_k/dx_j)"""
    if not P.relators:
        return ExactMatrix.zeros(rho.ring, 0, P.n * rho.dim)
    return ExactMatrix.block(rho.ring, [fox_row(r, rho) for r in P.relators])


def check_relators(P: GroupPresentation, rho: GeneratorImages):
    identity = rho.identity()
    for r in P.relators:
        if rho.evaluate(r) != identity:
            raise RelatorViolationError(P.format_word(r), " ".join(P.generators))


def boundary_column(P: GroupPresentation, rho: GeneratorImages) -> ExactMatrix:
    """Stacked blocks rho(x_j) - I"""
    identity = rho.identity()
    return ExactMatrix.block(rho.ring, [[M - identity] for M in rho.images])


def presentation_complex(P: GroupPresentation, rho: GeneratorImages) -> BasedChainComplex:
    """
    Twisted chain complex of the presentation 2-complex

    C_2 = relators x K^d -> C_1 = generators x K^d -> C_0 = K^d, bases
    ordered generator-major. Laurent images are promoted to the fraction
    field so that torsion can be taken.
    """
    check_relators(P, rho)
    ring = rho.ring
    if isinstance(ring, LaurentRing):
        target = FractionField(ring.field, ring.rank)
    else:
        target = ring
    d = rho.dim
    jacobian = fox_jacobian(P, rho)
    column = boundary_column(P, rho)
    d0 = column.transpose().change_ring(target)
    d1 = jacobian.transpose().change_ring(target)
    dims = (d, P.n * d, len(P.relators) * d)
    logger.debug(f"Presentation complex of {P.label()}: dims {dims}")
    return BasedChainComplex(target, dims, (d0, d1))


# Knot and link table


def two_bridge_presentation(p: int, q: int, name: Optional[str] = None, thurston_norm: Optional[int] = None) -> GroupPresentation:
    """
    Two-generator presentation of the two-bridge knot or link S(p, q)

    w = b^e1 a^e2 b^e3 ... with e_i = (-1)^floor(iq/p); the relator is
    a w b^-1 w^-1 for knots (p odd) and a w a^-1 w^-1 for links (p even).
    """
    if not (0 < q < p and gcd(p, q) == 1 and q % 2 == 1):
        raise PresentationError("two-bridge parameters need 0 < q < p coprime with q odd", f"S({p}, {q})")
    letters = tuple((1 if i % 2 else 0, -1 if (i * q // p) % 2 else 1) for i in range(1, p))
    w = Word(letters)
    a, b = Word.generator(0), Word.generator(1)
    if p % 2:
        relator = a * w * b.inverse() * w.inverse()
        return GroupPresentation(
            generators=("a", "b"),
            relators=(relator,),
            name=name,
            boundary_components=1,
            thurston_norm=thurston_norm,
        )
    relator = a * w * a.inverse() * w.inverse()
    lk = w.exponent_sums(2)[1]
    return GroupPresentation(
        generators=("a", "b"),
        relators=(relator,),
        name=name,
        boundary_components=2,
        thurston_norm=thurston_norm,
        components=(0, 1),
        linking_numbers=((0, 1, lk),),
    )


KNOT_TABLE: Dict[str, GroupPresentation] = {
    "unknot": GroupPresentation(generators=("a",), name="unknot", boundary_components=1, thurston_norm=0),
    "trefoil": two_bridge_presentation(3, 1, "trefoil", thurston_norm=1),
    "figure8": two_bridge_presentation(5, 3, "figure8", thurston_norm=1),
    "5_1": two_bridge_presentation(5, 1, "5_1", thurston_norm=3),
    "5_2": two_bridge_presentation(7, 3, "5_2", thurston_norm=1),
    "6_1": two_bridge_presentation(9, 7, "6_1", thurston_norm=1),
    "hopf": two_bridge_presentation(2, 1, "hopf"),
    "whitehead": two_bridge_presentation(8, 3, "whitehead"),
}

ALIASES = {"3_1": "trefoil", "4_1": "figure8"}


def knot_table(name: str) -> GroupPresentation:
    key = ALIASES.get(name, name)
    if key not in KNOT_TABLE:
        raise UnknownKnotError("unknown knot or link", name)
    return KNOT_TABLE[key]
