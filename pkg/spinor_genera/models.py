# Copyright (c) CRS4 2024
#
# This file is part of SPINOR-GENERA.
#
# SPINOR-GENERA is free software: you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the Free
# Software Foundation, either version 3 of the License, or (at your option)
# any later version.
#
# SPINOR-GENERA is distributed in the hope that it will be useful, but WITHOUT
# ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS
# FOR A PARTICULAR PURPOSE. See the GNU General Public License for more
# details.
#
# You should have received a copy of the GNU Affero General Public License
# along with SPINOR-GENERA. If not, see <https://www.gnu.org/licenses/>.

"""
Models exchanged between the modules of the package.
Values are immutable: lattices, local data and masses are frozen pydantic models,
reports are plain models meant to be dumped to JSON or tables.
"""
from enum import StrEnum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import isprime

from spinor_genera.arith import leading_minors, nonsquare_unit, squarefree_decomposition

INFINITY = 0  # place label of the archimedean completion


class Parity(StrEnum):
    EVEN = 'even'
    ODD = 'odd'
    ANY = 'any'


class DyadicType(StrEnum):
    I = 'I'
    II = 'II'


class BlockKind(StrEnum):
    A = 'A'
    H = 'H'


class OrderClass(StrEnum):
    EVEN = 'even'
    ODD = 'odd'
    NEITHER = 'neither'


class MassBranch(StrEnum):
    SQUARE = 'square-discriminant'
    CHARACTER = 'quadratic-character'
    TERNARY = 'ternary'


class OutputFormat(StrEnum):
    JSON = 'json'
    TABLE = 'table'


class Scope(StrEnum):
    QUICK = 'quick'
    FULL = 'full'


class GramLattice(BaseModel):
    """
    A positive definite integral lattice given by the Gram matrix of a basis
    """
    model_config = ConfigDict(frozen=True)

    gram: Tuple[Tuple[int, ...], ...]

    @field_validator('gram', mode='before')
    @classmethod
    def _as_tuples(cls, value):
        return tuple(tuple(row) for row in value)

    @model_validator(mode='after')
    def _check(self):
        n = len(self.gram)
        if not 1 <= n <= 4 or any(len(row) != n for row in self.gram):
            raise ValueError('the Gram matrix must be square of size 1 to 4')
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(i)):
            raise ValueError('the Gram matrix must be symmetric')
        if any(m <= 0 for m in leading_minors(self.gram)):
            raise ValueError('the Gram matrix must be positive definite')
        return self

    @property
    def rank(self) -> int:
        return len(self.gram)

    def rows(self) -> List[List[int]]:
        return [list(row) for row in self.gram]


class ClassicalForm(BaseModel):
    """
    The form Σ a_ii x_i² + Σ_{i<j} f_ij x_i x_j. Cross coefficients are ordered
    (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n)
    """
    model_config = ConfigDict(frozen=True)

    rank: int
    diag: Tuple[int, ...]
    cross: Tuple[int, ...]

    @model_validator(mode='after')
    def _check(self):
        if len(self.diag) != self.rank or len(self.cross) != self.rank * (self.rank - 1) // 2:
            raise ValueError(f'a form of rank {self.rank} needs {self.rank} diagonal and '
                             f'{self.rank * (self.rank - 1) // 2} cross coefficients')
        return self


class IdealExponents(BaseModel):
    model_config = ConfigDict(frozen=True)

    prime: int
    scale_exp: int
    norm_exp: int


class JordanComponent(BaseModel):
    """
    A p^scale_exp-modular component. At odd p only det_class is meaningful; at p=2
    units holds the unary diagonal entries mod 8 and blocks the binary type II ones
    """
    model_config = ConfigDict(frozen=True)

    prime: int
    scale_exp: int
    rank: int
    det_class: Optional[int] = None
    units: Tuple[int, ...] = ()
    blocks: Tuple[BlockKind, ...] = ()
    dyadic_type: Optional[DyadicType] = None
    det_mod8: Optional[int] = None
    oddity: Optional[int] = None

    @property
    def octane(self) -> int:
        """
        oddity, plus 4 when the determinant unit is ≡ ±3 mod 8
        """
        return (self.oddity + (4 if self.det_mod8 in (3, 5) else 0)) % 8


class JordanSplitting(BaseModel):
    model_config = ConfigDict(frozen=True)

    prime: int
    components: Tuple[JordanComponent, ...]

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)


class PProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    prime: int
    exps: Tuple[int, ...]

    def __str__(self):
        return f'({",".join(map(str, self.exps))})_{self.prime}'


class GenusSymbol(BaseModel):
    """
    Canonical local data at every prime dividing 2·d(L), keyed by prime
    """
    model_config = ConfigDict(frozen=True)

    rank: int
    discriminant: int
    local: Tuple[Tuple[int, str], ...]

    @property
    def text(self) -> str:
        return f'{self.rank}:{self.discriminant}:' + ';'.join(f'{p}={s}' for p, s in self.local)


class SquareClass(BaseModel):
    """
    An element of Q_p^×/(Q_p^×)². unit is the Legendre symbol at odd p, the unit
    residue mod 8 at p=2 and the sign at the archimedean place
    """
    model_config = ConfigDict(frozen=True)

    prime: int
    val_parity: int = 0
    unit: int = 1

    @property
    def representative(self) -> int:
        if self.prime == INFINITY:
            return self.unit
        if self.prime == 2:
            return 2 ** self.val_parity * self.unit
        return self.prime ** self.val_parity * (1 if self.unit == 1 else nonsquare_unit(self.prime))


class SpinorNormGroup(BaseModel):
    model_config = ConfigDict(frozen=True)

    prime: int
    classes: Tuple[SquareClass, ...]
    contains_units: bool

    def representatives(self) -> List[int]:
        return sorted(c.representative for c in self.classes)


class IdeleClassQuotient(BaseModel):
    model_config = ConfigDict(frozen=True)

    places: Tuple[int, ...]
    thetas: Tuple[SpinorNormGroup, ...]
    dim: int

    @property
    def g_plus(self) -> int:
        return 2 ** self.dim


class MassValue(BaseModel):
    """
    The exact positive real coeff·√radicand with radicand square-free
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeff: Fraction
    radicand: int = 1

    @classmethod
    def of(cls, coeff, radicand=1) -> 'MassValue':
        s, t = squarefree_decomposition(radicand)
        return cls(coeff=Fraction(coeff) * s, radicand=t)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def __mul__(self, other):
        if not isinstance(other, MassValue):
            other = MassValue.of(other)
        return MassValue.of(self.coeff * other.coeff, self.radicand * other.radicand)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, MassValue):
            other = MassValue.of(other)
        return MassValue.of(self.coeff / other.coeff / other.radicand, self.radicand * other.radicand)

    def _square(self) -> Fraction:
        return self.coeff ** 2 * self.radicand

    def __lt__(self, other):
        return self._square() < _as_mass(other)._square()

    def __le__(self, other):
        return self._square() <= _as_mass(other)._square()

    def __gt__(self, other):
        return self._square() > _as_mass(other)._square()

    def __ge__(self, other):
        return self._square() >= _as_mass(other)._square()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeff == other
        if isinstance(other, MassValue):
            return self.coeff == other.coeff and self.radicand == other.radicand
        return NotImplemented

    def __hash__(self):
        return hash((self.coeff, self.radicand))

    def __str__(self):
        return str(self.coeff) if self.is_rational else f'{self.coeff}*sqrt({self.radicand})'


def _as_mass(value) -> MassValue:
    return value if isinstance(value, MassValue) else MassValue.of(value)


class SpeciesId(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dimension: int
    label: str
    factor: Fraction


class ReducedGram(BaseModel):
    model_config = ConfigDict(frozen=True)

    gram: GramLattice
    min: int


class MuResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    lattice: GramLattice
    iterations: Dict[int, int]
    fixed: bool


class MuStep(BaseModel):
    prime: int
    before: PProfile
    after: PProfile


class ClassSet(BaseModel):
    """
    Pairwise non-isometric primitive classes sharing a form discriminant.
    seeds records the discriminants the set was ascended from
    """
    model_config = ConfigDict(frozen=True)

    discriminant: int
    rank: int
    classes: Tuple[ReducedGram, ...]
    seeds: Tuple[int, ...] = ()
    complete: bool = True


class ClassEntry(BaseModel):
    gram: GramLattice
    aut_order: int
    proper_aut_order: int
    spinor_genus: int = 0


class GenusReport(BaseModel):
    symbol: str
    representative: GramLattice
    form_discriminant: int
    classes: List[ClassEntry]
    h: int
    g: int
    g_plus: int
    spinor_sizes: List[int]
    total_mass: str
    spinor_masses: List[str]
    mass_branch: MassBranch
    flags: List[str] = Field(default_factory=list)


class ClassificationReport(BaseModel):
    discriminant: int
    rank: int
    genera: List[GenusReport]

    @property
    def class_count(self) -> int:
        return sum(genus.h for genus in self.genera)


class OneClassSpinorResult(BaseModel):
    gram: GramLattice
    h: int
    h_s: int
    g: int


class OneClassGenusEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    gram: GramLattice
    discriminant: int
    p_profiles: Dict[int, PProfile]


class TernaryOCSGEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    coefficients: Tuple[int, int, int, int, int, int]
    discriminant: int
    regular: bool


class LocalReport(BaseModel):
    prime: int
    profile: PProfile
    splitting: JordanSplitting
    theta: Optional[List[int]] = None
    local_mass: str


class AnalysisReport(BaseModel):
    gram: GramLattice
    discriminant: int
    form_discriminant: int
    local: List[LocalReport]
    g_plus: Optional[int] = None
    g: Optional[int] = None
    total_mass: Optional[str] = None
    spinor_mass: Optional[str] = None
    mass_branch: Optional[MassBranch] = None
    flags: List[str] = Field(default_factory=list)


class CriterionResult(BaseModel):
    name: str
    passed: bool
    skipped: bool = False
    detail: str = ''


class RunConfig(BaseModel):
    command: str
    inputs: List[str] = Field(default_factory=list)
    rank: int = 4
    discriminants: List[int] = Field(default_factory=list)
    primes: List[int] = Field(default_factory=list)
    catalogue: Optional[str] = None
    cache: Optional[str] = None
    jobs: int = 1
    format: OutputFormat = OutputFormat.JSON
    strict: bool = False
    verbose: bool = False
    scope: Scope = Scope.QUICK
    hat: bool = False
    seeds: Optional[str] = None
    steps: int = 1
    profile: Optional[str] = None
    output: Optional[str] = None
    disc_range: Optional[str] = None

    @field_validator('rank')
    @classmethod
    def _rank(cls, value):
        if value not in (3, 4):
            raise ValueError('rank must be 3 or 4')
        return value

    @field_validator('jobs')
    @classmethod
    def _jobs(cls, value):
        if value < 1:
            raise ValueError('jobs must be positive')
        return value

    @field_validator('primes')
    @classmethod
    def _primes(cls, value):
        if not all(isprime(p) for p in value):
            raise ValueError(f'not a prime in {value}')
        return value

    @field_validator('disc_range')
    @classmethod
    def _disc_range(cls, value):
        if value is not None:
            low, _, high = value.partition(':')
            if not (low.isdigit() and high.isdigit() and 0 < int(low) <= int(high)):
                raise ValueError(f'range must be LOW:HIGH, got {value!r}')
        return value

    def target_discriminants(self) -> List[int]:
        """
        The --disc values followed by the discriminants of --range LOW:HIGH, both ends included
        """
        targets = list(self.discriminants)
        if self.disc_range:
            low, high = map(int, self.disc_range.split(':'))
            targets += [d for d in range(low, high + 1) if d not in targets]
        return targets


class AscensionLayer(BaseModel):
    """
    One step of an ascension sweep: the classes of a discriminant grouped into genera
    """
    discriminant: int
    classes: int
    genera: int
    profile_genera: int = 0
    one_class_genera: int = 0


class MassReport(BaseModel):
    gram: GramLattice
    discriminant: int
    local_masses: Dict[int, str]
    species: Dict[int, List[str]]
    total_mass: Optional[str] = None
    spinor_mass: Optional[str] = None
    mass_branch: Optional[MassBranch] = None
    flags: List[str] = Field(default_factory=list)


class ThetaReport(BaseModel):
    gram: GramLattice
    groups: List[SpinorNormGroup]
    g_plus: Optional[int] = None
    g: Optional[int] = None
    flags: List[str] = Field(default_factory=list)


class MuReport(BaseModel):
    gram: GramLattice
    result: GramLattice
    discriminant: int
    steps: List[MuStep]
    fixed: bool
