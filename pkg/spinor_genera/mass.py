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
Mass formula for positive definite lattices of rank 3 and 4.

Local masses follow the species rules of the Conway-Sloane formulation: every
Jordan constituent (including 0-dimensional ones) gets a species from its
dimension, its type and its octane value, the diagonal product multiplies the
species factors and the cross product accounts for pairs of constituents.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Rational, bernoulli, factorint

from spinor_genera import spinor
from spinor_genera.arith import fundamental_discriminant, is_square, kronecker, prime_divisors
from spinor_genera.exceptions import UnsupportedShape
from spinor_genera.lattice import discriminant
from spinor_genera.local import jordan_split
from spinor_genera.models import DyadicType, GramLattice, JordanComponent, MassBranch, MassValue, SpeciesId

logger = logging.getLogger(__name__)

# first exponent 3m+l-k at which the lower bound exceeds 1 is one past these
BOUND_PRIMES = (3, 5, 7)


def _empty(p: int, scale: int) -> JordanComponent:
    return JordanComponent(prime=p, scale_exp=scale, rank=0, dyadic_type=DyadicType.II, det_mod8=1, oddity=0)


def _sign(octane: int) -> str:
    return '+' if octane % 8 in (0, 1, 7) else '-'


def species_factor(label: str, p: int) -> Fraction:
    """
    Mass factor M_p of a species: 1/2 for species 0, 1 for 0+,
    1/(2Π_{j<=t}(1-p^-2j)) for the odd species 2t+1 and
    1/(2Π_{j<t}(1-p^-2j)(1∓p^-t)) for 2t±
    """
    if label == '0+':
        return Fraction(1)
    if label == '0':
        return Fraction(1, 2)
    q = Fraction(1, p)
    if label[-1] in '+-':
        t = int(label[:-1]) // 2
        product = Fraction(1)
        for j in range(1, t):
            product *= 1 - q ** (2 * j)
        return 1 / (2 * product * (1 - q ** t if label[-1] == '+' else 1 + q ** t))
    product = Fraction(1)
    for j in range(1, (int(label) - 1) // 2 + 1):
        product *= 1 - q ** (2 * j)
    return 1 / (2 * product)


def _label(component: JordanComponent, neighbors: Sequence[JordanComponent]) -> str:
    n = component.rank
    p = component.prime
    if p != 2:
        if n == 0:
            return '0+'
        if n % 2:
            return str(n)
        square = component.det_class * kronecker(-1, p) ** (n // 2) == 1
        return f'{n}{"+" if square else "-"}'
    bound = any(c.rank and c.dyadic_type == DyadicType.I for c in neighbors)
    if bound:
        if n == 0:
            return '0'
        return str(n if n % 2 else n - 1)
    if n == 0:
        return '0+'
    octane = component.octane
    if component.dyadic_type == DyadicType.II:
        return f'{n}{_sign(octane)}'
    if n % 2:
        return '0+' if n == 1 else f'{n - 1}{_sign(octane)}'
    if octane % 4 == 2:
        return str(n - 1)
    return '0+' if n == 2 else f'{n - 2}{_sign(octane)}'


def species(component: JordanComponent, neighbors: Sequence[JordanComponent] = ()) -> SpeciesId:
    """
    Species of a constituent; neighbors are the constituents at the adjacent scales
    and only matter at p=2, where a constituent next to a type I one is bound
    """
    label = _label(component, neighbors)
    return SpeciesId(dimension=component.rank, label=label, factor=species_factor(label, component.prime))


def constituents(lattice: GramLattice, p: int) -> List[JordanComponent]:
    """
    The Jordan constituents at every scale from -1 to one past the largest, empty ones included
    """
    present = {c.scale_exp: c for c in jordan_split(lattice, p).components}
    top = max(present)
    return [present.get(s, _empty(p, s)) for s in range(-1, top + 2)]


def local_species(lattice: GramLattice, p: int) -> List[Tuple[int, SpeciesId]]:
    chain = constituents(lattice, p)
    result = []
    for i, c in enumerate(chain):
        neighbors = [chain[j] for j in (i - 1, i + 1) if 0 <= j < len(chain)]
        result.append((c.scale_exp, species(c, neighbors)))
    return result


def local_mass(lattice: GramLattice, p: int) -> MassValue:
    """
    m_p(L): diagonal product times cross product, times 2^(n(I,I)-n(II)) at p=2
    """
    chain = constituents(lattice, p)
    diagonal = Fraction(1)
    for _, s in local_species(lattice, p):
        diagonal *= s.factor
    present = [c for c in chain if c.rank]
    exponent = 0
    for i, a in enumerate(present):
        for b in present[i + 1:]:
            exponent += (b.scale_exp - a.scale_exp) * a.rank * b.rank
    value = MassValue.of(diagonal * Fraction(p) ** (exponent // 2), p if exponent % 2 else 1)
    if p == 2:
        pairs = sum(1 for a, b in zip(chain, chain[1:])
                    if a.rank and b.rank and a.dyadic_type == b.dyadic_type == DyadicType.I)
        type_ii = sum(c.rank for c in present if c.dyadic_type == DyadicType.II)
        value = value * Fraction(2) ** (pairs - type_ii)
    return value


def character(f: int, a: int) -> int:
    """
    Kronecker symbol (f/a) for a positive integer a
    """
    value = 1
    for p, e in factorint(a).items():
        value *= kronecker(f, p) ** e
    return value


def _bernoulli_2(f: int) -> Fraction:
    """
    Generalized Bernoulli number B_{2,χ} = f·Σ χ(a)B₂(a/f) of the character of conductor f
    """
    total = Rational(0)
    for a in range(1, f + 1):
        chi = character(f, a)
        if chi:
            total += chi * bernoulli(2, Rational(a, f))
    total *= f
    return Fraction(int(total.p), int(total.q))


def mass_branch(rank: int, d: int) -> MassBranch:
    if rank == 3:
        return MassBranch.TERNARY
    if rank == 4:
        return MassBranch.SQUARE if is_square(d) else MassBranch.CHARACTER
    raise UnsupportedShape(f'no mass closure for rank {rank}')


def mass_from_local(rank: int, d: int, local_masses: Dict[int, MassValue]) -> MassValue:
    """
    m(L) from the local masses at the primes dividing 2d
    """
    branch = mass_branch(rank, d)
    if branch == MassBranch.TERNARY:
        total = MassValue.of(Fraction(1, 6))
        f = 1
    elif branch == MassBranch.SQUARE:
        total = MassValue.of(Fraction(1, 36))
        f = 1
    else:
        f = fundamental_discriminant(d)
        total = MassValue.of(_bernoulli_2(f) / (6 * f * f), f)
    for p in sorted(set([2] + prime_divisors(d))):
        q = Fraction(1, p * p)
        factor = 2 * (1 - q)
        if rank == 4:
            factor *= 1 - character(f, p) * q
        total = total * local_masses[p] * factor
    return total


def total_mass(lattice: GramLattice) -> MassValue:
    d = discriminant(lattice)
    locals_ = {p: local_mass(lattice, p) for p in sorted(set([2] + prime_divisors(d)))}
    mass = mass_from_local(lattice.rank, d, locals_)
    logger.debug('mass of %s: %s (%s)', lattice.gram, mass, mass_branch(lattice.rank, d))
    return mass


def spinor_mass(lattice: GramLattice, g: Optional[int] = None) -> MassValue:
    if g is None:
        g = spinor.g(lattice)
    return total_mass(lattice) / g


def mass_lower_bound(q: int, k: int, l: int, m: int, parity: str) -> MassValue:
    """
    Lower bound for the mass of a lattice of discriminant a power of the odd prime q
    with four rank-1 constituents at scales 0<k<l<m
    """
    if not 0 < k < l < m:
        raise ValueError('the scales must satisfy 0 < k < l < m')
    return _bound(q, 3 * m + l - k, parity)


def _bound(q: int, exponent: int, parity: str) -> MassValue:
    r = Fraction(1, q)
    if parity == 'even':
        rational = (1 - r ** 2) ** 2 / (2 ** 9 * 3 * 5)
    elif parity == 'odd':
        rational = (1 - r ** 4) / (2 ** 8 * 3 ** 2 * 5)
    else:
        raise ValueError(f'unknown parity {parity}')
    return MassValue.of(rational * q ** (exponent // 2), q if exponent % 2 else 1)


def bound_exponent_check(q: int, parity: str) -> int:
    """
    Largest value of 3m+l-k for which the lower bound does not exceed 1
    """
    if q not in BOUND_PRIMES:
        raise UnsupportedShape(f'bound thresholds are tabulated for q in {BOUND_PRIMES}')
    exponent = 0
    while not _bound(q, exponent + 1, parity) > 1:
        exponent += 1
    return exponent


def bound_survivors(q: int, parity: str) -> List[Tuple[int, int, int]]:
    """
    Scale triples 0<k<l<m whose lower bound does not exceed 1
    """
    threshold = bound_exponent_check(q, parity)
    result = []
    for m in range(3, threshold + 1):
        for l in range(2, m):
            for k in range(1, l):
                if 3 * m + l - k <= threshold:
                    result.append((k, l, m))
    return result
