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
Spinor norm groups θ(O⁺(L_p)), the idèle class quotient whose order is g⁺(L),
and the improper shift deciding g(L).

Square classes are handled as F₂ vectors: (valuation parity, non-square bit) at
an odd prime, (valuation parity, a, b) for the unit (-1)^a·5^b at p=2, and the
sign bit at the archimedean place. θ is the span of the products of pairs of
symmetry norms; at odd p the symmetries come from an orthogonal basis, at p=2
from all primitive vectors whose symmetry preserves L_2.
"""
import logging
from fractions import Fraction
from itertools import product
from typing import Dict, List, Sequence, Set, Tuple

from spinor_genera.arith import matrix_gcd, prime_divisors, quadratic, residue, valuation
from spinor_genera.exceptions import LatticeError, ThetaUndecided
from spinor_genera.lattice import discriminant
from spinor_genera.local import Block, components_by_scale, unit_class
from spinor_genera.models import INFINITY, GramLattice, IdeleClassQuotient, SpinorNormGroup, SquareClass

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]

_DYADIC_UNITS = {1: (0, 0), 5: (0, 1), 7: (1, 0), 3: (1, 1)}
_DYADIC_UNIT_OF = {bits: unit for unit, bits in _DYADIC_UNITS.items()}


def width(place: int) -> int:
    if place == INFINITY:
        return 1
    return 3 if place == 2 else 2


def square_class_vector(x, place: int) -> Vector:
    if place == INFINITY:
        return (0,) if x > 0 else (1,)
    parity = valuation(x, place) % 2
    unit = unit_class(x, place)
    if place == 2:
        return (parity,) + _DYADIC_UNITS[unit]
    return parity, int(unit == -1)


def _square_class(vector: Vector, place: int) -> SquareClass:
    if place == INFINITY:
        return SquareClass(prime=INFINITY, unit=-1 if vector[0] else 1)
    if place == 2:
        return SquareClass(prime=2, val_parity=vector[0], unit=_DYADIC_UNIT_OF[tuple(vector[1:])])
    return SquareClass(prime=place, val_parity=vector[0], unit=-1 if vector[1] else 1)


def _vector_of(square_class: SquareClass) -> Vector:
    if square_class.prime == INFINITY:
        return (int(square_class.unit == -1),)
    if square_class.prime == 2:
        return (square_class.val_parity,) + _DYADIC_UNITS[square_class.unit]
    return square_class.val_parity, int(square_class.unit == -1)


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(a ^ b for a, b in zip(u, v))


def _span(vectors: Sequence[Vector], size: int) -> Set[Vector]:
    elements = {tuple([0] * size)}
    for v in vectors:
        elements |= {_add(e, v) for e in elements}
    return elements


def _odd_symmetry_norms(lattice: GramLattice, p: int) -> Set[Vector]:
    norms = set()
    for scale, blocks in components_by_scale(lattice, p).items():
        units = [b.unit_gram[0][0] for b in blocks]
        if len(units) >= 2:
            norms |= {(scale % 2, 0), (scale % 2, 1)}
        else:
            norms.add((scale % 2, int(unit_class(units[0], p) == -1)))
    return norms


def _unit_matrix(blocks: List[Block]):
    size = sum(len(b.vectors) for b in blocks)
    matrix = [[0] * size for _ in range(size)]
    offset = 0
    for b in blocks:
        r = len(b.vectors)
        for i in range(r):
            for j in range(r):
                matrix[offset + i][offset + j] = b.unit_gram[i][j]
        offset += r
    return matrix


def _dyadic_symmetry_norms(lattice: GramLattice) -> Set[Vector]:
    """
    Square classes of Q(v) over primitive v with 2B(v, L) ⊆ Q(v)Z₂. Writing
    v = Σ 2^a_k y_k over the Jordan components, B(v, L) = 2^m Z₂ with
    m = min(i_k + a_k), and the condition is v₂(Q(v)) ∈ {m, m+1}; the class of
    Q(v) is read off modulo 2^(m+4)
    """
    components = sorted(components_by_scale(lattice, 2).items())
    scales = [scale for scale, _ in components]
    matrices = [_unit_matrix(blocks) for _, blocks in components]
    cache: Dict[Tuple[int, int], Set[int]] = {}

    def primitive_values(k, precision):
        if precision <= 0:
            return {0}
        if (k, precision) not in cache:
            modulus = 2 ** precision
            reduced = [[residue(x, modulus) for x in row] for row in matrices[k]]
            span = 2 ** max(precision - 1, 1)
            cache[(k, precision)] = {quadratic(reduced, y) % modulus
                                     for y in product(range(span), repeat=len(reduced))
                                     if any(c % 2 for c in y)}
        return cache[(k, precision)]

    norms = set()
    for m in range(max(scales) + 1):
        modulus = 2 ** (m + 4)
        options = []
        for scale in scales:
            low = max(0, m - scale)
            high = max(low, -(-(m + 4 - scale) // 2))
            options.append([None] + list(range(low, high + 1)))
        for choice in product(*options):
            present = [(k, a) for k, a in enumerate(choice) if a is not None]
            if not present or min(a for _, a in present) != 0 or min(scales[k] + a for k, a in present) != m:
                continue
            sums = {0}
            for k, a in present:
                shift = 2 ** (scales[k] + 2 * a)
                values = primitive_values(k, m + 4 - scales[k] - 2 * a)
                sums = {(s + shift * v) % modulus for s in sums for v in values}
            for t in sums:
                if t == 0:
                    continue
                v = valuation(t, 2)
                if v in (m, m + 1):
                    norms.add((v % 2,) + _DYADIC_UNITS[(t >> v) % 8])
    return norms


def symmetry_norms(lattice: GramLattice, p: int) -> Set[Vector]:
    if p == 2:
        return _dyadic_symmetry_norms(lattice)
    return _odd_symmetry_norms(lattice, p)


def _check(lattice: GramLattice):
    if lattice.rank not in (3, 4):
        raise LatticeError('spinor norms are computed for ranks 3 and 4')
    if matrix_gcd(lattice.gram) != 1:
        raise LatticeError('spinor norms are computed for primitive lattices')


def _theta_vectors(lattice: GramLattice, p: int) -> Set[Vector]:
    if p != 2 and discriminant(lattice) % p:
        return _span([(0, 1)], 2)
    norms = sorted(symmetry_norms(lattice, p))
    if not norms:
        raise ThetaUndecided(p, 'no symmetry of the lattice found')
    theta = _span([_add(v, norms[0]) for v in norms[1:]], width(p))
    if p == 2:
        _check_dyadic_units(lattice, theta)
    return theta


def _check_dyadic_units(lattice: GramLattice, theta: Set[Vector]):
    # a dyadic Jordan component of rank >= 3 puts every unit in θ(O⁺(L_2))
    ranks = {scale: sum(len(b.vectors) for b in blocks) for scale, blocks in components_by_scale(lattice, 2).items()}
    units = {(0,) + bits for bits in _DYADIC_UNITS.values()}
    wide = [scale for scale, rank in ranks.items() if rank >= 3]
    if wide and not units <= theta:
        raise ThetaUndecided(2, f'symmetries miss units required by the rank {ranks[wide[0]]} '
                                f'component at scale 2^{wide[0]}')


def theta_group(lattice: GramLattice, p: int) -> SpinorNormGroup:
    _check(lattice)
    elements = _theta_vectors(lattice, p)
    units = {(0,) + bits for bits in _DYADIC_UNITS.values()} if p == 2 else {(0, 0), (0, 1)}
    return SpinorNormGroup(prime=p, classes=tuple(_square_class(v, p) for v in sorted(elements)),
                           contains_units=units <= elements)


def _places(lattice: GramLattice) -> Tuple[int, ...]:
    return (INFINITY,) + tuple(sorted(set([2] + prime_divisors(discriminant(lattice)))))


def _embed(vectors_by_place: Dict[int, Vector], places: Sequence[int]) -> int:
    bits = []
    for place in places:
        bits.extend(vectors_by_place.get(place, (0,) * width(place)))
    return int(''.join(map(str, bits)), 2)


def _reduce(basis: List[int], v: int) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


def _insert(basis: List[int], v: int):
    v = _reduce(basis, v)
    if v:
        basis.append(v)
        basis.sort(reverse=True)


def _relation_basis(quotient: IdeleClassQuotient) -> List[int]:
    basis: List[int] = []
    for place, theta in zip(quotient.places, quotient.thetas):
        for c in theta.classes:
            _insert(basis, _embed({place: _vector_of(c)}, quotient.places))
    for x in [-1] + [p for p in quotient.places if p != INFINITY]:
        _insert(basis, _embed({place: square_class_vector(x, place) for place in quotient.places}, quotient.places))
    return basis


def idele_quotient(lattice: GramLattice) -> IdeleClassQuotient:
    _check(lattice)
    places = _places(lattice)
    thetas = [SpinorNormGroup(prime=INFINITY, classes=(SquareClass(prime=INFINITY),), contains_units=True)]
    thetas += [theta_group(lattice, p) for p in places[1:]]
    partial = IdeleClassQuotient(places=places, thetas=tuple(thetas), dim=0)
    total = sum(width(place) for place in places)
    dim = total - len(_relation_basis(partial))
    logger.debug('idele quotient over places %s has dimension %s', places, dim)
    return IdeleClassQuotient(places=places, thetas=tuple(thetas), dim=dim)


def g_plus(lattice: GramLattice) -> int:
    return idele_quotient(lattice).g_plus


def _bits(value: int, size: int) -> Tuple[int, ...]:
    return tuple(int(c) for c in format(value, f'0{size}b'))


def prime_idele_image(q: int, quotient: IdeleClassQuotient) -> Tuple[int, ...]:
    """
    Class of the idèle carrying q at the place q in the quotient, as bits over the
    places of S; zero iff q-neighbors stay in the proper spinor genus
    """
    if q in quotient.places:
        raise LatticeError(f'{q} is a bad place of the lattice')
    vector = _embed({place: square_class_vector(q, place) for place in quotient.places}, quotient.places)
    size = sum(width(place) for place in quotient.places)
    return _bits(_reduce(_relation_basis(quotient), vector), size)


def improper_shift(lattice: GramLattice, quotient: IdeleClassQuotient) -> Tuple[int, ...]:
    """
    Class relating the proper spinor genera of L and of its image under an
    improper isometry: the symmetry in e₁ composed with a local symmetry of L_p
    at every p
    """
    norm = lattice.gram[0][0]
    finite = [p for p in quotient.places if p != INFINITY]
    outside = 1
    for p in prime_divisors(norm):
        if p not in finite:
            outside *= p ** valuation(norm, p)
    vectors = {}
    for p in finite:
        norms = sorted(symmetry_norms(lattice, p))
        if not norms:
            raise ThetaUndecided(p, 'no symmetry of the lattice found')
        vectors[p] = _add(square_class_vector(Fraction(norm, outside), p), norms[0])
    size = sum(width(place) for place in quotient.places)
    return _bits(_reduce(_relation_basis(quotient), _embed(vectors, quotient.places)), size)


def g(lattice: GramLattice) -> int:
    quotient = idele_quotient(lattice)
    shift = improper_shift(lattice, quotient)
    return quotient.g_plus if not any(shift) else quotient.g_plus // 2
