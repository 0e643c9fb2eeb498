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
Kneser neighbors, class sets of genera certified by the mass formula, the
partition of a genus into spinor genera and the classification of all forms
of a discriminant.
"""
import logging
from fractions import Fraction
from itertools import product
from typing import Dict, List, Sequence, Set, Tuple

from sympy import nextprime

from spinor_genera import mass, spinor
from spinor_genera.arith import bilinear, identity, quadratic
from spinor_genera.ascension import form_classes, group_by_genus, lattice_classes
from spinor_genera.exceptions import IncompleteGenus, LatticeError, ThetaUndecided
from spinor_genera.isometry import aut_order, aut_proper_order, canonical_lattice
from spinor_genera.lattice import (discriminant, form_discriminant, lattice_from_basis, sublattice_basis,
                                   trusted_lattice)
from spinor_genera.local import genus_symbol, jordan_split, p_profile
from spinor_genera.models import (ClassEntry, ClassificationReport, ClassSet, DyadicType, GenusReport, GramLattice,
                                  OneClassSpinorResult, Parity, ReducedGram)

logger = logging.getLogger(__name__)

MAX_NEIGHBOR_PRIMES = 8
MAX_IMAGE_SEARCH = 500

THETA_UNDECIDED = 'theta-undecided'
PARTITION_MISMATCH = 'partition-mismatch'
UNEQUAL_SPINOR_MASSES = 'unequal-spinor-masses'


def _key(lattice: GramLattice):
    return lattice.gram


def _isotropic_lines(lattice: GramLattice, q: int):
    n = lattice.rank
    for j in range(n):
        for tail in product(range(q), repeat=n - j - 1):
            x = [0] * j + [1] + list(tail)
            if quadratic(lattice.gram, x) % q == 0:
                yield x


def _neighbor(lattice: GramLattice, x: List[int], q: int) -> GramLattice:
    n = lattice.rank
    gram = lattice.gram
    gx = [bilinear(gram, row, x) for row in identity(n)]
    k = next(i for i in range(n) if gx[i] % q)
    c = -(quadratic(gram, x) // q) * pow(2 * gx[k], -1, q) % q
    x = [xi + (c * q if i == k else 0) for i, xi in enumerate(x)]
    gx = [bilinear(gram, row, x) for row in identity(n)]
    inverse = pow(gx[k], -1, q)
    generators = [[q * v for v in row] for row in identity(n)]
    for i in range(n):
        if i != k:
            v = [0] * n
            v[i] = 1
            v[k] = -gx[i] * inverse % q
            generators.append(v)
    # q·L_x + Z·x is q times the neighbor
    generators = [[q * v for v in g] for g in generators] + [x]
    basis = sublattice_basis([list(col) for col in zip(*generators)])
    return canonical_lattice(lattice_from_basis(lattice, basis, divisor=q * q))


def p_neighbors(lattice: GramLattice, q: int) -> List[GramLattice]:
    """
    The q-neighbors of L, one per isotropic line mod q, in canonical form and without repetition
    """
    if (2 * discriminant(lattice)) % q == 0:
        raise LatticeError(f'{q} divides 2d(L)')
    found = {}
    for x in _isotropic_lines(lattice, q):
        neighbor = _neighbor(lattice, x, q)
        found.setdefault(_key(neighbor), neighbor)
    return [found[k] for k in sorted(found)]


def neighbor_closure(lattice: GramLattice, q: int) -> List[GramLattice]:
    """
    All classes reachable from L by q-neighbor steps
    """
    start = canonical_lattice(lattice)
    seen = {_key(start): start}
    queue = [start]
    while queue:
        current = queue.pop(0)
        for neighbor in p_neighbors(current, q):
            if _key(neighbor) not in seen:
                seen[_key(neighbor)] = neighbor
                queue.append(neighbor)
    return [seen[k] for k in sorted(seen)]


def neighbor_primes(lattice: GramLattice) -> List[int]:
    d = discriminant(lattice)
    primes = []
    q = 2
    while len(primes) < MAX_NEIGHBOR_PRIMES:
        q = nextprime(q)
        if d % q:
            primes.append(q)
    return primes


def _mass_of(classes: Sequence[GramLattice]) -> Fraction:
    return sum((Fraction(1, aut_order(c)) for c in classes), Fraction(0))


def genus_classes(lattice: GramLattice) -> ClassSet:
    """
    The classes of gen(L), found by breadth-first neighbor steps at increasing primes
    until Σ 1/|O| reaches the mass of the genus
    """
    target = mass.total_mass(lattice)
    start = canonical_lattice(lattice)
    seen = {_key(start): start}
    found = _mass_of([start])
    for q in neighbor_primes(lattice):
        queue = list(seen.values())
        while queue and not target == found:
            current = queue.pop(0)
            for neighbor in p_neighbors(current, q):
                if _key(neighbor) not in seen:
                    seen[_key(neighbor)] = neighbor
                    queue.append(neighbor)
                    found += Fraction(1, aut_order(neighbor))
        logger.debug('genus of %s after %s-neighbors: %s classes, mass %s of %s',
                     lattice.gram, q, len(seen), found, target)
        if target < found:
            raise IncompleteGenus(f'classes of mass {found} exceed the mass {target} of the genus')
        if target == found:
            grams = sorted(seen)
            return ClassSet(discriminant=discriminant(lattice), rank=lattice.rank,
                            classes=tuple(_reduced(seen[g]) for g in grams))
    raise IncompleteGenus(f'neighbors at {MAX_NEIGHBOR_PRIMES} primes reach mass {found} of {target}')


def _reduced(lattice: GramLattice) -> ReducedGram:
    return ReducedGram(gram=lattice, min=lattice.gram[0][0])


def trivial_image_prime(lattice: GramLattice, quotient=None) -> int:
    """
    The smallest prime q not dividing 2d(L) whose q-neighbors stay in the proper spinor genus
    """
    quotient = quotient or spinor.idele_quotient(lattice)
    d = discriminant(lattice)
    q = 2
    for _ in range(MAX_IMAGE_SEARCH):
        q = nextprime(q)
        if d % q and not any(spinor.prime_idele_image(q, quotient)):
            return q
    raise LatticeError(f'no prime with trivial idele image below {q}')


def _components(keys: Sequence, edges: Dict) -> List[List]:
    parts = []
    assigned: Set = set()
    for key in keys:
        if key in assigned:
            continue
        part = {key}
        stack = [key]
        while stack:
            for other in edges[stack.pop()]:
                if other not in part:
                    part.add(other)
                    stack.append(other)
        assigned |= part
        parts.append(sorted(part))
    return parts


def _neighbor_graph(classes: Sequence[GramLattice], q: int) -> Dict:
    keys = {_key(c) for c in classes}
    edges = {}
    for c in classes:
        edges[_key(c)] = {_key(n) for n in p_neighbors(c, q)} & keys
    return edges


def spinor_partition(classes: Sequence[GramLattice], quotient=None) -> Tuple[List[List[GramLattice]], List[str]]:
    """
    The classes of one genus split into spinor genera: components of the neighbor graph at
    a prime with trivial idèle image. When θ cannot be decided, components of the
    graph of two-step neighbors at the smallest good prime, with a flag
    """
    classes = sorted((canonical_lattice(c) for c in classes), key=_key)
    by_key = {_key(c): c for c in classes}
    keys = sorted(by_key)
    flags = []
    try:
        quotient = quotient or spinor.idele_quotient(classes[0])
        if quotient.g_plus == 1:
            return [classes], flags
        edges = _neighbor_graph(classes, trivial_image_prime(classes[0], quotient))
    except ThetaUndecided as e:
        logger.warning('falling back to two-step neighbors: %s', e)
        flags.append(THETA_UNDECIDED)
        one_step = _neighbor_graph(classes, neighbor_primes(classes[0])[0])
        edges = {k: set().union(*[one_step[m] for m in one_step[k]]) if one_step[k] else set() for k in keys}
    parts = _components(keys, edges)
    return [[by_key[k] for k in part] for part in parts], flags


def genus_report(classes: Sequence[GramLattice]) -> GenusReport:
    """
    Report on a genus whose classes are all given; the class list is certified by the mass formula
    """
    classes = sorted((canonical_lattice(c) for c in classes), key=_key)
    representative = classes[0]
    total = mass.total_mass(representative)
    found = _mass_of(classes)
    if not total == found:
        raise IncompleteGenus(f'genus {genus_symbol(representative).text}: classes of mass {found}, expected {total}')
    parts, flags = spinor_partition(classes)
    try:
        quotient = spinor.idele_quotient(representative)
        g_plus = quotient.g_plus
        g = spinor.g(representative)
    except ThetaUndecided:
        g_plus = g = len(parts)
    if THETA_UNDECIDED not in flags and len(parts) != g:
        logger.warning('genus %s: %s spinor parts for g=%s', genus_symbol(representative).text, len(parts), g)
        flags.append(PARTITION_MISMATCH)
    part_masses = [_mass_of(part) for part in parts]
    if len(set(part_masses)) > 1:
        flags.append(UNEQUAL_SPINOR_MASSES)
    index = {_key(c): i for i, part in enumerate(parts) for c in part}
    entries = [ClassEntry(gram=c, aut_order=aut_order(c), proper_aut_order=aut_proper_order(c),
                          spinor_genus=index[_key(c)]) for c in classes]
    return GenusReport(symbol=genus_symbol(representative).text, representative=representative,
                       form_discriminant=form_discriminant(representative), classes=entries, h=len(classes),
                       g=g, g_plus=g_plus, spinor_sizes=[len(part) for part in parts], total_mass=str(total),
                       spinor_masses=[str(m) for m in part_masses],
                       mass_branch=mass.mass_branch(representative.rank, discriminant(representative)),
                       flags=flags)


def classify_class_set(classes: ClassSet, cache=None) -> ClassificationReport:
    genera = []
    lattices = [c.gram for c in classes.classes]
    for symbol, members in sorted(group_by_genus(lattices).items()):
        report = cache.load_report(classes.rank, classes.discriminant, symbol) if cache else None
        if report is None:
            report = genus_report(members)
            if cache:
                cache.save_report(classes.rank, classes.discriminant, symbol, report)
        genera.append(report)
    logger.info('discriminant %s: %s classes in %s genera', classes.discriminant, len(lattices), len(genera))
    return ClassificationReport(discriminant=classes.discriminant, rank=classes.rank, genera=genera)


def classify(discriminant_: int, rank: int, cache=None) -> ClassificationReport:
    """
    All classes of primitive forms of the discriminant, grouped into genera and spinor genera
    """
    classes = cache.load_classes(rank, discriminant_) if cache else None
    if classes is None:
        classes = form_classes(discriminant_, rank)
        if cache:
            cache.save_classes(classes)
    return classify_class_set(classes, cache)


def find_one_class_spinor(reports: Sequence[ClassificationReport]) -> List[OneClassSpinorResult]:
    """
    Classes alone in their spinor genus inside a genus of more than one class
    """
    result = []
    for report in reports:
        for genus in report.genera:
            if genus.h == 1:
                continue
            for entry in genus.classes:
                if genus.spinor_sizes[entry.spinor_genus] == 1:
                    result.append(OneClassSpinorResult(gram=entry.gram, h=genus.h, h_s=1, g=genus.g))
    return result


def is_case_i(lattice: GramLattice, m: int) -> bool:
    """
    Whether L_2 is M ⊥ 2^m M for a unimodular binary M of type I
    """
    if p_profile(lattice, 2).exps != (0, 0, m, m):
        return False
    low, high = jordan_split(lattice, 2).components
    if low.dyadic_type != DyadicType.I or high.dyadic_type != DyadicType.I:
        return False
    return (low.det_mod8, low.oddity) == (high.det_mod8, high.oddity)


def case_i_genera(m: int) -> List[GenusReport]:
    """
    Genera of odd lattices of determinant 2^{2m} with 2-adic splitting M ⊥ 2^m M
    """
    lattices = [trusted_lattice(g) for g in lattice_classes(2 ** (2 * m), 4, Parity.ODD)]
    members = [lattice for lattice in lattices if is_case_i(lattice, m)]
    return [genus_report(group) for _, group in sorted(group_by_genus(members).items())]
