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
Pall's ascension: the classes of discriminant D·p² obtained as index-p sublattices
of the classes of discriminant D, and the recursive enumeration of primitive
lattices of a given determinant built on it.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import product
from multiprocessing import Pool
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from spinor_genera.arith import congruent, determinant, leading_minors, prime_divisors, valuation
from spinor_genera.exceptions import LatticeError
from spinor_genera.isometry import canonical
from spinor_genera.lattice import (form_discriminant, form_gram, is_even, is_form_primitive, is_primitive,
                                   lattice_of_form_gram, trusted_lattice)
from spinor_genera.local import genus_symbol, p_profile
from spinor_genera.models import AscensionLayer, ClassSet, GramLattice, Parity, PProfile, ReducedGram

logger = logging.getLogger(__name__)

# Hermite-type bound on the product of the diagonal of a reduced Gram matrix
DIAGONAL_BOUND = {2: Fraction(4, 3), 3: Fraction(2), 4: Fraction(4)}

Gram = Tuple[Tuple[int, ...], ...]


def hyperplanes(n: int, p: int) -> Iterator[Tuple[int, Tuple[int, ...]]]:
    """
    The (p^n-1)/(p-1) linear forms mod p up to scaling, as (pivot, coefficients)
    with coefficient 1 at the pivot and 0 before it
    """
    for j in range(n):
        for tail in product(range(p), repeat=n - j - 1):
            yield j, (0,) * j + (1,) + tail


def index_p_sublattices(rows: Sequence[Sequence[int]], p: int) -> List[List[List[int]]]:
    """
    Gram matrices of the sublattices {x : φ(x) ≡ 0 mod p}, one per hyperplane φ
    """
    n = len(rows)
    result = []
    for j, phi in hyperplanes(n, p):
        columns = []
        for i in range(n):
            if i == j:
                continue
            v = [0] * n
            v[i] = 1
            v[j] = -phi[i]
            columns.append(v)
        v = [0] * n
        v[j] = p
        columns.append(v)
        basis = [list(row) for row in zip(*columns)]
        result.append(congruent(rows, basis))
    return result


def _canonical_gram(rows) -> Gram:
    return canonical(tuple(tuple(int(x) for x in row) for row in rows)).gram


def _ascend_one(task: Tuple[Gram, int]) -> List[Gram]:
    gram, p = task
    found = set()
    for rows in index_p_sublattices(form_gram(trusted_lattice(gram)), p):
        if is_form_primitive(rows):
            found.add(_canonical_gram(lattice_of_form_gram(rows).gram))
    return sorted(found)


def _map(function, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with Pool(jobs) as pool:
            return list(pool.imap(function, tasks, chunksize=4))
    return [function(task) for task in tasks]


def _class_set(discriminant: int, rank: int, grams, seeds=(), complete=True) -> ClassSet:
    classes = tuple(ReducedGram(gram=trusted_lattice(g), min=g[0][0]) for g in sorted(set(grams)))
    return ClassSet(discriminant=discriminant, rank=rank, classes=classes, seeds=tuple(seeds), complete=complete)


def seed_classes(lattices: Sequence[GramLattice]) -> ClassSet:
    """
    The distinct classes among lattices sharing one form discriminant, as a seed for pall_ascend
    """
    discriminants = {form_discriminant(lattice) for lattice in lattices}
    if len(discriminants) != 1:
        raise LatticeError(f'seed lattices have discriminants {sorted(discriminants)}')
    grams = [_canonical_gram(lattice.gram) for lattice in lattices]
    return _class_set(discriminants.pop(), lattices[0].rank, grams)


def pall_ascend(seed: ClassSet, p: int, jobs: int = 1) -> ClassSet:
    """
    Primitive forms of discriminant D·p² whose lattice is an index-p sublattice of
    (the lattice of) a seed class, deduplicated by canonical form
    """
    if not seed.complete:
        logger.warning('ascending from an incomplete class set of discriminant %s', seed.discriminant)
    tasks = [(c.gram.gram, p) for c in seed.classes]
    found = set()
    for grams in _map(_ascend_one, tasks, jobs):
        found.update(grams)
    result = _class_set(seed.discriminant * p * p, seed.rank, found,
                        seeds=seed.seeds + (seed.discriminant,), complete=seed.complete)
    logger.debug('ascended %s classes of discriminant %s to %s classes of discriminant %s',
                 len(seed.classes), seed.discriminant, len(result.classes), result.discriminant)
    return result


def _matches(rows, parity: Parity) -> bool:
    lattice = trusted_lattice(rows)
    if not is_primitive(lattice):
        return False
    if parity == Parity.ANY:
        return True
    return is_even(lattice) == (parity == Parity.EVEN)


def reduced_grams(d: int, n: int, parity: Parity = Parity.ANY) -> List[Gram]:
    """
    Canonical Grams of all primitive positive definite lattices of rank n and determinant d,
    by exhaustion over reduced Gram matrices
    """
    if n == 1:
        return [((d,),)] if d == 1 and parity != Parity.EVEN else []
    bound = DIAGONAL_BOUND[n] * d
    found = set()
    rows = [[0] * n for _ in range(n)]

    def fill(i: int, diagonal_product: int):
        # rows[0..i-1] are fixed; choose a_ii and the entries above it
        if i == n - 1:
            last(diagonal_product)
            return
        low = rows[i - 1][i - 1] if i else 1
        a = low
        while diagonal_product * a ** (n - i) <= bound:
            rows[i][i] = a
            off_diagonal(i, 0, diagonal_product * a)
            a += 1
        rows[i][i] = 0

    def off_diagonal(i: int, k: int, diagonal_product: int):
        if k == i:
            if all(m > 0 for m in leading_minors([row[:i + 1] for row in rows[:i + 1]])):
                fill(i + 1, diagonal_product)
            return
        limit = rows[k][k] // 2
        for b in range(-limit, limit + 1):
            rows[k][i] = rows[i][k] = b
            off_diagonal(i, k + 1, diagonal_product)
        rows[k][i] = rows[i][k] = 0

    def last(diagonal_product: int):
        i = n - 1
        for entries in product(*[range(-(rows[k][k] // 2), rows[k][k] // 2 + 1) for k in range(i)]):
            for k, b in enumerate(entries):
                rows[k][i] = rows[i][k] = b
            rows[i][i] = 0
            base = determinant(rows)
            minor = determinant([row[:i] for row in rows[:i]])
            if (d - base) % minor:
                continue
            a = (d - base) // minor
            if a < rows[i - 1][i - 1] or diagonal_product * a > bound:
                continue
            rows[i][i] = a
            if _matches(rows, parity):
                found.add(_canonical_gram(rows))
        for k in range(i):
            rows[k][i] = rows[i][k] = 0
        rows[i][i] = 0

    fill(0, 1)
    return sorted(found)


def _sublattice_step(d: int, n: int, parity: Parity, p: int, sources: Sequence[Parity]) -> List[Gram]:
    found = set()
    for source in sources:
        for gram in lattice_classes(d // (p * p), n, source):
            for rows in index_p_sublattices(gram, p):
                if _matches(rows, parity):
                    found.add(_canonical_gram(rows))
    return sorted(found)


@lru_cache(maxsize=None)
def _lattice_classes(d: int, n: int, parity: Parity) -> Tuple[Gram, ...]:
    if parity == Parity.ANY:
        return tuple(sorted(set(_lattice_classes(d, n, Parity.EVEN)) | set(_lattice_classes(d, n, Parity.ODD))))
    for p in prime_divisors(d):
        if p != 2 and valuation(d, p) >= 3:
            return tuple(_sublattice_step(d, n, parity, p, [parity]))
    if d % 4 == 0:
        sources = [Parity.ODD] if parity == Parity.ODD else [Parity.EVEN, Parity.ODD]
        return tuple(_sublattice_step(d, n, parity, 2, sources))
    return tuple(reduced_grams(d, n, parity))


def lattice_classes(d: int, n: int, parity: Parity = Parity.ANY) -> List[Gram]:
    """
    Canonical Grams of the primitive lattices of rank n and determinant d with the given parity
    """
    if d < 1 or n not in DIAGONAL_BOUND and n != 1:
        raise LatticeError(f'cannot enumerate lattices of rank {n} and determinant {d}')
    result = list(_lattice_classes(d, n, Parity(parity)))
    logger.debug('%s %s lattices of rank %s and determinant %s', len(result), parity, n, d)
    return result


def form_classes(discriminant: int, rank: int) -> ClassSet:
    """
    Classes of primitive forms of discriminant D: even lattices of determinant D and
    odd lattices of determinant D/2^rank
    """
    grams = set(lattice_classes(discriminant, rank, Parity.EVEN))
    if discriminant % 2 ** rank == 0:
        grams.update(lattice_classes(discriminant // 2 ** rank, rank, Parity.ODD))
    return _class_set(discriminant, rank, grams)


def group_by_genus(lattices: Sequence[GramLattice]) -> Dict[str, List[GramLattice]]:
    genera: Dict[str, List[GramLattice]] = {}
    for lattice in lattices:
        genera.setdefault(genus_symbol(lattice).text, []).append(lattice)
    return genera


def ascend_layers(seed: ClassSet, p: int, steps: int, jobs: int = 1) -> Iterator[ClassSet]:
    current = seed
    for _ in range(steps):
        current = pall_ascend(current, p, jobs)
        yield current


def summarize_layer(classes: ClassSet, profile: Optional[PProfile] = None) -> AscensionLayer:
    genera = group_by_genus([c.gram for c in classes.classes])
    with_profile = 0
    if profile is not None:
        with_profile = sum(1 for members in genera.values()
                           if p_profile(members[0], profile.prime).exps == profile.exps)
    return AscensionLayer(discriminant=classes.discriminant, classes=len(classes.classes), genera=len(genera),
                          profile_genera=with_profile,
                          one_class_genera=sum(1 for members in genera.values() if len(members) == 1))


def ascension_sweep(seed: ClassSet, p: int, steps: int, profile: Optional[PProfile] = None,
                    jobs: int = 1) -> List[AscensionLayer]:
    """
    Iterates pall_ascend, reporting per layer the number of genera and of genera
    with the given profile
    """
    layers = []
    for classes in ascend_layers(seed, p, steps, jobs):
        layer = summarize_layer(classes, profile)
        logger.info('discriminant %s: %s classes in %s genera (%s with profile %s)', layer.discriminant,
                    layer.classes, layer.genera, layer.profile_genera, profile)
        layers.append(layer)
    return layers
