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
Canonical forms, isometry tests and automorphism group orders.

The canonical basis of a lattice is built one vector at a time: the k-th vector
has the least norm among the vectors extending the first k-1 to a primitive
system, and among those the Gram column it produces is lexicographically least.
Every basis reaching the least Gram matrix differs from the first by an
automorphism, so their number is |O(L)|.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd, isqrt
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from sympy import Matrix

try:
    from sympy.core.intfunc import igcdex
except ImportError:
    from sympy.core.numbers import igcdex

from spinor_genera.arith import bilinear, congruent, determinant, identity, quadratic, transpose
from spinor_genera.exceptions import LatticeError
from spinor_genera.lattice import trusted_lattice
from spinor_genera.models import GramLattice, ReducedGram

logger = logging.getLogger(__name__)

MAX_REDUCTION_STEPS = 100000


def _ldl(gram: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for m in range(k, n):
                q[k][m] -= q[k][i] * q[i][m]
    return q


def _enumerate(gram, bound, fixed: int = 0) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """
    All vectors x (both signs) with 0 < Q(x) <= bound. When fixed > 0 the
    coordinates from index fixed on must form a primitive vector
    """
    n = len(gram)
    q = _ldl(gram)
    x = [0] * n
    bound = Fraction(bound)

    def visit(i, remaining):
        if i < 0:
            value = bound - remaining
            if value > 0:
                yield tuple(x), int(value)
            return
        if fixed and i == fixed - 1:
            tail = 0
            for t in x[fixed:]:
                tail = gcd(tail, t)
            if tail != 1:
                return
        center = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        radius = remaining / q[i][i]
        reach = isqrt(floor(radius)) + 1
        base = floor(center)
        for t in range(base - reach, base + reach + 2):
            spent = q[i][i] * (t - center) ** 2
            if spent <= remaining:
                x[i] = t
                yield from visit(i - 1, remaining - spent)
        x[i] = 0

    yield from visit(n - 1, bound)


def short_vectors(lattice: GramLattice, bound: int) -> List[Tuple[Tuple[int, ...], int]]:
    """
    One representative of every ±pair of non-zero vectors with Q(x) <= bound,
    the first non-zero coordinate positive, ordered by value then coordinates
    """
    found = [(x, value) for x, value in _enumerate(lattice.gram, bound)
             if next(c for c in x if c) > 0]
    return sorted(found, key=lambda item: (item[1], item[0]))


def _reduce_pairs(gram, basis: List[List[int]]) -> List[List[int]]:
    """
    Pairwise size reduction of the basis vectors (rows) until no pair improves,
    then ordered by norm
    """
    basis = [list(b) for b in basis]
    for _ in range(MAX_REDUCTION_STEPS):
        changed = False
        basis.sort(key=lambda b: quadratic(gram, b))
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                norm = quadratic(gram, basis[j])
                mu = round(Fraction(bilinear(gram, basis[i], basis[j]), norm))
                if mu and quadratic(gram, [a - mu * b for a, b in zip(basis[i], basis[j])]) < quadratic(gram, basis[i]):
                    basis[i] = [a - mu * b for a, b in zip(basis[i], basis[j])]
                    changed = True
        if not changed:
            return sorted(basis, key=lambda b: quadratic(gram, b))
    raise LatticeError(f'reduction did not terminate after {MAX_REDUCTION_STEPS} passes')


def _completion(z: Sequence[int]) -> List[List[int]]:
    """
    A unimodular matrix whose first column is the primitive vector z
    """
    r = len(z)
    w = list(z)
    m = identity(r)
    for i in range(r - 1, 0, -1):
        a, b = w[i - 1], w[i]
        if b == 0:
            continue
        s, t, g = igcdex(a, b)
        s, t, g = int(s), int(t), int(g)
        w[i - 1], w[i] = g, 0
        for row in m:
            left, right = row[i - 1], row[i]
            row[i - 1] = left * (a // g) + right * (b // g)
            row[i] = -t * left + s * right
    if w[0] == -1:
        for row in m:
            row[0] = -row[0]
    return m


class Canonical(NamedTuple):
    gram: Tuple[Tuple[int, ...], ...]
    bases: Tuple[Tuple[Tuple[int, ...], ...], ...]


@lru_cache(maxsize=1 << 16)
def canonical(gram: Tuple[Tuple[int, ...], ...]) -> Canonical:
    n = len(gram)
    start = _reduce_pairs(gram, identity(n))
    best: List[Optional[tuple]] = [None]
    bases: List[List[List[int]]] = []

    def search(prefix, complement, key):
        k = len(prefix)
        if k == n:
            if best[0] is None or key < best[0]:
                best[0] = key
                bases.clear()
            bases.append(prefix)
            return
        frame = prefix + complement
        local = congruent(gram, transpose(frame))
        bound = min(quadratic(gram, c) for c in complement)
        candidates = list(_enumerate(local, bound, fixed=k))
        least = min(value for _, value in candidates)
        steps = []
        for x, value in candidates:
            if value != least:
                continue
            v = [sum(x[i] * frame[i][c] for i in range(n)) for c in range(n)]
            column = (least,) + tuple(bilinear(gram, b, v) for b in prefix)
            steps.append((column, x, v))
        steps.sort(key=lambda step: step[0])
        for column, x, v in steps:
            extended = key + column
            if best[0] is not None and extended > best[0][:len(extended)]:
                break
            m = _completion(x[k:])
            rest = [[sum(m[j][c] * complement[j][pos] for j in range(n - k)) for pos in range(n)]
                    for c in range(1, n - k)]
            rest = _reduce_against(gram, prefix + [v], rest)
            search(prefix + [v], rest, extended)

    search([], start, ())
    first = bases[0]
    rows = congruent(gram, transpose(first))
    return Canonical(gram=tuple(tuple(row) for row in rows),
                     bases=tuple(tuple(tuple(b) for b in basis) for basis in bases))


def _reduce_against(gram, fixed, vectors):
    """
    Size-reduces vectors against the fixed ones and among themselves
    """
    vectors = [list(v) for v in vectors]
    for _ in range(MAX_REDUCTION_STEPS):
        changed = False
        for i, v in enumerate(vectors):
            for b in fixed + vectors[:i] + vectors[i + 1:]:
                mu = round(Fraction(bilinear(gram, v, b), quadratic(gram, b)))
                if mu:
                    w = [x - mu * y for x, y in zip(v, b)]
                    if quadratic(gram, w) < quadratic(gram, v):
                        vectors[i] = v = w
                        changed = True
        if not changed:
            return sorted(vectors, key=lambda b: quadratic(gram, b))
    raise LatticeError(f'reduction did not terminate after {MAX_REDUCTION_STEPS} passes')


def reduce(lattice: GramLattice) -> ReducedGram:
    c = canonical(lattice.gram)
    return ReducedGram(gram=trusted_lattice(c.gram), min=c.gram[0][0])


def canonical_lattice(lattice: GramLattice) -> GramLattice:
    return trusted_lattice(canonical(lattice.gram).gram)


def _basis_matrix(basis) -> List[List[int]]:
    # basis vectors are the columns
    return transpose(basis)


def isometric(lattice: GramLattice, other: GramLattice) -> Tuple[bool, Optional[List[List[int]]]]:
    """
    Whether the lattices are isometric, with P such that Pᵀ·gram(lattice)·P = gram(other)
    """
    if lattice.rank != other.rank:
        raise LatticeError('isometry needs lattices of the same rank')
    c1, c2 = canonical(lattice.gram), canonical(other.gram)
    if c1.gram != c2.gram:
        return False, None
    b1 = Matrix(_basis_matrix(c1.bases[0]))
    b2 = Matrix(_basis_matrix(c2.bases[0]))
    p = b1 * b2.inv()
    return True, [[int(p[i, j]) for j in range(p.cols)] for i in range(p.rows)]


def aut_order(lattice: GramLattice) -> int:
    return len(canonical(lattice.gram).bases)


def _signed_bases(lattice: GramLattice) -> List[int]:
    bases = canonical(lattice.gram).bases
    reference = determinant(_basis_matrix(bases[0]))
    return [determinant(_basis_matrix(b)) * reference for b in bases]


def aut_proper_order(lattice: GramLattice) -> int:
    return sum(1 for sign in _signed_bases(lattice) if sign > 0)


def has_improper_aut(lattice: GramLattice) -> bool:
    return any(sign < 0 for sign in _signed_bases(lattice))
