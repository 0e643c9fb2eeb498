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
Local structure of L_p: Jordan decompositions, p-profiles, genus symbols and
the dyadic predicates built on them.

The decomposition works on rational bases whose denominators are prime to p,
so every intermediate basis spans L_p. Pivots are taken on entries of minimal
valuation: a diagonal entry when one exists, an off-diagonal pair otherwise
(an odd p folds the pair into a diagonal entry, p=2 splits off a binary block).
"""
from fractions import Fraction
from functools import lru_cache
from itertools import groupby
from typing import Dict, List, NamedTuple, Tuple

from spinor_genera.arith import bilinear, identity, kronecker, prime_divisors, residue, unit_part, valuation
from spinor_genera.exceptions import LatticeError
from spinor_genera.lattice import discriminant
from spinor_genera.models import (BlockKind, DyadicType, GenusSymbol, GramLattice, JordanComponent,
                                  JordanSplitting, OrderClass, PProfile)


class Block(NamedTuple):
    scale: int
    vectors: Tuple[Tuple[Fraction, ...], ...]
    unit_gram: Tuple[Tuple[Fraction, ...], ...]


def decompose(lattice: GramLattice, p: int) -> List[Block]:
    """
    Rank 1 and rank 2 blocks of a Jordan decomposition of L_p, by non-decreasing scale
    """
    return list(_decompose(lattice.gram, p))


@lru_cache(maxsize=4096)
def _decompose(gram, p) -> Tuple[Block, ...]:
    n = len(gram)
    vectors = [[Fraction(x) for x in row] for row in identity(n)]
    blocks = []
    while vectors:
        local = [[bilinear(gram, x, y) for y in vectors] for x in vectors]
        k = len(vectors)
        entries = [(valuation(local[i][j], p), i, j) for i in range(k) for j in range(i, k) if local[i][j]]
        v = min(e[0] for e in entries)
        diagonal = [i for (w, i, j) in entries if i == j and w == v]
        if diagonal:
            pivot = [diagonal[0]]
        else:
            i, j = next((i, j) for (w, i, j) in entries if w == v)
            if p != 2:
                vectors[i] = [a + b for a, b in zip(vectors[i], vectors[j])]
                local = [[bilinear(gram, x, y) for y in vectors] for x in vectors]
                pivot = [i]
            else:
                pivot = [i, j]
        pivot_gram = [[local[a][b] for b in pivot] for a in pivot]
        others = [t for t in range(k) if t not in pivot]
        for t in others:
            coefficients = _solve(pivot_gram, [local[a][t] for a in pivot])
            vectors[t] = [x - sum(c * vectors[a][pos] for c, a in zip(coefficients, pivot))
                          for pos, x in enumerate(vectors[t])]
        scale = Fraction(p) ** v
        blocks.append(Block(scale=v,
                            vectors=tuple(tuple(vectors[a]) for a in pivot),
                            unit_gram=tuple(tuple(x / scale for x in row) for row in pivot_gram)))
        vectors = [vectors[t] for t in others]
    return tuple(blocks)


def _solve(matrix, rhs):
    if len(matrix) == 1:
        return [rhs[0] / matrix[0][0]]
    (a, b), (c, d) = matrix
    det = a * d - b * c
    return [(d * rhs[0] - b * rhs[1]) / det, (a * rhs[1] - c * rhs[0]) / det]


def _block_kind(block: Block) -> BlockKind:
    (a, _), (_, c) = block.unit_gram
    return BlockKind.H if residue(a * c, 8) == 0 else BlockKind.A


def _component(p: int, scale: int, blocks: List[Block]) -> JordanComponent:
    rank = sum(len(b.vectors) for b in blocks)
    unary = [b.unit_gram[0][0] for b in blocks if len(b.vectors) == 1]
    if p != 2:
        det = Fraction(1)
        for u in unary:
            det *= u
        return JordanComponent(prime=p, scale_exp=scale, rank=rank, det_class=kronecker(residue(det, p), p),
                               units=tuple(kronecker(residue(u, p), p) for u in unary))
    units = tuple(residue(u, 8) for u in unary)
    kinds = tuple(_block_kind(b) for b in blocks if len(b.vectors) == 2)
    det = 1
    for u in units:
        det = det * u % 8
    for kind in kinds:
        det = det * (7 if kind == BlockKind.H else 3) % 8
    return JordanComponent(prime=2, scale_exp=scale, rank=rank, units=units, blocks=kinds,
                           dyadic_type=DyadicType.I if units else DyadicType.II,
                           det_mod8=det, oddity=sum(units) % 8)


def jordan_split(lattice: GramLattice, p: int) -> JordanSplitting:
    blocks = sorted(decompose(lattice, p), key=lambda b: b.scale)
    components = tuple(_component(p, scale, list(group)) for scale, group in groupby(blocks, key=lambda b: b.scale))
    return JordanSplitting(prime=p, components=components)


def components_by_scale(lattice: GramLattice, p: int) -> Dict[int, List[Block]]:
    result: Dict[int, List[Block]] = {}
    for block in decompose(lattice, p):
        result.setdefault(block.scale, []).append(block)
    return result


def p_profile(lattice: GramLattice, p: int) -> PProfile:
    exps = sorted(b.scale for b in decompose(lattice, p) for _ in b.vectors)
    return PProfile(prime=p, exps=tuple(exps))


def bad_primes(lattice: GramLattice) -> List[int]:
    return sorted(set([2] + prime_divisors(discriminant(lattice))))


def local_symbol(lattice: GramLattice, p: int) -> str:
    """
    Canonical text of the local invariants; equal texts iff the completions are isometric
    """
    splitting = jordan_split(lattice, p)
    if p != 2:
        return ','.join(f'{c.scale_exp}^{c.rank}{"+" if c.det_class == 1 else "-"}' for c in splitting.components)
    return canonical_2adic_symbol(splitting)


def canonical_2adic_symbol(splitting: JordanSplitting) -> str:
    symbol = [[c.scale_exp, c.rank, 1 if c.det_mod8 in (1, 7) else -1,
               1 if c.dyadic_type == DyadicType.I else 0, c.oddity] for c in splitting.components]
    compartments = _compartments(symbol)
    for compartment in compartments:
        total = sum(symbol[i][4] for i in compartment) % 8
        for i in compartment:
            symbol[i][4] = 0
        symbol[compartment[0]][4] = total
    for train in _trains(symbol):
        for t in reversed(train[1:]):
            if symbol[t][2] == -1:
                symbol[t][2] = 1
                symbol[t - 1][2] *= -1
                for compartment in compartments:
                    if t - 1 in compartment or t in compartment:
                        symbol[compartment[0]][4] = (symbol[compartment[0]][4] + 4) % 8
    heads = {c[0] for c in compartments}
    parts = []
    for i, (scale, rank, eps, odd, oddity) in enumerate(symbol):
        text = f'{scale}^{rank}{"+" if eps == 1 else "-"}'
        if odd:
            text += f'_{oddity}' if i in heads else '_'
        parts.append(text)
    return ','.join(parts)


def _compartments(symbol) -> List[List[int]]:
    """
    Maximal runs of type I components with consecutive scales
    """
    result = []
    for i, entry in enumerate(symbol):
        if not entry[3]:
            continue
        if result and result[-1][-1] == i - 1 and symbol[i - 1][0] == entry[0] - 1:
            result[-1].append(i)
        else:
            result.append([i])
    return result


def _trains(symbol) -> List[List[int]]:
    """
    Maximal runs in which every gap between consecutive scales is bridged by a type I component
    """
    result = [[0]] if symbol else []
    for i in range(1, len(symbol)):
        prev, cur = symbol[i - 1], symbol[i]
        gap = cur[0] - prev[0]
        if (gap == 1 and (prev[3] or cur[3])) or (gap == 2 and prev[3] and cur[3]):
            result[-1].append(i)
        else:
            result.append([i])
    return result


def local_isometric(lattice: GramLattice, other: GramLattice, p: int) -> bool:
    if lattice.rank != other.rank:
        raise LatticeError('local isometry needs lattices of the same rank')
    if valuation(discriminant(lattice), p) != valuation(discriminant(other), p):
        return False
    return local_symbol(lattice, p) == local_symbol(other, p)


def genus_symbol(lattice: GramLattice) -> GenusSymbol:
    d = discriminant(lattice)
    local = tuple((p, local_symbol(lattice, p)) for p in sorted(set([2] + prime_divisors(d))))
    return GenusSymbol(rank=lattice.rank, discriminant=d, local=local)


def binary_order_class(component: JordanComponent) -> OrderClass:
    if component.prime != 2 or component.rank != 2:
        raise LatticeError('order classes are defined for dyadic binary components')
    if component.dyadic_type == DyadicType.II:
        return OrderClass.ODD
    return OrderClass.EVEN if component.det_mod8 in (3, 7) else OrderClass.NEITHER


def unary_order_class(component: JordanComponent) -> OrderClass:
    if component.prime != 2 or component.rank != 1:
        raise LatticeError('order classes are defined for dyadic unary components')
    return OrderClass.EVEN if component.scale_exp % 2 == 0 else OrderClass.ODD


def is_type_E(splitting: JordanSplitting) -> bool:
    """
    Dyadic quaternary splittings whose spinor norm group is known to contain all units
    """
    if splitting.prime != 2 or splitting.rank != 4:
        raise LatticeError('type E is defined for quaternary dyadic splittings')
    components = splitting.components
    if any(c.blocks for c in components):
        return True
    if len(components) < 3 or any(c.rank != 1 for c in components[:3]):
        return False
    base = components[0].scale_exp
    leading = tuple(c.scale_exp - base for c in components[:3])
    return leading in ((0, 1, 2), (0, 1, 3))


def unit_class(x, p: int) -> int:
    """
    Legendre symbol of the unit part of x at an odd prime, its residue mod 8 at p=2
    """
    u = unit_part(x, p)
    return residue(u, 8) if p == 2 else kronecker(residue(u, p), p)
