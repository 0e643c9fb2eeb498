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
Exact integer and rational helpers shared by the lattice modules.
Matrices are tuples (or lists) of rows; entries are int or Fraction.
"""
from fractions import Fraction
from math import gcd, isqrt
from typing import List, Sequence, Tuple

from sympy import factorint, jacobi_symbol, primefactors

Matrix = Sequence[Sequence]


def determinant(rows: Matrix):
    """
    Determinant by cofactor expansion along the first row. Ranks are at most 4
    """
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in (tuple(r) for r in rows[1:])]
        term = rows[0][j] * determinant(minor)
        total += -term if j % 2 else term
    return total


def leading_minors(rows: Matrix) -> List:
    return [determinant([row[:k] for row in rows[:k]]) for k in range(1, len(rows) + 1)]


def transpose(rows: Matrix) -> List[List]:
    return [list(col) for col in zip(*rows)]


def matmul(a: Matrix, b: Matrix) -> List[List]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def congruent(gram: Matrix, basis: Matrix) -> List[List]:
    """
    Gram matrix of the vectors given as the columns of basis: basisᵀ·gram·basis
    """
    return matmul(transpose(basis), matmul(gram, basis))


def bilinear(gram: Matrix, x: Sequence, y: Sequence):
    return sum(x[i] * gram[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if x[i] and y[j])


def quadratic(gram: Matrix, x: Sequence):
    return bilinear(gram, x, x)


def identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matrix_gcd(rows: Matrix) -> int:
    g = 0
    for row in rows:
        for x in row:
            g = gcd(g, int(x))
    return g


def minors_gcd(rows: Matrix) -> int:
    """
    gcd of the maximal minors of a k×n integer matrix (k ≤ n); equal to 1 iff
    the rows extend to a basis of Zⁿ
    """
    k, n = len(rows), len(rows[0])
    g = 0
    for cols in _combinations(n, k):
        g = gcd(g, determinant([[row[c] for c in cols] for row in rows]))
        if g == 1:
            return 1
    return g


def _combinations(n, k):
    if k == 0:
        yield ()
        return
    for first in range(n - k + 1):
        for rest in _combinations(n - first - 1, k - 1):
            yield (first,) + tuple(first + 1 + r for r in rest)


def valuation(x, p: int) -> int:
    """
    p-adic valuation of a non-zero integer or Fraction
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError('valuation of zero')
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x, p: int) -> Fraction:
    x = Fraction(x)
    return x / Fraction(p) ** valuation(x, p)


def residue(x, modulus: int) -> int:
    """
    Image of a rational with denominator prime to modulus in Z/modulus
    """
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def prime_divisors(n: int) -> List[int]:
    return sorted(primefactors(abs(n)))


def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """
    Returns (s, t) with n = s²·t and t square-free
    """
    s, t = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            t *= p
    return s, t


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def fundamental_discriminant(d: int) -> int:
    """
    Discriminant of Q(√d) for a positive non-square d; 1 when d is a square
    """
    t = squarefree_decomposition(d)[1]
    return t if t % 4 == 1 else 4 * t


def kronecker(a: int, p: int) -> int:
    """
    Kronecker symbol (a/p) for a prime p
    """
    if p == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 in (1, 7) else -1
    return int(jacobi_symbol(a % p, p))


def nonsquare_unit(p: int) -> int:
    """
    The least positive quadratic non-residue modulo an odd prime p
    """
    return next(a for a in range(2, p) if jacobi_symbol(a, p) == -1)
