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
Lattices, classical forms and the conventions relating them.

A primitive classical form f with matrix of second partials F corresponds to the
lattice L_f with Gram F when some cross coefficient is odd, and F/2 otherwise.
"""
from fractions import Fraction
from typing import List, Sequence

from pydantic import ValidationError
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from spinor_genera.arith import congruent, determinant, matrix_gcd, valuation
from spinor_genera.exceptions import LatticeError
from spinor_genera.models import ClassicalForm, GramLattice, IdealExponents


def make_lattice(rows: Sequence[Sequence[int]]) -> GramLattice:
    try:
        return GramLattice(gram=rows)
    except ValidationError as e:
        raise LatticeError(str(e)) from e


def trusted_lattice(rows: Sequence[Sequence]) -> GramLattice:
    """
    Builds a lattice from a Gram matrix known to be valid, skipping validation
    """
    return GramLattice.model_construct(gram=tuple(tuple(int(x) for x in row) for row in rows))


def discriminant(lattice: GramLattice) -> int:
    return determinant(lattice.gram)


def is_even(lattice: GramLattice) -> bool:
    return all(lattice.gram[i][i] % 2 == 0 for i in range(lattice.rank))


def is_primitive(lattice: GramLattice) -> bool:
    return matrix_gcd(lattice.gram) == 1


def _has_odd_cross(lattice: GramLattice) -> bool:
    n = lattice.rank
    return any(lattice.gram[i][j] % 2 for i in range(n) for j in range(i + 1, n))


def form_gram(lattice: GramLattice) -> List[List[int]]:
    """
    Matrix of second partials of the form attached to the lattice
    """
    if is_even(lattice) and _has_odd_cross(lattice):
        return lattice.rows()
    return [[2 * x for x in row] for row in lattice.gram]


def lattice_of_form_gram(rows: Sequence[Sequence[int]]) -> GramLattice:
    n = len(rows)
    if any(rows[i][j] % 2 for i in range(n) for j in range(i + 1, n)):
        return trusted_lattice(rows)
    return trusted_lattice([[x // 2 for x in row] for row in rows])


def form_discriminant(lattice: GramLattice) -> int:
    return determinant(form_gram(lattice))


def is_form_primitive(rows: Sequence[Sequence[int]]) -> bool:
    """
    Whether the even matrix rows is the matrix of second partials of a primitive form
    """
    n = len(rows)
    coefficients = [rows[i][i] // 2 for i in range(n)] + [rows[i][j] for i in range(n) for j in range(i + 1, n)]
    return matrix_gcd([coefficients]) == 1


def form_to_lattice(form: ClassicalForm) -> GramLattice:
    if matrix_gcd([form.diag + form.cross]) != 1:
        raise LatticeError(f'form {form_coefficients(form)} is not primitive')
    n = form.rank
    second_partials = [[0] * n for _ in range(n)]
    pairs = _cross_pairs(n)
    for i in range(n):
        second_partials[i][i] = 2 * form.diag[i]
    for (i, j), f in zip(pairs, form.cross):
        second_partials[i][j] = second_partials[j][i] = f
    if any(f % 2 for f in form.cross):
        return make_lattice(second_partials)
    return make_lattice([[x // 2 for x in row] for row in second_partials])


def lattice_to_form(lattice: GramLattice) -> ClassicalForm:
    n = lattice.rank
    g = lattice.gram
    pairs = _cross_pairs(n)
    if is_even(lattice) and _has_odd_cross(lattice):
        return ClassicalForm(rank=n, diag=tuple(g[i][i] // 2 for i in range(n)),
                             cross=tuple(g[i][j] for i, j in pairs))
    return ClassicalForm(rank=n, diag=tuple(g[i][i] for i in range(n)),
                         cross=tuple(2 * g[i][j] for i, j in pairs))


def _cross_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


# ternary coefficients are written a,b,c,d,e,g for ax²+by²+cz²+dyz+exz+gxy
_TERNARY_CROSS = (5, 4, 3)


def form_from_coefficients(rank: int, coefficients: Sequence[int]) -> ClassicalForm:
    """
    Ternary forms in the [a,b,c,d,e,g] convention, quaternary forms as
    a11..a44 followed by the crosses (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)
    """
    coefficients = [int(c) for c in coefficients]
    expected = rank + rank * (rank - 1) // 2
    if len(coefficients) != expected:
        raise LatticeError(f'a form of rank {rank} needs {expected} coefficients, got {len(coefficients)}')
    if rank == 3:
        return ClassicalForm(rank=3, diag=tuple(coefficients[:3]),
                             cross=tuple(coefficients[k] for k in _TERNARY_CROSS))
    return ClassicalForm(rank=rank, diag=tuple(coefficients[:rank]), cross=tuple(coefficients[rank:]))


def form_coefficients(form: ClassicalForm) -> List[int]:
    if form.rank == 3:
        xy, xz, yz = form.cross
        return list(form.diag) + [yz, xz, xy]
    return list(form.diag) + list(form.cross)


def scale_norm(lattice: GramLattice, p: int) -> IdealExponents:
    n = lattice.rank
    g = lattice.gram
    entries = [g[i][j] for i in range(n) for j in range(i, n) if g[i][j]]
    norms = [g[i][i] for i in range(n)] + [2 * g[i][j] for i in range(n) for j in range(i + 1, n) if g[i][j]]
    return IdealExponents(prime=p,
                          scale_exp=min(valuation(x, p) for x in entries),
                          norm_exp=min(valuation(x, p) for x in norms))


def rescale(lattice: GramLattice, a) -> GramLattice:
    """
    The lattice aL, whose Gram matrix is a²·gram
    """
    factor = Fraction(a) ** 2
    scaled = [[factor * x for x in row] for row in lattice.gram]
    if any(x.denominator != 1 for row in scaled for x in row):
        raise LatticeError(f'{a}L is not integral')
    return trusted_lattice(scaled)


def sublattice_basis(generators: Sequence[Sequence[int]]) -> List[List[int]]:
    """
    A basis (as columns) of the Z-module spanned by the columns of generators
    """
    hnf = hermite_normal_form(Matrix(generators))
    return [[int(hnf[i, j]) for j in range(hnf.cols)] for i in range(hnf.rows)]


def lattice_from_basis(lattice: GramLattice, basis, divisor: int = 1) -> GramLattice:
    """
    Gram matrix of the columns of basis, divided by divisor
    """
    rows = congruent(lattice.gram, basis)
    if divisor != 1:
        if any(x % divisor for row in rows for x in row):
            raise LatticeError('the lattice spanned is not integral')
        rows = [[x // divisor for x in row] for row in rows]
    return trusted_lattice(rows)
