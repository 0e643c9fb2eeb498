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

from fractions import Fraction

import pytest

from spinor_genera import mass
from spinor_genera.exceptions import UnsupportedShape
from spinor_genera.lattice import make_lattice
from spinor_genera.models import MassBranch, MassValue

A2 = [[2, 1], [1, 2]]


@pytest.mark.parametrize('label, p, factor', [
    ('0+', 3, Fraction(1)),
    ('0', 2, Fraction(1, 2)),
    ('1', 5, Fraction(1, 2)),
    ('2+', 3, Fraction(3, 4)),
    ('2-', 3, Fraction(3, 8)),
    ('3', 3, Fraction(9, 16)),
])
def test_species_factor(label, p, factor):
    assert mass.species_factor(label, p) == factor


def test_constituents_include_empty_ones(diag):
    chain = mass.constituents(diag(1, 3, 9, 27), 3)
    assert [c.scale_exp for c in chain] == [-1, 0, 1, 2, 3, 4]
    assert [c.rank for c in chain] == [0, 1, 1, 1, 1, 0]


def test_bound_species_next_to_type_i(diag):
    labels = dict((scale, s.label) for scale, s in mass.local_species(diag(1, 1, 3, 3), 2))
    assert labels[-1] == '0'
    assert labels[1] == '0'


@pytest.mark.parametrize('build, expected', [
    (lambda diag, blocks: diag(1, 1, 3, 3), Fraction(1, 4)),
    (lambda diag, blocks: diag(1, 1, 1, 5), Fraction(1, 12)),
    (lambda diag, blocks: blocks(A2, A2), Fraction(1, 18)),
    (lambda diag, blocks: make_lattice([[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]]),
     Fraction(1, 30)),
    (lambda diag, blocks: blocks(A2, [[8, 4], [4, 8]]), Fraction(1, 9)),
])
def test_dyadic_local_masses(diag, blocks, build, expected):
    assert mass.local_mass(build(diag, blocks), 2) == expected


def test_odd_local_mass(diag):
    assert mass.local_mass(diag(1, 3, 9, 27), 3) == Fraction(3 ** 5, 16)


def test_mass_from_local_masses():
    local = {2: MassValue.of(Fraction(1, 9)), 7: MassValue.of(Fraction(7 ** 5, 16))}
    assert mass.mass_from_local(4, 2 ** 4 * 7 ** 6, local) == 7


def test_mass_from_computed_localizations(diag, blocks):
    local = {2: mass.local_mass(blocks(A2, [[8, 4], [4, 8]]), 2), 7: mass.local_mass(diag(1, 7, 49, 343), 7)}
    assert local[7] == Fraction(7 ** 5, 16)
    assert mass.mass_from_local(4, 2 ** 4 * 7 ** 6, local) == 7


@pytest.mark.parametrize('name, expected', [('I4', Fraction(1, 384)), ('D4', Fraction(1, 1152))])
def test_one_class_genus_masses(lattices, name, expected):
    assert mass.total_mass(lattices[name]) == expected


def test_case_i_masses(lattices):
    for name in ('case_i_5_L2', 'case_i_5_L3'):
        assert mass.local_mass(lattices[name], 2) == 16
        assert mass.total_mass(lattices[name]) == Fraction(1, 2)


def test_spinor_mass_divides_by_g(lattices):
    form = lattices['form_1_1']
    assert mass.spinor_mass(form, 2) == mass.total_mass(form) / 2
    assert mass.spinor_mass(form) == mass.total_mass(form) / 2


def test_mass_branch():
    assert mass.mass_branch(3, 54) == MassBranch.TERNARY
    assert mass.mass_branch(4, 729) == MassBranch.SQUARE
    assert mass.mass_branch(4, 5) == MassBranch.CHARACTER
    with pytest.raises(UnsupportedShape):
        mass.mass_branch(2, 3)


def test_character():
    assert mass.character(5, 2) == -1
    assert mass.character(12, 5) == -1
    assert mass.character(5, 4) == 1
    assert mass.character(8, 6) == 0


def test_irrational_masses_stay_exact():
    value = MassValue.of(Fraction(1, 2), 8)
    assert (value.coeff, value.radicand) == (1, 2)
    assert value * value == 2
    assert str(value / 4) == '1/4*sqrt(2)'
    assert MassValue.of(1, 2) > 1 > MassValue.of(Fraction(1, 2), 3)


@pytest.mark.parametrize('q, parity, threshold', [
    (3, 'even', 16), (3, 'odd', 17), (5, 'even', 11), (7, 'even', 9),
])
def test_bound_thresholds(q, parity, threshold):
    assert mass.bound_exponent_check(q, parity) == threshold


def test_bound_survivors():
    assert mass.bound_survivors(7, 'even') == []
    survivors = mass.bound_survivors(3, 'even')
    assert (1, 2, 3) in survivors
    assert all(3 * m + l - k <= 16 for k, l, m in survivors)


def test_bound_arguments():
    with pytest.raises(ValueError):
        mass.mass_lower_bound(3, 2, 1, 4, 'even')
    with pytest.raises(UnsupportedShape):
        mass.bound_exponent_check(11, 'even')
    assert mass.mass_lower_bound(3, 1, 2, 5, 'even') == mass.mass_lower_bound(3, 2, 3, 5, 'even')
