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

from spinor_genera import classify, mass
from spinor_genera.exceptions import IncompleteGenus, LatticeError
from spinor_genera.isometry import aut_order, canonical_lattice
from spinor_genera.local import genus_symbol
from spinor_genera.models import ClassEntry, ClassificationReport, GenusReport, MassBranch
from spinor_genera.sources import fixture_groups, splitting_fixtures, ternary_lattice, ternary_table


def test_neighbors_of_a_one_class_genus(lattices):
    assert classify.p_neighbors(lattices['I4'], 3) == [canonical_lattice(lattices['I4'])]
    assert classify.p_neighbors(lattices['D4'], 5) == [canonical_lattice(lattices['D4'])]


def test_neighbors_stay_in_the_genus(lattices):
    form = lattices['form_1_1']
    neighbors = classify.p_neighbors(form, 5)
    assert neighbors
    assert all(genus_symbol(n) == genus_symbol(form) for n in neighbors)


def test_neighbors_need_a_good_prime(lattices):
    with pytest.raises(LatticeError):
        classify.p_neighbors(lattices['form_1_1'], 3)
    with pytest.raises(LatticeError):
        classify.p_neighbors(lattices['I4'], 2)


def test_neighbor_primes(lattices):
    assert classify.neighbor_primes(lattices['form_1_1']) == [5, 7, 11, 13, 17, 19, 23, 29]
    assert classify.neighbor_primes(lattices['case_iii'])[:3] == [5, 11, 13]


def test_genus_classes_reach_the_mass(lattices):
    classes = classify.genus_classes(lattices['form_1_1'])
    grams = [c.gram for c in classes.classes]
    assert len(grams) == 3
    assert sum(Fraction(1, aut_order(g)) for g in grams) == mass.total_mass(lattices['form_1_1'])
    for name in ('L1', 'L2', 'L3'):
        assert canonical_lattice(lattices[name]) in grams


def test_one_class_genera(lattices):
    for name in ('M1', 'M2', 'M3', 'K1', 'D4'):
        assert len(classify.genus_classes(lattices[name]).classes) == 1


def test_neighbor_closure(lattices):
    closure = classify.neighbor_closure(lattices['form_1_1'], 5)
    assert 1 <= len(closure) <= 3
    assert canonical_lattice(lattices['form_1_1']) in closure


def test_spinor_partition_of_the_729_genus(lattices):
    classes = [lattices[name] for name in ('L1', 'L2', 'L3')]
    parts, flags = classify.spinor_partition(classes)
    assert not flags
    assert sorted(len(part) for part in parts) == [1, 2]
    single = next(part for part in parts if len(part) == 1)
    assert single == [canonical_lattice(lattices['form_1_1'])]


def test_trivial_image_prime_keeps_the_proper_spinor_genus(lattices):
    q = classify.trivial_image_prime(lattices['form_1_1'])
    assert 729 % q
    assert classify.neighbor_closure(lattices['form_1_1'], q) == [canonical_lattice(lattices['form_1_1'])]


def test_neighbor_closure_is_the_proper_spinor_genus(lattices):
    q = classify.trivial_image_prime(lattices['L2'])
    closure = classify.neighbor_closure(lattices['L2'], q)
    assert closure == sorted([canonical_lattice(lattices['L2']), canonical_lattice(lattices['L3'])],
                             key=lambda lattice: lattice.gram)


def test_genus_report(lattices):
    report = classify.genus_report([lattices[name] for name in ('L1', 'L2', 'L3')])
    assert (report.h, report.g) == (3, 2)
    assert sorted(report.spinor_sizes) == [1, 2]
    assert report.form_discriminant == 729
    assert report.mass_branch == MassBranch.SQUARE
    assert len(set(report.spinor_masses)) == 1
    assert Fraction(report.total_mass) == 2 * Fraction(report.spinor_masses[0])
    assert not report.flags


def test_genus_report_rejects_missing_classes(lattices):
    with pytest.raises(IncompleteGenus):
        classify.genus_report([lattices['L2'], lattices['L3']])


def _genus(sizes, h, g):
    entries = [ClassEntry(gram=[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], aut_order=1,
                          proper_aut_order=1, spinor_genus=i) for i, size in enumerate(sizes) for _ in range(size)]
    return GenusReport(symbol='s', representative=entries[0].gram, form_discriminant=16, classes=entries, h=h, g=g,
                       g_plus=g, spinor_sizes=sizes, total_mass='1', spinor_masses=['1'] * len(sizes),
                       mass_branch=MassBranch.SQUARE)


def test_find_one_class_spinor_skips_one_class_genera():
    report = ClassificationReport(discriminant=16, rank=4,
                                  genera=[_genus([1], 1, 1), _genus([1, 2], 3, 2), _genus([2, 2], 4, 2)])
    found = classify.find_one_class_spinor([report])
    assert [(r.h, r.h_s, r.g) for r in found] == [(3, 1, 2)]


def test_case_i_fixtures_have_the_case_i_shape(lattices):
    for m in (4, 5, 6):
        for name in fixture_groups()[f'case_i_{m}']:
            assert classify.is_case_i(lattices[name], m)
    assert not classify.is_case_i(lattices['I4'], 4)
    assert not classify.is_case_i(lattices['case_i_4_L1'], 5)


@pytest.mark.slow
def test_classification_of_729(lattices):
    report = classify.classify(729, 4)
    assert report.class_count == 33
    found = classify.find_one_class_spinor([report])
    assert [r.gram for r in found] == [canonical_lattice(lattices['form_1_1'])]
    assert all(classify.UNEQUAL_SPINOR_MASSES not in g.flags for g in report.genera)


@pytest.mark.slow
@pytest.mark.parametrize('m, count', [(4, 4), (5, 3), (6, 4)])
def test_case_i_genera(lattices, m, count):
    genera = classify.case_i_genera(m)
    assert len(genera) == count
    split = {g.symbol for g in genera if g.g > 1}
    assert split == {genus_symbol(lattices[name]).text for name in splitting_fixtures()[f'case_i_{m}']}


@pytest.mark.slow
def test_ternary_one_class_spinor_genera():
    for entry in ternary_table():
        lattice = canonical_lattice(ternary_lattice(entry))
        classes = classify.genus_classes(lattice)
        genus = classify.genus_report([c.gram for c in classes.classes])
        assert genus.h > 1
        index = next(e.spinor_genus for e in genus.classes if e.gram == lattice)
        assert genus.spinor_sizes[index] == 1
