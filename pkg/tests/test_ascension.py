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

import pytest

from spinor_genera.ascension import (ascension_sweep, form_classes, group_by_genus, hyperplanes, index_p_sublattices,
                                     lattice_classes, pall_ascend, reduced_grams, seed_classes, summarize_layer)
from spinor_genera.exceptions import LatticeError
from spinor_genera.isometry import canonical_lattice
from spinor_genera.lattice import discriminant, form_discriminant, is_primitive, trusted_lattice
from spinor_genera.local import p_profile
from spinor_genera.models import Parity, PProfile


def test_hyperplanes_count():
    assert len(list(hyperplanes(4, 3))) == (3 ** 4 - 1) // 2
    assert len(list(hyperplanes(3, 2))) == 7


def test_index_p_sublattices_have_index_p(lattices):
    sublattices = index_p_sublattices(lattices['I4'].rows(), 3)
    assert len(sublattices) == 40
    assert all(discriminant(trusted_lattice(rows)) == 9 for rows in sublattices)


def test_unimodular_lattices(lattices):
    assert lattice_classes(1, 4, Parity.ODD) == [canonical_lattice(lattices['I4']).gram]
    assert lattice_classes(1, 4, Parity.EVEN) == []
    assert lattice_classes(1, 3, Parity.ANY) == [((1, 0, 0), (0, 1, 0), (0, 0, 1))]


def test_even_lattices_of_determinant_four(lattices):
    assert lattice_classes(4, 4, Parity.EVEN) == [canonical_lattice(lattices['D4']).gram]


def test_reduced_grams_are_primitive_and_canonical():
    grams = reduced_grams(3, 4)
    assert grams
    for gram in grams:
        lattice = trusted_lattice(gram)
        assert discriminant(lattice) == 3
        assert is_primitive(lattice)
        assert canonical_lattice(lattice).gram == gram


def test_lattice_classes_rejects_bad_input():
    with pytest.raises(LatticeError):
        lattice_classes(0, 4)
    with pytest.raises(LatticeError):
        lattice_classes(5, 5)


def test_form_classes_mix_parities(lattices):
    classes = form_classes(16, 4)
    grams = [c.gram for c in classes.classes]
    assert canonical_lattice(lattices['I4']) in grams
    assert all(form_discriminant(g) == 16 for g in grams)


def test_form_classes_of_729_contain_the_fixtures(lattices):
    grams = {c.gram for c in form_classes(729, 4).classes}
    for name in ('form_1_1', 'L2', 'L3', 'M1', 'M2', 'M3'):
        assert canonical_lattice(lattices[name]) in grams


def test_pall_ascend_multiplies_the_discriminant():
    seed = form_classes(16, 4)
    ascended = pall_ascend(seed, 3)
    assert ascended.discriminant == 144
    assert ascended.seeds == (16,)
    assert ascended.classes
    assert all(form_discriminant(c.gram) == 144 for c in ascended.classes)


def test_pall_ascend_from_16_to_64():
    seed = form_classes(16, 4)
    assert len(seed.classes) == 2
    ascended = pall_ascend(seed, 2)
    assert ascended.discriminant == 64
    assert ascended.seeds == (16,)
    complete = form_classes(64, 4)
    assert {c.gram for c in ascended.classes} <= {c.gram for c in complete.classes}
    assert (set(group_by_genus([c.gram for c in ascended.classes]))
            == set(group_by_genus([c.gram for c in complete.classes])))


def test_pall_ascend_in_parallel():
    seed = form_classes(16, 4)
    assert pall_ascend(seed, 3, jobs=2) == pall_ascend(seed, 3)


def test_seed_classes_deduplicates(lattices):
    seed = seed_classes([lattices['form_1_1'], lattices['L1'], lattices['L2']])
    assert seed.discriminant == 729
    assert len(seed.classes) == 2
    with pytest.raises(LatticeError):
        seed_classes([lattices['form_1_1'], lattices['K1']])


def test_group_by_genus(lattices):
    genera = group_by_genus([lattices[name] for name in ('form_1_1', 'L2', 'L3', 'M1')])
    assert sorted(len(members) for members in genera.values()) == [1, 3]


def test_summarize_layer():
    profile = PProfile(prime=3, exps=(0, 1, 2, 3))
    layer = summarize_layer(form_classes(729, 4), profile)
    assert layer.discriminant == 729
    assert layer.classes == 33
    assert 1 <= layer.profile_genera <= layer.genera
    assert layer.one_class_genera >= 3


@pytest.mark.slow
def test_two_power_ascension_sweep():
    profile = PProfile(prime=3, exps=(0, 1, 2, 3))
    layers = ascension_sweep(form_classes(729, 4), 2, 3, profile)
    assert [layer.discriminant for layer in layers] == [729 * 4, 729 * 16, 729 * 64]
    assert [layer.genera for layer in layers] == [18, 63, 135]
    assert [layer.profile_genera for layer in layers] == [8, 28, 60]


def test_profiles_of_ascended_classes_keep_the_odd_part(lattices):
    seed = seed_classes([lattices['form_1_1']])
    ascended = pall_ascend(seed, 2)
    assert all(p_profile(c.gram, 3).exps == (0, 1, 2, 3) for c in ascended.classes)
