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

from spinor_genera import spinor
from spinor_genera.arith import congruent
from spinor_genera.classify import genus_classes
from spinor_genera.exceptions import LatticeError
from spinor_genera.isometry import isometric
from spinor_genera.lattice import discriminant, make_lattice
from spinor_genera.local import local_isometric, p_profile
from spinor_genera.models import PProfile
from spinor_genera.watson import (admissible_profiles, is_admissible, mapped_exponents, mu_hat, mu_hat_trace, mu_p,
                                  mu_preimage_profiles)


def test_mapped_exponents():
    assert mapped_exponents((0, 1, 2, 3)) == (0, 0, 1, 1)
    assert mapped_exponents((0, 0, 4, 4)) == (0, 0, 2, 2)
    assert mapped_exponents((0, 0, 1, 1)) == (0, 0, 1, 1)


def test_mu_p_lowers_the_high_scales(lattices):
    image = mu_p(lattices['form_1_1'], 3)
    assert p_profile(image, 3).exps == (0, 0, 1, 1)
    assert discriminant(image) == 9
    assert local_isometric(image, lattices['form_1_1'], 2)


def test_mu_p_on_a_diagonal_lattice(diag):
    image = mu_p(diag(1, 3, 9, 27), 3)
    assert p_profile(image, 3).exps == (0, 0, 1, 1)


def test_mu_hat_stops_on_an_admissible_profile(lattices):
    result = mu_hat(lattices['form_1_1'])
    assert result.iterations == {3: 1}
    assert result.fixed
    assert p_profile(result.lattice, 3).exps == (0, 0, 1, 1)


def test_mu_hat_trace_records_steps(diag):
    lattice, steps, settled = mu_hat_trace(diag(1, 1, 9, 81))
    assert settled
    assert [(s.before.exps, s.after.exps) for s in steps] == [((0, 0, 2, 4), (0, 0, 0, 2))]
    assert p_profile(lattice, 3).exps == (0, 0, 0, 2)


def test_mu_hat_stops_before_unimodular(diag):
    result = mu_hat(diag(1, 1, 1, 9))
    assert result.iterations == {}
    assert result.fixed


def test_mu_hat_on_unimodular(lattices):
    result = mu_hat(lattices['I4'])
    assert result.lattice == lattices['I4']
    assert result.fixed


@pytest.mark.parametrize('exps, expected', [
    ((0, 0, 1, 1), True),
    ((0, 2, 2, 2), True),
    ((0, 1, 2), False),
    ((1, 1, 1, 1), False),
    ((0, 0, 0, 0), False),
])
def test_is_admissible(exps, expected):
    assert is_admissible(exps) == expected


def test_admissible_profiles():
    assert admissible_profiles(4) == [(0, 0, 0, 1), (0, 0, 0, 2), (0, 0, 1, 1), (0, 0, 2, 2), (0, 1, 1, 1),
                                      (0, 2, 2, 2)]
    assert all(is_admissible(e) for e in admissible_profiles(3))


def test_mu_preimage_profiles():
    assert mu_preimage_profiles((0, 0, 1, 1)) == [(0, 0, 1, 3), (0, 0, 3, 3), (0, 1, 1, 2), (0, 1, 2, 3),
                                                  (0, 2, 3, 3)]
    assert (0, 1, 2, 3) in mu_preimage_profiles((0, 0, 1, 1))
    assert all(mapped_exponents(e) == (0, 0, 1, 1) for e in mu_preimage_profiles((0, 0, 1, 1)))


def test_mu_preimage_keeps_the_prime():
    found = mu_preimage_profiles(PProfile(prime=3, exps=(0, 0, 2, 2)))
    assert all(p.prime == 3 for p in found)
    assert PProfile(prime=3, exps=(0, 0, 4, 4)) in found


def test_mu_hat_trace_detects_a_wrong_profile(lattices, monkeypatch):
    monkeypatch.setattr('spinor_genera.watson.mu_p', lambda lattice, p: lattice)
    with pytest.raises(LatticeError):
        mu_hat_trace(lattices['form_1_1'])


def test_mu_p_respects_isometry(lattices):
    lattice = lattices['form_1_1']
    other = make_lattice(congruent(lattice.gram, [[1, 2, 0, 1], [0, 1, 1, 0], [0, 0, 1, 3], [0, 0, 0, 1]]))
    assert other != lattice
    assert isometric(mu_p(lattice, 3), mu_p(other, 3))[0]


def test_mu_hat_does_not_grow_the_genus(lattices):
    lattice = lattices['form_1_1']
    image = mu_hat(lattice).lattice
    assert len(genus_classes(image).classes) <= len(genus_classes(lattice).classes)
    assert spinor.g(image) == 1
