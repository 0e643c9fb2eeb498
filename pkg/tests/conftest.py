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

from spinor_genera.lattice import make_lattice
from spinor_genera.sources import quaternary_fixtures


@pytest.fixture(scope='session')
def lattices():
    return quaternary_fixtures()


@pytest.fixture
def diag():
    def build(*entries):
        n = len(entries)
        return make_lattice([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])
    return build


@pytest.fixture
def blocks():
    def build(*parts):
        n = sum(len(b) for b in parts)
        rows = [[0] * n for _ in range(n)]
        offset = 0
        for block in parts:
            for i, row in enumerate(block):
                for j, x in enumerate(row):
                    rows[offset + i][offset + j] = x
            offset += len(block)
        return make_lattice(rows)
    return build
