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

class SpinorGeneraError(Exception):
    """Base class of the errors raised by the package"""


class LatticeError(SpinorGeneraError):
    """The Gram matrix or the form does not describe a valid lattice"""


class ParseError(SpinorGeneraError):

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


class ThetaUndecided(SpinorGeneraError):

    def __init__(self, prime, detail=''):
        self.prime = prime
        super().__init__(f'spinor norm group undecided at p={prime}{": " + detail if detail else ""}')


class UnsupportedShape(SpinorGeneraError):
    """No mass closure is implemented for this rank and discriminant"""


class IncompleteGenus(SpinorGeneraError):
    """The class set does not exhaust the mass of the genus"""


class CatalogueError(SpinorGeneraError):
    pass


class FixtureError(SpinorGeneraError):
    pass
