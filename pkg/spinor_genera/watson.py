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
Watson's transformations μ_p, which shrink the high-scale part of a genus while
preserving the property of having one class (or one class per spinor genus).
"""
import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from spinor_genera.arith import identity, prime_divisors, residue, valuation
from spinor_genera.exceptions import LatticeError
from spinor_genera.isometry import canonical_lattice
from spinor_genera.lattice import discriminant, lattice_from_basis, sublattice_basis
from spinor_genera.local import decompose, p_profile
from spinor_genera.models import GramLattice, MuResult, MuStep, PProfile

logger = logging.getLogger(__name__)


def mapped_exponents(exps: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sorted(e - 2 if e >= 2 else e for e in exps))


def mu_p(lattice: GramLattice, p: int) -> GramLattice:
    """
    μ_p(L): the lattice pL + K, K the part of L_p of scale at least p², with the form divided by p²
    """
    n = lattice.rank
    generators = [[p * x for x in row] for row in identity(n)]
    for block in decompose(lattice, p):
        if block.scale >= 2:
            generators += [[residue(x, p * p) for x in v] for v in block.vectors]
    basis = sublattice_basis([list(col) for col in zip(*generators)])
    result = canonical_lattice(lattice_from_basis(lattice, basis, divisor=p * p))
    logger.debug('mu_%s %s -> %s', p, lattice.gram, result.gram)
    return result


def _step_prime(lattice: GramLattice, p: int) -> Optional[PProfile]:
    """
    The profile after one more μ_p, or None when the iteration has stopped at p
    """
    exps = p_profile(lattice, p).exps
    if max(exps) < 2:
        return None
    after = mapped_exponents(exps)
    if max(after) == 0:
        return None
    return PProfile(prime=p, exps=after)


def mu_hat_trace(lattice: GramLattice,
                 primes: Optional[Sequence[int]] = None) -> Tuple[GramLattice, List[MuStep], bool]:
    """
    Iterates μ_p at every prime of the discriminant until no exponent reaches 2
    or the next step would make L_p unimodular
    """
    d = discriminant(lattice)
    steps = []
    settled = True
    for p in primes or prime_divisors(d):
        cap = valuation(d, p) if d % p == 0 else 0
        count = 0
        while True:
            after = _step_prime(lattice, p)
            if after is None:
                break
            if count == cap:
                settled = False
                break
            before = p_profile(lattice, p)
            lattice = mu_p(lattice, p)
            if p_profile(lattice, p) != after:
                raise LatticeError(f'mu_{p} produced {p_profile(lattice, p)}, expected {after}')
            steps.append(MuStep(prime=p, before=before, after=after))
            count += 1
    return lattice, steps, settled


def mu_hat(lattice: GramLattice, primes: Optional[Sequence[int]] = None) -> MuResult:
    result, steps, settled = mu_hat_trace(lattice, primes)
    iterations: Dict[int, int] = {}
    for step in steps:
        iterations[step.prime] = iterations.get(step.prime, 0) + 1
    fixed = settled and all(is_admissible(p_profile(result, p).exps) for p in prime_divisors(discriminant(result)))
    return MuResult(lattice=result, iterations=iterations, fixed=fixed)


def is_admissible(exps: Sequence[int]) -> bool:
    """
    Profiles on which the μ̂ iteration stops
    """
    exps = tuple(sorted(exps))
    if not exps or exps[0] != 0:
        return False
    values = set(exps)
    return values in ({0, 1}, {0, 2})


def admissible_profiles(rank: int) -> List[Tuple[int, ...]]:
    result = []
    for top in (1, 2):
        for zeros in range(1, rank):
            result.append((0,) * zeros + (top,) * (rank - zeros))
    return sorted(result)


def mu_preimage_profiles(profile: Union[PProfile, Sequence[int]]) -> List:
    """
    Primitive profiles whose image under one μ_p is the given one; PProfile in, PProfile out
    """
    target = tuple(sorted(profile.exps if isinstance(profile, PProfile) else profile))
    forced = {i for i, e in enumerate(target) if e >= 2}
    result = set()
    for size in range(1, len(target) + 1):
        for lifted in combinations(range(len(target)), size):
            if not forced <= set(lifted):
                continue
            exps = tuple(sorted(e + 2 if i in lifted else e for i, e in enumerate(target)))
            if exps[0] == 0:
                result.add(exps)
    if isinstance(profile, PProfile):
        return [PProfile(prime=profile.prime, exps=e) for e in sorted(result)]
    return sorted(result)
