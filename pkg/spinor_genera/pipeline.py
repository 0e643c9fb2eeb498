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

import logging
from typing import Optional

from spinor_genera import classify, mass, spinor
from spinor_genera.exceptions import LatticeError, ThetaUndecided, UnsupportedShape
from spinor_genera.lattice import discriminant, form_discriminant, is_primitive
from spinor_genera.local import bad_primes, jordan_split, p_profile
from spinor_genera.models import AnalysisReport, GramLattice, LocalReport, MassReport, MuReport, ThetaReport
from spinor_genera.watson import mu_hat_trace, mu_p

logger = logging.getLogger('spinor_genera')
logger.setLevel(logging.DEBUG)
formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
console_handler = logging.StreamHandler()
console_handler.setFormatter(formatter)
console_handler.setLevel(logging.WARNING)
logger.addHandler(console_handler)

THETA_UNDECIDED = classify.THETA_UNDECIDED
NOT_PRIMITIVE = 'not-primitive'
NO_MASS_CLOSURE = 'no-mass-closure'


def set_verbose(verbose: bool):
    console_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _spinor_ready(lattice: GramLattice) -> bool:
    return lattice.rank in (3, 4) and is_primitive(lattice)


def _undecided(e: ThetaUndecided, strict: bool, flags):
    if strict:
        raise e
    logger.warning(e)
    flags.append(THETA_UNDECIDED)


def analyze(lattice: GramLattice, strict: bool = False) -> AnalysisReport:
    """
    Discriminants, local data at every bad prime, spinor genus counts and masses of L
    """
    flags = []
    ready = _spinor_ready(lattice)
    if not is_primitive(lattice):
        flags.append(NOT_PRIMITIVE)
    local = []
    for p in bad_primes(lattice):
        theta = None
        if ready:
            try:
                theta = spinor.theta_group(lattice, p).representatives()
            except ThetaUndecided as e:
                _undecided(e, strict, flags)
        local.append(LocalReport(prime=p, profile=p_profile(lattice, p), splitting=jordan_split(lattice, p),
                                 theta=theta, local_mass=str(mass.local_mass(lattice, p))))
    report = AnalysisReport(gram=lattice, discriminant=discriminant(lattice),
                            form_discriminant=form_discriminant(lattice), local=local, flags=flags)
    if not ready:
        return report
    try:
        report.g_plus = spinor.g_plus(lattice)
        report.g = spinor.g(lattice)
    except ThetaUndecided as e:
        _undecided(e, strict, flags)
    try:
        total = mass.total_mass(lattice)
        report.total_mass = str(total)
        report.mass_branch = mass.mass_branch(lattice.rank, report.discriminant)
        if report.g:
            report.spinor_mass = str(total / report.g)
    except UnsupportedShape as e:
        logger.warning(e)
        flags.append(NO_MASS_CLOSURE)
    return report


def mass_report(lattice: GramLattice, strict: bool = False) -> MassReport:
    flags = []
    primes = bad_primes(lattice)
    report = MassReport(gram=lattice, discriminant=discriminant(lattice),
                        local_masses={p: str(mass.local_mass(lattice, p)) for p in primes},
                        species={p: [f'{scale}:{s.label}' for scale, s in mass.local_species(lattice, p)]
                                 for p in primes},
                        flags=flags)
    try:
        total = mass.total_mass(lattice)
    except UnsupportedShape as e:
        logger.warning(e)
        flags.append(NO_MASS_CLOSURE)
        return report
    report.total_mass = str(total)
    report.mass_branch = mass.mass_branch(lattice.rank, report.discriminant)
    try:
        report.spinor_mass = str(total / spinor.g(lattice))
    except ThetaUndecided as e:
        _undecided(e, strict, flags)
    return report


def theta_report(lattice: GramLattice, strict: bool = False, prime: Optional[int] = None) -> ThetaReport:
    if not _spinor_ready(lattice):
        raise LatticeError('spinor norms need a primitive lattice of rank 3 or 4')
    flags = []
    groups = []
    for p in [prime] if prime else bad_primes(lattice):
        try:
            groups.append(spinor.theta_group(lattice, p))
        except ThetaUndecided as e:
            _undecided(e, strict, flags)
    report = ThetaReport(gram=lattice, groups=groups, flags=flags)
    if not flags:
        report.g_plus = spinor.g_plus(lattice)
        report.g = spinor.g(lattice)
    return report


def mu_report(lattice: GramLattice, prime: Optional[int] = None, hat: bool = False) -> MuReport:
    if hat or prime is None:
        result, steps, fixed = mu_hat_trace(lattice)
    else:
        result = mu_p(lattice, prime)
        steps, fixed = [], p_profile(result, prime) == p_profile(lattice, prime)
    return MuReport(gram=lattice, result=result, discriminant=discriminant(result), steps=steps, fixed=fixed)


def genus_of(lattice: GramLattice):
    classes = classify.genus_classes(lattice)
    return classify.genus_report([c.gram for c in classes.classes])


class Runner:
    ANALYZE = 'analyze'
    GENUS = 'genus'
    MASS = 'mass'
    MU = 'mu'
    THETA = 'theta'

    def __init__(self, source, destination, mode, strict=False, prime=None, hat=False):
        assert mode in (self.ANALYZE, self.GENUS, self.MASS, self.MU, self.THETA)
        self.source = source
        self.destination = destination
        self.mode = mode
        self.strict = strict
        self.prime = prime
        self.hat = hat

    def _process(self, lattice: GramLattice):
        if self.mode == self.ANALYZE:
            return analyze(lattice, self.strict)
        if self.mode == self.MASS:
            return mass_report(lattice, self.strict)
        if self.mode == self.THETA:
            return theta_report(lattice, self.strict, self.prime)
        if self.mode == self.MU:
            return mu_report(lattice, self.prime, self.hat)
        return genus_of(lattice)

    def run(self):
        try:
            logger.debug('Getting lattices from %s', self.source)
            records = list(self.source.get_lattices())
        except Exception as e:
            logger.error(e)
            raise e
        else:
            logger.debug('Done getting data. Found %s lattice(s)', len(records))

        reports = []
        for label, lattice in records:
            try:
                report = self._process(lattice)
            except Exception as e:
                logger.error('%s: %s', label, e)
                raise e
            self.destination.create_report(report)
            reports.append(report)
        logger.info('%s: processed %s lattice(s)', self.mode, len(reports))
        return reports
