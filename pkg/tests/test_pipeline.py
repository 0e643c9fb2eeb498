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

import pytest

from spinor_genera import pipeline
from spinor_genera.exceptions import LatticeError, ThetaUndecided
from spinor_genera.lattice import make_lattice, rescale
from spinor_genera.models import MassBranch
from spinor_genera.sources import FixtureSource, InlineSource


class Collect:
    def __init__(self):
        self.reports = []

    def create_report(self, report):
        self.reports.append(report)


def test_analyze(lattices):
    report = pipeline.analyze(lattices['I4'])
    assert report.discriminant == 1
    assert report.form_discriminant == 16
    assert [local.prime for local in report.local] == [2]
    assert report.total_mass == '1/384'
    assert report.mass_branch == MassBranch.SQUARE
    assert (report.g_plus, report.g) == (1, 1)
    assert report.spinor_mass == '1/384'
    assert not report.flags


def test_analyze_local_data(lattices):
    report = pipeline.analyze(lattices['form_1_1'])
    local = {entry.prime: entry for entry in report.local}
    assert local[3].profile.exps == (0, 1, 2, 3)
    assert local[3].theta is not None
    assert report.g == 2


def test_analyze_imprimitive_lattice(lattices):
    report = pipeline.analyze(rescale(lattices['D4'], 2))
    assert report.flags == [pipeline.NOT_PRIMITIVE]
    assert report.g_plus is None
    assert report.total_mass is None


def test_analyze_binary_lattice_has_no_mass():
    report = pipeline.analyze(make_lattice([[2, 1], [1, 2]]))
    assert report.total_mass is None
    assert report.local[0].theta is None


def test_undecided_theta_is_flagged_unless_strict(lattices, monkeypatch):
    def undecided(lattice, p):
        raise ThetaUndecided(p)
    monkeypatch.setattr(pipeline.spinor, 'theta_group', undecided)
    monkeypatch.setattr(pipeline.spinor, 'g_plus', lambda lattice: undecided(lattice, 2))
    report = pipeline.analyze(lattices['D4'])
    assert pipeline.THETA_UNDECIDED in report.flags
    with pytest.raises(ThetaUndecided):
        pipeline.analyze(lattices['D4'], strict=True)


def test_mass_report(lattices):
    report = pipeline.mass_report(lattices['D4'])
    assert list(report.local_masses) == [2]
    assert report.local_masses[2] == '1/36'
    assert report.species[2] == ['-1:0+', '0:2-', '1:2-', '2:0+']
    assert report.total_mass == report.spinor_mass == '1/1152'


def test_mass_report_without_closure():
    report = pipeline.mass_report(make_lattice([[2, 1], [1, 2]]))
    assert report.flags == [pipeline.NO_MASS_CLOSURE]
    assert report.total_mass is None


def test_theta_report(lattices):
    report = pipeline.theta_report(lattices['case_iii'])
    assert [group.prime for group in report.groups] == [2, 3, 7]
    assert report.groups[0].representatives() == [1, 5, 6, 14]
    assert report.g_plus == 1
    with pytest.raises(LatticeError):
        pipeline.theta_report(make_lattice([[1, 0], [0, 1]]))


def test_theta_report_at_one_prime(lattices):
    report = pipeline.theta_report(lattices['case_iii'], prime=7)
    assert [group.prime for group in report.groups] == [7]
    assert report.g_plus == 1


def test_mu_report(lattices):
    hat = pipeline.mu_report(lattices['form_1_1'], hat=True)
    assert [step.prime for step in hat.steps] == [3]
    assert hat.discriminant == 9
    assert hat.fixed
    single = pipeline.mu_report(lattices['form_1_1'], prime=3)
    assert single.steps == []
    assert single.result == hat.result
    assert not single.fixed


def test_runner(lattices):
    destination = Collect()
    reports = pipeline.Runner(FixtureSource('profile_0123'), destination, pipeline.Runner.MU).run()
    assert len(reports) == 6
    assert destination.reports == reports


def test_runner_genus_mode(lattices):
    destination = Collect()
    pipeline.Runner(FixtureSource('M1'), destination, pipeline.Runner.GENUS).run()
    assert destination.reports[0].h == 1


def test_runner_rejects_unknown_modes():
    with pytest.raises(AssertionError):
        pipeline.Runner(InlineSource('[[1]]'), Collect(), 'unknown')


def test_runner_logs_source_errors(caplog):
    runner = pipeline.Runner(FixtureSource('unknown'), Collect(), pipeline.Runner.ANALYZE)
    with caplog.at_level(logging.ERROR, logger='spinor_genera'):
        with pytest.raises(Exception):
            runner.run()
    assert 'unknown fixture' in caplog.text


def test_set_verbose():
    pipeline.set_verbose(True)
    assert pipeline.console_handler.level == logging.DEBUG
    pipeline.set_verbose(False)
    assert pipeline.console_handler.level == logging.WARNING
