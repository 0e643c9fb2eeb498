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

import csv
import io
import json
from pathlib import Path

import pytest

from spinor_genera import acceptance, cli
from spinor_genera.models import CriterionResult

DATA = Path(__file__).parent / 'data'


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_mass_command(capsys):
    assert cli.main(['mass', 'fixture:I4']) == cli.EXIT_OK
    assert _json(capsys)['total_mass'] == '1/384'


def test_several_inputs_give_a_list(capsys):
    assert cli.main(['analyze', 'fixture:I4', '[[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]']) == 0
    assert [report['discriminant'] for report in _json(capsys)] == [1, 4]


def test_forms_file_input(capsys):
    assert cli.main(['mu', f'@{DATA / "forms.txt"}', '--hat']) == 0
    assert len(_json(capsys)) == 3


def test_table_format(capsys):
    assert cli.main(['mu', 'fixture:form_1_1', '--format', 'table']) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]['steps'] == '(0,1,2,3)_3->(0,0,1,1)_3'


def test_output_directory(tmp_path):
    assert cli.main(['theta', 'fixture:case_iii', '--output', str(tmp_path)]) == 0
    report = json.loads((tmp_path / 'theta.json').read_text())
    assert report['g_plus'] == 1


def test_config_file(tmp_path, capsys):
    config = tmp_path / 'config.yml'
    config.write_text('format: table\n')
    assert cli.main(['mass', 'fixture:D4', '--config', str(config)]) == 0
    assert capsys.readouterr().out.startswith('gram,discriminant,prime')


def test_classify_command(tmp_path, capsys):
    assert cli.main(['classify', '--disc', '4', '--cache', str(tmp_path)]) == 0
    report = _json(capsys)
    assert report['discriminant'] == 4
    assert [genus['h'] for genus in report['genera']] == [1]
    assert (tmp_path / '4' / '4' / 'classes.json').exists()


def test_find_ocsg_command(capsys):
    assert cli.main(['find-ocsg', '--disc', '4']) == 0
    assert _json(capsys) == []


def test_find_ocsg_over_a_range(capsys):
    assert cli.main(['find-ocsg', '--range', '4:4']) == cli.EXIT_OK
    assert _json(capsys) == []


@pytest.mark.parametrize('argv', [['find-ocsg'], ['find-ocsg', '--range', '5:1'], ['find-ocsg', '--range', '4'],
                                  ['mu', 'fixture:form_1_1', '--prime', '4']])
def test_invalid_targets(argv):
    assert cli.main(argv) == cli.EXIT_USAGE


def test_theta_at_one_prime(capsys):
    assert cli.main(['theta', 'fixture:case_iii', '--prime', '2']) == cli.EXIT_OK
    report = _json(capsys)
    assert [group['prime'] for group in report['groups']] == [2]


def test_ascend_command(tmp_path, capsys):
    seeds = tmp_path / 'seeds.json'
    seeds.write_text(json.dumps([[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]]))
    assert cli.main(['ascend', '--from', str(seeds), '--prime', '3', '--steps', '1', '--profile', '3:0,0,0,2']) == 0
    layer = _json(capsys)
    assert layer['discriminant'] == 144
    assert layer['classes'] >= 1


def test_verify_paper_subset(capsys, monkeypatch):
    monkeypatch.setattr(acceptance, 'bundled_catalogue', lambda: None)
    assert cli.main(['verify-paper', '--only', 'A4', '--only', 'catalogue']) == cli.EXIT_FAILED
    results = {result['name']: result for result in _json(capsys)}
    assert results['A4']['passed']
    assert results['catalogue']['skipped']


def test_verify_paper_failure(capsys, monkeypatch):
    monkeypatch.setattr(cli, 'run_criteria', lambda *args: [CriterionResult(name='A1', passed=False)])
    assert cli.main(['verify-paper']) == cli.EXIT_FAILED


def test_import_catalogue(tmp_path):
    source = tmp_path / 'export.json'
    source.write_text(json.dumps([{'gram': [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 3]}]))
    target = tmp_path / 'catalogue.json'
    assert cli.main(['import-catalogue', str(source), str(target)]) == 0
    assert json.loads(target.read_text())[0]['disc'] == 3


@pytest.mark.parametrize('argv', [
    ['analyze', '[[1, 2], [2, 1]]'],
    ['mass', '4: [1, 2]'],
    ['theta', '[[1, 0], [0, 1]]'],
    ['analyze', 'fixture:unknown'],
    ['verify-paper', '--only', 'catalogue', '--catalogue', 'missing.json'],
    ['ascend', '--steps', '1'],
    ['ascend', '--disc', '16', '--profile', 'nonsense'],
])
def test_usage_errors(argv, capsys):
    assert cli.main(argv) == cli.EXIT_USAGE
    assert capsys.readouterr().err.startswith('error:')


def test_invalid_config_value(capsys):
    assert cli.main(['classify', '--disc', '4', '--rank', '5']) == cli.EXIT_USAGE


def test_strict_theta(capsys, monkeypatch):
    def undecided(*args):
        raise cli.ThetaUndecided(2)
    monkeypatch.setattr(cli.pipeline.spinor, 'theta_group', undecided)
    assert cli.main(['theta', 'fixture:D4', '--strict']) == cli.EXIT_THETA_UNDECIDED
    assert cli.main(['theta', 'fixture:D4']) == 0
