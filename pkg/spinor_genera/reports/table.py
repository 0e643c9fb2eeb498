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

import json
from typing import Dict, List

from pydantic import BaseModel

from spinor_genera.models import (AnalysisReport, ClassificationReport, GenusReport, MassReport, MuReport,
                                  ThetaReport)
from spinor_genera.reports import gram_text


def _genus_rows(genus: GenusReport, discriminant=None, index=0) -> List[Dict]:
    rows = []
    for number, entry in enumerate(genus.classes):
        rows.append({
            'discriminant': discriminant if discriminant is not None else genus.form_discriminant,
            'genus': index,
            'symbol': genus.symbol,
            'h': genus.h,
            'g': genus.g,
            'g_plus': genus.g_plus,
            'class': number,
            'gram': gram_text(entry.gram),
            'aut_order': entry.aut_order,
            'proper_aut_order': entry.proper_aut_order,
            'spinor_genus': entry.spinor_genus,
            'h_s': genus.spinor_sizes[entry.spinor_genus],
            'total_mass': genus.total_mass,
            'flags': ' '.join(genus.flags)
        })
    return rows


def _classification_rows(report: ClassificationReport) -> List[Dict]:
    rows = []
    for index, genus in enumerate(report.genera):
        rows += _genus_rows(genus, report.discriminant, index)
    return rows


def _analysis_rows(report: AnalysisReport) -> List[Dict]:
    return [{
        'gram': gram_text(report.gram),
        'discriminant': report.discriminant,
        'form_discriminant': report.form_discriminant,
        'prime': local.prime,
        'profile': str(local.profile),
        'theta': ' '.join(map(str, local.theta)) if local.theta is not None else '',
        'local_mass': local.local_mass,
        'g_plus': report.g_plus,
        'g': report.g,
        'total_mass': report.total_mass,
        'spinor_mass': report.spinor_mass,
        'flags': ' '.join(report.flags)
    } for local in report.local]


def _mass_rows(report: MassReport) -> List[Dict]:
    return [{
        'gram': gram_text(report.gram),
        'discriminant': report.discriminant,
        'prime': p,
        'species': ' '.join(report.species[p]),
        'local_mass': value,
        'total_mass': report.total_mass,
        'spinor_mass': report.spinor_mass
    } for p, value in sorted(report.local_masses.items())]


def _theta_rows(report: ThetaReport) -> List[Dict]:
    return [{
        'gram': gram_text(report.gram),
        'prime': group.prime,
        'theta': ' '.join(map(str, group.representatives())),
        'contains_units': group.contains_units,
        'g_plus': report.g_plus,
        'g': report.g
    } for group in report.groups]


def _mu_rows(report: MuReport) -> List[Dict]:
    steps = ' '.join(f'{step.before}->{step.after}' for step in report.steps)
    return [{'gram': gram_text(report.gram), 'result': gram_text(report.result),
             'discriminant': report.discriminant, 'steps': steps, 'fixed': report.fixed}]


def _plain_rows(report: BaseModel) -> List[Dict]:
    row = {}
    for key, value in report.model_dump(mode='json').items():
        row[key] = json.dumps(value) if isinstance(value, (list, dict)) else value
    return [row]


ROWS = {
    ClassificationReport: _classification_rows,
    GenusReport: _genus_rows,
    AnalysisReport: _analysis_rows,
    MassReport: _mass_rows,
    ThetaReport: _theta_rows,
    MuReport: _mu_rows
}


class TableReport:
    """
    Flattens reports to rows, one per class, prime or step, written with a CSV serializer
    """

    def __init__(self, serializer):
        self.output = serializer
        self.rows = []

    def create_report(self, report: BaseModel):
        self.rows += ROWS.get(type(report), _plain_rows)(report)

    def save(self, file_name):
        header = []
        for row in self.rows:
            header += [key for key in row if key not in header]
        self.save_csv(file_name, header, self.rows)

    def save_csv(self, file_name, header, csvdata):
        self.output.serialize(file_name, header, csvdata)
