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

from pydantic import BaseModel


class JsonReport:
    """
    Collects reports as JSON documents; a single report is saved as an object, several as a list
    """

    def __init__(self, serializer):
        self.output = serializer
        self.documents = []

    def create_report(self, report: BaseModel):
        self.documents.append(report.model_dump(mode='json'))

    def save(self, file_name):
        self.save_json(file_name, self.documents[0] if len(self.documents) == 1 else self.documents)

    def save_json(self, file_name, json_data):
        self.output.serialize(file_name, json_data)
