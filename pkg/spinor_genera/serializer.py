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
import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from spinor_genera.models import ClassSet, GenusReport

logger = logging.getLogger(__name__)


class BaseOutput:
    def serialize(self, *args, **kwargs):
        raise NotImplementedError


class JsonFile(BaseOutput):

    def __init__(self, directory):
        self.output_dir = directory

    def serialize(self, file_name, obj):
        with open(f'{self.output_dir}/{file_name}.json', 'w') as f:
            json.dump(obj, f, indent=2)


class CSVFile(BaseOutput):

    def __init__(self, directory):
        self.output_dir = directory

    def serialize(self, file_name, header, rows):
        with open(f'{self.output_dir}/{file_name}.csv', 'w', newline='') as f:
            _write_rows(f, header, rows)


class JsonStream(BaseOutput):
    """
    Writes to an open text stream (stdout by default in the CLI); the file name is ignored
    """

    def __init__(self, stream):
        self.stream = stream

    def serialize(self, file_name, obj):
        json.dump(obj, self.stream, indent=2)
        self.stream.write('\n')


class CSVStream(BaseOutput):

    def __init__(self, stream):
        self.stream = stream

    def serialize(self, file_name, header, rows):
        _write_rows(self.stream, header, rows)


def _write_rows(f, header, rows):
    writer = csv.DictWriter(f, fieldnames=header)
    writer.writeheader()
    writer.writerows(rows)


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile('w', encoding='utf-8', dir=path.parent, suffix='.tmp', delete=False) as f:
        f.write(text)
    try:
        os.replace(f.name, path)
    except OSError:
        os.unlink(f.name)
        raise


class GenusCache:
    """
    Genus reports under <directory>/<rank>/<disc>/<sha256 of the genus symbol>.json
    and class sets under <directory>/<rank>/<disc>/classes.json
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def _folder(self, rank: int, disc: int) -> Path:
        return self.directory / str(rank) / str(disc)

    def _report_path(self, rank: int, disc: int, symbol: str) -> Path:
        return self._folder(rank, disc) / f'{hashlib.sha256(symbol.encode()).hexdigest()}.json'

    def load_report(self, rank: int, disc: int, symbol: str) -> Optional[GenusReport]:
        path = self._report_path(rank, disc, symbol)
        if not path.exists():
            return None
        report = GenusReport.model_validate_json(path.read_text(encoding='utf-8'))
        if report.symbol != symbol:
            logger.warning('cache entry %s holds genus %s, ignoring it', path, report.symbol)
            return None
        logger.debug('genus %s read from %s', symbol, path)
        return report

    def save_report(self, rank: int, disc: int, symbol: str, report: GenusReport):
        _atomic_write(self._report_path(rank, disc, symbol), report.model_dump_json(indent=2))

    def load_classes(self, rank: int, disc: int) -> Optional[ClassSet]:
        path = self._folder(rank, disc) / 'classes.json'
        if not path.exists():
            return None
        return ClassSet.model_validate_json(path.read_text(encoding='utf-8'))

    def save_classes(self, classes: ClassSet):
        _atomic_write(self._folder(classes.rank, classes.discriminant) / 'classes.json',
                      classes.model_dump_json(indent=2))
