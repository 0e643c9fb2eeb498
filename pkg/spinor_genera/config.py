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
Run configuration: an optional YAML file overlaid with the flags given on the command line.
"""
from typing import Dict, Optional

import yaml
from pydantic import ValidationError

from spinor_genera.exceptions import ParseError
from spinor_genera.models import RunConfig


def load_config_file(path: str) -> Dict:
    try:
        with open(path) as f:
            values = yaml.safe_load(f) or {}
    except OSError as e:
        raise ParseError(f'cannot read configuration {path}: {e}') from e
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        raise ParseError(f'invalid configuration {path}: {e}', mark.line + 1 if mark else None) from e
    if not isinstance(values, dict):
        raise ParseError(f'configuration {path} must be a mapping')
    return values


def build_config(command: str, flags: Dict, path: Optional[str] = None) -> RunConfig:
    """
    Values from the file at path, replaced by every flag that was given explicitly
    """
    values = load_config_file(path) if path else {}
    values.update({key: value for key, value in flags.items() if value is not None})
    values['command'] = command
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise ParseError(f'invalid configuration: {e}') from e
