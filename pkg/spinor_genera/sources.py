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
import re
from abc import ABC, abstractmethod
from functools import lru_cache
from math import isqrt
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from spinor_genera.arith import prime_divisors
from spinor_genera.exceptions import CatalogueError, FixtureError, LatticeError, ParseError
from spinor_genera.lattice import (discriminant, form_discriminant, form_from_coefficients, form_to_lattice,
                                   make_lattice)
from spinor_genera.local import p_profile
from spinor_genera.models import GramLattice, OneClassGenusEntry, PProfile, TernaryOCSGEntry

DATA_DIR = Path(__file__).parent / 'data'
CATALOGUE_SIZE = 481
CATALOGUE_PATH = DATA_DIR / 'one_class_genera.json'
TERNARY_TABLE_SIZE = 45

_FORM = re.compile(r'^\s*(\d+)\s*:\s*\[([^\]]*)\]\s*(#.*)?$')

Labelled = Tuple[str, GramLattice]


class AbstractLatticeSource(ABC):

    @abstractmethod
    def get_lattices(self) -> Iterable[Labelled]:
        """
        This method should return the lattices given as input, each one with a label
        identifying where it comes from (fixture name, file and line, or the input text)
        :return: Iterable[Tuple[str, GramLattice]]
        """


class InlineSource(AbstractLatticeSource):
    """
    A single form n:[coefficients] or a JSON Gram matrix given on the command line
    """

    def __init__(self, text: str):
        self.text = text

    def get_lattices(self) -> Iterable[Labelled]:
        return [(self.text, parse_lattice(self.text))]


class FixtureSource(AbstractLatticeSource):

    def __init__(self, name: str):
        self.name = name

    def get_lattices(self) -> Iterable[Labelled]:
        fixtures = quaternary_fixtures()
        if self.name in fixtures:
            return [(self.name, fixtures[self.name])]
        groups = fixture_groups()
        if self.name in groups:
            return [(name, fixtures[name]) for name in groups[self.name]]
        raise ParseError(f'unknown fixture {self.name}')


class FileSource(AbstractLatticeSource):
    """
    A file holding either one form per line (n: [coefficients] # comment) or JSON Gram matrices
    """

    def __init__(self, path: str):
        self.path = path

    def get_lattices(self) -> Iterable[Labelled]:
        try:
            text = Path(self.path).read_text()
        except OSError as e:
            raise ParseError(f'cannot read {self.path}: {e}') from e
        if text.lstrip().startswith('['):
            grams = _load_json(text)
            if grams and not isinstance(grams[0][0], list):
                grams = [grams]
            return [(f'{self.path}#{i + 1}', _lattice(g)) for i, g in enumerate(grams)]
        return [(f'{self.path}:{number}', lattice) for number, lattice in parse_forms(text)]


def _load_json(text: str, line: Optional[int] = None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f'invalid JSON: {e.msg}', line if line is not None else e.lineno) from e


def _lattice(rows, line: Optional[int] = None) -> GramLattice:
    try:
        return make_lattice(rows)
    except LatticeError as e:
        raise ParseError(str(e), line) from e


def parse_form(text: str, line: Optional[int] = None) -> GramLattice:
    match = _FORM.match(text)
    if not match:
        raise ParseError(f'expected n:[coefficients], got {text.strip()!r}', line)
    try:
        coefficients = [int(c) for c in match.group(2).split(',') if c.strip()]
        return form_to_lattice(form_from_coefficients(int(match.group(1)), coefficients))
    except ValueError as e:
        raise ParseError(f'non-integral coefficient in {text.strip()!r}', line) from e
    except LatticeError as e:
        raise ParseError(str(e), line) from e


def parse_lattice(text: str, line: Optional[int] = None) -> GramLattice:
    """
    A form n:[coefficients] or a JSON Gram matrix
    """
    if text.lstrip().startswith('['):
        return _lattice(_load_json(text, line), line)
    return parse_form(text, line)


def parse_forms(text: str) -> List[Tuple[int, GramLattice]]:
    result = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.split('#', 1)[0].strip():
            continue
        result.append((number, parse_form(line, number)))
    return result


def parse_input(token: str) -> AbstractLatticeSource:
    if token.startswith('fixture:'):
        return FixtureSource(token[len('fixture:'):])
    if token.startswith('@'):
        return FileSource(token[1:])
    return InlineSource(token)


@lru_cache(maxsize=1)
def _fixture_data() -> Dict:
    with open(DATA_DIR / 'fixtures.json') as f:
        return json.load(f)


def quaternary_fixtures() -> Dict[str, GramLattice]:
    """
    The named Gram matrices; each is checked against its recorded discriminant
    """
    result = {}
    for name, record in _fixture_data()['lattices'].items():
        lattice = make_lattice(record['gram'])
        if discriminant(lattice) != record['discriminant']:
            raise FixtureError(f'fixture {name} has discriminant {discriminant(lattice)}, '
                               f'recorded {record["discriminant"]}')
        result[name] = lattice
    return result


def fixture_groups() -> Dict[str, List[str]]:
    return dict(_fixture_data()['groups'])


def splitting_fixtures() -> Dict[str, List[str]]:
    """
    For each Case I family, the fixtures whose genus splits into several spinor genera
    """
    return dict(_fixture_data()['splitting'])


def prime_set() -> List[int]:
    return list(_fixture_data()['prime_set'])


def ternary_table() -> List[TernaryOCSGEntry]:
    with open(DATA_DIR / 'ternary_table.json') as f:
        records = json.load(f)
    entries = []
    for record in records:
        entry = TernaryOCSGEntry(coefficients=tuple(record['coefficients']), discriminant=record['discriminant'],
                                 regular=record['regular'])
        if form_discriminant(ternary_lattice(entry)) != entry.discriminant:
            raise FixtureError(f'ternary form {list(entry.coefficients)} does not have discriminant '
                               f'{entry.discriminant}')
        entries.append(entry)
    if len(entries) != TERNARY_TABLE_SIZE:
        raise FixtureError(f'expected {TERNARY_TABLE_SIZE} ternary forms, found {len(entries)}')
    return entries


def ternary_lattice(entry: TernaryOCSGEntry) -> GramLattice:
    return form_to_lattice(form_from_coefficients(3, entry.coefficients))


def ternary_entry(disc: int, coefficients: Sequence[int]) -> Optional[TernaryOCSGEntry]:
    coefficients = tuple(coefficients)
    return next((e for e in ternary_table() if e.discriminant == disc and e.coefficients == coefficients), None)


def _catalogue_gram(record, number: int) -> List[List[int]]:
    if not isinstance(record, dict) or 'gram' not in record:
        raise CatalogueError(f'entry {number} has no gram')
    gram = record['gram']
    if gram and not isinstance(gram[0], list):
        n = isqrt(len(gram))
        if n * n != len(gram):
            raise CatalogueError(f'entry {number}: flat gram of length {len(gram)}')
        gram = [gram[i * n:(i + 1) * n] for i in range(n)]
    return gram


def catalogue_entry(record, number: int) -> OneClassGenusEntry:
    try:
        lattice = make_lattice(_catalogue_gram(record, number))
    except LatticeError as e:
        raise CatalogueError(f'entry {number}: {e}') from e
    d = discriminant(lattice)
    if 'disc' in record and record['disc'] != d:
        raise CatalogueError(f'entry {number}: recorded discriminant {record["disc"]}, computed {d}')
    profiles = {p: p_profile(lattice, p) for p in prime_divisors(d)}
    return OneClassGenusEntry(gram=lattice, discriminant=d, p_profiles=profiles)


def load_catalogue(path: str, expected_count: Optional[int] = CATALOGUE_SIZE) -> List[OneClassGenusEntry]:
    """
    Reads the one-class genus catalogue, a JSON list of {"disc": d, "gram": [[...]]}
    """
    try:
        with open(path) as f:
            records = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CatalogueError(f'cannot read catalogue {path}: {e}') from e
    if not isinstance(records, list):
        raise CatalogueError('the catalogue must be a JSON list')
    entries = [catalogue_entry(record, number) for number, record in enumerate(records, start=1)]
    if expected_count is not None and len(entries) != expected_count:
        raise CatalogueError(f'expected {expected_count} catalogue entries, found {len(entries)}')
    return entries


def bundled_catalogue() -> Optional[List[OneClassGenusEntry]]:
    """
    The converted catalogue installed under the package data directory, None when it is missing
    """
    if not CATALOGUE_PATH.is_file():
        return None
    return load_catalogue(str(CATALOGUE_PATH))


def convert_catalogue(records: Iterable) -> List[Dict]:
    """
    Converts exported records carrying a gram field (nested or flat) to the catalogue schema
    """
    result = []
    for number, record in enumerate(records, start=1):
        entry = catalogue_entry({'gram': _catalogue_gram(record, number)}, number)
        result.append({'disc': entry.discriminant, 'gram': entry.gram.rows()})
    return result


def profile_exists(entries: Sequence[OneClassGenusEntry], profile: PProfile,
                   constraint: Optional[Callable[[OneClassGenusEntry], bool]] = None) -> bool:
    return any(matching_entries(entries, profile, constraint))


def matching_entries(entries: Sequence[OneClassGenusEntry], profile: PProfile,
                     constraint: Optional[Callable[[OneClassGenusEntry], bool]] = None) -> List[OneClassGenusEntry]:
    return [e for e in entries
            if e.p_profiles.get(profile.prime) == profile and (constraint is None or constraint(e))]


def catalogue_primes(entries: Sequence[OneClassGenusEntry]) -> List[int]:
    return sorted({p for e in entries for p in prime_divisors(e.discriminant)})
