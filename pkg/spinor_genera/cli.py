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

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from spinor_genera import classify, pipeline
from spinor_genera.acceptance import run_criteria
from spinor_genera.ascension import ascension_sweep, form_classes, seed_classes
from spinor_genera.config import build_config
from spinor_genera.exceptions import (CatalogueError, FixtureError, LatticeError, ParseError, SpinorGeneraError,
                                      ThetaUndecided)
from spinor_genera.lattice import make_lattice
from spinor_genera.models import ClassSet, OutputFormat, PProfile, RunConfig
from spinor_genera.reports.json import JsonReport
from spinor_genera.reports.table import TableReport
from spinor_genera.serializer import CSVFile, CSVStream, GenusCache, JsonFile, JsonStream
from spinor_genera.sources import convert_catalogue, load_catalogue, parse_input

logger = logging.getLogger('spinor_genera')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_THETA_UNDECIDED = 3

LATTICE_COMMANDS = {
    'analyze': pipeline.Runner.ANALYZE,
    'mass': pipeline.Runner.MASS,
    'theta': pipeline.Runner.THETA,
    'mu': pipeline.Runner.MU,
    'genus': pipeline.Runner.GENUS
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='YAML file with default values for the options')
    common.add_argument('--cache', help='directory caching class sets and genus reports')
    common.add_argument('--jobs', type=int, help='worker processes for the ascension')
    common.add_argument('--format', choices=[f.value for f in OutputFormat], help='output format')
    common.add_argument('--output', help='directory for the output file instead of the standard output')
    common.add_argument('--strict', action='store_true', default=None,
                        help='fail when a spinor norm group cannot be decided')
    common.add_argument('--verbose', action='store_true', default=None, help='log progress')
    common.add_argument('--catalogue', help='JSON catalogue of one-class genera')

    parser = argparse.ArgumentParser(prog='spinor-genera',
                                     description='Classes, genera and spinor genera of positive definite lattices')
    commands = parser.add_subparsers(dest='command', required=True)
    inputs_help = 'fixture:NAME, n:[coefficients], a JSON Gram matrix or @FILE'
    for name in LATTICE_COMMANDS:
        sub = commands.add_parser(name, parents=[common])
        sub.add_argument('inputs', nargs='+', help=inputs_help)
        if name in ('mu', 'theta'):
            sub.add_argument('--prime', dest='primes', type=int, action='append')
        if name == 'mu':
            sub.add_argument('--hat', action='store_true', default=None)

    sub = commands.add_parser('classify', parents=[common])
    sub.add_argument('--disc', dest='discriminants', type=int, action='append', required=True)
    sub.add_argument('--rank', type=int)

    sub = commands.add_parser('ascend', parents=[common])
    sub.add_argument('--prime', dest='primes', type=int, action='append')
    sub.add_argument('--from', dest='seeds', help='JSON class set or list of Gram matrices')
    sub.add_argument('--disc', dest='discriminants', type=int, action='append',
                     help='discriminant of the seed when no seed file is given')
    sub.add_argument('--rank', type=int)
    sub.add_argument('--steps', type=int)
    sub.add_argument('--profile', help='p:e1,e2,... profile whose genera are counted, e.g. 3:0,1,2,3')

    sub = commands.add_parser('find-ocsg', parents=[common])
    sub.add_argument('--disc', dest='discriminants', type=int, action='append')
    sub.add_argument('--range', dest='disc_range', metavar='LOW:HIGH', help='every discriminant from LOW to HIGH')
    sub.add_argument('--rank', type=int)

    sub = commands.add_parser('verify-paper', parents=[common])
    sub.add_argument('--scope', choices=['quick', 'full'])
    sub.add_argument('--only', dest='inputs', action='append', help='run only the named criterion')

    sub = commands.add_parser('import-catalogue', parents=[common])
    sub.add_argument('inputs', nargs=2, metavar='PATH', help='source export and destination catalogue')
    return parser


def _destination(config: RunConfig):
    if config.format == OutputFormat.TABLE:
        serializer = CSVFile(config.output) if config.output else CSVStream(sys.stdout)
        return TableReport(serializer)
    serializer = JsonFile(config.output) if config.output else JsonStream(sys.stdout)
    return JsonReport(serializer)


def _profile(text: Optional[str]) -> Optional[PProfile]:
    if not text:
        return None
    try:
        prime, exps = text.split(':')
        return PProfile(prime=int(prime), exps=tuple(sorted(int(e) for e in exps.split(','))))
    except ValueError as e:
        raise ParseError(f'invalid profile {text!r}') from e


def _seed(config: RunConfig) -> ClassSet:
    if not config.seeds:
        if not config.discriminants:
            raise ParseError('ascend needs --from or --disc')
        return form_classes(config.discriminants[0], config.rank)
    try:
        data = json.loads(Path(config.seeds).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f'cannot read seeds {config.seeds}: {e}') from e
    if isinstance(data, dict):
        return ClassSet.model_validate(data)
    return seed_classes([make_lattice(rows) for rows in data])


def _run_lattices(config: RunConfig, destination):
    sources = [parse_input(token) for token in config.inputs]
    for source in sources:
        pipeline.Runner(source, destination, LATTICE_COMMANDS[config.command], strict=config.strict,
                        prime=config.primes[0] if config.primes else None, hat=config.hat).run()
    return EXIT_OK


def _run(config: RunConfig, destination) -> int:
    cache = GenusCache(config.cache) if config.cache else None
    if config.command in LATTICE_COMMANDS:
        return _run_lattices(config, destination)
    if config.command == 'classify':
        for disc in config.discriminants:
            destination.create_report(classify.classify(disc, config.rank, cache))
        return EXIT_OK
    if config.command == 'find-ocsg':
        targets = config.target_discriminants()
        if not targets:
            raise ParseError('find-ocsg needs --disc or --range')
        reports = [classify.classify(disc, config.rank, cache) for disc in targets]
        for result in classify.find_one_class_spinor(reports):
            destination.create_report(result)
        return EXIT_OK
    if config.command == 'ascend':
        prime = config.primes[0] if config.primes else 2
        profile = _profile(config.profile)
        for layer in ascension_sweep(_seed(config), prime, config.steps, profile, config.jobs):
            destination.create_report(layer)
        return EXIT_OK
    if config.command == 'verify-paper':
        catalogue = load_catalogue(config.catalogue) if config.catalogue else None
        results = run_criteria(config.scope, cache, config.jobs, catalogue, config.inputs or None)
        for result in results:
            destination.create_report(result)
        return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    source, target = config.inputs
    try:
        records = json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise CatalogueError(f'cannot read {source}: {e}') from e
    converted = convert_catalogue(records)
    target = Path(target)
    JsonFile(str(target.parent)).serialize(target.stem, converted)
    logger.info('%s catalogue entries written to %s', len(converted), target)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    flags = {key: value for key, value in vars(args).items() if key not in ('command', 'config')}
    try:
        config = build_config(args.command, flags, args.config)
    except ParseError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_USAGE
    pipeline.set_verbose(config.verbose)
    destination = _destination(config)
    try:
        code = _run(config, destination)
    except ThetaUndecided as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_THETA_UNDECIDED if config.strict else EXIT_FAILED
    except (ParseError, LatticeError, CatalogueError, FixtureError) as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_USAGE
    except SpinorGeneraError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_FAILED
    if config.command != 'import-catalogue':
        destination.save(config.command.replace('-', '_'))
    return code


if __name__ == '__main__':
    sys.exit(main())
