"""
Shared plumbing for the waves management commands.

Flags override values read from ``--config``; both are validated together by
RunConfigSerializer. Errors become CommandError with a distinct return code:
2 for configuration errors, 3 for construction or numerical failures and 4
for a blow-up (outputs written up to the last finite state).
"""
import json
import logging
import os

from django.core.management.base import BaseCommand, CommandError

from ..exceptions import BlowUp, ConfigError, WaveError
from ..models import RunRecord
from ..output import plain, write_text
from ..serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_FAILED = 3
EXIT_BLOWUP = 4

FLOAT_FLAGS = (
    'nu', 'gamma', 'delta1', 'delta2', 'mu2', 'c', 'a0', 'a1', 'b1',
    'xi_min', 'xi_max', 'corrupt_a2', 'L', 'dt', 'T', 'amplitude', 'width',
    'c_min', 'c_max', 'nu_min', 'nu_max', 'mu2_min', 'mu2_max',
)
INT_FLAGS = (
    'samples', 'checks', 'N', 'record_every', 'snapshot_every',
    'c_steps', 'nu_steps', 'mu2_steps',
)


def _flag(name):
    # Single-letter grid flags keep their case: --L, --N, --T.
    return '--' + name.replace('_', '-')


def load_config(command, options):
    data = {}
    path = options.get('config_path')
    if path:
        try:
            with open(path, encoding='utf-8') as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError('Cannot read config file %s: %s' % (path, exc))
        if not isinstance(data, dict):
            raise ConfigError('Config file %s must hold a JSON object.' % path)

    fields = RunConfigSerializer().fields
    data.update({k: v for k, v in options.items() if k in fields and v is not None})
    data['command'] = command

    serializer = RunConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigError(json.dumps(serializer.errors, sort_keys=True))
    return dict(serializer.validated_data)


class WaveCommand(BaseCommand):
    command_name = None

    def add_arguments(self, parser):
        parser.add_argument('--config', dest='config_path', help='JSON run configuration')
        parser.add_argument('--equation', choices=('third', 'fifth'))
        for name in FLOAT_FLAGS:
            parser.add_argument(_flag(name), dest=name, type=float)
        for name in INT_FLAGS:
            parser.add_argument(_flag(name), dest=name, type=int)
        parser.add_argument('--branch', choices=('plus', 'minus'))
        parser.add_argument('--a3-branch', dest='a3_branch', choices=('plus', 'minus'),
                            help='sign for a3 when it differs from --branch')
        parser.add_argument('--family', choices=('auto', 'soliton', 'periodic', 'weierstrass'))
        parser.add_argument('--mu2-bracket', dest='mu2_bracket', type=float, nargs=2,
                            metavar=('LO', 'HI'), help='solve the constraint for mu2 on [LO, HI]')
        parser.add_argument('--initial', choices=('wave', 'zero', 'pulse'))
        parser.add_argument('--allow-unbounded', dest='allow_unbounded', action='store_true',
                            default=None)
        parser.add_argument('--out', help='output path (stdout when omitted)')
        parser.add_argument('--format', choices=('csv', 'json'))
        parser.add_argument('--record', action='store_true', help='store a RunRecord for this run')

    def handle(self, *args, **options):
        cfg = {}
        outcome = {'status': 'ok', 'exit_code': 0, 'output_path': '', 'detail': ''}
        try:
            cfg = load_config(self.command_name, options)
            logger.info('%s run started', self.command_name)
            outcome['output_path'] = self.run(cfg) or ''
        except ConfigError as exc:
            outcome.update(status='config_error', exit_code=EXIT_CONFIG, detail=str(exc))
        except BlowUp as exc:
            outcome.update(status='blowup', exit_code=EXIT_BLOWUP, detail=str(exc),
                           output_path=getattr(exc, 'output_path', ''))
        except WaveError as exc:
            outcome.update(status='failed', exit_code=EXIT_FAILED,
                           detail='%s: %s' % (exc.code, exc))
        finally:
            if options.get('record'):
                RunRecord.objects.create(
                    command=self.command_name,
                    equation=cfg.get('equation', options.get('equation') or ''),
                    config=plain(cfg),
                    **outcome,
                )
        if outcome['exit_code']:
            raise CommandError(outcome['detail'], returncode=outcome['exit_code'])

    def run(self, cfg):
        """Execute the command; return the written path or '' for stdout."""
        raise NotImplementedError

    def emit(self, cfg, text, default_name):
        out = cfg['out']
        if not out:
            self.stdout.write(text, ending='')
            return ''
        if os.path.isdir(out):
            out = os.path.join(out, default_name)
        return write_text(out, text)
