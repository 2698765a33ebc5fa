from ...output import render
from ...services import run_solve
from ..base import WaveCommand


class Command(WaveCommand):
    help = 'Sample a traveling-wave profile u(xi); samples at singularities are left empty.'
    command_name = 'solve'

    def run(self, cfg):
        table, _ = run_solve(cfg)
        return self.emit(cfg, render(table, cfg['format']), 'profile.%s' % cfg['format'])
