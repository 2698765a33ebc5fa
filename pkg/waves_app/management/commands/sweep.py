from ...output import render
from ...services import run_sweep
from ..base import WaveCommand


class Command(WaveCommand):
    help = ('Scan constraint roots over (c, mu2) for the fifth-order equation, '
            'or construct waves over a (c, nu) grid for the third-order one.')
    command_name = 'sweep'

    def run(self, cfg):
        table = run_sweep(cfg)
        return self.emit(cfg, render(table, cfg['format']), 'sweep.%s' % cfg['format'])
