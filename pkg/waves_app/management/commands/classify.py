from ...output import render
from ...services import run_classify
from ..base import WaveCommand


class Command(WaveCommand):
    help = 'Tabulate solution regions over a (c, nu) grid or constraint values over (c, mu2).'
    command_name = 'classify'

    def run(self, cfg):
        table = run_classify(cfg)
        return self.emit(cfg, render(table, cfg['format']), 'classify.%s' % cfg['format'])
