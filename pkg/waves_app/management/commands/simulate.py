import os

from ...output import render_csv, write_text
from ...services import run_simulate
from ..base import WaveCommand


class Command(WaveCommand):
    help = ('Evolve the equation with the pseudospectral solver. With --out DIR, '
            'writes DIR/diagnostics.csv and DIR/snapshots.csv; otherwise prints diagnostics.')
    command_name = 'simulate'

    def run(self, cfg):
        result = run_simulate(cfg)
        out = cfg['out']
        if out:
            write_text(os.path.join(out, 'diagnostics.csv'), render_csv(result.diagnostics))
            write_text(os.path.join(out, 'snapshots.csv'), render_csv(result.snapshots))
        else:
            self.stdout.write(render_csv(result.diagnostics), ending='')
        if result.blowup is not None:
            result.blowup.output_path = out
            raise result.blowup
        return out
