from ...output import render_json
from ...services import run_verify
from ..base import WaveCommand


class Command(WaveCommand):
    help = 'Write residual reports (elliptic identity, ODE, coefficient system) as JSON.'
    command_name = 'verify'

    def run(self, cfg):
        payload = run_verify(cfg)
        if not payload['passed']:
            self.stderr.write('verify: residuals above threshold')
        return self.emit(cfg, render_json(payload), 'verify.json')
