"""
Settings for waves_app are namespaced in the KDV_WAVES setting.

    KDV_WAVES = {
        'NEWTON_TOL': 1e-13,
    }

Numerical modules read values through ``wave_settings``; when Django is not
configured (plain library use) the defaults below apply.
"""
from django.conf import settings
from django.core.signals import setting_changed

DEFAULTS = {
    # elliptic_core
    'CLASSIFY_DELTA_RTOL': 1e-9,
    'CLASSIFY_GERM_ATOL': 1e-12,
    'WP_SERIES_RTOL': 1e-16,
    'WP_SERIES_MAX_TERMS': 30,
    'WP_TRUST_FACTOR': 0.5,
    'WP_OVERFLOW_GUARD': 1e150,
    'WP_SINH_CUTOFF': 350.0,
    # wave_families
    'NEWTON_MAX_ITER': 100,
    'NEWTON_TOL': 1e-12,
    'NEWTON_MAX_HALVINGS': 30,
    'CONSTRAINT_TOL': 1e-12,
    'CONSTRUCTION_H_TOL': 1e-10,
    'SINGULAR_RADIUS': 1e-9,
    # verify_oracles
    'FD_STEP_FRACTION': 0.01,
    'FD_ACCURACY': 8,
    'POLE_EXCLUSION_STEPS': 10,
    'MIN_REPORT_SAMPLES': 10,
    # spectral_sim
    'BLOWUP_GUARD': 1e8,
    'CFL': 0.5,
    'DOMAIN_WIDTHS': 40.0,
    'CONTOUR_POINTS': 32,
    # cli_harness
    'FLOAT_FORMAT': '%.17g',
}


class WaveSettings:
    def __init__(self, defaults=None):
        self.defaults = defaults or DEFAULTS
        self._cached_attrs = set()

    @property
    def user_settings(self):
        if not hasattr(self, '_user_settings'):
            if settings.configured:
                self._user_settings = getattr(settings, 'KDV_WAVES', {})
            else:
                self._user_settings = {}
        return self._user_settings

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError("Invalid KDV_WAVES setting: '%s'" % attr)
        try:
            val = self.user_settings[attr]
        except KeyError:
            val = self.defaults[attr]
        self._cached_attrs.add(attr)
        setattr(self, attr, val)
        return val

    def reload(self):
        for attr in self._cached_attrs:
            delattr(self, attr)
        self._cached_attrs.clear()
        if hasattr(self, '_user_settings'):
            delattr(self, '_user_settings')


wave_settings = WaveSettings(DEFAULTS)


def reload_wave_settings(*args, **kwargs):
    if kwargs['setting'] == 'KDV_WAVES':
        wave_settings.reload()


setting_changed.connect(reload_wave_settings)
