from django.apps import AppConfig

class WavesAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'waves_app'
    verbose_name = 'KdV-BBM traveling waves'
