from django.apps import AppConfig


class SeibergWittenConfig(AppConfig):
    name = 'apps.seiberg_witten'
    verbose_name = 'Seiberg Witten'
