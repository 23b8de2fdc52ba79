from django.apps import AppConfig


class SeriesConfig(AppConfig):
    name = 'apps.series'
    verbose_name = 'Series'
