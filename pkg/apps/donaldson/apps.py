from django.apps import AppConfig


class DonaldsonConfig(AppConfig):
    name = 'apps.donaldson'
    verbose_name = 'Donaldson'
