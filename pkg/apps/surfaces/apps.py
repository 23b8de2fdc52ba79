from django.apps import AppConfig


class SurfacesConfig(AppConfig):
    name = 'apps.surfaces'
    verbose_name = 'Surfaces'
