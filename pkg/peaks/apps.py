from django.apps import AppConfig


class PeaksConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'peaks'
