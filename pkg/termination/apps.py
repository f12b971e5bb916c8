from django.apps import AppConfig


class TerminationConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'termination'
