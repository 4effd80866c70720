from django.apps import AppConfig


class RotatableRisConfig(AppConfig):
    name = 'rotatable_ris'
    verbose_name = "Rotatable RIS"
