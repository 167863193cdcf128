from django.apps import AppConfig


class PhaseplotConfig(AppConfig):
    name = 'phaseplot'
    verbose_name = 'Phase plots'
