from django.apps import AppConfig


class EventsimConfig(AppConfig):
    name = 'eventsim'
    verbose_name = 'Simulador por eventos'
