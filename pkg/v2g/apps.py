from django.apps import AppConfig


class V2gConfig(AppConfig):
    name = 'v2g'
    verbose_name = 'Agendamento V2G'
