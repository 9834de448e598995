from django.apps import AppConfig


class AgentsimConfig(AppConfig):
    name = 'agentsim'
    verbose_name = 'Simulação de reservas por agentes'
