"""
Configuração global do pytest para o projeto fleetgrid.
- Loggers dos apps propagam para a raiz, assim o caplog enxerga as mensagens
- Processos paralelos desligados nos testes
"""
import logging

import pytest
from django.conf import settings

APPS = ('corpus', 'population', 'network', 'modechoice', 'agentsim', 'eventsim', 'metrics', 'v2g', 'pipeline')


def pytest_configure(config):
    """Ajusta settings ANTES do Django inicializar para os testes."""
    settings.FLEETGRID_JOBS = 1
    settings.FLEETGRID_LOG = 'DEBUG'


@pytest.fixture(autouse=True)
def _propagar_logs():
    anteriores = {}
    for app in APPS:
        logger = logging.getLogger(app)
        anteriores[app] = logger.propagate
        logger.propagate = True
    yield
    for app, valor in anteriores.items():
        logging.getLogger(app).propagate = valor
