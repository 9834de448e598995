from django.apps import AppConfig


class ModechoiceConfig(AppConfig):
    name = 'modechoice'
    verbose_name = 'Escolha modal'
