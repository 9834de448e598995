"""
Modelos de cadeia de atividades diária usados pelo gerador de população.
"""
from dataclasses import dataclass, field

from django.conf import settings
from django.core.exceptions import ValidationError

from corpus.models import Purpose


@dataclass(frozen=True)
class ActivityTemplate:
    """
    Sequência de propósitos que começa e termina em casa.
    first_start: (média, desvio) em minutos da chegada à primeira atividade.
    durations: propósito -> (média, desvio) da permanência em minutos.
    displacement: (mu, sigma) da distribuição lognormal de deslocamento em metros.
    """
    name: str
    purposes: tuple
    first_start: tuple
    durations: dict = field(hash=False)
    displacement: tuple = (8.724, 1.127)
    weight: float = 1.0

    def __post_init__(self):
        if len(self.purposes) < 3:
            raise ValidationError(f"template {self.name}: precisa de ao menos uma atividade fora de casa")
        if self.purposes[0] != Purpose.HOME or self.purposes[-1] != Purpose.HOME:
            raise ValidationError(f"template {self.name}: a cadeia deve começar e terminar em casa")
        for proposito in self.purposes[1:-1]:
            if proposito not in self.durations:
                raise ValidationError(f"template {self.name}: sem duração para {proposito}")
        if self.weight <= 0:
            raise ValidationError(f"template {self.name}: peso deve ser positivo")

    @property
    def n_trips(self):
        return len(self.purposes) - 1


def default_templates():
    deslocamento = (settings.TRIP_DISTANCE_MU, settings.TRIP_DISTANCE_SIGMA)
    duracoes = {
        Purpose.WORK: (510.0, 60.0),
        Purpose.EDUCATION: (360.0, 60.0),
        Purpose.SHOPPING: (60.0, 30.0),
        Purpose.LEISURE: (150.0, 60.0),
        Purpose.OTHER: (90.0, 45.0),
    }
    casa = Purpose.HOME
    return (
        ActivityTemplate('trabalho', (casa, Purpose.WORK, casa), (480.0, 60.0), duracoes, deslocamento, 0.30),
        ActivityTemplate('lazer', (casa, Purpose.LEISURE, casa), (960.0, 180.0), duracoes, deslocamento, 0.20),
        ActivityTemplate('compras', (casa, Purpose.SHOPPING, casa), (780.0, 150.0), duracoes, deslocamento, 0.15),
        ActivityTemplate('estudo', (casa, Purpose.EDUCATION, casa), (470.0, 40.0), duracoes, deslocamento, 0.10),
        ActivityTemplate(
            'trabalho_compras', (casa, Purpose.WORK, Purpose.SHOPPING, casa),
            (480.0, 60.0), duracoes, deslocamento, 0.15,
        ),
        ActivityTemplate(
            'lazer_outros', (casa, Purpose.LEISURE, Purpose.OTHER, casa),
            (840.0, 180.0), duracoes, deslocamento, 0.10,
        ),
    )
