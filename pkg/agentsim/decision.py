"""
Instante de decisão modal: chegada à atividade menos o tempo de viagem a
50 km/h menos 10 minutos de folga.
"""
import logging
import math

logger = logging.getLogger(__name__)

DECISION_SPEED_M_PER_H = 50000.0
DECISION_BUFFER_MIN = 10


def decision_time_exact(t_dest_start, distance_m):
    return t_dest_start - distance_m * 60.0 / DECISION_SPEED_M_PER_H - DECISION_BUFFER_MIN


def compute_decision_time(trip):
    """Minuto inteiro (arredondado para baixo); valores negativos viram 0."""
    minuto = int(math.floor(decision_time_exact(trip.t_dest_start, trip.distance_m)))
    if minuto < 0:
        logger.warning("viagem %s: instante de decisão %d ajustado para 0", trip.trip_id, minuto)
        return 0
    return minuto
