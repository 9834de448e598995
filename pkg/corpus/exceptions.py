"""Exceções de domínio usadas pelos simuladores e pelo otimizador."""
from django.core.exceptions import ValidationError


class SimulationError(Exception):
    """Falha durante a simulação (modelo modal ou reserva dupla)."""

    def __init__(self, message, trip_id=None):
        super().__init__(message)
        self.trip_id = trip_id


class InfeasibleScheduleError(ValidationError):
    """Restrições de uma reserva não podem ser atendidas pelo veículo."""

    def __init__(self, message, reservation_id=None, vehicle_id=None):
        super().__init__(message, code='infeasible')
        self.reservation_id = reservation_id
        self.vehicle_id = vehicle_id


class ConvergenceError(Exception):
    """Um procedimento iterativo esgotou o limite de iterações."""
