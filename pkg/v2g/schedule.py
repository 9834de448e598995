"""Plano de carga da frota depois da projeção sobre a faixa viável."""
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from v2g.objectives import KW_PER_MW
from v2g.tube import repair_schedule


@dataclass(frozen=True)
class FleetSchedule:
    vehicle_ids: np.ndarray
    timestep_minutes: int
    pplus: np.ndarray
    pminus: np.ndarray
    soc: np.ndarray
    energy_cost: float
    objective_value: float
    iterations: int = 0
    converged: bool = True
    residuals: tuple = ()

    @property
    def power(self):
        return self.pplus - self.pminus

    @property
    def aggregate_kw(self):
        return self.power.sum(axis=0) if len(self.vehicle_ids) else np.zeros(self.pplus.shape[1])

    @property
    def aggregate_mw(self):
        return self.aggregate_kw / KW_PER_MW

    @property
    def dt_hours(self):
        return self.timestep_minutes / 60.0


def energy_cost(pplus, pminus, tariff, credit, dt_hours):
    """Custo de energia da frota (CHF) mais a regularização de potência."""
    return float(
        np.sum(pplus @ (np.asarray(tariff) * dt_hours))
        - np.sum(pminus @ (np.asarray(credit) * dt_hours))
        + settings.POWER_REGULARIZATION * (np.sum(pplus ** 2) + np.sum(pminus ** 2))
    )


def build_schedule(perfil, power, objective, tariff, credit, iterations=0, converged=True, residuals=()):
    pplus, pminus, soc = repair_schedule(perfil, power)
    custo = energy_cost(pplus, pminus, tariff, credit, perfil.dt_hours)
    agregado = (pplus - pminus).sum(axis=0)
    return FleetSchedule(
        vehicle_ids=perfil.vehicle_ids.copy(),
        timestep_minutes=perfil.timestep_minutes,
        pplus=pplus,
        pminus=pminus,
        soc=soc,
        energy_cost=custo,
        objective_value=custo + objective.value(agregado),
        iterations=iterations,
        converged=converged,
        residuals=tuple(residuals),
    )
