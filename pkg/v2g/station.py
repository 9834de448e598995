"""
Subproblema de carga de uma estação como QP em cvxpy.

As variáveis são p⁺, p⁻ (kW) e o SOC de cada veículo da estação. O alvo do
termo de proximidade e o sinal de preço são `cp.Parameter`, então o problema
é montado uma vez e resolvido a cada iteração só trocando valores.
"""
import logging
from dataclasses import dataclass

import cvxpy as cp
import numpy as np
from django.conf import settings

from corpus.exceptions import ConvergenceError, InfeasibleScheduleError
from v2g.tube import net_overlap

logger = logging.getLogger(__name__)

SOLVED = (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)


@dataclass
class VehicleBlock:
    pplus: cp.Variable
    pminus: cp.Variable
    soc: cp.Variable
    constraints: list
    cost: cp.Expression

    @property
    def power(self):
        """Potência agregada do bloco por passo (kW)."""
        return cp.sum(self.pplus - self.pminus, axis=0)


def _matriz(coluna, T):
    return np.repeat(np.asarray(coluna, dtype=float)[:, None], T, axis=1)


def vehicle_block(perfil, tariff, credit):
    """Variáveis, dinâmica de SOC e custo de energia de todos os veículos de `perfil`."""
    V, T = perfil.n_vehicles, perfil.n_steps
    dt = perfil.dt_hours
    B = _matriz(perfil.capacity_kwh, T)
    disponivel = perfil.at_station.astype(float)

    pplus = cp.Variable((V, T), nonneg=True)
    pminus = cp.Variable((V, T), nonneg=True)
    soc = cp.Variable((V, T + 1))
    constraints = [
        pplus <= _matriz(perfil.max_charge_kw, T) * disponivel,
        pminus <= _matriz(perfil.max_discharge_kw, T) * disponivel,
        soc[:, 0] == perfil.soc_initial,
        soc[:, 1:] == soc[:, :-1]
        + cp.multiply(perfil.eta_charge * dt / B, pplus)
        - cp.multiply(dt / (perfil.eta_discharge * B), pminus)
        - perfil.drain_kwh / B,
        soc >= _matriz(perfil.soc_min, T + 1),
        soc <= _matriz(perfil.soc_max, T + 1),
        soc[:, T] >= perfil.soc_terminal,
    ]
    custo = (
        cp.sum(pplus @ (np.asarray(tariff) * dt))
        - cp.sum(pminus @ (np.asarray(credit) * dt))
        + settings.POWER_REGULARIZATION * (cp.sum_squares(pplus) + cp.sum_squares(pminus))
    )
    return VehicleBlock(pplus=pplus, pminus=pminus, soc=soc, constraints=constraints, cost=custo)


def solve_problem(problem, descricao):
    """Resolve com o solver configurado e traduz status ruins em exceções de domínio."""
    try:
        problem.solve(solver=settings.FLEETGRID_QP_SOLVER)
    except cp.error.SolverError as exc:
        raise ConvergenceError(f"{descricao}: solver {settings.FLEETGRID_QP_SOLVER} falhou ({exc})") from exc
    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        raise InfeasibleScheduleError(f"{descricao}: problema inviável")
    if problem.status not in SOLVED:
        raise ConvergenceError(f"{descricao}: solver terminou com status {problem.status}")
    if problem.status == cp.OPTIMAL_INACCURATE:
        logger.warning("%s: solução imprecisa do solver", descricao)


@dataclass(frozen=True)
class StationSolution:
    pplus: np.ndarray
    pminus: np.ndarray

    @property
    def power(self):
        return (self.pplus - self.pminus).sum(axis=0)


class StationProblem:
    """
    min custo_energia + preço·P + (ρ/2)·‖P − alvo‖²  sujeito à faixa de SOC,
    com P a potência agregada da estação. ρ fica fixo na construção.
    """

    def __init__(self, station_id, perfil, tariff, credit, rho=0.0):
        self.station_id = station_id
        self.perfil = perfil
        T = perfil.n_steps
        self.block = vehicle_block(perfil, tariff, credit)
        self.target = cp.Parameter(T, value=np.zeros(T))
        self.price = cp.Parameter(T, value=np.zeros(T))
        potencia = self.block.power
        objetivo = self.block.cost + self.price @ potencia
        if rho > 0:
            objetivo = objetivo + (rho / 2.0) * cp.sum_squares(potencia - self.target)
        self.problem = cp.Problem(cp.Minimize(objetivo), self.block.constraints)

    def solve(self, target=None, price=None):
        T = self.perfil.n_steps
        self.target.value = np.zeros(T) if target is None else np.asarray(target, dtype=float)
        self.price.value = np.zeros(T) if price is None else np.asarray(price, dtype=float)
        solve_problem(self.problem, f"estação {self.station_id}")
        # o QP tolera p⁺ e p⁻ juntos quando isso não custa nada; x[s] vem do plano líquido
        pplus, pminus = net_overlap(
            self.perfil, np.maximum(self.block.pplus.value, 0.0), np.maximum(self.block.pminus.value, 0.0),
        )
        return StationSolution(pplus=pplus, pminus=pminus)


def solve_station_subproblem(perfil, station_id, tariff, credit=None, price=None, target=None, rho=0.0):
    """Resolve uma vez o subproblema dos veículos de `station_id`."""
    grupos = perfil.station_groups()
    if station_id not in grupos:
        T = perfil.n_steps
        return StationSolution(pplus=np.zeros((0, T)), pminus=np.zeros((0, T)))
    credit = np.zeros(perfil.n_steps) if credit is None else credit
    problema = StationProblem(station_id, perfil.subset(grupos[station_id]), tariff, credit, rho=rho)
    return problema.solve(target=target, price=price)
