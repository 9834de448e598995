"""
ADMM na forma de compartilhamento entre estações.

Cada estação resolve o próprio QP (v2g.station) puxada para um alvo; o
objetivo da frota entra só pela atualização de Z via operador proximal.
ρ é dado em por unidade da potência base (ADMM_DEFAULTS['power_base_kw']) e
convertido para kW; os resíduos também são medidos em por unidade.
"""
import logging

import cvxpy as cp
import numpy as np
from django.conf import settings

from v2g.objectives import ZeroObjective
from v2g.schedule import build_schedule
from v2g.station import StationProblem, solve_problem, vehicle_block
from v2g.tariff import discharge_credit, time_of_use_tariff, validate_tariff
from v2g.tube import net_overlap

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-4


def _tarifas(perfil, tariff, credit):
    tariff = time_of_use_tariff(perfil.timestep_minutes) if tariff is None else validate_tariff(tariff)
    credit = discharge_credit(tariff) if credit is None else validate_tariff(credit)
    return tariff, credit


def _vazio(perfil, objective, tariff, credit):
    return build_schedule(perfil, np.zeros((0, perfil.n_steps)), objective, tariff, credit)


def admm_schedule(perfil, objective=None, tariff=None, credit=None, rho=None, max_iter=None,
                  eps=None, warm_start=None):
    """
    Plano da frota pelo ADMM de compartilhamento.

    Sem convergência em `max_iter` iterações devolve a melhor iteração
    (menor resíduo) com `converged=False`, sem levantar exceção.
    """
    objective = objective or ZeroObjective()
    tariff, credit = _tarifas(perfil, tariff, credit)
    parametros = settings.ADMM_DEFAULTS
    base = float(parametros['power_base_kw'])
    rho_pu = float(rho if rho is not None else parametros['rho'])
    max_iter = int(max_iter or parametros['max_iter'])
    eps = float(eps if eps is not None else parametros.get('eps', DEFAULT_EPS))
    rho_kw = rho_pu / base ** 2

    grupos = perfil.station_groups()
    if not grupos:
        return _vazio(perfil, objective, tariff, credit)
    indices = list(grupos.values())
    N, T = len(indices), perfil.n_steps

    if isinstance(objective, ZeroObjective):
        # sem acoplamento: cada estação no seu ótimo
        potencia = np.zeros((perfil.n_vehicles, T))
        for sid, idx in grupos.items():
            solucao = StationProblem(sid, perfil.subset(idx), tariff, credit).solve()
            potencia[idx] = solucao.pplus - solucao.pminus
        return build_schedule(perfil, potencia, objective, tariff, credit, iterations=1)

    problemas = [StationProblem(sid, perfil.subset(idx), tariff, credit, rho=rho_kw) for sid, idx in grupos.items()]
    potencia = np.zeros((perfil.n_vehicles, T))
    if warm_start is not None:
        potencia = np.array(warm_start.power, dtype=float)
    x = np.array([potencia[idx].sum(axis=0) for idx in indices])
    x_medio = x.mean(axis=0)
    z_medio = x_medio.copy()
    u = np.zeros(T)
    limite = eps * np.sqrt(N * T)

    residuos = []
    melhor, melhor_potencia = np.inf, potencia.copy()
    convergiu = False
    for k in range(1, max_iter + 1):
        alvos = x - x_medio + z_medio - u
        for s, (problema, idx) in enumerate(zip(problemas, indices)):
            solucao = problema.solve(target=alvos[s])
            potencia[idx] = solucao.pplus - solucao.pminus
            x[s] = solucao.power
        x_medio = x.mean(axis=0)
        z_anterior = z_medio
        z_medio = objective.prox(N * (u + x_medio), rho_kw / N) / N
        u = u + x_medio - z_medio

        primal = np.sqrt(N) * np.linalg.norm(x_medio - z_medio) / base
        dual = rho_pu * np.sqrt(N) * np.linalg.norm(z_medio - z_anterior) / base
        residuos.append((float(primal), float(dual)))
        if max(primal, dual) < melhor:
            melhor, melhor_potencia = max(primal, dual), potencia.copy()
        if k % 50 == 0:
            logger.debug("ADMM iteração %d: primal %.2e, dual %.2e", k, primal, dual)
        if primal <= limite and dual <= limite:
            convergiu = True
            melhor_potencia = potencia.copy()
            break

    if convergiu:
        logger.info("ADMM (%s) convergiu em %d iterações com %d estações", objective.name, k, N)
    else:
        logger.warning(
            "ADMM (%s) não convergiu em %d iterações; usando a melhor iteração (resíduo %.2e)",
            objective.name, max_iter, melhor,
        )
    return build_schedule(
        perfil, melhor_potencia, objective, tariff, credit,
        iterations=k, converged=convergiu, residuals=residuos,
    )


def solve_centralized(perfil, objective=None, tariff=None, credit=None):
    """O mesmo modelo com a frota inteira num único problema cvxpy."""
    objective = objective or ZeroObjective()
    tariff, credit = _tarifas(perfil, tariff, credit)
    if perfil.n_vehicles == 0:
        return _vazio(perfil, objective, tariff, credit)
    bloco = vehicle_block(perfil, tariff, credit)
    expressao, restricoes = objective.expression(bloco.power)
    problema = cp.Problem(cp.Minimize(bloco.cost + expressao), bloco.constraints + restricoes)
    solve_problem(problema, f"frota centralizada ({objective.name})")
    pplus, pminus = net_overlap(perfil, np.maximum(bloco.pplus.value, 0.0), np.maximum(bloco.pminus.value, 0.0))
    potencia = pplus - pminus
    return build_schedule(perfil, potencia, objective, tariff, credit, iterations=1)
