"""
Serviços da frota para a distribuidora: envelope de flexibilidade por hora,
redução do pico de carga e a conta monetária de cada lado.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from v2g.admm import admm_schedule, solve_centralized
from v2g.objectives import KW_PER_MW, PeakShaving, PriceResponse, ZeroObjective
from v2g.tariff import discharge_credit, steps_per_hour, time_of_use_tariff, validate_tariff

logger = logging.getLogger(__name__)

METHODS = ('admm', 'centralized')
UP, DOWN = 1, -1
MONOTONE_TOLERANCE_MW = 1e-6


def _solver(method):
    if method not in METHODS:
        raise ValidationError(f"método deve ser um de {METHODS}", code='invalid')
    return admm_schedule if method == 'admm' else solve_centralized


def baseline_schedule(perfil, tariff=None, method='admm'):
    """Plano de custo mínimo sem objetivo da frota."""
    return _solver(method)(perfil, ZeroObjective(), tariff=tariff)


@dataclass(frozen=True)
class FlexibilityEnvelope:
    hours: tuple
    prices: tuple
    up_mw: np.ndarray
    down_mw: np.ndarray
    raw_up_mw: np.ndarray
    raw_down_mw: np.ndarray
    non_converged: int = 0

    @property
    def max_correction_mw(self):
        """Maior ajuste que a monotonização aplicou aos desvios medidos."""
        if self.up_mw.size == 0:
            return 0.0
        return float(max(np.max(self.up_mw - self.raw_up_mw), np.max(self.down_mw - self.raw_down_mw)))

    def rows(self):
        for i, hora in enumerate(self.hours):
            for j, preco in enumerate(self.prices):
                yield hora, preco, float(self.up_mw[i, j]), float(self.down_mw[i, j])


def _envelope_task(args):
    perfil, base, hora, preco, sentido, tariff, method = args
    objetivo = PriceResponse(
        baseline=base,
        hour=hora,
        steps_per_hour=steps_per_hour(perfil.timestep_minutes),
        price=preco,
        direction=sentido,
    )
    plano = _solver(method)(perfil, objetivo, tariff=tariff)
    return max(sentido * objetivo.deviation(plano.aggregate_kw), 0.0) / KW_PER_MW, plano.converged


def flexibility_envelope(perfil, prices, hours=None, tariff=None, method='admm', jobs=1, baseline=None):
    """
    Para cada hora e preço, quanto a frota desloca (MW) a potência média da
    hora para cima e para baixo em relação à linha de base. Preço 0 dá 0.
    O envelope é não decrescente no preço.
    """
    precos = tuple(float(p) for p in prices)
    if any(p < 0 for p in precos):
        raise ValidationError("preços de flexibilidade não podem ser negativos", code='invalid')
    if list(precos) != sorted(precos):
        raise ValidationError("preços de flexibilidade devem estar em ordem crescente", code='invalid')
    por_hora = steps_per_hour(perfil.timestep_minutes)
    horas = tuple(range(perfil.n_steps // por_hora)) if hours is None else tuple(int(h) for h in hours)
    if any(h < 0 or h >= perfil.n_steps // por_hora for h in horas):
        raise ValidationError("hora fora do horizonte do dia", code='invalid')
    tariff = time_of_use_tariff(perfil.timestep_minutes) if tariff is None else validate_tariff(tariff)
    baseline = baseline or baseline_schedule(perfil, tariff, method)
    base = baseline.aggregate_kw

    tarefas, posicoes = [], []
    for i, hora in enumerate(horas):
        for j, preco in enumerate(precos):
            if preco == 0:
                continue
            for sentido in (UP, DOWN):
                tarefas.append((perfil, base, hora, preco, sentido, tariff, method))
                posicoes.append((i, j, sentido))

    if jobs > 1 and len(tarefas) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            resultados = list(executor.map(_envelope_task, tarefas))
    else:
        resultados = [_envelope_task(t) for t in tarefas]

    up = np.zeros((len(horas), len(precos)))
    down = np.zeros((len(horas), len(precos)))
    falhas = 0
    for (i, j, sentido), (mw, convergiu) in zip(posicoes, resultados):
        (up if sentido == UP else down)[i, j] = mw
        falhas += not convergiu
    envelope = FlexibilityEnvelope(
        hours=horas, prices=precos,
        up_mw=np.maximum.accumulate(up, axis=1), down_mw=np.maximum.accumulate(down, axis=1),
        raw_up_mw=up, raw_down_mw=down, non_converged=falhas,
    )
    # o publicado não encolhe com o preço; o medido fica em raw_*
    if envelope.max_correction_mw > MONOTONE_TOLERANCE_MW:
        logger.warning(
            "envelope medido cai com o preço em até %.6f MW; valores publicados monotonizados",
            envelope.max_correction_mw,
        )
    logger.info(
        "envelope: %d horas × %d preços, %d otimizações, %d sem convergência",
        len(horas), len(precos), len(tarefas), falhas,
    )
    return envelope


@dataclass(frozen=True)
class PeakShaveResult:
    schedule: object
    baseline: object
    price: float
    peak_before_mw: float
    peak_after_mw: float
    shaved: bool
    converged: bool = True

    @property
    def flexibility_mw(self):
        return max(self.peak_before_mw - self.peak_after_mw, 0.0)


def peak_shave(perfil, dso_load_mw, price, tariff=None, method='admm', baseline=None):
    """
    Reduz o pico de carga L + P da distribuidora ao preço `price` (CHF/MW).
    Se o plano otimizado ficar com pico acima do da linha de base, devolve a
    linha de base.
    """
    carga = np.asarray(dso_load_mw, dtype=float)
    if carga.shape != (perfil.n_steps,):
        raise ValidationError(
            f"dso_load tem {carga.size} passos; o horizonte tem {perfil.n_steps}", code='invalid',
        )
    if price < 0:
        raise ValidationError("preço de pico negativo", code='invalid')
    tariff = time_of_use_tariff(perfil.timestep_minutes) if tariff is None else validate_tariff(tariff)
    baseline = baseline or baseline_schedule(perfil, tariff, method)
    carga_kw = carga * KW_PER_MW
    pico_antes = float(np.max(carga_kw + baseline.aggregate_kw))

    if perfil.n_vehicles == 0 or price == 0:
        return PeakShaveResult(baseline, baseline, price, pico_antes / KW_PER_MW, pico_antes / KW_PER_MW, False)

    objetivo = PeakShaving(load_kw=carga_kw, cap_kw=pico_antes, price=price)
    plano = _solver(method)(perfil, objetivo, tariff=tariff)
    pico_depois = float(np.max(carga_kw + plano.aggregate_kw))
    if pico_depois > pico_antes:
        logger.warning(
            "pico otimizado %.4f MW acima da linha de base %.4f MW; mantendo a linha de base",
            pico_depois / KW_PER_MW, pico_antes / KW_PER_MW,
        )
        return PeakShaveResult(
            baseline, baseline, price, pico_antes / KW_PER_MW, pico_antes / KW_PER_MW, False, plano.converged,
        )
    return PeakShaveResult(plano, baseline, price, pico_antes / KW_PER_MW, pico_depois / KW_PER_MW, True, plano.converged)


@dataclass(frozen=True)
class MoneyResult:
    price: float
    flexibility_mw: float
    dso_savings: float
    fleet_profit: float
    delta_energy_cost: float

    @property
    def win_win(self):
        return self.dso_savings > 0 and self.fleet_profit > 0


def energy_bill(schedule, tariff, reimbursement=None):
    """Conta de energia (CHF): só importação, ou líquida com reembolso."""
    credit = discharge_credit(tariff, reimbursement)
    dt = schedule.dt_hours
    return float(np.sum(schedule.pplus @ (tariff * dt)) - np.sum(schedule.pminus @ (credit * dt)))


def monetary_accounting(schedule, baseline, price, tariff, peak_before_mw, peak_after_mw,
                        peak_cost=None, reimbursement=None):
    """
    Economia da distribuidora: (custo de pico − π)·flex.
    Lucro da frota: π·flex − variação da conta de energia.
    Sem flexibilidade não há negócio e os dois ficam em zero.
    """
    tariff = validate_tariff(tariff)
    delta = energy_bill(schedule, tariff, reimbursement) - energy_bill(baseline, tariff, reimbursement)
    return settle(price, peak_before_mw - peak_after_mw, delta, peak_cost)


def settle(price, flexibility_mw, delta_energy_cost, peak_cost=None):
    peak_cost = settings.PEAK_COST_CHF_PER_MW if peak_cost is None else peak_cost
    if peak_cost < 0:
        raise ValidationError("custo de pico negativo", code='invalid')
    flex = max(flexibility_mw, 0.0)
    if flex <= 0:
        return MoneyResult(price, 0.0, 0.0, 0.0, 0.0)
    return MoneyResult(
        price=price,
        flexibility_mw=flex,
        dso_savings=(peak_cost - price) * flex,
        fleet_profit=price * flex - delta_energy_cost,
        delta_energy_cost=delta_energy_cost,
    )
