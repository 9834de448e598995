"""
Objetivos da frota sobre a potência agregada P (kW por passo).

Cada objetivo sabe calcular o próprio valor, o operador proximal usado na
atualização do ADMM, prox(v, a) = argmin g(Z) + (a/2)·‖Z − v‖², e a
expressão equivalente em cvxpy para o solver centralizado.
"""
from dataclasses import dataclass, field

import cvxpy as cp
import numpy as np
from django.conf import settings

KW_PER_MW = 1000.0


class FleetObjective:
    name = ''

    def value(self, power):
        raise NotImplementedError

    def prox(self, v, a):
        raise NotImplementedError

    def expression(self, power):
        """(expressão cvxpy, restrições extras)."""
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroObjective(FleetObjective):
    name = 'zero'

    def value(self, power):
        return 0.0

    def prox(self, v, a):
        return np.asarray(v, dtype=float).copy()

    def expression(self, power):
        return 0, []


@dataclass(frozen=True)
class ReferenceTracking(FleetObjective):
    """(w/2)·‖P − ref‖²"""
    reference: np.ndarray = field(hash=False)
    weight: float = None
    name = 'tracking'

    @property
    def w(self):
        return settings.REFERENCE_TRACKING_WEIGHT if self.weight is None else self.weight

    def value(self, power):
        return 0.5 * self.w * float(np.sum((np.asarray(power) - self.reference) ** 2))

    def prox(self, v, a):
        return (self.w * np.asarray(self.reference) + a * np.asarray(v)) / (self.w + a)

    def expression(self, power):
        return 0.5 * self.w * cp.sum_squares(power - self.reference), []


@dataclass(frozen=True)
class PriceResponse(FleetObjective):
    """
    Resposta a um preço de flexibilidade (CHF/MW) numa hora: recompensa o
    desvio médio da hora em relação à linha de base no sentido pedido
    (+1 mais consumo, −1 menos consumo) e penaliza (γ/2)·‖P − base‖².
    """
    baseline: np.ndarray = field(hash=False)
    hour: int = 0
    steps_per_hour: int = 4
    price: float = 0.0
    direction: int = 1
    weight: float = None
    name = 'price_response'

    @property
    def gamma(self):
        return settings.PRICE_RESPONSE_WEIGHT if self.weight is None else self.weight

    @property
    def mask(self):
        m = np.zeros(len(self.baseline))
        m[self.hour * self.steps_per_hour:(self.hour + 1) * self.steps_per_hour] = 1.0 / self.steps_per_hour
        return m

    @property
    def reward(self):
        return self.direction * self.price / KW_PER_MW

    def deviation(self, power):
        """Desvio médio da hora em relação à linha de base (kW)."""
        return float(self.mask @ (np.asarray(power) - self.baseline))

    def value(self, power):
        desvio = np.asarray(power) - self.baseline
        return 0.5 * self.gamma * float(desvio @ desvio) - self.reward * float(self.mask @ desvio)

    def prox(self, v, a):
        return (self.gamma * self.baseline + a * np.asarray(v) + self.reward * self.mask) / (self.gamma + a)

    def expression(self, power):
        desvio = power - self.baseline
        return 0.5 * self.gamma * cp.sum_squares(desvio) - self.reward * (self.mask @ desvio), []


@dataclass(frozen=True)
class PeakShaving(FleetObjective):
    """π·max(L + P), com L + P nunca acima do teto (o pico da linha de base)."""
    load_kw: np.ndarray = field(hash=False)
    cap_kw: float = np.inf
    price: float = 0.0
    name = 'peak'

    def value(self, power):
        return self.price / KW_PER_MW * float(np.max(self.load_kw + np.asarray(power)))

    def prox(self, v, a):
        w = self.load_kw + np.asarray(v, dtype=float)
        nivel = min(_water_level(w, self.price / KW_PER_MW / a), self.cap_kw)
        return np.minimum(w, nivel) - self.load_kw

    def expression(self, power):
        total = self.load_kw + power
        restricoes = [total <= self.cap_kw] if np.isfinite(self.cap_kw) else []
        return self.price / KW_PER_MW * cp.max(total), restricoes


def _water_level(w, massa):
    """Nível c com Σ (w − c)₊ = massa."""
    if massa <= 0:
        return float(np.max(w))
    ordenado = np.sort(w)[::-1]
    acumulado = np.cumsum(ordenado)
    for k in range(1, len(ordenado) + 1):
        nivel = (acumulado[k - 1] - massa) / k
        if k == len(ordenado) or nivel >= ordenado[k]:
            return float(nivel)
    return float(ordenado[-1])
