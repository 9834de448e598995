"""
Escalonamento da frota por estação e atribuição de categorias aos veículos novos.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError

from corpus.exceptions import ConvergenceError
from corpus.models import Vehicle, attach_vehicles

logger = logging.getLogger(__name__)

FLEET_TOLERANCE = 0.005
MAX_ROUNDS = 10000


@dataclass(frozen=True)
class FleetScalePlan:
    v_desired: int
    v_current: int
    factor: float
    multipliers: dict = field(hash=False)
    counts: dict = field(hash=False)
    rounds: int = 1

    @property
    def total(self):
        return sum(self.counts.values())


def scaled_counts(current, multipliers):
    """round(ĉ·n) com arredondamento para cima no meio, limitado a zero."""
    current = np.asarray(current, dtype=float)
    valores = np.floor(np.asarray(multipliers, dtype=float) * current + 0.5)
    return np.maximum(valores, 0).astype(np.int64)


def scale_fleet(stations, v_desired, sigma=0.3, seed=None, base_counts=None, max_rounds=MAX_ROUNDS):
    """
    Sorteia ĉ ~ N(c, sigma) por estação até o total ficar a menos de 0,5% de v_desired.
    base_counts dá a contagem de partida das estações novas (sem veículos).
    """
    if v_desired <= 0:
        raise ValidationError(f"v_desired deve ser positivo (recebido {v_desired})", code='invalid')
    base_counts = base_counts or {}
    ordenadas = sorted(stations, key=lambda s: s.station_id)
    ids = [s.station_id for s in ordenadas]
    atuais = np.array(
        [len(s.vehicle_ids) or base_counts.get(s.station_id, 0) for s in ordenadas], dtype=np.int64,
    )
    v_current = int(atuais.sum())
    if v_current == 0:
        raise ValidationError("frota atual vazia", code='empty')

    c = v_desired / v_current
    rng = np.random.default_rng(seed)
    for rodada in range(1, max_rounds + 1):
        multiplicadores = rng.normal(c, sigma, size=len(ids))
        contagens = scaled_counts(atuais, multiplicadores)
        if abs(int(contagens.sum()) - v_desired) / v_desired < FLEET_TOLERANCE:
            logger.info("plano de frota aceito na rodada %d: %d veículos", rodada, contagens.sum())
            return FleetScalePlan(
                v_desired=v_desired,
                v_current=v_current,
                factor=c,
                multipliers={i: float(m) for i, m in zip(ids, multiplicadores)},
                counts={i: int(n) for i, n in zip(ids, contagens)},
                rounds=rodada,
            )
    raise ConvergenceError(
        f"nenhum plano de frota dentro de 0,5% de {v_desired} em {max_rounds} rodadas"
    )


def assign_vehicle_categories(n, category_shares, seed=None):
    """Sorteios i.i.d. de categoria com as participações atuais."""
    if not category_shares:
        raise ValidationError("category_shares vazio", code='empty')
    chaves = sorted(category_shares)
    p = np.array([category_shares[k] for k in chaves], dtype=float)
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValidationError(f"category_shares soma {p.sum()!r}, esperado 1", code='invalid')
    rng = np.random.default_rng(seed)
    return [chaves[i] for i in rng.choice(len(chaves), size=n, p=p)]


def apply_fleet_plan(stations, vehicles, plan, category_shares, seed=None):
    """
    Materializa o plano: remove os veículos de maior id onde a contagem cai
    e cria veículos novos (ids após o maior existente) onde ela sobe.
    """
    por_estacao = {}
    for v in sorted(vehicles, key=lambda v: v.vehicle_id):
        por_estacao.setdefault(v.station_id, []).append(v)

    mantidos = []
    novos = []
    for s in sorted(stations, key=lambda s: s.station_id):
        atuais = por_estacao.get(s.station_id, [])
        alvo = plan.counts.get(s.station_id, len(atuais))
        mantidos.extend(atuais[:alvo])
        novos.extend([s.station_id] * max(0, alvo - len(atuais)))

    categorias = assign_vehicle_categories(len(novos), category_shares, seed=seed)
    proximo = max((v.vehicle_id for v in vehicles), default=-1) + 1
    criados = [
        Vehicle.from_model(proximo + i, station_id, categoria)
        for i, (station_id, categoria) in enumerate(zip(novos, categorias))
    ]
    frota = tuple(mantidos + criados)
    logger.info("frota aplicada: %d mantidos, %d criados", len(mantidos), len(criados))
    return attach_vehicles(stations, frota), frota
