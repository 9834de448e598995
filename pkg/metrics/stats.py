"""
Métricas de validação: z-score por estação, distância de Wasserstein,
utilização da frota e razão média de participação modal.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError
from scipy import stats

from corpus.models import Mode

logger = logging.getLogger(__name__)

DAY_MINUTES = 1440
SHARE_FLOOR = 1e-6


@dataclass(frozen=True)
class StationStats:
    mean: float
    std: float


@dataclass(frozen=True)
class ZScores:
    z: dict = field(hash=False)
    excluded: tuple = ()

    @property
    def mean_abs(self):
        if not self.z:
            return 0.0
        return float(np.mean(np.abs(list(self.z.values()))))


@dataclass(frozen=True)
class Utilization:
    count_rate: float
    time_rate: float
    hourly_occupancy: tuple


@dataclass(frozen=True)
class ModeShare:
    shares: dict = field(hash=False)
    ratio: float | None = None


def daily_counts(bookings, n_days, station_ids):
    """Matriz dias × estações com o número de reservas iniciadas."""
    posicao = {sid: j for j, sid in enumerate(station_ids)}
    contagem = np.zeros((n_days, len(station_ids)))
    for b in bookings:
        dia = int(b.t_start // DAY_MINUTES)
        if b.station_id in posicao and 0 <= dia < n_days:
            contagem[dia, posicao[b.station_id]] += 1
    return contagem


def daily_station_stats(bookings, n_days, station_ids=None):
    """μ_s e σ_s (desvio amostral, ddof=1) das contagens diárias por estação."""
    if n_days < 2:
        raise ValidationError("o desvio diário exige ao menos 2 dias", code='invalid')
    if station_ids is None:
        station_ids = sorted({b.station_id for b in bookings})
    contagem = daily_counts(bookings, n_days, station_ids)
    medias = contagem.mean(axis=0)
    desvios = contagem.std(axis=0, ddof=1)
    return {sid: StationStats(float(m), float(s)) for sid, m, s in zip(station_ids, medias, desvios)}


def station_zscores(sim_counts, real_stats):
    """z = (y_s − μ_s)/σ_s; estações com σ_s = 0 ficam de fora."""
    z = {}
    excluidas = []
    for sid in sorted(real_stats):
        referencia = real_stats[sid]
        if referencia.std <= 0:
            excluidas.append(sid)
            continue
        z[sid] = (float(sim_counts.get(sid, 0.0)) - referencia.mean) / referencia.std
    if excluidas:
        logger.warning("%d estações com σ = 0 excluídas do z-score", len(excluidas))
    return ZScores(z=z, excluded=tuple(excluidas))


def wasserstein_1d(a, b):
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise ValidationError("Wasserstein exige amostras não vazias", code='empty')
    return float(stats.wasserstein_distance(a, b))


def utilization(reservations, vehicles, horizon=DAY_MINUTES):
    """
    count_rate: fração dos veículos com ao menos uma reserva.
    time_rate: fração média do horizonte reservada, só entre os veículos usados.
    """
    frota = [v.vehicle_id for v in vehicles]
    if not frota:
        return Utilization(0.0, 0.0, tuple(0.0 for _ in range(horizon // 60)))

    minutos = {}
    horas = horizon // 60
    ocupacao = np.zeros(horas)
    for r in reservations:
        inicio, fim = max(r.t_start, 0), min(r.t_end, horizon)
        if fim <= inicio:
            continue
        minutos[r.vehicle_id] = minutos.get(r.vehicle_id, 0) + (fim - inicio)
        for h in range(inicio // 60, min((fim - 1) // 60 + 1, horas)):
            ocupacao[h] += min(fim, (h + 1) * 60) - max(inicio, h * 60)

    usados = [vid for vid in frota if minutos.get(vid, 0) > 0]
    count_rate = len(usados) / len(frota)
    time_rate = float(np.mean([minutos[vid] / horizon for vid in usados])) if usados else 0.0
    curva = ocupacao / (60.0 * len(frota))
    return Utilization(count_rate, time_rate, tuple(float(c) for c in curva))


def mode_share(assignments, reference=None):
    """Participação de cada modo e, com referência, a média de max(s/r, r/s)."""
    assignments = [str(m) for m in assignments]
    if not assignments:
        raise ValidationError("nenhuma escolha modal para contar", code='empty')
    total = len(assignments)
    shares = {modo: assignments.count(modo) / total for modo in Mode.values}
    for modo in set(assignments) - set(shares):
        shares[modo] = assignments.count(modo) / total
    if reference is None:
        return ModeShare(shares=shares)

    razoes = []
    for modo, ref in reference.items():
        s = max(shares.get(modo, 0.0), SHARE_FLOOR)
        r = max(float(ref), SHARE_FLOOR)
        razoes.append(max(s / r, r / s))
    return ModeShare(shares=shares, ratio=float(np.mean(razoes)))
