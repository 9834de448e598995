"""
Simulador por eventos: 48 distribuições (hora do dia × dia útil/fim de semana)
ajustadas a um log de reservas, e sorteio de dias sintéticos de reservas.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from corpus.scenarios import derive_seed
from eventsim.distributions import MIN_SAMPLES, ExpPowerParams, fit_exp_power

logger = logging.getLogger(__name__)

DAY_MINUTES = 1440
HALF_HOUR = 30
LAPLACE_ALPHA = 0.5
WEEKEND = (5, 6)


@dataclass(frozen=True)
class Booking:
    station_id: int
    t_start: float
    duration_min: float
    distance_km: float

    @property
    def day(self):
        return int(self.t_start // DAY_MINUTES)

    @property
    def hour(self):
        return int((self.t_start % DAY_MINUTES) // 60)


@dataclass(frozen=True)
class EventSlot:
    hour: int
    is_weekend: bool
    poisson_rate: float
    station_ids: tuple
    station_probs: tuple
    duration: ExpPowerParams
    distance: ExpPowerParams
    n_bookings: int = 0
    fallback: bool = False


@dataclass(frozen=True)
class EventDistributionSet:
    slots: dict = field(hash=False)

    def slot(self, hour, is_weekend):
        return self.slots[(hour, bool(is_weekend))]

    @property
    def station_ids(self):
        return next(iter(self.slots.values())).station_ids

    def expected_daily_total(self, is_weekend):
        return sum(2 * self.slot(h, is_weekend).poisson_rate for h in range(24))


def default_calendar(n_days, start_weekday=None):
    """is_weekend por dia; o dia 0 cai em `start_weekday` (0 = segunda)."""
    inicio = settings.FLEETGRID_START_WEEKDAY if start_weekday is None else start_weekday
    return tuple((inicio + d) % 7 in WEEKEND for d in range(n_days))


def bookings_from_reservations(reservations):
    return tuple(
        Booking(r.station_id, float(r.t_start), float(r.t_end - r.t_start), float(r.drive_km))
        for r in reservations
    )


def _smoothed(contagem, station_ids, alpha):
    n = np.array([contagem.get(sid, 0) for sid in station_ids], dtype=float)
    probs = (n + alpha) / (n.sum() + alpha * len(station_ids))
    return tuple(float(p) for p in probs)


def fit_event_distributions(bookings, calendar, station_ids=None, alpha=LAPLACE_ALPHA):
    """
    Ajusta, por (hora, fim de semana), a taxa de Poisson por meia hora, a
    categórica de estações com suavização de Laplace e as distribuições de
    duração (min) e distância (km). Faixas com menos de 20 amostras positivas
    herdam o ajuste global.
    """
    if not bookings:
        raise ValidationError("log de reservas vazio", code='empty')
    calendar = tuple(bool(w) for w in calendar)
    dias_uteis = calendar.count(False)
    fins_de_semana = calendar.count(True)
    if not dias_uteis or not fins_de_semana:
        raise ValidationError(
            "o calendário precisa de ao menos um dia útil e um dia de fim de semana", code='invalid',
        )
    for b in bookings:
        if not 0 <= b.day < len(calendar):
            raise ValidationError(
                f"reserva na estação {b.station_id} começa no dia {b.day}, fora do calendário de "
                f"{len(calendar)} dias", code='invalid',
            )
    if station_ids is None:
        station_ids = sorted({b.station_id for b in bookings})
    station_ids = tuple(int(s) for s in station_ids)

    duracoes = np.array([b.duration_min for b in bookings], dtype=float)
    distancias = np.array([b.distance_km for b in bookings], dtype=float)
    duracao_global = fit_exp_power(duracoes[duracoes > 0])
    distancia_global = fit_exp_power(distancias[distancias > 0])
    contagem_global = {}
    for b in bookings:
        contagem_global[b.station_id] = contagem_global.get(b.station_id, 0) + 1

    por_faixa = {}
    for i, b in enumerate(bookings):
        por_faixa.setdefault((b.hour, calendar[b.day]), []).append(i)

    slots = {}
    for fim_de_semana in (False, True):
        n_dias = fins_de_semana if fim_de_semana else dias_uteis
        for hora in range(24):
            indices = por_faixa.get((hora, fim_de_semana), [])
            taxa = len(indices) / n_dias / 2.0
            contagem = {}
            for i in indices:
                contagem[bookings[i].station_id] = contagem.get(bookings[i].station_id, 0) + 1
            probs = _smoothed(contagem or contagem_global, station_ids, alpha)

            d = duracoes[indices] if indices else duracoes[:0]
            k = distancias[indices] if indices else distancias[:0]
            d, k = d[d > 0], k[k > 0]
            fallback = len(d) < MIN_SAMPLES or len(k) < MIN_SAMPLES
            if fallback:
                logger.warning(
                    "faixa %02dh %s: %d amostras, usando o ajuste global",
                    hora, 'fim de semana' if fim_de_semana else 'dia útil', len(indices),
                )
            slots[(hora, fim_de_semana)] = EventSlot(
                hour=hora,
                is_weekend=fim_de_semana,
                poisson_rate=taxa,
                station_ids=station_ids,
                station_probs=probs,
                duration=duracao_global if len(d) < MIN_SAMPLES else fit_exp_power(d),
                distance=distancia_global if len(k) < MIN_SAMPLES else fit_exp_power(k),
                n_bookings=len(indices),
                fallback=fallback,
            )
    logger.info("distribuições ajustadas sobre %d reservas e %d dias", len(bookings), len(calendar))
    return EventDistributionSet(slots=slots)


def sample_day(dist, is_weekend, seed=None, day_index=0):
    """Sorteia um dia: n(t) ~ Poisson por meia hora e triplas i.i.d. da faixa da hora."""
    rng = np.random.default_rng(seed)
    ids = np.array(dist.station_ids)
    reservas = []
    for meia_hora in range(48):
        slot = dist.slot(meia_hora // 2, is_weekend)
        n = int(rng.poisson(slot.poisson_rate))
        if n == 0:
            continue
        estacoes = ids[rng.choice(len(ids), size=n, p=slot.station_probs)]
        inicios = day_index * DAY_MINUTES + meia_hora * HALF_HOUR + rng.uniform(0.0, HALF_HOUR, size=n)
        duracoes = slot.duration.sample(rng, n)
        distancias = slot.distance.sample(rng, n)
        ordem = np.argsort(inicios, kind='stable')
        reservas.extend(
            Booking(int(estacoes[i]), float(inicios[i]), float(duracoes[i]), float(distancias[i]))
            for i in ordem
        )
    return tuple(reservas)


def sample_days(dist, calendar, seed=None):
    seed = 0 if seed is None else seed
    reservas = []
    for dia, fim_de_semana in enumerate(calendar):
        reservas.extend(sample_day(dist, fim_de_semana, derive_seed(seed, 'dia', dia), day_index=dia))
    return tuple(reservas)
