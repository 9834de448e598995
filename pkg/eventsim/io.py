"""Leitura e escrita de distributions.csv, station_probs.csv e bookings.csv."""
from types import SimpleNamespace

from django.core.exceptions import ValidationError

from corpus.io import parse_bool, parse_float, parse_int, read_rows, write_rows
from eventsim.distributions import ExpPowerParams
from eventsim.model import Booking, EventDistributionSet, EventSlot

DISTRIBUTIONS = ('distributions.csv', [
    ('hour', parse_int), ('is_weekend', parse_bool), ('poisson_rate', parse_float),
    ('duration_lambda', parse_float), ('duration_k', parse_float),
    ('distance_lambda', parse_float), ('distance_k', parse_float),
    ('n_bookings', parse_int), ('fallback', parse_bool),
])
STATION_PROBS = ('station_probs.csv', [
    ('hour', parse_int), ('is_weekend', parse_bool), ('station_id', parse_int), ('prob', parse_float),
])
BOOKINGS = ('bookings.csv', [
    ('station_id', parse_int), ('t_start', parse_float), ('duration_min', parse_float),
    ('distance_km', parse_float),
])


def write_distributions(dist, distributions_path, probs_path):
    faixas = [dist.slots[chave] for chave in sorted(dist.slots, key=lambda c: (c[1], c[0]))]
    write_rows(distributions_path, DISTRIBUTIONS, [
        SimpleNamespace(
            hour=s.hour,
            is_weekend=s.is_weekend,
            poisson_rate=s.poisson_rate,
            duration_lambda=s.duration.rate,
            duration_k=s.duration.k,
            distance_lambda=s.distance.rate,
            distance_k=s.distance.k,
            n_bookings=s.n_bookings,
            fallback=s.fallback,
        )
        for s in faixas
    ])
    write_rows(probs_path, STATION_PROBS, [
        SimpleNamespace(hour=s.hour, is_weekend=s.is_weekend, station_id=sid, prob=p)
        for s in faixas
        for sid, p in zip(s.station_ids, s.station_probs)
    ])


def read_distributions(distributions_path, probs_path):
    probs = {}
    for linha in read_rows(probs_path, STATION_PROBS, required=True):
        probs.setdefault((linha['hour'], linha['is_weekend']), []).append((linha['station_id'], linha['prob']))

    slots = {}
    for linha in read_rows(distributions_path, DISTRIBUTIONS, required=True):
        chave = (linha['hour'], linha['is_weekend'])
        pares = probs.get(chave)
        if not pares:
            raise ValidationError(
                f"station_probs.csv: faixa {chave[0]}h {'fim de semana' if chave[1] else 'dia útil'} ausente",
                code='malformed',
            )
        slots[chave] = EventSlot(
            hour=linha['hour'],
            is_weekend=linha['is_weekend'],
            poisson_rate=linha['poisson_rate'],
            station_ids=tuple(sid for sid, _ in pares),
            station_probs=tuple(p for _, p in pares),
            duration=ExpPowerParams(linha['duration_lambda'], linha['duration_k']),
            distance=ExpPowerParams(linha['distance_lambda'], linha['distance_k']),
            n_bookings=linha['n_bookings'],
            fallback=linha['fallback'],
        )
    faltando = [(h, w) for w in (False, True) for h in range(24) if (h, w) not in slots]
    if faltando:
        raise ValidationError(f"distributions.csv: {len(faltando)} faixas ausentes", code='malformed')
    return EventDistributionSet(slots=slots)


def write_bookings(path, bookings):
    write_rows(path, BOOKINGS, bookings)


def read_bookings(path):
    return tuple(Booking(**linha) for linha in read_rows(path, BOOKINGS, required=True))
