"""Relatório de validação entre um log real e um log simulado."""
import json
from pathlib import Path
from types import SimpleNamespace

from corpus.io import parse_float, parse_int, write_rows
from metrics.stats import DAY_MINUTES, daily_counts, daily_station_stats, station_zscores, wasserstein_1d

ZSCORES = ('station_zscores.csv', [
    ('station_id', parse_int), ('real_mean', parse_float), ('real_std', parse_float),
    ('sim_mean', parse_float), ('z', parse_float),
])


def n_days_of(bookings):
    return max((int(b.t_start // DAY_MINUTES) for b in bookings), default=0) + 1


def _start_of_day(b):
    return b.t_start % DAY_MINUTES


def validation_report(real, sim, station_ids=None, real_days=None, sim_days=None):
    """
    Distâncias de Wasserstein (duração, km, início e fim no dia) e z-scores por
    estação da média diária simulada contra a média e o desvio reais.
    """
    real_days = real_days or n_days_of(real)
    sim_days = sim_days or n_days_of(sim)
    if station_ids is None:
        station_ids = sorted({b.station_id for b in real} | {b.station_id for b in sim})

    referencia = daily_station_stats(real, real_days, station_ids)
    medias_sim = daily_counts(sim, sim_days, station_ids).mean(axis=0)
    y = dict(zip(station_ids, (float(m) for m in medias_sim)))
    z = station_zscores(y, referencia)

    relatorio = {
        'n_real': len(real),
        'n_sim': len(sim),
        'real_days': real_days,
        'sim_days': sim_days,
        'wasserstein_duration_min': wasserstein_1d([b.duration_min for b in real], [b.duration_min for b in sim]),
        'wasserstein_distance_km': wasserstein_1d([b.distance_km for b in real], [b.distance_km for b in sim]),
        'wasserstein_start_min': wasserstein_1d([_start_of_day(b) for b in real], [_start_of_day(b) for b in sim]),
        'wasserstein_end_min': wasserstein_1d(
            [_start_of_day(b) + b.duration_min for b in real], [_start_of_day(b) + b.duration_min for b in sim],
        ),
        'mean_abs_zscore': z.mean_abs,
        'stations_excluded': len(z.excluded),
    }
    linhas = [
        SimpleNamespace(
            station_id=sid,
            real_mean=referencia[sid].mean,
            real_std=referencia[sid].std,
            sim_mean=y[sid],
            z=z.z[sid],
        )
        for sid in sorted(z.z)
    ]
    return relatorio, linhas


def write_report(path, relatorio):
    Path(path).write_text(json.dumps(relatorio, indent=2, sort_keys=True) + '\n', encoding='utf-8')


def write_zscores(path, linhas):
    write_rows(path, ZSCORES, linhas)
