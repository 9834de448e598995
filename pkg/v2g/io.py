"""Leitura e escrita de schedule.csv, envelope.csv, peaks.csv e money.csv."""
from types import SimpleNamespace

from corpus.io import parse_bool, parse_float, parse_int, parse_str, read_rows, write_rows

# soc é o estado ao fim do passo
SCHEDULE = ('schedule.csv', [
    ('vehicle_id', parse_int), ('timestep', parse_int), ('power_kw', parse_float), ('soc', parse_float),
])
ENVELOPE = ('envelope.csv', [
    ('hour', parse_int), ('price_chf_per_mw', parse_float), ('up_mw', parse_float), ('down_mw', parse_float),
])
PEAKS = ('peaks.csv', [
    ('scenario', parse_str), ('price', parse_float), ('peak_before_mw', parse_float),
    ('peak_after_mw', parse_float), ('dso_savings', parse_float), ('fleet_profit', parse_float),
    ('delta_energy_cost', parse_float),
])
MONEY = ('money.csv', [
    ('scenario', parse_str), ('price', parse_float), ('flexibility_mw', parse_float),
    ('dso_savings', parse_float), ('fleet_profit', parse_float), ('win_win', parse_bool),
])


def write_schedule(path, schedule):
    potencia = schedule.power
    write_rows(path, SCHEDULE, [
        SimpleNamespace(
            vehicle_id=int(vid),
            timestep=t,
            power_kw=float(potencia[i, t]),
            soc=float(schedule.soc[i, t + 1]),
        )
        for i, vid in enumerate(schedule.vehicle_ids)
        for t in range(potencia.shape[1])
    ])


def read_schedule(path):
    return read_rows(path, SCHEDULE, required=True)


def write_envelope(path, envelope):
    write_rows(path, ENVELOPE, [
        SimpleNamespace(hour=h, price_chf_per_mw=p, up_mw=up, down_mw=down)
        for h, p, up, down in envelope.rows()
    ])


def read_envelope(path):
    return read_rows(path, ENVELOPE, required=True)


def write_peaks(path, linhas):
    write_rows(path, PEAKS, linhas)


def read_peaks(path):
    return [SimpleNamespace(**linha) for linha in read_rows(path, PEAKS, required=True)]


def write_money(path, linhas):
    write_rows(path, MONEY, linhas)
