"""
Leitura e escrita dos arquivos CSV do corpus.
A escrita é determinística: ordem de colunas fixa, floats em repr e quebras '\n'.
"""
import csv
import logging
import math
from pathlib import Path
from types import SimpleNamespace

from django.core.exceptions import ValidationError

from corpus.models import (
    Agent, DatasetBundle, Reservation, Station, Trip, Vehicle, attach_vehicles,
)
from corpus.validators import validate_bundle, validate_reservation

logger = logging.getLogger(__name__)


# ─── Conversores de célula ────────────────────────────────────
def parse_int(raw):
    return int(raw)


def parse_float(raw):
    valor = float(raw)
    if not math.isfinite(valor):
        raise ValueError('valor não finito')
    return valor


def parse_optional_int(raw):
    return None if raw == '' else int(raw)


def parse_optional_float(raw):
    return None if raw == '' else parse_float(raw)


def parse_bool(raw):
    texto = raw.strip().lower()
    if texto in ('1', 'true'):
        return True
    if texto in ('0', 'false', ''):
        return False
    raise ValueError('booleano inválido')


def parse_str(raw):
    if raw == '':
        raise ValueError('texto vazio')
    return raw


def format_value(valor):
    if valor is None:
        return ''
    if isinstance(valor, bool):
        return '1' if valor else '0'
    if isinstance(valor, float):
        return repr(float(valor))
    return str(valor)


# ─── Esquemas ─────────────────────────────────────────────────
STATIONS = ('stations.csv', [
    ('station_id', parse_int), ('x', parse_float), ('y', parse_float), ('grid_zone_id', parse_optional_int),
])
VEHICLES = ('vehicles.csv', [
    ('vehicle_id', parse_int), ('station_id', parse_int), ('category', parse_str),
    ('battery_kwh', parse_float), ('max_charge_kw', parse_float), ('max_discharge_kw', parse_float),
    ('consumption_kwh_per_km', parse_float), ('soc_min', parse_float), ('soc_max', parse_float),
])
AGENTS = ('agents.csv', [
    ('agent_id', parse_int), ('age_group', parse_int), ('gender', parse_str),
    ('home_x', parse_float), ('home_y', parse_float), ('car_access', parse_bool),
    ('pt_subscription', parse_str),
])
TRIPS = ('trips.csv', [
    ('trip_id', parse_int), ('agent_id', parse_int),
    ('origin_x', parse_float), ('origin_y', parse_float), ('dest_x', parse_float), ('dest_y', parse_float),
    ('purpose_origin', parse_str), ('purpose_dest', parse_str),
    ('t_dest_start', parse_int), ('distance_m', parse_float),
])
RESERVATIONS = ('reservations.csv', [
    ('reservation_id', parse_int), ('vehicle_id', parse_int), ('agent_id', parse_int),
    ('station_id', parse_int), ('t_start', parse_int), ('t_end', parse_int), ('drive_km', parse_float),
    ('forced_return', parse_bool),
])
DSO_LOAD = ('dso_load.csv', [('timestep_index', parse_int), ('load_mw', parse_float)])

# Colunas que podem faltar em arquivos antigos (valor padrão).
OPTIONAL_COLUMNS = {'forced_return': False}


def read_rows(path, schema, required=False):
    """Lê um CSV e devolve uma lista de dicts já convertidos."""
    nome, colunas = schema
    path = Path(path)
    if not path.exists():
        if required:
            raise ValidationError(f"{nome}: arquivo obrigatório ausente em {path.parent}", code='missing')
        return []

    with path.open(newline='', encoding='utf-8') as f:
        leitor = csv.reader(f)
        try:
            cabecalho = next(leitor)
        except StopIteration:
            raise ValidationError(f"{nome}, linha 1: cabeçalho ausente", code='malformed')
        posicoes = {coluna: i for i, coluna in enumerate(cabecalho)}
        for coluna, _ in colunas:
            if coluna not in posicoes and coluna not in OPTIONAL_COLUMNS:
                raise ValidationError(f"{nome}, linha 1, coluna '{coluna}': coluna ausente", code='malformed')

        linhas = []
        for numero, celulas in enumerate(leitor, start=2):
            if not celulas:
                continue
            if len(celulas) != len(cabecalho):
                raise ValidationError(
                    f"{nome}, linha {numero}: {len(celulas)} campos, esperado {len(cabecalho)}",
                    code='malformed',
                )
            registro = {}
            for coluna, conversor in colunas:
                if coluna not in posicoes:
                    registro[coluna] = OPTIONAL_COLUMNS[coluna]
                    continue
                bruto = celulas[posicoes[coluna]]
                try:
                    registro[coluna] = conversor(bruto)
                except ValueError:
                    raise ValidationError(
                        f"{nome}, linha {numero}, coluna '{coluna}': valor inválido {bruto!r}",
                        code='malformed',
                    )
            linhas.append(registro)
    return linhas


def write_rows(path, schema, registros):
    nome, colunas = schema
    with Path(path).open('w', newline='', encoding='utf-8') as f:
        escritor = csv.writer(f, lineterminator='\n')
        escritor.writerow([coluna for coluna, _ in colunas])
        for registro in registros:
            escritor.writerow([format_value(getattr(registro, coluna)) for coluna, _ in colunas])


# ─── Leitores por arquivo ─────────────────────────────────────
def read_stations(path):
    return tuple(Station(**linha) for linha in read_rows(path, STATIONS, required=True))


def read_vehicles(path):
    return tuple(Vehicle(**linha) for linha in read_rows(path, VEHICLES))


def read_agents(path):
    return tuple(Agent(**linha) for linha in read_rows(path, AGENTS))


def read_trips(path):
    return tuple(Trip(**linha) for linha in read_rows(path, TRIPS))


def read_reservations(path):
    return tuple(Reservation(**linha) for linha in read_rows(path, RESERVATIONS))


def read_dso_load(path):
    linhas = read_rows(path, DSO_LOAD)
    for esperado, linha in enumerate(linhas):
        if linha['timestep_index'] != esperado:
            raise ValidationError(
                f"dso_load.csv, linha {esperado + 2}, coluna 'timestep_index': "
                f"esperado {esperado}, encontrado {linha['timestep_index']}",
                code='malformed',
            )
    return tuple(linha['load_mw'] for linha in linhas)


def write_reservations(path, reservations):
    for r in reservations:
        validate_reservation(r)
    write_rows(path, RESERVATIONS, reservations)


def write_dso_load(path, dso_load):
    linhas = [SimpleNamespace(timestep_index=i, load_mw=float(carga)) for i, carga in enumerate(dso_load)]
    write_rows(path, DSO_LOAD, linhas)


# ─── Dataset completo ─────────────────────────────────────────
def load_dataset(path):
    """Carrega o diretório de dados e valida todas as invariantes."""
    path = Path(path)
    stations = read_stations(path / 'stations.csv')
    vehicles = read_vehicles(path / 'vehicles.csv')
    bundle = DatasetBundle(
        stations=attach_vehicles(stations, vehicles),
        vehicles=vehicles,
        agents=read_agents(path / 'agents.csv'),
        trips=read_trips(path / 'trips.csv'),
        reservations=read_reservations(path / 'reservations.csv'),
        dso_load=read_dso_load(path / 'dso_load.csv'),
    )
    validate_bundle(bundle)
    logger.info(
        "dataset %s: %d estações, %d veículos, %d agentes, %d viagens, %d reservas",
        path, len(bundle.stations), len(bundle.vehicles), len(bundle.agents),
        len(bundle.trips), len(bundle.reservations),
    )
    return bundle


def write_dataset(path, bundle):
    """Grava o bundle; a validação acontece antes de qualquer arquivo ser escrito."""
    validate_bundle(bundle)
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    write_rows(path / 'stations.csv', STATIONS, bundle.stations)
    write_rows(path / 'vehicles.csv', VEHICLES, bundle.vehicles)
    write_rows(path / 'agents.csv', AGENTS, bundle.agents)
    write_rows(path / 'trips.csv', TRIPS, bundle.trips)
    write_rows(path / 'reservations.csv', RESERVATIONS, bundle.reservations)
    write_dso_load(path / 'dso_load.csv', bundle.dso_load)
    return [path / nome for nome in DATASET_FILES]


DATASET_FILES = (
    'stations.csv', 'vehicles.csv', 'agents.csv', 'trips.csv',
    'reservations.csv', 'dso_load.csv',
)
