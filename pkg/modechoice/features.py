"""
Atributos de viagem usados pelo modelo de escolha modal.

A ordem das colunas em FEATURE_NAMES é a mesma do arquivo labeled_trips.csv
e da matriz que o modelo recebe.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from corpus.models import Gender, PtSubscription, Purpose
from corpus.scenarios import desk_centers
from population.generator import nearest_stations

PURPOSES = tuple(Purpose.values)
GENDERS = tuple(Gender.values)
PT_SUBSCRIPTIONS = tuple(PtSubscription.values)

FEATURE_NAMES = (
    ('distance_m',)
    + tuple(f'purpose_origin_{p}' for p in PURPOSES)
    + tuple(f'purpose_dest_{p}' for p in PURPOSES)
    + ('pt_access_origin', 'pt_access_dest',
       'station_distance_origin_m', 'station_distance_dest_m',
       'origin_hour', 'origin_day', 'dest_hour', 'dest_day',
       'age_group')
    + tuple(f'gender_{g}' for g in GENDERS)
    + ('car_access',)
    + tuple(f'pt_{s}' for s in PT_SUBSCRIPTIONS)
)
N_FEATURES = len(FEATURE_NAMES)
COLUMN = {nome: i for i, nome in enumerate(FEATURE_NAMES)}


@dataclass(frozen=True)
class TripFeatures:
    distance_m: float
    purpose_origin: str
    purpose_dest: str
    pt_access_origin: float
    pt_access_dest: float
    station_distance_origin_m: float
    station_distance_dest_m: float
    origin_hour: int
    origin_day: int
    dest_hour: int
    dest_day: int
    age_group: int
    gender: str
    car_access: bool
    pt_subscription: str

    def __post_init__(self):
        for hora in (self.origin_hour, self.dest_hour):
            if not 0 <= hora <= 23:
                raise ValidationError(f"hora {hora} fora de 0..23", code='invalid')
        for dia in (self.origin_day, self.dest_day):
            if not 0 <= dia <= 6:
                raise ValidationError(f"dia {dia} fora de 0..6", code='invalid')
        if self.purpose_origin not in PURPOSES or self.purpose_dest not in PURPOSES:
            raise ValidationError("propósito inválido", code='invalid')

    def as_array(self):
        linha = np.zeros(N_FEATURES, dtype=float)
        linha[COLUMN['distance_m']] = self.distance_m
        linha[COLUMN[f'purpose_origin_{self.purpose_origin}']] = 1.0
        linha[COLUMN[f'purpose_dest_{self.purpose_dest}']] = 1.0
        linha[COLUMN['pt_access_origin']] = self.pt_access_origin
        linha[COLUMN['pt_access_dest']] = self.pt_access_dest
        linha[COLUMN['station_distance_origin_m']] = self.station_distance_origin_m
        linha[COLUMN['station_distance_dest_m']] = self.station_distance_dest_m
        linha[COLUMN['origin_hour']] = self.origin_hour
        linha[COLUMN['origin_day']] = self.origin_day
        linha[COLUMN['dest_hour']] = self.dest_hour
        linha[COLUMN['dest_day']] = self.dest_day
        linha[COLUMN['age_group']] = self.age_group
        linha[COLUMN[f'gender_{self.gender}']] = 1.0
        linha[COLUMN['car_access']] = float(self.car_access)
        linha[COLUMN[f'pt_{self.pt_subscription}']] = 1.0
        return linha


@dataclass(frozen=True)
class PtAccessibilityGrid:
    """Nota de acessibilidade ao transporte público (0 a 4) em células quadradas."""
    origin_x: float
    origin_y: float
    cell_m: float
    scores: np.ndarray = field(hash=False, compare=False)

    def score(self, x, y):
        return float(self.scores_at([x], [y])[0])

    def scores_at(self, xs, ys):
        n_linhas, n_colunas = self.scores.shape
        # célula cujo centro é o mais próximo; fora da grade vale a borda
        i = np.clip(np.floor((np.asarray(ys, dtype=float) - self.origin_y) / self.cell_m), 0, n_linhas - 1)
        j = np.clip(np.floor((np.asarray(xs, dtype=float) - self.origin_x) / self.cell_m), 0, n_colunas - 1)
        return self.scores[i.astype(np.int64), j.astype(np.int64)]


def default_pt_grid(centers=None, cell_m=None, margin_m=60000.0):
    """Grade derivada dos centros populacionais: nota alta no centro, caindo para a periferia."""
    centers = centers or settings.POPULATION_CENTERS
    cell_m = cell_m or settings.PT_GRID_CELL_M
    xs = [c[0] for c in centers]
    ys = [c[1] for c in centers]
    x0, y0 = min(xs) - margin_m, min(ys) - margin_m
    n_colunas = int(math.ceil((max(xs) + margin_m - x0) / cell_m))
    n_linhas = int(math.ceil((max(ys) + margin_m - y0) / cell_m))
    cx = x0 + (np.arange(n_colunas) + 0.5) * cell_m
    cy = y0 + (np.arange(n_linhas) + 0.5) * cell_m
    gx, gy = np.meshgrid(cx, cy)
    nota = np.zeros_like(gx)
    for x, y, sigma, _ in centers:
        nota = np.maximum(nota, np.exp(-((gx - x) ** 2 + (gy - y) ** 2) / (2.0 * (2.0 * sigma) ** 2)))
    return PtAccessibilityGrid(x0, y0, cell_m, np.round(4.0 * nota, 2))


def desk_pt_grid(scale):
    """Grade para o mundo de bancada: centros e células encolhidos por √scale."""
    return default_pt_grid(desk_centers(scale), settings.PT_GRID_CELL_M * math.sqrt(scale))


def _available_stations(stations, idle_counts):
    return tuple(s for s in stations if idle_counts.get(s.station_id, 0) > 0)


def _station_distances(xs, ys, disponiveis):
    if not disponiveis:
        return np.full(len(xs), settings.STATION_DISTANCE_SENTINEL_M)
    _, distancias = nearest_stations(xs, ys, disponiveis)
    return distancias


def extract_features(trip, agent, stations, idle_counts, t_decision, grid, day=0):
    """
    Atributos de uma viagem no instante de decisão.
    idle_counts: station_id -> veículos livres; estações sem veículo livre não contam
    para as distâncias (sem nenhuma, usa-se a distância sentinela).
    """
    disponiveis = _available_stations(stations, idle_counts)
    distancias = _station_distances(
        [trip.origin_x, trip.dest_x], [trip.origin_y, trip.dest_y], disponiveis,
    )
    t_decision = max(int(t_decision), 0)
    return TripFeatures(
        distance_m=trip.distance_m,
        purpose_origin=trip.purpose_origin,
        purpose_dest=trip.purpose_dest,
        pt_access_origin=grid.score(trip.origin_x, trip.origin_y),
        pt_access_dest=grid.score(trip.dest_x, trip.dest_y),
        station_distance_origin_m=float(distancias[0]),
        station_distance_dest_m=float(distancias[1]),
        origin_hour=(t_decision // 60) % 24,
        origin_day=(day + t_decision // 1440) % 7,
        dest_hour=(trip.t_dest_start // 60) % 24,
        dest_day=(day + trip.t_dest_start // 1440) % 7,
        age_group=agent.age_group,
        gender=agent.gender,
        car_access=agent.car_access,
        pt_subscription=agent.pt_subscription,
    )


def feature_matrix(trips, agents, stations, idle_counts, t_decisions, grid, days=0):
    """Versão vetorizada de extract_features para muitas viagens de uma vez."""
    n = len(trips)
    X = np.zeros((n, N_FEATURES), dtype=float)
    if n == 0:
        return X
    por_id = {a.agent_id: a for a in agents}
    disponiveis = _available_stations(stations, idle_counts)
    ox = np.array([t.origin_x for t in trips])
    oy = np.array([t.origin_y for t in trips])
    dx = np.array([t.dest_x for t in trips])
    dy = np.array([t.dest_y for t in trips])
    decisao = np.maximum(np.asarray(t_decisions, dtype=np.int64), 0)
    chegada = np.array([t.t_dest_start for t in trips], dtype=np.int64)
    dias = np.broadcast_to(np.asarray(days, dtype=np.int64), (n,))

    X[:, COLUMN['distance_m']] = [t.distance_m for t in trips]
    X[:, COLUMN['pt_access_origin']] = grid.scores_at(ox, oy)
    X[:, COLUMN['pt_access_dest']] = grid.scores_at(dx, dy)
    X[:, COLUMN['station_distance_origin_m']] = _station_distances(ox, oy, disponiveis)
    X[:, COLUMN['station_distance_dest_m']] = _station_distances(dx, dy, disponiveis)
    X[:, COLUMN['origin_hour']] = (decisao // 60) % 24
    X[:, COLUMN['origin_day']] = (dias + decisao // 1440) % 7
    X[:, COLUMN['dest_hour']] = (chegada // 60) % 24
    X[:, COLUMN['dest_day']] = (dias + chegada // 1440) % 7
    for i, trip in enumerate(trips):
        agente = por_id[trip.agent_id]
        X[i, COLUMN[f'purpose_origin_{trip.purpose_origin}']] = 1.0
        X[i, COLUMN[f'purpose_dest_{trip.purpose_dest}']] = 1.0
        X[i, COLUMN['age_group']] = agente.age_group
        X[i, COLUMN[f'gender_{agente.gender}']] = 1.0
        X[i, COLUMN['car_access']] = float(agente.car_access)
        X[i, COLUMN[f'pt_{agente.pt_subscription}']] = 1.0
    return X
