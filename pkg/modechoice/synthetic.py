"""
Corpus rotulado sintético: viagens da população base rotuladas por uma regra
logit multinomial conhecida, com utilidades em degraus dos próprios atributos.
"""
import csv
import logging
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from agentsim.decision import compute_decision_time
from corpus.models import Mode
from corpus.scenarios import derive_seed
from modechoice.features import COLUMN, FEATURE_NAMES, default_pt_grid, feature_matrix
from population.generator import generate_base_population
from population.templates import default_templates
from population.world import build_current_network

LOGIT_SCALE = 3.0
CHUNK_TRIPS = 200
IDLE_PROBABILITY = 0.7
MODES = tuple(Mode.values)

logger = logging.getLogger(__name__)


class LabeledCorpus(NamedTuple):
    X: np.ndarray
    labels: tuple
    probabilities: np.ndarray


def ground_truth_utilities(X):
    """Utilidade de cada modo (colunas na ordem de Mode)."""
    X = np.asarray(X, dtype=float)
    km = X[:, COLUMN['distance_m']] / 1000.0
    carro = X[:, COLUMN['car_access']]
    estacao = X[:, COLUMN['station_distance_origin_m']]
    pt_origem = X[:, COLUMN['pt_access_origin']]
    abono = X[:, COLUMN['pt_full_fare']]
    meio = X[:, COLUMN['pt_half_fare']]
    lazer_compras = X[:, COLUMN['purpose_dest_leisure']] + X[:, COLUMN['purpose_dest_shopping']]
    idoso = (X[:, COLUMN['age_group']] >= 5).astype(float)

    U = np.zeros((len(X), len(MODES)))
    U[:, 0] = np.where(carro > 0, 1.0, -3.0) + 0.5 * (km > 5)
    U[:, 1] = (
        -1.0 + 1.5 * (estacao < 500) + 0.8 * (estacao < 1500)
        + 1.0 * (carro == 0) - 1.0 * abono + 0.5 * lazer_compras
    )
    U[:, 2] = -1.0 + 1.5 * (km > 10) + 1.0 * (pt_origem > 2.5) + 1.0 * (abono + meio)
    U[:, 3] = -0.5 + 0.8 * ((km > 2) & (km <= 10)) + 0.8 * (pt_origem > 2.0)
    U[:, 4] = -1.0 + 1.0 * ((km > 1) & (km <= 6)) + 1.0 * (pt_origem > 3.0)
    U[:, 5] = -0.5 + 1.2 * (km < 5) - 0.5 * idoso
    U[:, 6] = -0.5 + 2.5 * (km < 1.5)
    U[:, 7] = -2.0
    return U


def ground_truth_probabilities(X):
    U = LOGIT_SCALE * ground_truth_utilities(X)
    U -= U.max(axis=1, keepdims=True)
    P = np.exp(U)
    return P / P.sum(axis=1, keepdims=True)


def bayes_accuracy(probabilities):
    """Acurácia esperada do classificador ótimo sob a regra geradora."""
    return float(np.mean(np.max(probabilities, axis=1)))


def _draw_labels(probabilities, rng):
    acumulada = np.cumsum(probabilities, axis=1)
    sorteio = rng.random((len(probabilities), 1))
    indices = np.minimum((sorteio > acumulada).sum(axis=1), len(MODES) - 1)
    return tuple(MODES[i] for i in indices)


def generate_labeled_corpus(n_samples, seed=None, stations=None, grid=None):
    if n_samples <= 0:
        raise ValidationError("n_samples deve ser positivo", code='invalid')
    seed = 0 if seed is None else seed
    rng = np.random.default_rng(derive_seed(seed, 'rotulos'))
    if stations is None:
        stations, _ = build_current_network(40, 60, settings.CATEGORY_SHARES, seed=derive_seed(seed, 'rede'))
    grid = grid or default_pt_grid()

    n_agentes = int(math.ceil(n_samples / 2.0)) + 10
    agentes, viagens = generate_base_population(
        n_agentes, stations, default_templates(), seed=derive_seed(seed, 'populacao'),
    )
    viagens = viagens[:n_samples]
    blocos = []
    for inicio in range(0, len(viagens), CHUNK_TRIPS):
        bloco = viagens[inicio:inicio + CHUNK_TRIPS]
        livres = {s.station_id: int(rng.random() < IDLE_PROBABILITY) for s in stations}
        decisoes = [compute_decision_time(t) for t in bloco]
        dias = rng.integers(0, 7, size=len(bloco))
        blocos.append(feature_matrix(bloco, agentes, stations, livres, decisoes, grid, dias))
    X = np.vstack(blocos)
    probabilidades = ground_truth_probabilities(X)
    rotulos = _draw_labels(probabilidades, rng)
    logger.info(
        "corpus rotulado: %d viagens, acurácia de Bayes %.4f", len(rotulos), bayes_accuracy(probabilidades),
    )
    return LabeledCorpus(X=X, labels=rotulos, probabilities=probabilidades)


# ─── labeled_trips.csv ────────────────────────────────────────
def write_labeled_trips(path, X, labels):
    with Path(path).open('w', newline='', encoding='utf-8') as f:
        escritor = csv.writer(f, lineterminator='\n')
        escritor.writerow(list(FEATURE_NAMES) + ['mode'])
        for linha, rotulo in zip(np.asarray(X, dtype=float), labels):
            escritor.writerow([repr(float(v)) for v in linha] + [rotulo])


def read_labeled_trips(path):
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"labeled_trips.csv ausente em {path.parent}", code='missing')
    linhas = []
    rotulos = []
    with path.open(newline='', encoding='utf-8') as f:
        leitor = csv.reader(f)
        cabecalho = next(leitor, None)
        if cabecalho != list(FEATURE_NAMES) + ['mode']:
            raise ValidationError("labeled_trips.csv, linha 1: cabeçalho inesperado", code='malformed')
        for numero, celulas in enumerate(leitor, start=2):
            if len(celulas) != len(cabecalho):
                raise ValidationError(f"labeled_trips.csv, linha {numero}: número de campos", code='malformed')
            try:
                linhas.append([float(v) for v in celulas[:-1]])
            except ValueError:
                raise ValidationError(f"labeled_trips.csv, linha {numero}: valor inválido", code='malformed')
            rotulos.append(celulas[-1])
    return np.array(linhas, dtype=float).reshape(-1, len(FEATURE_NAMES)), tuple(rotulos)
