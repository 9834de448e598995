"""
Pesos de amostragem estratificada e sorteio dos assinantes do car sharing.
"""
import csv
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError

from corpus.io import read_rows, parse_int, parse_str
from population.generator import nearest_stations

logger = logging.getLogger(__name__)

KINDS = ('age', 'gender', 'station')

STATS_SCHEMA = ('population_stats.csv', [
    ('stratum_kind', parse_str), ('stratum_value', parse_str),
    ('count_u_real', parse_int), ('count_q_real', parse_int),
])


@dataclass(frozen=True)
class PopulationStats:
    """Contagens (U_real, Q_real) por idade, gênero e estação mais próxima."""
    age: dict = field(default_factory=dict, hash=False)
    gender: dict = field(default_factory=dict, hash=False)
    station: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        for kind in KINDS:
            for valor, (u, q) in getattr(self, kind).items():
                if u < 0 or q < 0:
                    raise ValidationError(f"contagem negativa no estrato {kind}={valor}", code='invariant')
                if u > 0 and q == 0:
                    raise ValidationError(
                        f"estrato {kind}={valor} presente em U_real e ausente em Q_real",
                        code='invariant',
                    )

    def counts(self, kind, valor):
        return getattr(self, kind).get(valor, (0, 0))

    def scaled_users(self, fator):
        """Cópia com as contagens de U_real multiplicadas por um fator."""
        return PopulationStats(**{
            kind: {v: (u * fator, q) for v, (u, q) in getattr(self, kind).items()}
            for kind in KINDS
        })


def _agent_strata(agents, stations):
    xs = [a.home_x for a in agents]
    ys = [a.home_y for a in agents]
    estacoes, _ = nearest_stations(xs, ys, stations)
    return [
        {'age': a.age_group, 'gender': a.gender, 'station': int(s)}
        for a, s in zip(agents, estacoes)
    ]


def build_reference_stats(u_real, q_real, stations):
    """Conta os estratos dos conjuntos de referência."""
    contagens = {kind: (Counter(), Counter()) for kind in KINDS}
    for indice, grupo in enumerate((u_real, q_real)):
        if not grupo:
            continue
        for estrato in _agent_strata(grupo, stations):
            for kind in KINDS:
                contagens[kind][indice][estrato[kind]] += 1
    return PopulationStats(**{
        kind: {
            valor: (u.get(valor, 0), q.get(valor, 0))
            for valor in sorted(set(u) | set(q), key=str)
        }
        for kind, (u, q) in contagens.items()
    })


def raw_sampling_weights(agents, stats, stations):
    """
    Produto das três razões U_real/Q_real (idade, gênero, estação mais próxima).
    Estratos com denominador zero recebem peso 0.
    """
    pesos = np.zeros(len(agents), dtype=float)
    if not agents:
        return pesos
    sem_denominador = 0
    for i, estrato in enumerate(_agent_strata(agents, stations)):
        peso = 1.0
        for kind in KINDS:
            u, q = stats.counts(kind, estrato[kind])
            if q == 0:
                sem_denominador += 1
                peso = 0.0
                break
            peso *= u / q
        pesos[i] = peso
    if sem_denominador:
        logger.warning("%d agentes em estratos sem referência em Q_real receberam peso 0", sem_denominador)
    return pesos


def compute_sampling_weights(agents, stats, stations):
    """Pesos normalizados para somar 1."""
    pesos = raw_sampling_weights(agents, stats, stations)
    total = pesos.sum()
    if not total > 0:
        raise ValidationError("todos os pesos são zero: nenhuma população amostrável", code='no_population')
    return pesos / total


def sample_carsharing_users(agents, weights, n, seed=None):
    """Sorteia n assinantes sem reposição, proporcional aos pesos."""
    weights = np.asarray(weights, dtype=float)
    positivos = int(np.count_nonzero(weights > 0))
    if n > positivos:
        raise ValidationError(
            f"N={n} maior que o número de agentes com peso positivo ({positivos})", code='invalid'
        )
    if n <= 0:
        return ()
    rng = np.random.default_rng(seed)
    escolhidos = rng.choice(len(agents), size=n, replace=False, p=weights / weights.sum())
    return tuple(agents[i] for i in sorted(escolhidos))


# ─── population_stats.csv ─────────────────────────────────────
def _parse_value(kind, bruto):
    return bruto if kind == 'gender' else int(bruto)


def read_population_stats(path):
    por_tipo = {kind: {} for kind in KINDS}
    for numero, linha in enumerate(read_rows(Path(path), STATS_SCHEMA, required=True), start=2):
        kind = linha['stratum_kind']
        if kind not in por_tipo:
            raise ValidationError(
                f"population_stats.csv, linha {numero}, coluna 'stratum_kind': valor inválido {kind!r}",
                code='malformed',
            )
        try:
            valor = _parse_value(kind, linha['stratum_value'])
        except ValueError:
            raise ValidationError(
                f"population_stats.csv, linha {numero}, coluna 'stratum_value': valor inválido",
                code='malformed',
            )
        por_tipo[kind][valor] = (linha['count_u_real'], linha['count_q_real'])
    return PopulationStats(**por_tipo)


def write_population_stats(path, stats):
    with Path(path).open('w', newline='', encoding='utf-8') as f:
        escritor = csv.writer(f, lineterminator='\n')
        escritor.writerow([coluna for coluna, _ in STATS_SCHEMA[1]])
        for kind in KINDS:
            for valor, (u, q) in sorted(getattr(stats, kind).items(), key=lambda item: str(item[0])):
                escritor.writerow([kind, valor, int(u), int(q)])
