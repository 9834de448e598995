"""
Posicionamento de estações novas: KMeans com centros fixos (as estações atuais).
"""
import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError

from corpus.io import parse_float, read_rows
from corpus.models import Station

logger = logging.getLogger(__name__)

CHUNK = 4096
HOMES_SCHEMA = ('home_locations.csv', [('x', parse_float), ('y', parse_float)])


@dataclass(frozen=True)
class PlacementResult:
    centers: np.ndarray = field(hash=False)
    history: tuple = ()
    iterations: int = 0
    converged: bool = True


def _assign(X, centros):
    """Rótulo e distância² do centro mais próximo, em blocos de ordem fixa."""
    rotulos = np.empty(len(X), dtype=np.int64)
    d2 = np.empty(len(X), dtype=float)
    for inicio in range(0, len(X), CHUNK):
        bloco = X[inicio:inicio + CHUNK]
        d = ((bloco[:, None, :] - centros[None, :, :]) ** 2).sum(axis=2)
        # empates ficam com o primeiro centro, ou seja, com os fixos
        indice = np.argmin(d, axis=1)
        rotulos[inicio:inicio + CHUNK] = indice
        d2[inicio:inicio + CHUNK] = d[np.arange(len(bloco)), indice]
    return rotulos, d2


def place_new_stations(X, k, fixed, seed=None, max_iter=200, tol=1e-3, init=None):
    """
    Lloyd em que apenas os k centros novos se movem.
    Centro novo sem pontos é re-semeado no ponto mais distante do seu centro.
    """
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    fixos = np.asarray(fixed, dtype=float).reshape(-1, 2)
    if k < 0:
        raise ValidationError("k não pode ser negativo", code='invalid')
    if k > len(X):
        raise ValidationError(f"k={k} maior que o número de pontos ({len(X)})", code='invalid')
    if k == 0:
        return PlacementResult(centers=np.empty((0, 2)), history=(), iterations=0, converged=True)

    if init is None:
        rng = np.random.default_rng(seed)
        mu = X[rng.choice(len(X), size=k, replace=False)].copy()
    else:
        mu = np.asarray(init, dtype=float).reshape(k, 2).copy()

    m = len(fixos)
    historico = []
    convergiu = False
    iteracao = 0
    for iteracao in range(1, max_iter + 1):
        rotulos, d2 = _assign(X, np.vstack([fixos, mu]))
        historico.append(float(d2.sum()))

        novos = rotulos - m
        membros = novos >= 0
        contagem = np.bincount(novos[membros], minlength=k)
        soma_x = np.bincount(novos[membros], weights=X[membros, 0], minlength=k)
        soma_y = np.bincount(novos[membros], weights=X[membros, 1], minlength=k)

        proximo = mu.copy()
        cheios = contagem > 0
        proximo[cheios, 0] = soma_x[cheios] / contagem[cheios]
        proximo[cheios, 1] = soma_y[cheios] / contagem[cheios]

        vazios = np.nonzero(~cheios)[0]
        if len(vazios):
            ordem = np.argsort(-d2, kind='stable')
            for j, indice in zip(vazios, ordem):
                proximo[j] = X[indice]
            logger.debug("iteração %d: %d centros re-semeados", iteracao, len(vazios))

        deslocamento = float(np.max(np.hypot(*(proximo - mu).T)))
        mu = proximo
        if deslocamento < tol:
            convergiu = True
            break

    if not convergiu:
        logger.warning("posicionamento não convergiu em %d iterações", max_iter)
    return PlacementResult(centers=mu, history=tuple(historico), iterations=iteracao, converged=convergiu)


def add_new_stations(stations, centers, grid_zone_id=None):
    proximo = max((s.station_id for s in stations), default=-1) + 1
    novas = tuple(
        Station(station_id=proximo + i, x=float(x), y=float(y), grid_zone_id=grid_zone_id)
        for i, (x, y) in enumerate(np.asarray(centers).reshape(-1, 2))
    )
    return tuple(stations) + novas


def read_home_locations(path):
    linhas = read_rows(Path(path), HOMES_SCHEMA, required=True)
    return np.array([(linha['x'], linha['y']) for linha in linhas], dtype=float).reshape(-1, 2)


def write_home_locations(path, homes):
    with Path(path).open('w', newline='', encoding='utf-8') as f:
        escritor = csv.writer(f, lineterminator='\n')
        escritor.writerow(['x', 'y'])
        for x, y in np.asarray(homes, dtype=float).reshape(-1, 2):
            escritor.writerow([repr(float(x)), repr(float(y))])
