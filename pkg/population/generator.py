"""
Gerador paramétrico da população base: residências, atributos e cadeias de viagens.
"""
import logging
import math

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from corpus.models import Agent, Gender, PtSubscription, Trip

logger = logging.getLogger(__name__)

AGE_GROUP_PROBS = (0.16, 0.18, 0.18, 0.18, 0.16, 0.14)
GENDER_PROBS = ((Gender.FEMALE, 0.49), (Gender.MALE, 0.49), (Gender.OTHER, 0.02))
PT_PROBS = ((PtSubscription.NONE, 0.45), (PtSubscription.HALF_FARE, 0.35), (PtSubscription.FULL_FARE, 0.20))
CAR_ACCESS_BY_AGE = (0.45, 0.70, 0.80, 0.82, 0.80, 0.65)

# Velocidade usada para espaçar atividades consecutivas (m/min).
SPACING_SPEED = 50000.0 / 60.0
LAST_MINUTE = 1439
CHUNK = 4096


def _station_arrays(stations):
    ordenadas = sorted(stations, key=lambda s: s.station_id)
    ids = np.array([s.station_id for s in ordenadas], dtype=np.int64)
    coords = np.array([(s.x, s.y) for s in ordenadas], dtype=float).reshape(-1, 2)
    return ids, coords


def nearest_stations(xs, ys, stations):
    """Versão vetorizada de nearest_station; devolve (ids, distâncias)."""
    if not stations:
        raise ValidationError("conjunto de estações vazio", code='empty')
    ids, coords = _station_arrays(stations)
    pontos = np.column_stack([np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)])
    melhor = np.empty(len(pontos), dtype=np.int64)
    distancia = np.empty(len(pontos), dtype=float)
    for inicio in range(0, len(pontos), CHUNK):
        bloco = pontos[inicio:inicio + CHUNK]
        d = np.hypot(bloco[:, None, 0] - coords[None, :, 0], bloco[:, None, 1] - coords[None, :, 1])
        # argmin devolve a primeira ocorrência: empate vai para o menor id
        indice = np.argmin(d, axis=1)
        melhor[inicio:inicio + CHUNK] = ids[indice]
        distancia[inicio:inicio + CHUNK] = d[np.arange(len(bloco)), indice]
    return melhor, distancia


def nearest_station(x, y, stations):
    ids, distancias = nearest_stations([x], [y], stations)
    return int(ids[0]), float(distancias[0])


def sample_homes(n, rng, centers=None):
    """Residências de uma mistura de gaussianas sobre os centros populacionais."""
    centers = centers or settings.POPULATION_CENTERS
    pesos = np.array([c[3] for c in centers], dtype=float)
    escolha = rng.choice(len(centers), size=n, p=pesos / pesos.sum())
    medias = np.array([(c[0], c[1]) for c in centers])[escolha]
    desvios = np.array([c[2] for c in centers])[escolha]
    return medias + rng.normal(size=(n, 2)) * desvios[:, None]


def _service_area(stations, margem=20000.0):
    if not stations:
        return None
    xs = [s.x for s in stations]
    ys = [s.y for s in stations]
    return (min(xs) - margem, max(xs) + margem, min(ys) - margem, max(ys) + margem)


def _draw_agent(agent_id, home, rng):
    idade = int(rng.choice(6, p=AGE_GROUP_PROBS)) + 1
    genero = GENDER_PROBS[rng.choice(3, p=[p for _, p in GENDER_PROBS])][0]
    carro = bool(rng.random() < CAR_ACCESS_BY_AGE[idade - 1])
    assinatura = PT_PROBS[rng.choice(3, p=[p for _, p in PT_PROBS])][0]
    return Agent(
        agent_id=agent_id,
        age_group=idade,
        gender=str(genero.value),
        home_x=float(home[0]),
        home_y=float(home[1]),
        car_access=carro,
        pt_subscription=str(assinatura.value),
    )


def _draw_chain(agent, template, rng, area, first_trip_id):
    mu, sigma = template.displacement
    posicao = (agent.home_x, agent.home_y)
    chegada = rng.normal(*template.first_start)
    viagens = []
    for i in range(template.n_trips):
        origem_proposito = template.purposes[i]
        destino_proposito = template.purposes[i + 1]
        if i == template.n_trips - 1:
            destino = (agent.home_x, agent.home_y)
        else:
            raio = min(rng.lognormal(mu, sigma), settings.TRIP_DISTANCE_MAX_M)
            angulo = rng.uniform(0.0, 2.0 * math.pi)
            destino = (posicao[0] + raio * math.cos(angulo), posicao[1] + raio * math.sin(angulo))
            if area is not None:
                destino = (min(max(destino[0], area[0]), area[1]), min(max(destino[1], area[2]), area[3]))
        distancia = math.hypot(destino[0] - posicao[0], destino[1] - posicao[1])
        if i > 0:
            media, desvio = template.durations[origem_proposito]
            permanencia = max(15.0, rng.normal(media, desvio))
            chegada = chegada + permanencia + distancia / SPACING_SPEED + 10.0
        minuto = int(min(max(round(chegada), 0), LAST_MINUTE))
        viagens.append(Trip(
            trip_id=first_trip_id + i,
            agent_id=agent.agent_id,
            origin_x=float(posicao[0]),
            origin_y=float(posicao[1]),
            dest_x=float(destino[0]),
            dest_y=float(destino[1]),
            purpose_origin=str(origem_proposito),
            purpose_dest=str(destino_proposito),
            t_dest_start=minuto,
            distance_m=float(distancia),
        ))
        posicao = destino
    return viagens


def generate_base_population(n, stations, templates, seed=None, centers=None, first_agent_id=0):
    """
    Gera n agentes com residência, atributos e um dia de viagens.
    As atividades ficam dentro da área de serviço (envoltória das estações + 20 km).
    """
    if n <= 0:
        raise ValidationError(f"n deve ser positivo (recebido {n})", code='invalid')
    if not templates:
        raise ValidationError("conjunto de templates vazio", code='empty')

    rng = np.random.default_rng(seed)
    pesos = np.array([t.weight for t in templates], dtype=float)
    pesos = pesos / pesos.sum()
    area = _service_area(stations)

    casas = sample_homes(n, rng, centers)
    if area is not None:
        casas[:, 0] = np.clip(casas[:, 0], area[0], area[1])
        casas[:, 1] = np.clip(casas[:, 1], area[2], area[3])

    agentes = []
    viagens = []
    for i in range(n):
        agente = _draw_agent(first_agent_id + i, casas[i], rng)
        template = templates[int(rng.choice(len(templates), p=pesos))]
        agentes.append(agente)
        viagens.extend(_draw_chain(agente, template, rng, area, len(viagens)))
    logger.info("população base: %d agentes, %d viagens", len(agentes), len(viagens))
    return tuple(agentes), tuple(viagens)
