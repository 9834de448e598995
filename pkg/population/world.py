"""
Mundo de referência sintético: a rede atual, a população geral, os assinantes
de referência e a curva de carga da distribuidora.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from corpus.models import Station, Vehicle, attach_vehicles
from corpus.scenarios import current_network_size, derive_seed, desk_centers
from network.fleet import assign_vehicle_categories
from population.generator import generate_base_population, nearest_stations, sample_homes
from population.templates import default_templates
from population.weights import build_reference_stats

logger = logging.getLogger(__name__)

# Propensão oculta de assinatura usada para sortear U_real dentro de Q_real.
AGE_PROPENSITY = (1.4, 1.6, 1.3, 1.0, 0.7, 0.4)
GENDER_PROPENSITY = {'F': 1.0, 'M': 1.1, 'O': 1.0}
PROXIMITY_SCALE_M = 1500.0

DSO_PEAK_MW = 317.12


@dataclass(frozen=True)
class ReferenceWorld:
    stations: tuple
    vehicles: tuple
    q_syn: tuple
    trips: tuple
    stats: object
    dso_load: tuple
    homes: np.ndarray = field(hash=False, compare=False, repr=False)


def build_current_network(n_stations, n_vehicles, category_shares, seed=None, grid_zone_share=None,
                          centers=None):
    """Estações seguem a densidade populacional; cada uma recebe ao menos um veículo."""
    rng = np.random.default_rng(seed)
    centers = centers or settings.POPULATION_CENTERS
    coords = sample_homes(n_stations, rng, centers)
    centro = centers[0]
    share = settings.CURRENT_NETWORK['grid_zone_share'] if grid_zone_share is None else grid_zone_share
    n_zona = max(1, int(math.floor(share * n_stations + 0.5)))
    proximidade = np.argsort(np.hypot(coords[:, 0] - centro[0], coords[:, 1] - centro[1]), kind='stable')
    na_zona = set(int(i) for i in proximidade[:n_zona])

    extras = rng.multinomial(n_vehicles - n_stations, np.full(n_stations, 1.0 / n_stations))
    contagens = extras + 1
    categorias = assign_vehicle_categories(int(contagens.sum()), category_shares, seed=rng)

    estacoes = []
    veiculos = []
    for i in range(n_stations):
        estacoes.append(Station(
            station_id=i,
            x=float(coords[i, 0]),
            y=float(coords[i, 1]),
            grid_zone_id=1 if i in na_zona else None,
        ))
        for _ in range(int(contagens[i])):
            vid = len(veiculos)
            veiculos.append(Vehicle.from_model(vid, i, categorias[vid]))
    return attach_vehicles(estacoes, veiculos), tuple(veiculos)


def draw_reference_users(q_real, stations, n_users, seed=None):
    """Assinantes de referência segundo a propensão oculta (idade, gênero, proximidade)."""
    rng = np.random.default_rng(seed)
    _, distancias = nearest_stations([a.home_x for a in q_real], [a.home_y for a in q_real], stations)
    propensao = np.array([
        AGE_PROPENSITY[a.age_group - 1] * GENDER_PROPENSITY[a.gender] * (math.exp(-d / PROXIMITY_SCALE_M) + 0.05)
        for a, d in zip(q_real, distancias)
    ])
    n = min(n_users, len(q_real))
    escolhidos = rng.choice(len(q_real), size=n, replace=False, p=propensao / propensao.sum())
    return tuple(q_real[i] for i in sorted(escolhidos))


def dso_load_profile(timestep_minutes, peak_mw):
    """Carga diária com picos de manhã e à noite (máximo por volta das 18h30)."""
    horas = (np.arange(1440 // timestep_minutes) * timestep_minutes + timestep_minutes / 2) / 60.0
    perfil = (
        0.55
        + 0.22 * np.exp(-((horas - 8.0) / 1.8) ** 2)
        + 0.40 * np.exp(-((horas - 18.5) / 2.0) ** 2)
        - 0.15 * np.exp(-((horas - 3.5) / 2.5) ** 2)
    )
    return tuple(float(v) for v in peak_mw * perfil / perfil.max())


def build_reference_world(config, scale, seed=None):
    """
    Monta o mundo sintético de referência em escala de bancada. A geografia
    encolhe junto com a rede (`desk_centers`), então cada estação atende a
    mesma vizinhança que na escala real.
    """
    seed = config.seed if seed is None else seed
    n_estacoes, n_veiculos, n_usuarios = current_network_size(scale)
    centros = desk_centers(scale)
    stations, vehicles = build_current_network(
        n_estacoes, n_veiculos, config.category_shares, seed=derive_seed(seed, 'rede'), centers=centros,
    )
    templates = default_templates()
    q_real, _ = generate_base_population(
        config.population_size, stations, templates, seed=derive_seed(seed, 'q_real'), centers=centros,
    )
    u_real = draw_reference_users(q_real, stations, n_usuarios, seed=derive_seed(seed, 'u_real'))
    q_syn, trips = generate_base_population(
        config.population_size, stations, templates, seed=derive_seed(seed, 'q_syn'), centers=centros,
    )
    stats = build_reference_stats(u_real, q_real, stations)
    homes = np.array([(a.home_x, a.home_y) for a in q_syn], dtype=float)
    dso_load = dso_load_profile(config.timestep_minutes, DSO_PEAK_MW * scale)
    logger.info(
        "mundo de referência: %d estações, %d veículos, %d assinantes de referência, %d agentes",
        len(stations), len(vehicles), len(u_real), len(q_syn),
    )
    return ReferenceWorld(
        stations=stations,
        vehicles=vehicles,
        q_syn=q_syn,
        trips=trips,
        stats=stats,
        dso_load=dso_load,
        homes=homes,
    )
