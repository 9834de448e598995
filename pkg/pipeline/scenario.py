"""
Execução ponta a ponta de um cenário de crescimento: mundo de referência,
estações novas, assinantes, frota escalada e simulação das reservas.
"""
import logging
from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np
from django.conf import settings

from agentsim.simulator import simulate_reservations
from corpus.io import parse_float, parse_int, write_rows
from corpus.models import DatasetBundle
from corpus.scenarios import derive_seed
from metrics.stats import utilization
from modechoice.choosers import GbtModeChooser
from modechoice.features import desk_pt_grid
from modechoice.gbt import train_gbt
from modechoice.synthetic import generate_labeled_corpus
from network.fleet import apply_fleet_plan, scale_fleet
from network.placement import add_new_stations, place_new_stations
from population.weights import compute_sampling_weights, sample_carsharing_users
from population.world import build_reference_world

logger = logging.getLogger(__name__)

SCENARIOS = ('scenarios.csv', [
    ('preset', parse_int), ('seed', parse_int), ('n_users', parse_int), ('n_stations', parse_int),
    ('n_vehicles', parse_int), ('n_reservations', parse_int), ('pickups', parse_int),
    ('forced_returns', parse_int), ('unserved', parse_int),
    ('count_rate', parse_float), ('time_rate', parse_float),
])


@dataclass(frozen=True)
class ScenarioOutcome:
    bundle: DatasetBundle
    sim_log: tuple
    summary: SimpleNamespace


def train_scenario_model(seed):
    """Modelo modal único, treinado com SCENARIO_MODEL e reaproveitado por todos os cenários."""
    parametros = dict(settings.SCENARIO_MODEL)
    corpus = generate_labeled_corpus(parametros.pop('n_samples'), seed=derive_seed(seed, 'corpus_modal'))
    grade = parametros.pop('depth_grid')
    return train_gbt(
        corpus.X, np.array(corpus.labels, dtype=object),
        depth_grid=grade, seed=derive_seed(seed, 'validacao'), **parametros,
    )


def run_scenario(config, scale, model):
    seed = config.seed
    mundo = build_reference_world(config, scale, seed=seed)

    posicionamento = place_new_stations(
        mundo.homes, config.k_new_stations, [(s.x, s.y) for s in mundo.stations],
        seed=derive_seed(seed, 'estacoes'),
    )
    estacoes = add_new_stations(mundo.stations, posicionamento.centers)

    # estratos de distância medidos contra as estações do cenário
    pesos = compute_sampling_weights(mundo.q_syn, mundo.stats, estacoes)
    usuarios = sample_carsharing_users(mundo.q_syn, pesos, config.n_users, seed=derive_seed(seed, 'usuarios'))
    escolhidos = {a.agent_id for a in usuarios}
    viagens = tuple(t for t in mundo.trips if t.agent_id in escolhidos)

    base = {s.station_id: config.new_station_vehicles for s in estacoes if not s.vehicle_ids}
    plano = scale_fleet(estacoes, config.v_desired, seed=derive_seed(seed, 'frota'), base_counts=base)
    estacoes, veiculos = apply_fleet_plan(
        estacoes, mundo.vehicles, plano, config.category_shares, seed=derive_seed(seed, 'categorias'),
    )

    chooser = GbtModeChooser(model, seed=derive_seed(seed, 'modo'))
    resultado = simulate_reservations(
        viagens, usuarios, estacoes, veiculos, chooser, grid=desk_pt_grid(scale),
        start_weekday=config.start_weekday,
    )
    uso = utilization(resultado.reservations, veiculos)

    resumo = SimpleNamespace(
        preset=config.preset or 0,
        seed=seed,
        n_users=len(usuarios),
        n_stations=len(estacoes),
        n_vehicles=len(veiculos),
        n_reservations=len(resultado.reservations),
        pickups=resultado.pickups,
        forced_returns=resultado.forced_returns,
        unserved=resultado.unserved,
        count_rate=uso.count_rate,
        time_rate=uso.time_rate,
    )
    logger.info(
        "cenário %s: %d reservas, utilização %.3f por contagem e %.3f por tempo",
        resumo.preset, resumo.n_reservations, uso.count_rate, uso.time_rate,
    )
    return ScenarioOutcome(
        bundle=DatasetBundle(
            stations=estacoes,
            vehicles=veiculos,
            agents=usuarios,
            trips=viagens,
            reservations=resultado.reservations,
            dso_load=mundo.dso_load,
        ),
        sim_log=resultado.sim_log,
        summary=resumo,
    )


def write_scenarios(path, resumos):
    write_rows(path, SCENARIOS, sorted(resumos, key=lambda r: r.preset))
