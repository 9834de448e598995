"""
Configuração de cenários: validação, presets e redução para escala de bancada.
"""
import dataclasses
import json
import math
import zlib
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from corpus.models import Category, ScenarioConfig

SHARE_TOLERANCE = 1e-9
MAX_SEED = 2 ** 64


def round_half_up(valor):
    return int(math.floor(valor + 0.5))


def validate_scenario(config):
    """Valida o cenário e devolve uma cópia com os padrões preenchidos."""
    for campo in ('n_users', 'v_desired'):
        valor = getattr(config, campo)
        if not isinstance(valor, int) or valor <= 0:
            raise ValidationError(f"{campo} deve ser um inteiro positivo (recebido {valor!r})", code='invalid')
    if not isinstance(config.k_new_stations, int) or config.k_new_stations < 0:
        raise ValidationError("k_new_stations deve ser um inteiro não negativo", code='invalid')
    if not 0 <= int(config.seed) < MAX_SEED:
        raise ValidationError("seed deve caber em 64 bits sem sinal", code='invalid')

    timestep = config.timestep_minutes or settings.DEFAULT_TIMESTEP_MINUTES
    if timestep <= 0 or 1440 % timestep:
        raise ValidationError(f"timestep_minutes {timestep} deve dividir 1440", code='invalid')

    precos = config.price_levels
    if precos is None:
        precos = settings.DEFAULT_PRICE_LEVELS
    precos = tuple(sorted({float(p) for p in precos}))
    if any(p < 0 for p in precos):
        raise ValidationError("price_levels não pode conter preços negativos", code='invalid')

    shares = dict(config.category_shares or settings.CATEGORY_SHARES)
    if not shares:
        raise ValidationError("category_shares vazio", code='invalid')
    desconhecidas = sorted(set(shares) - set(Category.values))
    if desconhecidas:
        raise ValidationError(f"categorias desconhecidas: {', '.join(desconhecidas)}", code='invalid')
    if any(p < 0 for p in shares.values()):
        raise ValidationError("category_shares com probabilidade negativa", code='invalid')
    if abs(sum(shares.values()) - 1.0) > SHARE_TOLERANCE:
        raise ValidationError(
            f"category_shares soma {sum(shares.values())!r}, esperado 1", code='invalid'
        )

    populacao = config.population_size or 5 * config.n_users
    if populacao < config.n_users:
        raise ValidationError("population_size menor que n_users", code='invalid')
    if config.preset is not None and config.preset not in settings.SCENARIO_PRESETS:
        raise ValidationError(f"preset {config.preset} inexistente", code='invalid')

    base_nova = config.new_station_vehicles
    if base_nova is None:
        base_nova = settings.NEW_STATION_VEHICLES
    if base_nova < 0:
        raise ValidationError("new_station_vehicles não pode ser negativo", code='invalid')

    dia = config.start_weekday
    if dia is None:
        dia = settings.FLEETGRID_START_WEEKDAY
    if not 0 <= dia <= 6:
        raise ValidationError("start_weekday deve estar em 0..6", code='invalid')

    return dataclasses.replace(
        config,
        price_levels=precos,
        timestep_minutes=timestep,
        seed=int(config.seed),
        category_shares={k: float(shares[k]) for k in sorted(shares)},
        population_size=populacao,
        new_station_vehicles=base_nova,
        start_weekday=dia,
    )


def scenario_preset(number, seed=0):
    """Um dos seis cenários de crescimento, em escala real."""
    try:
        preset = settings.SCENARIO_PRESETS[number]
    except KeyError:
        raise ValidationError(f"preset {number} inexistente (use 1..6)", code='invalid')
    return validate_scenario(ScenarioConfig(
        n_users=preset['n_users'],
        v_desired=preset['v_desired'],
        k_new_stations=preset['k_new_stations'],
        seed=seed,
        preset=number,
    ))


def desk_scale(config, scale):
    """Reduz linearmente usuários, veículos e estações novas."""
    if not 0 < scale <= 1:
        raise ValidationError(f"scale {scale} fora de (0, 1]", code='invalid')
    config = validate_scenario(config)
    return dataclasses.replace(
        config,
        n_users=max(1, round_half_up(config.n_users * scale)),
        v_desired=max(1, round_half_up(config.v_desired * scale)),
        k_new_stations=round_half_up(config.k_new_stations * scale),
        population_size=max(1, round_half_up(config.population_size * scale)),
    )


def current_network_size(scale):
    rede = settings.CURRENT_NETWORK
    estacoes = max(3, round_half_up(rede['stations'] * scale))
    veiculos = max(estacoes, round_half_up(rede['vehicles'] * scale))
    usuarios = max(1, round_half_up(rede['users'] * scale))
    return estacoes, veiculos, usuarios


def desk_centers(scale):
    """
    Centros populacionais (x, y, desvio, peso) encolhidos por √scale. Com a
    rede reduzida por `scale`, a densidade de estações e a distância típica
    de uma residência até a estação mais próxima ficam as da rede real.
    """
    fator = math.sqrt(scale)
    return tuple((x * fator, y * fator, desvio * fator, peso) for x, y, desvio, peso in settings.POPULATION_CENTERS)


def load_scenario(path):
    """Lê um arquivo de cenário (objeto JSON com os campos de ScenarioConfig)."""
    path = Path(path)
    try:
        dados = json.loads(path.read_text(encoding='utf-8'))
    except FileNotFoundError:
        raise ValidationError(f"arquivo de cenário ausente: {path}", code='missing')
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path.name}, linha {exc.lineno}, coluna {exc.colno}: {exc.msg}", code='malformed')
    if not isinstance(dados, dict):
        raise ValidationError(f"{path.name}: esperado um objeto chave/valor", code='malformed')
    campos = {f.name for f in dataclasses.fields(ScenarioConfig)}
    extras = sorted(set(dados) - campos)
    if extras:
        raise ValidationError(f"{path.name}: campos desconhecidos {', '.join(extras)}", code='malformed')
    if 'price_levels' in dados and dados['price_levels'] is not None:
        dados['price_levels'] = tuple(dados['price_levels'])
    try:
        config = ScenarioConfig(**dados)
    except TypeError as exc:
        raise ValidationError(f"{path.name}: {exc}", code='malformed')
    return validate_scenario(config)


def scenario_to_dict(config):
    dados = dataclasses.asdict(config)
    if dados['price_levels'] is not None:
        dados['price_levels'] = list(dados['price_levels'])
    return dados


def derive_seed(seed, *chaves):
    """Semente independente e estável para uma etapa nomeada do pipeline."""
    entropia = [int(seed)] + [zlib.crc32(str(chave).encode('utf-8')) for chave in chaves]
    return int(np.random.SeedSequence(entropia).generate_state(1, np.uint64)[0])
