"""Testes de validação e presets de cenário."""
import json

import numpy as np
import pytest
from django.core.exceptions import ValidationError

from corpus.models import ScenarioConfig
from corpus.scenarios import (
    derive_seed, desk_centers, desk_scale, load_scenario, scenario_preset, validate_scenario,
)


class TestValidateScenario:

    def test_cenario_de_expansao_e_valido(self):
        config = validate_scenario(ScenarioConfig(n_users=250000, v_desired=7500, k_new_stations=1250))
        assert config.k_new_stations == 1250

    def test_n_zero_rejeitado(self):
        with pytest.raises(ValidationError):
            validate_scenario(ScenarioConfig(n_users=0, v_desired=10))

    def test_escada_de_precos_padrao(self):
        config = validate_scenario(ScenarioConfig(n_users=10, v_desired=5))
        assert config.price_levels == (0.0, 10.0, 100.0, 500.0, 1000.0, 2000.0, 5000.0)
        assert config.timestep_minutes == 15

    def test_shares_que_nao_somam_um(self):
        with pytest.raises(ValidationError, match='soma'):
            validate_scenario(ScenarioConfig(
                n_users=10, v_desired=5, category_shares={'Budget': 0.5, 'Combi': 0.4},
            ))

    def test_categoria_desconhecida(self):
        with pytest.raises(ValidationError, match='Sedan'):
            validate_scenario(ScenarioConfig(n_users=10, v_desired=5, category_shares={'Sedan': 1.0}))

    def test_timestep_que_nao_divide_o_dia(self):
        with pytest.raises(ValidationError):
            validate_scenario(ScenarioConfig(n_users=10, v_desired=5, timestep_minutes=7))

    def test_normalizacao_e_idempotente(self):
        config = validate_scenario(ScenarioConfig(n_users=10, v_desired=5))
        assert validate_scenario(config) == config


class TestPresets:

    @pytest.mark.parametrize('numero,usuarios,veiculos,novas', [
        (1, 115000, 3500, 0), (2, 150000, 4500, 0), (3, 250000, 7500, 0),
        (4, 250000, 5000, 0), (5, 250000, 10000, 0), (6, 250000, 7500, 1250),
    ])
    def test_seis_presets(self, numero, usuarios, veiculos, novas):
        config = scenario_preset(numero)
        assert (config.n_users, config.v_desired, config.k_new_stations) == (usuarios, veiculos, novas)

    def test_preset_inexistente(self):
        with pytest.raises(ValidationError):
            scenario_preset(7)

    def test_escala_de_bancada(self):
        config = desk_scale(scenario_preset(6), 0.01)
        assert config.n_users == 2500
        assert config.v_desired == 75
        assert config.k_new_stations == 13

    def test_geografia_de_bancada_mantem_a_densidade(self, settings):
        settings.POPULATION_CENTERS = ((1000.0, -2000.0, 500.0, 1.0), (0.0, 0.0, 100.0, 3.0))
        encolhidos = np.array(desk_centers(0.01))
        assert encolhidos == pytest.approx(np.array([[100.0, -200.0, 50.0, 1.0], [0.0, 0.0, 10.0, 3.0]]))
        assert desk_centers(1.0) == settings.POPULATION_CENTERS


class TestArquivoDeCenario:

    def test_carregar_json(self, tmp_path):
        caminho = tmp_path / 'cenario.json'
        caminho.write_text(json.dumps({'n_users': 100, 'v_desired': 20, 'seed': 7}))
        config = load_scenario(caminho)
        assert config.seed == 7
        assert config.population_size == 500

    def test_campo_desconhecido(self, tmp_path):
        caminho = tmp_path / 'cenario.json'
        caminho.write_text(json.dumps({'n_users': 100, 'v_desired': 20, 'cor': 'azul'}))
        with pytest.raises(ValidationError, match='cor'):
            load_scenario(caminho)

    def test_json_invalido_nomeia_linha(self, tmp_path):
        caminho = tmp_path / 'cenario.json'
        caminho.write_text('{\n "n_users": }')
        with pytest.raises(ValidationError, match='linha 2'):
            load_scenario(caminho)


class TestDeriveSeed:

    def test_estavel_e_distinta_por_etapa(self):
        assert derive_seed(42, 'populacao') == derive_seed(42, 'populacao')
        assert derive_seed(42, 'populacao') != derive_seed(42, 'frota')
        assert derive_seed(42, 'populacao') != derive_seed(43, 'populacao')
