"""Testes da extração de atributos de viagem."""
import numpy as np
import pytest
from django.core.exceptions import ValidationError

from corpus.models import Agent, Station, Trip
from modechoice.features import (
    COLUMN, FEATURE_NAMES, PtAccessibilityGrid, TripFeatures, default_pt_grid, desk_pt_grid,
    extract_features, feature_matrix,
)


# ──────────────────────────────────────────────────────────────
# Fixtures
# ──────────────────────────────────────────────────────────────
@pytest.fixture
def grade():
    return PtAccessibilityGrid(0.0, 0.0, 1000.0, np.array([[1.0, 2.0], [3.0, 4.0]]))


@pytest.fixture
def estacoes():
    return (Station(1, 0.0, 0.0), Station(2, 3000.0, 0.0), Station(3, 0.0, 4000.0))


@pytest.fixture
def agente():
    return Agent(7, 3, 'F', 0.0, 0.0, False, 'half_fare')


def viagem(trip_id, origem, destino, t_dest_start, purposes=('home', 'work')):
    distancia = float(np.hypot(destino[0] - origem[0], destino[1] - origem[1]))
    return Trip(trip_id, 7, *origem, *destino, *purposes, t_dest_start, distancia)


# ──────────────────────────────────────────────────────────────
# Testes
# ──────────────────────────────────────────────────────────────
class TestFeatureLayout:

    def test_29_colunas(self):
        assert len(FEATURE_NAMES) == 29
        assert FEATURE_NAMES[0] == 'distance_m'
        assert FEATURE_NAMES[-1] == 'pt_full_fare'

    def test_um_proposito_por_lado(self, grade, estacoes, agente):
        atributos = extract_features(viagem(1, (0.0, 0.0), (10.0, 0.0), 600), agente, estacoes, {1: 1}, 590, grade)
        linha = atributos.as_array()
        assert linha[1:7].sum() == 1.0
        assert linha[7:13].sum() == 1.0

    def test_hora_invalida(self):
        with pytest.raises(ValidationError):
            TripFeatures(1.0, 'home', 'work', 0, 0, 0, 0, 24, 0, 0, 0, 1, 'F', False, 'none')


class TestExtractFeatures:

    def test_origem_em_estacao_livre(self, grade, estacoes, agente):
        atributos = extract_features(viagem(1, (0.0, 0.0), (3000.0, 4000.0), 600), agente, estacoes, {1: 1}, 584, grade)
        assert atributos.station_distance_origin_m == 0.0

    def test_tabela_calculada_a_mao(self, grade, estacoes, agente):
        livres = {1: 1, 2: 0, 3: 2}
        atributos = extract_features(
            viagem(1, (0.0, 0.0), (3000.0, 4000.0), 600), agente, estacoes, livres, 584, grade, day=3,
        )
        esperado = {
            'distance_m': 5000.0,
            'purpose_origin_home': 1.0,
            'purpose_dest_work': 1.0,
            'pt_access_origin': 1.0,
            'pt_access_dest': 4.0,
            'station_distance_origin_m': 0.0,
            'station_distance_dest_m': 3000.0,
            'origin_hour': 9.0,
            'origin_day': 3.0,
            'dest_hour': 10.0,
            'dest_day': 3.0,
            'age_group': 3.0,
            'gender_F': 1.0,
            'car_access': 0.0,
            'pt_half_fare': 1.0,
        }
        linha = atributos.as_array()
        for nome, valor in esperado.items():
            assert linha[COLUMN[nome]] == valor, nome
        assert linha.sum() == pytest.approx(sum(esperado.values()))

    def test_estacao_ocupada_nao_conta(self, grade, estacoes, agente):
        atributos = extract_features(
            viagem(2, (2900.0, 0.0), (0.0, 3900.0), 700, ('work', 'leisure')), agente, estacoes,
            {1: 1, 2: 0, 3: 0}, 680, grade,
        )
        assert atributos.station_distance_origin_m == pytest.approx(2900.0)
        assert atributos.station_distance_dest_m == pytest.approx(3900.0)

    def test_tudo_ocupado_usa_sentinela(self, grade, estacoes, agente):
        atributos = extract_features(viagem(3, (0.0, 0.0), (10.0, 0.0), 600), agente, estacoes, {}, 590, grade)
        assert atributos.station_distance_origin_m == 50000.0
        assert atributos.station_distance_dest_m == 50000.0

    def test_matriz_igual_a_extracao_individual(self, grade, estacoes, agente):
        viagens = (
            viagem(1, (0.0, 0.0), (3000.0, 4000.0), 600),
            viagem(2, (3000.0, 4000.0), (500.0, 0.0), 1000, ('work', 'shopping')),
            viagem(3, (500.0, 0.0), (0.0, 0.0), 1100, ('shopping', 'home')),
        )
        livres = {1: 1, 3: 1}
        decisoes = [584, 980, 1085]
        X = feature_matrix(viagens, (agente,), estacoes, livres, decisoes, grade, 5)
        for linha, trip, decisao in zip(X, viagens, decisoes):
            individual = extract_features(trip, agente, estacoes, livres, decisao, grade, day=5)
            np.testing.assert_array_equal(linha, individual.as_array())


class TestPtGrid:

    def test_celula_mais_proxima_e_bordas(self, grade):
        assert grade.score(500.0, 500.0) == 1.0
        assert grade.score(1500.0, 200.0) == 2.0
        assert grade.score(-999.0, 5000.0) == 3.0

    def test_grade_padrao_entre_0_e_4(self):
        grade = default_pt_grid()
        assert grade.scores.min() >= 0.0
        assert grade.scores.max() <= 4.0
        assert grade.score(0.0, 0.0) > grade.score(200000.0, 200000.0)

    def test_grade_de_bancada_encolhe_com_a_escala(self):
        grade = desk_pt_grid(0.01)
        assert grade.cell_m == pytest.approx(500.0)
        assert grade.score(0.0, 0.0) > 3.0
        # a 20 km do centro a rede real ainda tem transporte; a de bancada não
        assert default_pt_grid().score(20000.0, 0.0) > grade.score(20000.0, 0.0) == 0.0
