"""Testes dos pesos estratificados e do sorteio de assinantes."""
import numpy as np
import pytest
from django.core.exceptions import ValidationError
from scipy import stats as sps

from corpus.models import Agent, Station
from population.weights import (
    PopulationStats, build_reference_stats, compute_sampling_weights,
    raw_sampling_weights, read_population_stats, sample_carsharing_users,
    write_population_stats,
)


# ──────────────────────────────────────────────────────────────
# Fixtures
# ──────────────────────────────────────────────────────────────
@pytest.fixture
def estacoes():
    return (Station(1, 0.0, 0.0), Station(2, 10000.0, 0.0))


def agente(agent_id, idade, genero, x):
    return Agent(agent_id, idade, genero, x, 0.0, False, 'none')


@pytest.fixture
def q_real():
    # 2 na idade 1, 2 mulheres, 2 mais próximos da estação 1
    return (
        agente(0, 1, 'F', 100.0),
        agente(1, 1, 'M', 9900.0),
        agente(2, 3, 'F', 9800.0),
        agente(3, 3, 'M', 200.0),
    )


@pytest.fixture
def u_real():
    return (agente(10, 1, 'F', 50.0),)


@pytest.fixture
def stats(u_real, q_real, estacoes):
    return build_reference_stats(u_real, q_real, estacoes)


# ──────────────────────────────────────────────────────────────
# Pesos
# ──────────────────────────────────────────────────────────────
class TestPesos:

    def test_peso_bruto_do_estrato_enumerado(self, stats, estacoes):
        pesos = raw_sampling_weights((agente(5, 1, 'F', 0.0),), stats, estacoes)
        assert pesos[0] == pytest.approx(0.125, abs=1e-15)

    def test_idade_ausente_em_u_real_tem_peso_zero(self, stats, estacoes):
        pesos = raw_sampling_weights((agente(5, 3, 'F', 0.0),), stats, estacoes)
        assert pesos[0] == 0.0

    def test_estrato_sem_denominador_gera_aviso(self, stats, estacoes, caplog):
        pesos = raw_sampling_weights((agente(5, 6, 'F', 0.0),), stats, estacoes)
        assert pesos[0] == 0.0
        assert 'peso 0' in caplog.text

    def test_u_igual_a_q_da_pesos_uniformes(self, q_real, estacoes):
        identidade = build_reference_stats(q_real, q_real, estacoes)
        pesos = compute_sampling_weights(q_real, identidade, estacoes)
        np.testing.assert_allclose(pesos, np.full(4, 0.25), atol=1e-15)

    def test_invariancia_de_escala(self, q_real, estacoes):
        base = build_reference_stats(q_real[:3], q_real, estacoes)
        escalado = base.scaled_users(7.0)
        brutos = raw_sampling_weights(q_real, base, estacoes)
        np.testing.assert_allclose(raw_sampling_weights(q_real, escalado, estacoes), brutos * 343.0)
        np.testing.assert_allclose(
            compute_sampling_weights(q_real, escalado, estacoes),
            compute_sampling_weights(q_real, base, estacoes),
            atol=1e-12,
        )

    def test_todos_os_pesos_zero(self, stats, estacoes):
        with pytest.raises(ValidationError):
            compute_sampling_weights((agente(5, 4, 'M', 0.0),), stats, estacoes)

    def test_estrato_de_u_ausente_em_q_e_invalido(self):
        with pytest.raises(ValidationError):
            PopulationStats(age={1: (3, 0)})

    def test_csv_ida_e_volta(self, tmp_path, stats):
        caminho = tmp_path / 'population_stats.csv'
        write_population_stats(caminho, stats)
        assert read_population_stats(caminho) == stats


# ──────────────────────────────────────────────────────────────
# Sorteio
# ──────────────────────────────────────────────────────────────
class TestSorteio:

    def test_n_igual_aos_positivos_devolve_todos(self, q_real):
        escolhidos = sample_carsharing_users(q_real, [0.5, 0.0, 0.25, 0.25], 3, seed=1)
        assert [a.agent_id for a in escolhidos] == [0, 2, 3]

    def test_n_grande_demais(self, q_real):
        with pytest.raises(ValidationError):
            sample_carsharing_users(q_real, [0.5, 0.0, 0.25, 0.25], 4, seed=1)

    def test_mesma_semente_mesmo_subconjunto(self, q_real):
        pesos = [0.4, 0.3, 0.2, 0.1]
        assert sample_carsharing_users(q_real, pesos, 2, seed=9) == sample_carsharing_users(q_real, pesos, 2, seed=9)

    def test_peso_concentrado(self, q_real):
        pesos = [0.99, 0.004, 0.003, 0.003]
        presencas = sum(
            sample_carsharing_users(q_real, pesos, 1, seed=s)[0].agent_id == 0 for s in range(1000)
        )
        limite = 1000 * 0.99 - 3 * np.sqrt(1000 * 0.99 * 0.01)
        assert presencas >= limite

    def test_marginais_convergem_para_os_pesos(self):
        rng = np.random.default_rng(0)
        agentes = tuple(
            Agent(i, int(rng.integers(1, 7)), 'FMO'[int(rng.integers(0, 3))], 0.0, 0.0, False, 'none')
            for i in range(30)
        )
        pesos = rng.random(30)
        pesos /= pesos.sum()
        idades = np.array([a.age_group for a in agentes])
        esperado = np.array([pesos[idades == g].sum() for g in range(1, 7)])
        sorteios = 20000
        contagem = np.zeros(6)
        for s in range(sorteios):
            contagem[sample_carsharing_users(agentes, pesos, 1, seed=s)[0].age_group - 1] += 1
        presentes = esperado > 0
        resultado = sps.chisquare(contagem[presentes], esperado[presentes] * sorteios)
        assert resultado.pvalue > 0.01
