"""Testes do escalonamento da frota e das categorias dos veículos novos."""
import numpy as np
import pytest
from django.core.exceptions import ValidationError
from scipy import stats

from corpus.exceptions import ConvergenceError
from corpus.models import Station, Vehicle, attach_vehicles
from network.fleet import (
    FleetScalePlan, apply_fleet_plan, assign_vehicle_categories, scale_fleet, scaled_counts,
)


# ──────────────────────────────────────────────────────────────
# Fixtures
# ──────────────────────────────────────────────────────────────
@pytest.fixture
def rede():
    """Dez estações com 1, 2 ou 3 veículos (20 no total)."""
    contagens = [1, 2, 3, 2, 2, 3, 1, 2, 2, 2]
    estacoes = [Station(i, 1000.0 * i, 0.0) for i in range(len(contagens))]
    veiculos = []
    for sid, n in enumerate(contagens):
        for _ in range(n):
            veiculos.append(Vehicle.from_model(len(veiculos), sid, 'Budget'))
    return attach_vehicles(estacoes, veiculos), tuple(veiculos)


# ──────────────────────────────────────────────────────────────
# scale_fleet
# ──────────────────────────────────────────────────────────────
class TestScaleFleet:

    def test_arredondamento_do_multiplicador(self):
        assert scaled_counts([2], [2.4]).tolist() == [5]
        assert scaled_counts([3], [-0.5]).tolist() == [0]

    def test_fator_de_escala(self, rede):
        estacoes, _ = rede
        plano = scale_fleet(estacoes, 50, seed=1)
        assert plano.factor == pytest.approx(2.5)
        assert plano.v_current == 20

    def test_mesmo_tamanho_aceita_plano(self, rede):
        estacoes, _ = rede
        plano = scale_fleet(estacoes, 20, seed=3)
        assert plano.factor == 1.0
        assert abs(plano.total - 20) / 20 < 0.005

    def test_total_dentro_da_tolerancia(self, rede):
        estacoes, _ = rede
        for semente in range(20):
            plano = scale_fleet(estacoes, 50, seed=semente)
            assert abs(plano.total - 50) / 50 < 0.005
            assert all(n >= 0 for n in plano.counts.values())

    def test_determinismo(self, rede):
        estacoes, _ = rede
        assert scale_fleet(estacoes, 50, seed=7) == scale_fleet(estacoes, 50, seed=7)

    def test_multiplicadores_normais_em_torno_do_fator(self):
        estacoes = tuple(Station(i, float(i), 0.0, (i,)) for i in range(2000))
        plano = scale_fleet(estacoes, 4000, seed=4)
        m = np.array(list(plano.multipliers.values()))
        assert m.mean() == pytest.approx(2.0, abs=0.03)
        assert m.std() == pytest.approx(0.3, abs=0.02)
        # simétrico: uma lognormal com a mesma dispersão teria assimetria perto de 0,45
        assert abs(stats.skew(m)) < 0.2

    def test_estacoes_novas_usam_contagem_base(self, rede):
        estacoes, _ = rede
        estacoes = estacoes + (Station(99, 0.0, 500.0),)
        plano = scale_fleet(estacoes, 55, seed=2, base_counts={99: 2})
        assert plano.v_current == 22
        assert 99 in plano.counts

    def test_sem_convergencia(self):
        # sem ruído, round(1,5) = 2 em cada estação: total 4, nunca 3
        estacoes = (Station(0, 0.0, 0.0, (0,)), Station(1, 1.0, 0.0, (1,)))
        with pytest.raises(ConvergenceError):
            scale_fleet(estacoes, 3, sigma=0.0, seed=1, max_rounds=5)

    def test_v_desired_invalido(self, rede):
        with pytest.raises(ValidationError):
            scale_fleet(rede[0], 0)

    def test_frota_vazia(self):
        with pytest.raises(ValidationError):
            scale_fleet((Station(0, 0.0, 0.0),), 10)


# ──────────────────────────────────────────────────────────────
# Categorias e aplicação do plano
# ──────────────────────────────────────────────────────────────
class TestCategorias:

    def test_categoria_unica(self):
        assert set(assign_vehicle_categories(50, {'Premium': 1.0}, seed=1)) == {'Premium'}

    def test_binomial(self):
        categorias = assign_vehicle_categories(10 ** 4, {'Budget': 0.5, 'Combi': 0.5}, seed=4)
        n = categorias.count('Budget')
        assert abs(n - 5000) <= 3 * np.sqrt(10 ** 4 * 0.25)

    def test_determinismo(self):
        shares = {'Budget': 0.6, 'Other': 0.4}
        assert assign_vehicle_categories(30, shares, seed=2) == assign_vehicle_categories(30, shares, seed=2)

    def test_mapa_vazio(self):
        with pytest.raises(ValidationError):
            assign_vehicle_categories(3, {})


class TestApplyFleetPlan:

    def test_remove_maiores_ids_e_cria_novos(self, rede):
        estacoes, veiculos = rede
        plano = FleetScalePlan(
            v_desired=21, v_current=20, factor=1.05,
            multipliers={}, counts={0: 3, 2: 1},
        )
        novas, frota = apply_fleet_plan(estacoes, veiculos, plano, {'Combi': 1.0}, seed=1)
        por_id = {s.station_id: s for s in novas}
        assert por_id[2].vehicle_ids == (3,)
        assert por_id[0].vehicle_ids == (0, 20, 21)
        assert {v.category for v in frota if v.vehicle_id >= 20} == {'Combi'}
        assert len(frota) == 20 - 2 + 2
