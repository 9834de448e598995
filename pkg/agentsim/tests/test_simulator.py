"""Testes do simulador de reservas e da fusão de trechos."""
import numpy as np
import pytest
from django.conf import settings

from agentsim.simulator import RawSegment, merge_reservations, read_sim_log, simulate_reservations, write_sim_log
from corpus.exceptions import SimulationError
from corpus.models import Agent, Mode, Station, Trip, Vehicle
from modechoice.choosers import ConstantModeChooser
from population.generator import generate_base_population
from population.templates import default_templates
from population.world import build_current_network


# ──────────────────────────────────────────────────────────────
# Fixtures
# ──────────────────────────────────────────────────────────────
A = (0.0, 0.0)
B = (5000.0, 0.0)
C = (0.0, 3000.0)


def agente(agent_id, casa=A):
    return Agent(agent_id, 3, 'F', *casa, False, 'none')


def viagem(trip_id, agent_id, origem, destino, t_dest_start, purposes=('home', 'work')):
    distancia = float(np.hypot(destino[0] - origem[0], destino[1] - origem[1]))
    return Trip(trip_id, agent_id, *origem, *destino, *purposes, t_dest_start, distancia)


def veiculo(vehicle_id, station_id):
    return Vehicle.from_model(vehicle_id, station_id, 'Budget')


def simular(trips, agents, stations, vehicles, modo=Mode.CAR_SHARING, **kwargs):
    return simulate_reservations(trips, agents, stations, vehicles, ConstantModeChooser(modo), **kwargs)


def sem_sobreposicao(reservas):
    por_veiculo = {}
    for r in reservas:
        por_veiculo.setdefault(r.vehicle_id, []).append((r.t_start, r.t_end))
    for intervalos in por_veiculo.values():
        intervalos.sort()
        for (_, fim), (inicio, _) in zip(intervalos, intervalos[1:]):
            if inicio < fim:
                return False
    return True


@pytest.fixture
def ida_e_volta():
    """Um agente vai de A a B (chega 10:00) e volta a A (chega 16:40)."""
    return (
        viagem(1, 7, A, B, 600),
        viagem(2, 7, B, A, 1000, ('work', 'home')),
    )


# ──────────────────────────────────────────────────────────────
# Simulação
# ──────────────────────────────────────────────────────────────
class TestSimulateReservations:

    def test_sem_viagens(self):
        resultado = simular((), (), (Station(1, *A),), (veiculo(10, 1),))
        assert resultado.reservations == ()
        assert resultado.sim_log == ()

    def test_ida_e_volta_vira_uma_reserva(self, ida_e_volta):
        resultado = simular(ida_e_volta, (agente(7),), (Station(1, *A),), (veiculo(10, 1),))
        assert len(resultado.reservations) == 1
        reserva = resultado.reservations[0]
        assert (reserva.vehicle_id, reserva.agent_id, reserva.station_id) == (10, 7, 1)
        assert (reserva.t_start, reserva.t_end) == (584, 1000)
        assert reserva.drive_km == pytest.approx(10.0)
        assert not reserva.forced_return
        assert resultado.pickups == resultado.returns == 1

    def test_viagem_com_carro_nao_consulta_modelo(self, ida_e_volta):
        resultado = simular(ida_e_volta, (agente(7),), (Station(1, *A),), (veiculo(10, 1),))
        volta = resultado.sim_log[1]
        assert volta.trip_id == 2
        assert volta.predicted_mode == 'CarSharing'
        assert volta.station_distance_m is None

    def test_segundo_agente_sem_veiculo(self):
        viagens = (viagem(1, 1, A, B, 600), viagem(2, 2, A, B, 610))
        resultado = simular(viagens, (agente(1), agente(2)), (Station(1, *A),), (veiculo(10, 1),))
        assert [r.agent_id for r in resultado.reservations] == [1]
        assert resultado.sim_log[1].station_distance_m == settings.STATION_DISTANCE_SENTINEL_M
        assert resultado.unserved == 1

    def test_segundo_agente_vai_para_proxima_estacao(self):
        viagens = (viagem(1, 1, A, B, 600), viagem(2, 2, A, B, 610))
        estacoes = (Station(1, *A), Station(2, *C))
        resultado = simular(viagens, (agente(1), agente(2)), estacoes, (veiculo(10, 1), veiculo(20, 2)))
        assert resultado.sim_log[1].station_distance_m == pytest.approx(3000.0)
        assert {(r.agent_id, r.vehicle_id, r.station_id) for r in resultado.reservations} == {(1, 10, 1), (2, 20, 2)}

    def test_menor_id_livre(self):
        viagens = (viagem(1, 1, A, B, 600),)
        resultado = simular(viagens, (agente(1),), (Station(1, *A),), (veiculo(12, 1), veiculo(11, 1)))
        assert resultado.reservations[0].vehicle_id == 11

    def test_devolucao_antes_da_decisao_no_mesmo_minuto(self):
        # o agente 2 decide às 700 (716 − 6 − 10), exatamente quando o carro volta
        viagens = (
            viagem(1, 1, A, B, 600),
            viagem(2, 1, B, A, 700, ('work', 'home')),
            viagem(3, 2, A, B, 716),
        )
        resultado = simular(viagens, (agente(1), agente(2)), (Station(1, *A),), (veiculo(10, 1),))
        assert [(r.agent_id, r.t_start, r.t_end) for r in resultado.reservations] == [(1, 584, 700), (2, 700, 1440)]
        assert sem_sobreposicao(resultado.reservations)

    def test_devolucao_forcada_no_fim_do_dia(self):
        resultado = simular((viagem(1, 1, A, B, 600),), (agente(1),), (Station(1, *A),), (veiculo(10, 1),))
        reserva = resultado.reservations[0]
        assert (reserva.t_start, reserva.t_end) == (584, 1440)
        assert reserva.forced_return
        assert reserva.drive_km == pytest.approx(10.0)
        assert resultado.forced_returns == 1
        assert resultado.pickups == resultado.returns

    def test_outro_modo_nao_reserva(self, ida_e_volta):
        resultado = simular(ida_e_volta, (agente(7),), (Station(1, *A),), (veiculo(10, 1),), modo=Mode.WALK)
        assert resultado.reservations == ()
        assert [e.predicted_mode for e in resultado.sim_log] == ['Walk', 'Walk']

    def test_varios_dias(self, ida_e_volta):
        resultado = simular(ida_e_volta, (agente(7),), (Station(1, *A),), (veiculo(10, 1),), days=2)
        assert [(r.t_start, r.t_end) for r in resultado.reservations] == [(584, 1000), (2024, 2440)]
        assert [e.day for e in resultado.sim_log] == [0, 0, 1, 1]

    def test_falha_do_modelo_nomeia_a_viagem(self, ida_e_volta):
        class Quebrado:
            def choose(self, features):
                raise ValueError('sem modelo')

        with pytest.raises(SimulationError) as erro:
            simulate_reservations(ida_e_volta, (agente(7),), (Station(1, *A),), (veiculo(10, 1),), Quebrado())
        assert erro.value.trip_id == 1

    def test_sim_log_csv(self, tmp_path, ida_e_volta):
        resultado = simular(ida_e_volta, (agente(7),), (Station(1, *A),), (veiculo(10, 1),))
        caminho = tmp_path / 'sim_log.csv'
        write_sim_log(caminho, resultado.sim_log)
        assert read_sim_log(caminho) == resultado.sim_log


class TestPropriedadesNaBancada:

    @pytest.fixture(scope='class')
    def cenario(self):
        estacoes, veiculos = build_current_network(18, 30, settings.CATEGORY_SHARES, seed=3)
        agentes, viagens = generate_base_population(400, estacoes, default_templates(), seed=4)
        return estacoes, veiculos, agentes, viagens

    def test_sem_reserva_dupla_e_conservacao(self, cenario):
        estacoes, veiculos, agentes, viagens = cenario
        resultado = simular(viagens, agentes, estacoes, veiculos)
        assert resultado.reservations
        assert sem_sobreposicao(resultado.reservations)
        assert resultado.pickups == resultado.returns

    def test_determinismo(self, cenario):
        estacoes, veiculos, agentes, viagens = cenario
        assert simular(viagens, agentes, estacoes, veiculos) == simular(viagens, agentes, estacoes, veiculos)

    def test_mais_veiculos_nao_reduz_reservas(self, cenario):
        estacoes, veiculos, agentes, viagens = cenario
        pequena = simular(viagens, agentes, estacoes, veiculos[:10])
        completa = simular(viagens, agentes, estacoes, veiculos)
        assert len(completa.reservations) >= len(pequena.reservations)


# ──────────────────────────────────────────────────────────────
# Fusão
# ──────────────────────────────────────────────────────────────
class TestMergeReservations:

    def test_um_trecho(self):
        reservas = merge_reservations([RawSegment(1, 10, 1, 100, 200, 3.0)])
        assert len(reservas) == 1
        assert (reservas[0].t_start, reservas[0].t_end, reservas[0].drive_km) == (100, 200, 3.0)

    def test_tres_trechos_encostados(self):
        trechos = [
            RawSegment(1, 10, 1, 100, 200, 3.0),
            RawSegment(1, 10, 1, 200, 300, 4.0),
            RawSegment(1, 10, 1, 300, 400, 5.0),
        ]
        reservas = merge_reservations(trechos)
        assert len(reservas) == 1
        assert (reservas[0].t_start, reservas[0].t_end) == (100, 400)
        assert reservas[0].drive_km == pytest.approx(12.0)

    def test_dois_agentes_intervalos_disjuntos(self):
        reservas = merge_reservations([
            RawSegment(2, 10, 1, 300, 400, 1.0),
            RawSegment(1, 10, 1, 100, 200, 1.0),
        ])
        assert [(r.reservation_id, r.agent_id) for r in reservas] == [(0, 1), (1, 2)]

    def test_sobreposicao_entre_agentes(self):
        with pytest.raises(SimulationError):
            merge_reservations([RawSegment(1, 10, 1, 100, 200, 1.0), RawSegment(2, 10, 1, 150, 250, 1.0)])
