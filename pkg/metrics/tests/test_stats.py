"""Testes das métricas de validação."""
import json
import logging

import numpy as np
import pytest
from django.core.exceptions import ValidationError
from django.core.management import call_command

from corpus.io import write_dataset
from corpus.models import Agent, DatasetBundle, Reservation, Station, Vehicle, attach_vehicles
from eventsim.distributions import ExpPowerParams
from eventsim.model import Booking, EventDistributionSet, EventSlot, sample_days
from metrics.report import validation_report
from metrics.stats import (
    StationStats, daily_station_stats, mode_share, station_zscores, utilization, wasserstein_1d,
)


# ──────────────────────────────────────────────────────────────
# Fixtures
# ──────────────────────────────────────────────────────────────
def reserva(reservation_id, vehicle_id, t_start, t_end, station_id=1, km=5.0):
    return Reservation(reservation_id, vehicle_id, 1, station_id, t_start, t_end, km)


def veiculos(n):
    return tuple(Vehicle.from_model(i, 1, 'Budget') for i in range(1, n + 1))


# ──────────────────────────────────────────────────────────────
# z-score
# ──────────────────────────────────────────────────────────────
class TestStationZscores:

    def test_na_media_e_a_dois_desvios(self):
        referencia = {1: StationStats(4.0, 1.5), 2: StationStats(10.0, 2.0)}
        z = station_zscores({1: 4.0, 2: 14.0}, referencia)
        assert z.z == {1: 0.0, 2: 2.0}
        assert z.mean_abs == 1.0

    def test_desvio_zero_excluido(self, caplog):
        with caplog.at_level(logging.WARNING, logger='metrics.stats'):
            z = station_zscores({1: 3.0}, {1: StationStats(3.0, 0.0), 2: StationStats(1.0, 1.0)})
        assert z.excluded == (1,)
        assert z.z == {2: -1.0}
        assert 'σ = 0' in caplog.text

    def test_invariante_a_deslocamento(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            y, mu, sigma, c = rng.random() * 10, rng.random() * 10, rng.random() + 0.1, rng.normal() * 5
            a = station_zscores({1: y}, {1: StationStats(mu, sigma)}).z[1]
            b = station_zscores({1: y + c}, {1: StationStats(mu + c, sigma)}).z[1]
            assert a == pytest.approx(b, abs=1e-12)

    def test_estatisticas_diarias(self):
        reservas = [Booking(1, 100.0, 30.0, 1.0)] + [Booking(1, 1440.0 + 60 * i, 30.0, 1.0) for i in range(3)]
        estatisticas = daily_station_stats(reservas, 2)
        assert estatisticas[1].mean == 2.0
        assert estatisticas[1].std == pytest.approx(np.sqrt(2.0))

    def test_um_dia_nao_basta(self):
        with pytest.raises(ValidationError):
            daily_station_stats([Booking(1, 100.0, 30.0, 1.0)], 1)


# ──────────────────────────────────────────────────────────────
# Wasserstein
# ──────────────────────────────────────────────────────────────
class TestWasserstein:

    def test_amostras_identicas(self):
        assert wasserstein_1d([1.0, 5.0, 2.0], [2.0, 1.0, 5.0]) == 0.0

    def test_translacao(self):
        a = np.random.default_rng(1).normal(size=200)
        assert wasserstein_1d(a + 3.5, a) == pytest.approx(3.5)

    def test_pareamento_ordenado(self):
        assert wasserstein_1d([0.0, 1.0], [1.0, 2.0]) == pytest.approx(1.0)

    def test_vazio(self):
        with pytest.raises(ValidationError):
            wasserstein_1d([], [1.0])

    def test_propriedades_de_metrica(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            a, b, c = (rng.normal(size=rng.integers(1, 30)) for _ in range(3))
            assert wasserstein_1d(a, b) == pytest.approx(wasserstein_1d(b, a), abs=1e-9)
            assert wasserstein_1d(a, c) <= wasserstein_1d(a, b) + wasserstein_1d(b, c) + 1e-9


# ──────────────────────────────────────────────────────────────
# Utilização e participação modal
# ──────────────────────────────────────────────────────────────
class TestUtilization:

    def test_sem_reservas(self):
        uso = utilization((), veiculos(3))
        assert (uso.count_rate, uso.time_rate) == (0.0, 0.0)
        assert uso.hourly_occupancy == (0.0,) * 24

    def test_um_de_dois_por_12_horas(self):
        uso = utilization((reserva(0, 1, 360, 1080),), veiculos(2))
        assert uso.count_rate == 0.5
        assert uso.time_rate == 0.5
        assert uso.hourly_occupancy[5] == 0.0
        assert uso.hourly_occupancy[6] == 0.5
        assert uso.hourly_occupancy[17] == 0.5

    def test_taxas_entre_0_e_1(self):
        rng = np.random.default_rng(3)
        reservas = []
        for vid in range(1, 11):
            inicio = 0
            for _ in range(3):
                inicio += int(rng.integers(1, 300))
                fim = inicio + int(rng.integers(1, 300))
                reservas.append(reserva(len(reservas), vid, inicio, fim))
                inicio = fim
        uso = utilization(reservas, veiculos(15))
        assert 0 <= uso.count_rate <= 1
        assert 0 <= uso.time_rate <= 1
        assert all(0 <= o <= 1 for o in uso.hourly_occupancy)


class TestModeShare:

    def test_igual_a_referencia(self):
        modos = ['Car'] * 3 + ['Walk'] * 1
        assert mode_share(modos, {'Car': 0.75, 'Walk': 0.25}).ratio == pytest.approx(1.0)

    def test_um_dobra_outro_cai_pela_metade(self):
        modos = ['Car'] * 2 + ['Walk'] * 1
        assert mode_share(modos, {'Car': 1 / 3, 'Walk': 2 / 3}).ratio == pytest.approx(2.0)

    def test_participacoes(self):
        resultado = mode_share(['Bus', 'Bus', 'Tram', 'CarSharing'])
        assert resultado.shares['Bus'] == 0.5
        assert resultado.shares['Car'] == 0.0
        assert resultado.ratio is None

    def test_vazio(self):
        with pytest.raises(ValidationError):
            mode_share([])


# ──────────────────────────────────────────────────────────────
# Relatório
# ──────────────────────────────────────────────────────────────
class TestValidationReport:

    def test_logs_identicos(self):
        rng = np.random.default_rng(4)
        reservas = [
            Booking(int(rng.integers(1, 4)), float(rng.integers(0, 5 * 1440)), float(rng.integers(10, 300)),
                    float(rng.uniform(1, 50)))
            for _ in range(200)
        ]
        relatorio, linhas = validation_report(reservas, reservas)
        for chave in ('wasserstein_duration_min', 'wasserstein_distance_km', 'wasserstein_start_min',
                      'wasserstein_end_min'):
            assert relatorio[chave] == 0.0
        assert all(linha.z == 0.0 for linha in linhas)

    def test_auto_amostra_do_simulador_por_eventos(self):
        probs = (0.5, 0.3, 0.2)
        dist = EventDistributionSet(slots={
            (h, w): EventSlot(h, w, 2.0 if 7 <= h <= 20 else 0.2, (1, 2, 3), probs,
                              ExpPowerParams(0.02, 1.0), ExpPowerParams(0.2, 1.0))
            for h in range(24)
            for w in (False, True)
        })
        calendario = (False,) * 100
        real = sample_days(dist, calendario, seed=1)
        sim = sample_days(dist, calendario, seed=2)
        relatorio, linhas = validation_report(real, sim)
        assert relatorio['mean_abs_zscore'] < 0.5
        assert abs(np.mean([linha.z for linha in linhas])) < 0.3


class TestValidateCommand:

    def test_arquivos_identicos(self, tmp_path):
        frota = veiculos(4)
        reservas = tuple(
            reserva(i, 1 + i % 4, 1440 * (i % 3) + 60 * i, 1440 * (i % 3) + 60 * i + 45, station_id=1 + i % 2)
            for i in range(12)
        )
        bundle = DatasetBundle(
            stations=attach_vehicles([Station(1, 0.0, 0.0), Station(2, 100.0, 0.0)], frota),
            vehicles=frota,
            agents=(Agent(1, 3, 'F', 0.0, 0.0, False, 'none'),),
            reservations=reservas,
        )
        for nome in ('real', 'sim'):
            write_dataset(tmp_path / nome, bundle)
        call_command(
            'validate', '--in', str(tmp_path / 'real'), '--sim', str(tmp_path / 'sim'), '--out', str(tmp_path / 'out'),
        )
        relatorio = json.loads((tmp_path / 'out' / 'report.json').read_text(encoding='utf-8'))
        assert relatorio['wasserstein_duration_min'] == 0.0
        assert relatorio['mean_abs_zscore'] == 0.0
        assert (tmp_path / 'out' / 'station_zscores.csv').is_file()
        assert 0 < relatorio['count_rate'] <= 1
