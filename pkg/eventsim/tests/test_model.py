"""Testes do ajuste por faixa horária e do sorteio de dias."""
import logging

import numpy as np
import pytest
from django.core.exceptions import ValidationError
from django.core.management import call_command

from corpus.io import write_dataset
from corpus.models import Agent, DatasetBundle, Reservation, Station, Vehicle, attach_vehicles
from eventsim.distributions import ExpPowerParams
from eventsim.io import read_bookings, read_distributions, write_distributions
from eventsim.model import (
    Booking, EventDistributionSet, EventSlot, bookings_from_reservations, default_calendar,
    fit_event_distributions, sample_day, sample_days,
)


# ──────────────────────────────────────────────────────────────
# Fixtures
# ──────────────────────────────────────────────────────────────
DURACAO = ExpPowerParams(rate=0.02, k=2.0)
DISTANCIA = ExpPowerParams(rate=0.1, k=1.0)


def conjunto_uniforme(taxa, estacoes=(1, 2, 3)):
    probs = tuple(1.0 / len(estacoes) for _ in estacoes)
    return EventDistributionSet(slots={
        (h, w): EventSlot(h, w, taxa, tuple(estacoes), probs, DURACAO, DISTANCIA)
        for h in range(24)
        for w in (False, True)
    })


# 100 dias úteis e 100 de fim de semana, alternados
CALENDARIO = tuple(bool(d % 2) for d in range(200))


# ──────────────────────────────────────────────────────────────
# Ajuste
# ──────────────────────────────────────────────────────────────
class TestFitEventDistributions:

    def test_log_vazio(self):
        with pytest.raises(ValidationError):
            fit_event_distributions((), CALENDARIO)

    def test_calendario_sem_fim_de_semana(self):
        with pytest.raises(ValidationError):
            fit_event_distributions((Booking(1, 60.0, 30.0, 5.0),), (False,) * 5)

    def test_reserva_fora_do_calendario(self):
        with pytest.raises(ValidationError):
            fit_event_distributions((Booking(1, 5000.0, 30.0, 5.0),), (False, True))

    def test_suavizacao_com_uma_estacao(self):
        rng = np.random.default_rng(0)
        reservas = tuple(
            Booking(1, 600.0 + rng.uniform(0, 60), rng.uniform(10, 90), rng.uniform(1, 20))
            for _ in range(40)
        )
        dist = fit_event_distributions(reservas, (False, True), station_ids=(1, 2, 3))
        probs = dict(zip(dist.station_ids, dist.slot(10, False).station_probs))
        n = 40
        assert probs[1] == pytest.approx((n + 0.5) / (n + 1.5))
        assert probs[1] >= n / (n + 0.5 * 3)
        assert sum(probs.values()) == pytest.approx(1.0)

    def test_faixa_vazia_herda_ajuste_global(self, caplog):
        rng = np.random.default_rng(1)
        reservas = tuple(
            Booking(1, 600.0 + rng.uniform(0, 60), rng.uniform(10, 90), rng.uniform(1, 20))
            for _ in range(40)
        )
        with caplog.at_level(logging.WARNING, logger='eventsim.model'):
            dist = fit_event_distributions(reservas, (False, True))
        vazia = dist.slot(3, True)
        assert vazia.fallback
        assert vazia.poisson_rate == 0.0
        assert vazia.duration == dist.slot(4, False).duration
        assert not dist.slot(10, False).fallback
        assert 'ajuste global' in caplog.text

    def test_reservas_viram_bookings(self):
        reservas = (Reservation(0, 10, 1, 4, 1500, 1620, 12.5),)
        assert bookings_from_reservations(reservas) == (Booking(4, 1500.0, 120.0, 12.5),)

    def test_calendario_padrao(self):
        # começa na quarta: sábado e domingo são os dias 3 e 4
        assert default_calendar(7, start_weekday=2) == (False, False, False, True, True, False, False)


# ──────────────────────────────────────────────────────────────
# Sorteio
# ──────────────────────────────────────────────────────────────
class TestSampleDay:

    def test_taxa_zero_dia_vazio(self):
        assert sample_day(conjunto_uniforme(0.0), False, seed=1) == ()

    def test_mesma_semente_mesmo_dia(self):
        dist = conjunto_uniforme(2.0)
        assert sample_day(dist, True, seed=7) == sample_day(dist, True, seed=7)

    def test_total_diario_esperado(self):
        dist = conjunto_uniforme(1.5)
        totais = [len(sample_day(dist, False, seed=s)) for s in range(1000)]
        esperado = dist.expected_daily_total(False)
        assert esperado == pytest.approx(72.0)
        assert abs(np.mean(totais) - esperado) <= 3 * np.sqrt(esperado / 1000)

    def test_inicios_na_meia_hora_e_valores_positivos(self):
        reservas = sample_day(conjunto_uniforme(3.0), False, seed=2, day_index=4)
        assert all(4 * 1440 <= b.t_start < 5 * 1440 for b in reservas)
        assert all(b.duration_min > 0 and b.distance_km > 0 for b in reservas)
        assert [b.t_start for b in reservas] == sorted(b.t_start for b in reservas)


class TestIdaEVolta:

    @pytest.fixture(scope='class')
    def reajuste(self):
        original = conjunto_uniforme(50.0)
        reservas = sample_days(original, CALENDARIO, seed=11)
        return original, fit_event_distributions(reservas, CALENDARIO, station_ids=(1, 2, 3))

    def test_taxas_recuperadas(self, reajuste):
        original, novo = reajuste
        for chave, slot in novo.slots.items():
            assert slot.poisson_rate == pytest.approx(original.slots[chave].poisson_rate, rel=0.10), chave

    def test_parametros_recuperados(self, reajuste):
        _, novo = reajuste
        for chave, slot in novo.slots.items():
            assert not slot.fallback
            assert slot.duration.rate == pytest.approx(DURACAO.rate, rel=0.10), chave
            assert slot.duration.k == pytest.approx(DURACAO.k, rel=0.10), chave
            assert slot.distance.rate == pytest.approx(DISTANCIA.rate, rel=0.10), chave
            assert slot.distance.k == pytest.approx(DISTANCIA.k, rel=0.10), chave

    def test_csv(self, tmp_path, reajuste):
        _, dist = reajuste
        write_distributions(dist, tmp_path / 'distributions.csv', tmp_path / 'station_probs.csv')
        lido = read_distributions(tmp_path / 'distributions.csv', tmp_path / 'station_probs.csv')
        assert lido.slots == dist.slots


# ──────────────────────────────────────────────────────────────
# Comandos
# ──────────────────────────────────────────────────────────────
class TestComandos:

    def test_ajuste_e_sorteio(self, tmp_path):
        rng = np.random.default_rng(5)
        reservas = []
        for i in range(300):
            inicio = int(rng.integers(0, 7 * 1440 - 200))
            reservas.append(Reservation(i, i, 1, int(rng.integers(1, 4)), inicio, inicio + int(rng.integers(20, 200)),
                                        float(rng.uniform(1, 40))))
        veiculos = tuple(Vehicle.from_model(i, 1 + i % 3, 'Budget') for i in range(300))
        estacoes = attach_vehicles([Station(s, 0.0, 0.0) for s in (1, 2, 3)], veiculos)
        log = tmp_path / 'log'
        write_dataset(log, DatasetBundle(
            stations=estacoes, vehicles=veiculos, agents=(Agent(1, 3, 'F', 0.0, 0.0, False, 'none'),),
            reservations=tuple(reservas),
        ))

        call_command('fit_eventsim', '--in', str(log), '--out', str(tmp_path / 'dist'), '--days', '7')
        call_command('simulate_event', '--in', str(tmp_path / 'dist'), '--out', str(tmp_path / 'sim'), '--days', '3')
        sorteadas = read_bookings(tmp_path / 'sim' / 'bookings.csv')
        assert all(b.station_id in (1, 2, 3) for b in sorteadas)
        assert (tmp_path / 'sim' / 'manifest.json').is_file()
