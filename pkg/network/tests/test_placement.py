"""Testes do KMeans com centros fixos usado para posicionar estações novas."""
import numpy as np
import pytest
from django.core.exceptions import ValidationError
from scipy.spatial import Delaunay

from corpus.models import Station
from network.placement import (
    add_new_stations, place_new_stations, read_home_locations, write_home_locations,
)


def linha(*xs):
    return np.array([(x, 0.0) for x in xs])


class TestPlaceNewStations:

    def test_k_zero(self):
        resultado = place_new_stations(linha(0, 1), 0, linha(10))
        assert resultado.centers.shape == (0, 2)

    def test_fixture_unidimensional(self):
        resultado = place_new_stations(linha(0, 1, 9, 10), 1, linha(10), init=linha(0))
        assert resultado.converged
        np.testing.assert_allclose(resultado.centers, [[0.5, 0.0]])

    def test_k_maior_que_pontos(self):
        with pytest.raises(ValidationError):
            place_new_stations(linha(0, 1), 3, linha(10))

    def test_objetivo_nao_cresce(self):
        for semente in range(50):
            rng = np.random.default_rng(semente)
            X = rng.normal(size=(200, 2)) * 1000.0
            fixos = rng.normal(size=(4, 2)) * 1000.0
            resultado = place_new_stations(X, 5, fixos, seed=semente)
            historico = np.array(resultado.history)
            assert np.all(np.diff(historico) <= 1e-6 * historico[:-1])

    def test_centros_no_fecho_convexo(self):
        rng = np.random.default_rng(5)
        X = rng.uniform(0, 5000, size=(300, 2))
        resultado = place_new_stations(X, 6, rng.uniform(0, 5000, size=(3, 2)), seed=1)
        assert np.all(Delaunay(X).find_simplex(resultado.centers, tol=1e-9) >= 0)

    def test_determinismo(self):
        X = np.random.default_rng(0).normal(size=(100, 2))
        a = place_new_stations(X, 3, X[:2], seed=4)
        b = place_new_stations(X, 3, X[:2], seed=4)
        np.testing.assert_array_equal(a.centers, b.centers)
        assert a.history == b.history

    def test_centro_vazio_e_resemeado(self):
        # o centro inicial fica sobre o fixo, que vence o empate
        resultado = place_new_stations(linha(0, 100), 1, linha(0), init=linha(0), max_iter=5)
        np.testing.assert_allclose(resultado.centers, [[100.0, 0.0]])


class TestNovasEstacoes:

    def test_ids_continuam_e_fixas_intactas(self):
        atuais = (Station(3, 0.0, 0.0, (1,)), Station(8, 5.0, 5.0, (2,)))
        todas = add_new_stations(atuais, [[1.0, 2.0], [3.0, 4.0]])
        assert todas[:2] == atuais
        assert [s.station_id for s in todas[2:]] == [9, 10]
        assert todas[2].vehicle_ids == ()

    def test_home_locations_csv(self, tmp_path):
        casas = np.array([[0.5, -1.25], [1e6, 3.0]])
        caminho = tmp_path / 'home_locations.csv'
        write_home_locations(caminho, casas)
        np.testing.assert_array_equal(read_home_locations(caminho), casas)
