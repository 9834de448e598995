"""Testes do ajuste da distribuição de potência exponencial."""
import numpy as np
import pytest
from django.core.exceptions import ValidationError
from scipy import integrate

from eventsim.distributions import ExpPowerParams, fit_exp_power


class TestFitExpPower:

    def test_k_fixo_em_zero_vira_exponencial(self):
        amostras = np.random.default_rng(0).exponential(3.0, size=500)
        params = fit_exp_power(amostras, fix_k=0)
        assert params.k == 0.0
        assert params.rate == pytest.approx(1.0 / np.mean(amostras), rel=1e-9)

    def test_recupera_parametros_conhecidos(self):
        rng = np.random.default_rng(1)
        amostras = ExpPowerParams(rate=2.0, k=2.0).sample(rng, 10 ** 5)
        params = fit_exp_power(amostras)
        assert params.rate == pytest.approx(2.0, rel=0.05)
        assert params.k == pytest.approx(2.0, rel=0.05)

    def test_k_negativo_e_truncado(self):
        # shape 0.5 < 1: o ajuste livre daria k < 0
        amostras = np.random.default_rng(2).gamma(0.5, 1.0, size=5000)
        params = fit_exp_power(amostras)
        assert params.k == 0.0
        assert params.rate == pytest.approx(1.0 / np.mean(amostras))

    def test_amostras_constantes(self):
        with pytest.raises(ValidationError):
            fit_exp_power(np.full(50, 4.0))

    def test_amostra_nao_positiva(self):
        with pytest.raises(ValidationError):
            fit_exp_power([1.0] * 30 + [0.0])

    def test_poucas_amostras(self):
        with pytest.raises(ValidationError):
            fit_exp_power([1.0, 2.0, 3.0])


class TestExpPowerParams:

    def test_densidade_normalizada(self):
        params = ExpPowerParams(rate=0.7, k=1.5)
        total, _ = integrate.quad(lambda x: np.exp(params.log_pdf(x)), 0, np.inf)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_amostras_positivas(self):
        amostras = ExpPowerParams(rate=50.0, k=0.0).sample(np.random.default_rng(3), 10 ** 4)
        assert np.all(amostras > 0)

    def test_parametros_invalidos(self):
        with pytest.raises(ValidationError):
            ExpPowerParams(rate=0.0, k=1.0)
        with pytest.raises(ValidationError):
            ExpPowerParams(rate=1.0, k=-0.5)
