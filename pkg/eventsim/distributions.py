"""
Distribuição de potência exponencial p(x) ∝ x^k·exp(−λx), x > 0.

É a forma Gamma com shape k+1 e taxa λ; o ajuste é de máxima verossimilhança
(Newton na equação ln a − ψ(a) = ln(média) − média(ln x)).
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError
from scipy import special

logger = logging.getLogger(__name__)

MIN_SAMPLES = 20
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class ExpPowerParams:
    rate: float
    k: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValidationError(f"taxa λ deve ser positiva (recebido {self.rate})", code='invalid')
        if self.k < 0:
            raise ValidationError(f"expoente k deve ser ≥ 0 (recebido {self.k})", code='invalid')

    @property
    def shape(self):
        return self.k + 1.0

    @property
    def mean(self):
        return self.shape / self.rate

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        a = self.shape
        return a * np.log(self.rate) - special.gammaln(a) + self.k * np.log(x) - self.rate * x

    def sample(self, rng, size):
        amostras = rng.gamma(self.shape, 1.0 / self.rate, size=size)
        return np.maximum(amostras, np.finfo(float).tiny)


def _newton_shape(s, a0):
    a = a0
    for _ in range(NEWTON_MAX_ITER):
        f = np.log(a) - special.digamma(a) - s
        df = 1.0 / a - special.polygamma(1, a)
        novo = a - f / df
        if novo <= 0:
            novo = a / 2.0
        if abs(novo - a) <= NEWTON_TOL * a:
            return novo
        a = novo
    logger.warning("ajuste Gamma: Newton parou após %d iterações (a=%.6g)", NEWTON_MAX_ITER, a)
    return a


def fit_exp_power(samples, fix_k=None):
    """Ajusta (λ, k) por máxima verossimilhança; `fix_k` fixa o expoente."""
    x = np.asarray(samples, dtype=float).ravel()
    if len(x) < MIN_SAMPLES:
        raise ValidationError(
            f"ajuste exige ao menos {MIN_SAMPLES} amostras (recebido {len(x)})", code='insufficient',
        )
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise ValidationError("amostras devem ser positivas e finitas", code='invalid')
    media = float(np.mean(x))

    if fix_k is not None:
        return ExpPowerParams(rate=(fix_k + 1.0) / media, k=float(fix_k))

    variancia = float(np.var(x))
    s = np.log(media) - float(np.mean(np.log(x)))
    if variancia <= 0 or s <= 0:
        raise ValidationError("amostras constantes: variância degenerada", code='degenerate')

    a = _newton_shape(s, media ** 2 / variancia)
    if a < 1.0:
        # k < 0 não é admitido: cai na exponencial
        a = 1.0
    return ExpPowerParams(rate=a / media, k=a - 1.0)
