"""Escolhedores de modo usados pelo simulador de reservas."""
import numpy as np
from django.core.exceptions import ValidationError
from django.db import models

from corpus.models import Mode


class Sampling(models.TextChoices):
    ARGMAX = 'argmax', 'Classe mais provável'
    CATEGORICAL = 'categorical', 'Sorteio categórico'


def predict_mode(model, features, sampling=Sampling.ARGMAX, seed=None):
    """
    Devolve (modo, probabilidades por classe).
    No argmax o empate fica com a primeira classe da lista do modelo.
    """
    linha = features.as_array() if hasattr(features, 'as_array') else np.asarray(features, dtype=float)
    probabilidades = model.predict_proba(linha)[0]
    if sampling == Sampling.ARGMAX:
        indice = int(np.argmax(probabilidades))
    elif sampling == Sampling.CATEGORICAL:
        rng = np.random.default_rng(seed)
        indice = int(rng.choice(len(probabilidades), p=probabilidades))
    else:
        raise ValidationError(f"sampling desconhecido: {sampling!r}", code='invalid')
    return model.classes[indice], dict(zip(model.classes, (float(p) for p in probabilidades)))


class GbtModeChooser:

    def __init__(self, model, sampling=Sampling.ARGMAX, seed=None):
        self.model = model
        self.sampling = Sampling(sampling)
        self.rng = np.random.default_rng(seed)

    def choose(self, features):
        modo, _ = predict_mode(self.model, features, self.sampling, seed=self.rng)
        return modo


class ConstantModeChooser:
    """Sempre o mesmo modo; útil para testes e para o limite superior de demanda."""

    def __init__(self, mode=Mode.CAR_SHARING):
        self.mode = str(mode)

    def choose(self, features):
        return self.mode
