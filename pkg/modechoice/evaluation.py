"""
Relatório de avaliação do classificador: acurácias, matrizes de confusão
normalizadas pela classe verdadeira e pela predita, importâncias e participação modal.
"""
import numpy as np

from modechoice.features import FEATURE_NAMES
from modechoice.gbt import balanced_accuracy


def _normalize(matriz, eixo):
    soma = matriz.sum(axis=eixo, keepdims=True)
    return np.divide(matriz, soma, out=np.zeros_like(matriz, dtype=float), where=soma > 0)


def _shares(rotulos, classes):
    rotulos = list(rotulos)
    if not rotulos:
        return {c: 0.0 for c in classes}
    return {c: rotulos.count(c) / len(rotulos) for c in classes}


def classification_report(y_true, y_pred, classes):
    y_true = list(y_true)
    y_pred = list(y_pred)
    indice = {c: i for i, c in enumerate(classes)}
    confusao = np.zeros((len(classes), len(classes)), dtype=float)
    for verdadeiro, predito in zip(y_true, y_pred):
        confusao[indice[verdadeiro], indice[predito]] += 1
    return {
        'n_samples': len(y_true),
        'accuracy': float(np.mean(np.asarray(y_true, dtype=object) == np.asarray(y_pred, dtype=object))),
        'balanced_accuracy': balanced_accuracy(np.asarray(y_true, dtype=object), np.asarray(y_pred, dtype=object)),
        'classes': list(classes),
        'confusion': confusao.astype(int).tolist(),
        'confusion_by_truth': _normalize(confusao, 1).tolist(),
        'confusion_by_prediction': _normalize(confusao, 0).tolist(),
        'share_true': _shares(y_true, classes),
        'share_predicted': _shares(y_pred, classes),
    }


def evaluate_model(model, X, labels):
    """Relatório completo sobre um conjunto de teste."""
    predito = model.predict(X)
    classes = list(model.classes)
    for rotulo in labels:
        if rotulo not in classes:
            classes.append(rotulo)
    relatorio = classification_report(labels, predito, classes)
    nomes = FEATURE_NAMES if model.n_features == len(FEATURE_NAMES) else tuple(
        f'f{i}' for i in range(model.n_features)
    )
    importancias = model.feature_importances
    relatorio['feature_importance'] = {
        nome: float(valor)
        for nome, valor in sorted(zip(nomes, importancias), key=lambda par: -par[1])
    }
    relatorio['max_depth'] = model.max_depth
    relatorio['validation'] = {str(d): nota for d, nota in model.validation.items()}
    return relatorio
