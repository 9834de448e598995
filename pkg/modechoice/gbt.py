"""
Gradient boosting multiclasse com softmax, implementação própria.

Cada rodada ajusta uma árvore de regressão por classe sobre os pseudo-resíduos
(one-hot - softmax), com ganho de segunda ordem e busca gulosa exata em colunas
pré-ordenadas. Limiares ficam no ponto médio entre valores consecutivos e
`x <= limiar` vai para a esquerda.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from corpus.models import Mode

logger = logging.getLogger(__name__)

MIN_SAMPLES = 50
HESSIAN_FLOOR = 1e-16
LEAF = -1
ROW_CHUNK = 4096


# ─── Funções de perda ─────────────────────────────────────────
def softmax(margins):
    margins = np.asarray(margins, dtype=float)
    deslocado = margins - margins.max(axis=-1, keepdims=True)
    expo = np.exp(deslocado)
    return expo / expo.sum(axis=-1, keepdims=True)


def multinomial_log_loss(margins, onehot):
    """Soma de -log p(classe verdadeira)."""
    margins = np.asarray(margins, dtype=float)
    deslocado = margins - margins.max(axis=-1, keepdims=True)
    log_z = np.log(np.exp(deslocado).sum(axis=-1, keepdims=True))
    return float(-(np.asarray(onehot) * (deslocado - log_z)).sum())


def pseudo_residuals(margins, onehot):
    """Gradiente negativo da log-loss em relação às margens."""
    return np.asarray(onehot, dtype=float) - softmax(margins)


# ─── Árvore ───────────────────────────────────────────────────
@dataclass
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self):
        return len(self.feature)

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        no = np.zeros(len(X), dtype=np.int64)
        linhas = np.arange(len(X))
        while True:
            f = self.feature[no]
            internos = f != LEAF
            if not internos.any():
                break
            vai_esquerda = X[linhas, np.where(internos, f, 0)] <= self.threshold[no]
            proximo = np.where(vai_esquerda, self.left[no], self.right[no])
            no = np.where(internos, proximo, no)
        return self.value[no]


class _TreeBuilder:
    """Constrói uma árvore nível a nível; cada nó guarda suas colunas ordenadas (F, m)."""

    def __init__(self, X, ordem, max_depth, min_samples_leaf, reg_lambda, learning_rate):
        self.X = X
        self.ordem = ordem
        self.max_depth = max_depth
        self.min_leaf = min_samples_leaf
        self.reg_lambda = reg_lambda
        self.lr = learning_rate
        self.colunas = np.arange(X.shape[1])[:, None]

    def _best_split(self, ordem_no, g, h):
        m = ordem_no.shape[1]
        if m < 2 * self.min_leaf:
            return None
        gs = np.cumsum(g[ordem_no], axis=1)
        hs = np.cumsum(h[ordem_no], axis=1)
        G, H = gs[0, -1], hs[0, -1]
        xs = self.X[ordem_no, self.colunas]

        # posição i separa [0..i] de [i+1..m-1]
        esquerda_g, esquerda_h = gs[:, :-1], hs[:, :-1]
        direita_g, direita_h = G - esquerda_g, H - esquerda_h
        lam = self.reg_lambda
        ganho = 0.5 * (
            esquerda_g ** 2 / (esquerda_h + lam)
            + direita_g ** 2 / (direita_h + lam)
            - G ** 2 / (H + lam)
        )
        tamanho = np.arange(1, m)
        valido = (xs[:, :-1] < xs[:, 1:]) & (tamanho >= self.min_leaf) & (m - tamanho >= self.min_leaf)
        ganho = np.where(valido, ganho, -np.inf)
        melhor = int(np.argmax(ganho))
        f, i = divmod(melhor, m - 1)
        if not ganho[f, i] > 0:
            return None
        limiar = 0.5 * (xs[f, i] + xs[f, i + 1])
        return f, limiar, float(ganho[f, i])

    def build(self, g, h):
        feature, threshold, left, right, value = [], [], [], [], []
        importancia = np.zeros(self.X.shape[1])

        def novo_no(ordem_no):
            soma_g = float(g[ordem_no[0]].sum())
            soma_h = float(h[ordem_no[0]].sum())
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(self.lr * soma_g / (soma_h + self.reg_lambda))
            return len(feature) - 1

        nivel = [(novo_no(self.ordem), self.ordem)]
        for _ in range(self.max_depth):
            proximo_nivel = []
            for no, ordem_no in nivel:
                divisao = self._best_split(ordem_no, g, h)
                if divisao is None:
                    continue
                f, limiar, ganho = divisao
                importancia[f] += ganho
                esquerda = np.zeros(self.X.shape[0], dtype=bool)
                esquerda[ordem_no[f][self.X[ordem_no[f], f] <= limiar]] = True
                # partição estável: cada linha continua ordenada
                mascara = esquerda[ordem_no]
                m_esq = int(mascara[0].sum())
                ordem_esq = ordem_no[mascara].reshape(-1, m_esq)
                ordem_dir = ordem_no[~mascara].reshape(-1, ordem_no.shape[1] - m_esq)
                feature[no] = f
                threshold[no] = limiar
                left[no] = novo_no(ordem_esq)
                right[no] = novo_no(ordem_dir)
                proximo_nivel.append((left[no], ordem_esq))
                proximo_nivel.append((right[no], ordem_dir))
            if not proximo_nivel:
                break
            nivel = proximo_nivel

        arvore = Tree(
            feature=np.array(feature, dtype=np.int64),
            threshold=np.array(threshold, dtype=float),
            left=np.array(left, dtype=np.int64),
            right=np.array(right, dtype=np.int64),
            value=np.array(value, dtype=float),
        )
        return arvore, importancia


@dataclass(frozen=True)
class PackedEnsemble:
    """
    Todas as árvores do ensemble em vetores únicos, na ordem (rodada, classe).
    Folhas apontam para si mesmas, então a descida anda todas as árvores
    juntas até nenhuma linha estar num nó interno.
    """
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    roots: np.ndarray
    n_classes: int

    @classmethod
    def from_trees(cls, rounds, n_classes):
        arvores = [arvore for rodada in rounds for arvore in rodada]
        tamanhos = np.array([a.n_nodes for a in arvores], dtype=np.int64)
        raizes = np.concatenate([[0], np.cumsum(tamanhos)[:-1]]).astype(np.int64) if arvores else np.zeros(0, np.int64)

        def filhos(lado):
            partes = []
            for arvore, inicio in zip(arvores, raizes):
                proprio = inicio + np.arange(arvore.n_nodes)
                partes.append(np.where(arvore.feature == LEAF, proprio, getattr(arvore, lado) + inicio))
            return np.concatenate(partes) if partes else np.zeros(0, np.int64)

        def juntar(nome, dtype):
            return np.concatenate([getattr(a, nome) for a in arvores]).astype(dtype) if arvores else np.zeros(0, dtype)

        return cls(
            feature=juntar('feature', np.int64),
            threshold=juntar('threshold', float),
            left=filhos('left'),
            right=filhos('right'),
            value=juntar('value', float),
            roots=raizes,
            n_classes=n_classes,
        )

    @property
    def n_trees(self):
        return len(self.roots)

    def margins(self, X):
        """Soma das folhas por classe (n × K), sem o base_score."""
        n = len(X)
        if self.n_trees == 0 or n == 0:
            return np.zeros((n, self.n_classes))
        no = np.broadcast_to(self.roots, (n, self.n_trees)).copy()
        while True:
            f = self.feature[no]
            internos = f != LEAF
            if not internos.any():
                break
            x = np.take_along_axis(X, np.where(internos, f, 0), axis=1)
            no = np.where(x <= self.threshold[no], self.left[no], self.right[no])
        return self.value[no].reshape(n, -1, self.n_classes).sum(axis=1)


# ─── Modelo ───────────────────────────────────────────────────
@dataclass
class GbtModel:
    classes: tuple
    base_score: np.ndarray
    trees: list = field(default_factory=list)
    learning_rate: float = 0.1
    n_rounds: int = 0
    max_depth: int = 3
    n_features: int = 0
    importance: np.ndarray = None
    validation: dict = field(default_factory=dict)

    def margins(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_features:
            raise ValidationError(
                f"dimensão dos atributos {X.shape[1]} diferente da do modelo ({self.n_features})",
                code='invalid',
            )
        pacote = self.packed
        F = np.empty((len(X), len(self.classes)))
        for inicio in range(0, len(X), ROW_CHUNK):
            bloco = X[inicio:inicio + ROW_CHUNK]
            F[inicio:inicio + ROW_CHUNK] = self.base_score + pacote.margins(bloco)
        return F

    @property
    def packed(self):
        """Ensemble empacotado, refeito quando a lista de árvores muda."""
        chave = (id(self.trees), len(self.trees))
        if self.__dict__.get('_chave_pacote') != chave:
            self.__dict__['_pacote'] = PackedEnsemble.from_trees(self.trees, len(self.classes))
            self.__dict__['_chave_pacote'] = chave
        return self.__dict__['_pacote']

    def predict_proba(self, X):
        return softmax(self.margins(X))

    def predict(self, X):
        indices = np.argmax(self.predict_proba(X), axis=1)
        return [self.classes[i] for i in indices]

    @property
    def feature_importances(self):
        total = self.importance.sum()
        if total <= 0:
            return np.zeros_like(self.importance)
        return self.importance / total


def class_list(labels):
    """Classes presentes, na ordem de Mode (rótulos fora de Mode vão ao fim, em ordem alfabética)."""
    presentes = set(labels)
    conhecidas = [m for m in Mode.values if m in presentes]
    return tuple(conhecidas + sorted(presentes - set(conhecidas)))


def fit_gbt(X, labels, classes, max_depth, learning_rate=None, n_rounds=None,
            min_samples_leaf=None, reg_lambda=None):
    """Ajusta um ensemble com profundidade fixa."""
    padrao = settings.GBT_DEFAULTS
    learning_rate = padrao['learning_rate'] if learning_rate is None else learning_rate
    n_rounds = padrao['n_rounds'] if n_rounds is None else n_rounds
    min_samples_leaf = padrao['min_samples_leaf'] if min_samples_leaf is None else min_samples_leaf
    reg_lambda = padrao['reg_lambda'] if reg_lambda is None else reg_lambda

    X = np.asarray(X, dtype=float)
    indice = {c: i for i, c in enumerate(classes)}
    y = np.array([indice[r] for r in labels], dtype=np.int64)
    K = len(classes)
    Y = np.zeros((len(y), K))
    Y[np.arange(len(y)), y] = 1.0

    contagem = np.bincount(y, minlength=K).astype(float)
    # classes ausentes do treino recebem prior mínimo
    base = np.log(np.maximum(contagem, 0.5) / len(y))

    ordem = np.argsort(X, axis=0, kind='stable').T.copy()
    construtor = _TreeBuilder(X, ordem, max_depth, min_samples_leaf, reg_lambda, learning_rate)
    F = np.tile(base, (len(y), 1))
    arvores = []
    importancia = np.zeros(X.shape[1])
    for rodada in range(n_rounds):
        P = softmax(F)
        R = Y - P
        Hs = np.maximum(P * (1.0 - P), HESSIAN_FLOOR)
        desta_rodada = []
        for k in range(K):
            arvore, ganho = construtor.build(R[:, k], Hs[:, k])
            F[:, k] += arvore.predict(X)
            importancia += ganho
            desta_rodada.append(arvore)
        arvores.append(desta_rodada)
        if logger.isEnabledFor(logging.DEBUG) and (rodada + 1) % 50 == 0:
            logger.debug("rodada %d: log-loss %.4f", rodada + 1, multinomial_log_loss(F, Y) / len(y))

    return GbtModel(
        classes=tuple(classes),
        base_score=base,
        trees=arvores,
        learning_rate=learning_rate,
        n_rounds=n_rounds,
        max_depth=max_depth,
        n_features=X.shape[1],
        importance=importancia,
    )


def balanced_accuracy(y_true, y_pred):
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    recalls = [np.mean(y_pred[y_true == c] == c) for c in np.unique(y_true)]
    return float(np.mean(recalls))


def train_gbt(X, labels, depth_grid=None, validation_fraction=0.2, seed=None, **params):
    """
    Busca em grade de max_depth pela acurácia balanceada na validação;
    a profundidade escolhida é reajustada com todos os dados.
    """
    X = np.asarray(X, dtype=float)
    labels = list(labels)
    if len(labels) != len(X):
        raise ValidationError("atributos e rótulos com tamanhos diferentes", code='invalid')
    if len(labels) < MIN_SAMPLES:
        raise ValidationError(f"são necessárias ao menos {MIN_SAMPLES} amostras (recebidas {len(labels)})", code='invalid')
    classes = class_list(labels)
    if len(classes) < 2:
        raise ValidationError("apenas uma classe nos rótulos: modelo degenerado", code='degenerate')
    depth_grid = tuple(depth_grid or settings.GBT_DEPTH_GRID)

    rng = np.random.default_rng(seed)
    ordem = rng.permutation(len(labels))
    n_val = int(round(validation_fraction * len(labels)))
    validacao, treino = ordem[:n_val], ordem[n_val:]
    rotulos = np.array(labels, dtype=object)

    notas = {}
    if n_val > 0 and len(depth_grid) > 1:
        for profundidade in depth_grid:
            modelo = fit_gbt(X[treino], rotulos[treino], classes, profundidade, **params)
            notas[profundidade] = balanced_accuracy(rotulos[validacao], modelo.predict(X[validacao]))
            logger.info("max_depth=%d: acurácia balanceada na validação %.4f", profundidade, notas[profundidade])
        # empate fica com a menor profundidade
        escolhida = max(depth_grid, key=lambda d: (notas[d], -d))
    else:
        escolhida = depth_grid[0]

    modelo = fit_gbt(X, rotulos, classes, escolhida, **params)
    modelo.validation = notas
    logger.info("modelo final: max_depth=%d, %d classes, %d amostras", escolhida, len(classes), len(labels))
    return modelo
