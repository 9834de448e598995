"""
Formato texto versionado do modelo GBT.

    fleetgrid-gbt v1
    classes Car,CarSharing,...
    learning_rate 0.1
    ...
    tree <rodada> <classe> <nós>
    <feature> <limiar> <esquerda> <direita> <valor>    (um nó por linha)
"""
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError

from modechoice.gbt import LEAF, GbtModel, Tree

HEADER = 'fleetgrid-gbt v1'


def _floats(valores):
    return ' '.join(repr(float(v)) for v in valores)


def save_model(model, path):
    linhas = [
        HEADER,
        'classes ' + ','.join(model.classes),
        f'learning_rate {model.learning_rate!r}',
        f'n_rounds {len(model.trees)}',
        f'max_depth {model.max_depth}',
        f'n_features {model.n_features}',
        'base_score ' + _floats(model.base_score),
        'importance ' + _floats(model.importance),
        'validation ' + ' '.join(f'{d}:{nota!r}' for d, nota in sorted(model.validation.items())),
    ]
    for r, rodada in enumerate(model.trees):
        for k, arvore in enumerate(rodada):
            linhas.append(f'tree {r} {k} {arvore.n_nodes}')
            for i in range(arvore.n_nodes):
                linhas.append(
                    f'{arvore.feature[i]} {float(arvore.threshold[i])!r} '
                    f'{arvore.left[i]} {arvore.right[i]} {float(arvore.value[i])!r}'
                )
    Path(path).write_text('\n'.join(linhas) + '\n', encoding='utf-8')


def _erro(numero, mensagem):
    return ValidationError(f"modelo, linha {numero}: {mensagem}", code='malformed')


def load_model(path):
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"arquivo de modelo ausente: {path}", code='missing')
    linhas = path.read_text(encoding='utf-8').splitlines()
    if not linhas or linhas[0].strip() != HEADER:
        raise _erro(1, f"cabeçalho esperado {HEADER!r}")

    campos = {}
    numero = 1
    for numero, linha in enumerate(linhas[1:], start=2):
        if linha.startswith('tree '):
            break
        chave, _, valor = linha.partition(' ')
        campos[chave] = valor
    else:
        numero = len(linhas) + 1

    try:
        classes = tuple(campos['classes'].split(','))
        n_features = int(campos['n_features'])
        n_rounds = int(campos['n_rounds'])
        modelo = GbtModel(
            classes=classes,
            base_score=np.array([float(v) for v in campos['base_score'].split()]),
            learning_rate=float(campos['learning_rate']),
            n_rounds=n_rounds,
            max_depth=int(campos['max_depth']),
            n_features=n_features,
            importance=np.array([float(v) for v in campos['importance'].split()]),
            validation={
                int(d): float(nota)
                for d, nota in (item.split(':') for item in campos.get('validation', '').split())
            },
        )
    except (KeyError, ValueError) as exc:
        raise _erro(numero, f"campo de cabeçalho inválido ({exc})")

    arvores = [[None] * len(classes) for _ in range(n_rounds)]
    i = numero - 1
    while i < len(linhas):
        partes = linhas[i].split()
        if not partes:
            i += 1
            continue
        if partes[0] != 'tree' or len(partes) != 4:
            raise _erro(i + 1, "esperado 'tree <rodada> <classe> <nós>'")
        r, k, n = (int(p) for p in partes[1:])
        nos = []
        for j in range(n):
            try:
                f, limiar, esq, dir_, valor = linhas[i + 1 + j].split()
                nos.append((int(f), float(limiar), int(esq), int(dir_), float(valor)))
            except (IndexError, ValueError):
                raise _erro(i + 2 + j, "nó malformado")
        arvore = Tree(*(np.array(coluna) for coluna in zip(*nos)))
        arvore.feature = arvore.feature.astype(np.int64)
        arvore.left = arvore.left.astype(np.int64)
        arvore.right = arvore.right.astype(np.int64)
        internos = arvore.feature != LEAF
        if np.any(arvore.feature[internos] >= n_features) or np.any(arvore.feature < LEAF):
            raise _erro(i + 1, "árvore referencia atributo inexistente")
        if np.any((arvore.left[internos] >= n) | (arvore.right[internos] >= n)):
            raise _erro(i + 1, "árvore referencia nó inexistente")
        try:
            arvores[r][k] = arvore
        except IndexError:
            raise _erro(i + 1, f"árvore fora do intervalo ({r}, {k})")
        i += 1 + n

    if any(a is None for rodada in arvores for a in rodada):
        raise _erro(len(linhas), "árvores faltando")
    modelo.trees = arvores
    return modelo
