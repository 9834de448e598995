"""
manifest.json: o que entrou e o que saiu de cada execução.
Sem carimbo de tempo, para que duas execuções iguais gerem o mesmo arquivo.
"""
import hashlib
import json
from importlib import metadata
from pathlib import Path

import fleetgrid

LIBRARIES = ('Django', 'numpy', 'scipy', 'cvxpy', 'python-decouple')


def sha256_file(path):
    digest = hashlib.sha256()
    with Path(path).open('rb') as f:
        for bloco in iter(lambda: f.read(1 << 16), b''):
            digest.update(bloco)
    return digest.hexdigest()


def library_versions():
    versoes = {'fleetgrid': fleetgrid.__version__}
    for nome in LIBRARIES:
        try:
            versoes[nome] = metadata.version(nome)
        except metadata.PackageNotFoundError:
            versoes[nome] = None
    return versoes


def _digests(paths, base=None):
    resultado = {}
    for path in sorted({Path(p) for p in paths}, key=str):
        if not path.is_file():
            continue
        if base and path.is_relative_to(base):
            chave = path.relative_to(base).as_posix()
        else:
            chave = f"{path.parent.name}/{path.name}" if path.parent.name else path.name
        resultado[chave] = sha256_file(path)
    return resultado


def write_manifest(out_dir, command, seed, scale, config=None, inputs=(), outputs=(), extra=None):
    out_dir = Path(out_dir)
    manifest = {
        'command': command,
        'seed': seed,
        'scale': scale,
        'config': config,
        'inputs': _digests(inputs),
        'outputs': _digests(outputs, base=out_dir),
        'versions': library_versions(),
    }
    if extra:
        manifest.update(extra)
    caminho = out_dir / 'manifest.json'
    caminho.write_text(json.dumps(manifest, indent=2, sort_keys=True) + '\n', encoding='utf-8')
    return caminho
