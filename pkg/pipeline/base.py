"""
Base comum dos management commands do pipeline.

Cada comando recebe as mesmas opções (--config --seed --in --out --scale --jobs
--preset), implementa run() e termina com um manifest.json em --out.
Códigos de saída: 0 sucesso, 1 erro de validação, 2 solver sem convergência.
"""
import dataclasses
import logging
import shutil
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from corpus.exceptions import ConvergenceError, SimulationError
from corpus.io import DATASET_FILES, load_dataset, write_dataset
from corpus.scenarios import desk_scale, load_scenario, scenario_preset, scenario_to_dict
from pipeline.manifest import write_manifest

logger = logging.getLogger(__name__)

DEFAULT_PRESET = 1


class FleetgridCommand(BaseCommand):
    requires_system_checks = []
    # comandos que leem um diretório de dados exigem --in
    needs_input = True

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Arquivo JSON de cenário (já em escala de bancada)')
        parser.add_argument('--seed', type=int, help='Semente; sobrescreve a do cenário')
        parser.add_argument('--in', dest='input_dir', help='Diretório de entrada')
        parser.add_argument('--out', dest='output_dir', required=True, help='Diretório de saída')
        parser.add_argument('--scale', type=float, help='Fração da escala real (padrão FLEETGRID_SCALE)')
        parser.add_argument('--jobs', type=int, help='Processos paralelos (padrão FLEETGRID_JOBS)')
        parser.add_argument('--preset', type=int, choices=range(1, 7), help='Cenário 1..6')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    # ─── Ciclo de vida ────────────────────────────────────────
    def handle(self, *args, **options):
        self.options = options
        self.inputs = []
        self.outputs = []
        self.non_converged = False
        self.scale = options['scale'] if options['scale'] is not None else settings.FLEETGRID_SCALE
        self.jobs = options['jobs'] or settings.FLEETGRID_JOBS
        self.out_dir = Path(options['output_dir'])

        try:
            if self.needs_input and not options['input_dir']:
                raise CommandError("--in é obrigatório para este comando", returncode=1)
            self.config = self.resolve_config(options)
            self.out_dir.mkdir(parents=True, exist_ok=True)
            self.run()
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=1)
        except SimulationError as exc:
            raise CommandError(str(exc), returncode=1)
        except ConvergenceError as exc:
            raise CommandError(str(exc), returncode=2)

        write_manifest(
            self.out_dir,
            command=self.command_name,
            seed=self.config.seed,
            scale=self.scale,
            config=scenario_to_dict(self.config),
            inputs=self.inputs,
            outputs=self.outputs,
        )
        if self.non_converged:
            raise CommandError("ADMM não convergiu; resultados gravados com a flag non_converged", returncode=2)
        self.stdout.write(self.style.SUCCESS(f"Concluído! {len(self.outputs)} arquivos em {self.out_dir}"))

    def run(self):
        raise NotImplementedError

    @property
    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def resolve_config(self, options):
        """Cenário do --config (literal) ou do preset reduzido por --scale."""
        if options['config']:
            caminho = Path(options['config'])
            self.inputs.append(caminho)
            config = load_scenario(caminho)
        else:
            config = desk_scale(scenario_preset(options['preset'] or DEFAULT_PRESET), self.scale)
        if options['seed'] is not None:
            config = dataclasses.replace(config, seed=options['seed'])
        return config

    # ─── Arquivos ─────────────────────────────────────────────
    @property
    def in_dir(self):
        return Path(self.options['input_dir']) if self.options['input_dir'] else None

    def input_path(self, nome, required=True, base=None):
        base = Path(base) if base else self.in_dir
        if base is None:
            raise CommandError(f"--in é obrigatório para ler {nome}", returncode=1)
        caminho = base / nome
        if not caminho.is_file():
            if required:
                raise CommandError(f"arquivo de entrada ausente: {caminho}", returncode=1)
            return None
        self.inputs.append(caminho)
        return caminho

    def output_path(self, nome):
        caminho = self.out_dir / nome
        caminho.parent.mkdir(parents=True, exist_ok=True)
        self.outputs.append(caminho)
        return caminho

    def load_bundle(self, base=None):
        base = Path(base) if base else self.in_dir
        self.input_path('stations.csv', base=base)
        for nome in DATASET_FILES[1:]:
            self.input_path(nome, required=False, base=base)
        return load_dataset(base)

    def write_bundle(self, bundle, subdir=None):
        destino = self.out_dir / subdir if subdir else self.out_dir
        arquivos = write_dataset(destino, bundle)
        self.outputs.extend(arquivos)
        return arquivos

    def carry(self, *nomes):
        """Copia arquivos auxiliares de --in para --out quando existirem."""
        for nome in nomes:
            origem = self.input_path(nome, required=False)
            if origem is not None:
                shutil.copyfile(origem, self.output_path(nome))

    def success(self, mensagem):
        self.stdout.write(self.style.SUCCESS(f"  ✓ {mensagem}"))
