"""
Roda os cenários de crescimento de ponta a ponta.
Uso: python manage.py scenario --out dados/cenarios --jobs 3
     python manage.py scenario --preset 3 --out dados/cenario3
"""
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor

from django.conf import settings

from agentsim.simulator import write_sim_log
from corpus.scenarios import desk_scale, scenario_preset, scenario_to_dict
from modechoice.serialization import save_model
from pipeline.base import FleetgridCommand
from pipeline.scenario import run_scenario, train_scenario_model, write_scenarios


def _run(args):
    config, scale, model = args
    return config, run_scenario(config, scale, model)


class Command(FleetgridCommand):
    help = 'Executa um ou todos os seis cenários e grava scenarios.csv com o resumo'
    needs_input = False

    def configs(self):
        if self.options['config'] or self.options['preset']:
            return [self.config]
        configs = []
        for numero in sorted(settings.SCENARIO_PRESETS):
            config = desk_scale(scenario_preset(numero), self.scale)
            if self.options['seed'] is not None:
                config = dataclasses.replace(config, seed=self.options['seed'])
            configs.append(config)
        return configs

    def run(self):
        configs = self.configs()
        modelo = train_scenario_model(self.config.seed)
        save_model(modelo, self.output_path('model.txt'))

        tarefas = [(config, self.scale, modelo) for config in configs]
        if self.jobs > 1 and len(tarefas) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as executor:
                resultados = list(executor.map(_run, tarefas))
        else:
            resultados = [_run(t) for t in tarefas]

        resumos = []
        for config, resultado in resultados:
            pasta = f"cenario_{config.preset or 0}"
            self.write_bundle(resultado.bundle, subdir=pasta)
            write_sim_log(self.output_path(f"{pasta}/sim_log.csv"), resultado.sim_log)
            self.output_path(f"{pasta}/scenario.json").write_text(
                json.dumps(scenario_to_dict(config), indent=2, sort_keys=True) + '\n', encoding='utf-8',
            )
            resumos.append(resultado.summary)
            self.success(
                f"cenário {config.preset}: {resultado.summary.n_reservations} reservas, "
                f"utilização {resultado.summary.time_rate:.3f}"
            )
        write_scenarios(self.output_path('scenarios.csv'), resumos)
