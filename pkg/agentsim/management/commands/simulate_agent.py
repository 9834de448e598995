"""
Simula as reservas de um dia (ou --days dias) com o modelo de escolha modal.
Uso: python manage.py simulate_agent --in dados/frota --model dados/modelo/model.txt --out dados/sim
"""
from pathlib import Path

from agentsim.simulator import simulate_reservations, write_sim_log
from corpus.io import write_reservations
from corpus.models import Mode
from corpus.scenarios import derive_seed
from modechoice.choosers import ConstantModeChooser, GbtModeChooser, Sampling
from modechoice.features import desk_pt_grid
from modechoice.serialization import load_model
from pipeline.base import FleetgridCommand


class Command(FleetgridCommand):
    help = 'Executa o simulador baseado em agentes e grava reservations.csv e sim_log.csv'

    def add_command_arguments(self, parser):
        parser.add_argument('--model', help='model.txt (padrão: --in/model.txt)')
        parser.add_argument('--sampling', choices=Sampling.values, default=Sampling.ARGMAX)
        parser.add_argument('--days', type=int, default=1, help='Dias consecutivos simulados')
        parser.add_argument(
            '--always-carsharing', action='store_true',
            help='Ignora o modelo e escolhe CarSharing em toda viagem',
        )

    def chooser(self):
        if self.options['always_carsharing']:
            return ConstantModeChooser(Mode.CAR_SHARING)
        if self.options['model']:
            informado = Path(self.options['model'])
            caminho = self.input_path(informado.name, base=informado.parent)
        else:
            caminho = self.input_path('model.txt')
        return GbtModeChooser(
            load_model(caminho), self.options['sampling'], seed=derive_seed(self.config.seed, 'modo'),
        )

    def run(self):
        bundle = self.load_bundle()
        resultado = simulate_reservations(
            bundle.trips, bundle.agents, bundle.stations, bundle.vehicles, self.chooser(),
            grid=desk_pt_grid(self.scale), days=self.options['days'], start_weekday=self.config.start_weekday,
        )
        self.write_bundle(bundle._replace(reservations=resultado.reservations))
        write_sim_log(self.output_path('sim_log.csv'), resultado.sim_log)
        self.carry('population_stats.csv', 'home_locations.csv')
        self.success(
            f"{len(resultado.reservations)} reservas ({resultado.pickups} retiradas, "
            f"{resultado.forced_returns} devoluções forçadas, {resultado.unserved} sem veículo)"
        )
