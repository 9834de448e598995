"""
Gera o mundo sintético de referência: rede atual, população base com viagens,
estatísticas de referência, amostra de residências e carga da distribuidora.
Uso: python manage.py synth_pop --out dados/base [--preset 3] [--scale 0.01]
"""
from corpus.models import DatasetBundle
from network.placement import write_home_locations
from pipeline.base import FleetgridCommand
from population.weights import write_population_stats
from population.world import build_reference_world


class Command(FleetgridCommand):
    help = 'Gera a população base, a rede atual e as estatísticas de referência'
    needs_input = False

    def run(self):
        mundo = build_reference_world(self.config, self.scale, seed=self.config.seed)
        self.write_bundle(DatasetBundle(
            stations=mundo.stations,
            vehicles=mundo.vehicles,
            agents=mundo.q_syn,
            trips=mundo.trips,
            dso_load=mundo.dso_load,
        ))
        write_population_stats(self.output_path('population_stats.csv'), mundo.stats)
        write_home_locations(self.output_path('home_locations.csv'), mundo.homes)
        self.success(f"{len(mundo.stations)} estações, {len(mundo.vehicles)} veículos")
        self.success(f"{len(mundo.q_syn)} agentes, {len(mundo.trips)} viagens")
