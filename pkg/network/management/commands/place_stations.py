"""
Posiciona k estações novas sobre a amostra de residências (centros atuais fixos).
Uso: python manage.py place_stations --in dados/base --out dados/rede --preset 6
"""
from types import SimpleNamespace

from corpus.io import parse_float, parse_int, write_rows
from corpus.scenarios import derive_seed
from network.placement import add_new_stations, place_new_stations, read_home_locations
from pipeline.base import FleetgridCommand

HISTORY_SCHEMA = ('placement_history.csv', [('iteration', parse_int), ('objective', parse_float)])


class Command(FleetgridCommand):
    help = 'Adiciona k_new_stations estações com KMeans de centros fixos'

    def run(self):
        bundle = self.load_bundle()
        casas = read_home_locations(self.input_path('home_locations.csv'))
        fixos = [(s.x, s.y) for s in bundle.stations]
        resultado = place_new_stations(
            casas, self.config.k_new_stations, fixos, seed=derive_seed(self.config.seed, 'estacoes'),
        )
        estacoes = add_new_stations(bundle.stations, resultado.centers)
        self.write_bundle(bundle._replace(stations=estacoes))
        write_rows(self.output_path('placement_history.csv'), HISTORY_SCHEMA, [
            SimpleNamespace(iteration=i, objective=valor) for i, valor in enumerate(resultado.history, start=1)
        ])
        self.carry('population_stats.csv', 'home_locations.csv')
        if not resultado.converged:
            self.stdout.write(self.style.WARNING(f"  ! posicionamento parou em {resultado.iterations} iterações"))
        self.success(f"{len(resultado.centers)} estações novas, {len(estacoes)} no total")
