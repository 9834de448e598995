"""
Escala a frota até v_desired; estações sem veículos partem de new_station_vehicles.
Uso: python manage.py scale_fleet --in dados/rede --out dados/frota
"""
from types import SimpleNamespace

from corpus.io import parse_float, parse_int, write_rows
from corpus.scenarios import derive_seed
from network.fleet import apply_fleet_plan, scale_fleet
from pipeline.base import FleetgridCommand

PLAN_SCHEMA = ('fleet_plan.csv', [
    ('station_id', parse_int), ('current', parse_int), ('multiplier', parse_float), ('count', parse_int),
])


class Command(FleetgridCommand):
    help = 'Sorteia o plano de frota por estação e cria/remove veículos'

    def run(self):
        bundle = self.load_bundle()
        base = {s.station_id: self.config.new_station_vehicles for s in bundle.stations if not s.vehicle_ids}
        plano = scale_fleet(
            bundle.stations, self.config.v_desired,
            seed=derive_seed(self.config.seed, 'frota'), base_counts=base,
        )
        estacoes, veiculos = apply_fleet_plan(
            bundle.stations, bundle.vehicles, plano, self.config.category_shares,
            seed=derive_seed(self.config.seed, 'categorias'),
        )
        self.write_bundle(bundle._replace(stations=estacoes, vehicles=veiculos, reservations=()))
        write_rows(self.output_path('fleet_plan.csv'), PLAN_SCHEMA, [
            SimpleNamespace(
                station_id=s.station_id,
                current=len(s.vehicle_ids) or base.get(s.station_id, 0),
                multiplier=plano.multipliers[s.station_id],
                count=plano.counts[s.station_id],
            )
            for s in bundle.stations
        ])
        self.carry('population_stats.csv', 'home_locations.csv')
        self.success(f"frota de {plano.v_current} para {len(veiculos)} veículos (alvo {plano.v_desired})")
