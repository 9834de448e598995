"""Base dos comandos V2G: lê o pacote de dados e monta a disponibilidade da frota."""
from django.conf import settings

from pipeline.base import FleetgridCommand
from v2g.availability import ON_INFEASIBLE, build_availability
from v2g.flexibility import METHODS
from v2g.tariff import time_of_use_tariff


class V2GCommand(FleetgridCommand):

    def add_command_arguments(self, parser):
        parser.add_argument('--method', choices=METHODS, default=settings.FLEETGRID_V2G_METHOD,
                            help='ADMM por estação ou QP centralizado')
        parser.add_argument('--on-infeasible', choices=ON_INFEASIBLE, default='raise',
                            help='O que fazer com reservas que o veículo não consegue atender')
        parser.add_argument('--prices', type=float, nargs='+',
                            help='Preços em CHF/MW (padrão: price_levels do cenário)')

    @property
    def prices(self):
        return tuple(sorted(self.options['prices'] or self.config.price_levels))

    @property
    def scenario_name(self):
        return f"cenario_{self.config.preset}" if self.config.preset else self.in_dir.name

    def load_fleet(self):
        self.bundle = self.load_bundle()
        self.profile = build_availability(
            self.bundle.reservations,
            self.bundle.vehicles,
            timestep_minutes=self.config.timestep_minutes,
            on_infeasible=self.options['on_infeasible'],
        )
        self.tariff = time_of_use_tariff(self.profile.timestep_minutes)
        return self.profile
