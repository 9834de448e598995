"""
Ajusta as 48 distribuições do simulador por eventos a um log de reservas.
Uso: python manage.py fit_eventsim --in dados/sim --out dados/eventos [--days 7]
"""
from eventsim.io import write_distributions
from eventsim.model import bookings_from_reservations, default_calendar, fit_event_distributions
from pipeline.base import FleetgridCommand


class Command(FleetgridCommand):
    help = 'Ajusta taxas de Poisson, categóricas de estação e durações/distâncias por faixa horária'

    def add_command_arguments(self, parser):
        parser.add_argument('--days', type=int, help='Dias cobertos pelo log (padrão: até a última reserva)')

    def run(self):
        bundle = self.load_bundle()
        self.input_path('reservations.csv')
        reservas = bookings_from_reservations(bundle.reservations)
        n_dias = self.options['days'] or (max((b.day for b in reservas), default=0) + 1)
        calendario = default_calendar(n_dias, self.config.start_weekday)
        dist = fit_event_distributions(reservas, calendario, station_ids=[s.station_id for s in bundle.stations])
        write_distributions(dist, self.output_path('distributions.csv'), self.output_path('station_probs.csv'))
        herdadas = sum(s.fallback for s in dist.slots.values())
        self.success(f"{len(reservas)} reservas em {n_dias} dias; {herdadas} faixas com ajuste global")
