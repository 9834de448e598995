"""
Sorteia dias de reservas com o simulador por eventos.
Uso: python manage.py simulate_event --in dados/eventos --out dados/eventos_sim --days 7
"""
from corpus.scenarios import derive_seed
from eventsim.io import read_distributions, write_bookings
from eventsim.model import default_calendar, sample_days
from pipeline.base import FleetgridCommand


class Command(FleetgridCommand):
    help = 'Gera bookings.csv a partir de distributions.csv e station_probs.csv'

    def add_command_arguments(self, parser):
        parser.add_argument('--days', type=int, default=7, help='Dias sorteados')

    def run(self):
        dist = read_distributions(self.input_path('distributions.csv'), self.input_path('station_probs.csv'))
        calendario = default_calendar(self.options['days'], self.config.start_weekday)
        reservas = sample_days(dist, calendario, seed=derive_seed(self.config.seed, 'eventos'))
        write_bookings(self.output_path('bookings.csv'), reservas)
        self.success(f"{len(reservas)} reservas sorteadas em {len(calendario)} dias")
