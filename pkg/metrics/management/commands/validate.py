"""
Compara um log real (--in) com um log simulado (--sim).
Uso: python manage.py validate --in dados/real --sim dados/sim --out dados/validacao
"""
from pathlib import Path
from types import SimpleNamespace

from agentsim.simulator import read_sim_log
from corpus.io import parse_float, parse_int, read_reservations, read_vehicles, write_rows
from eventsim.io import read_bookings
from eventsim.model import bookings_from_reservations
from metrics.report import validation_report, write_report, write_zscores
from metrics.stats import mode_share, utilization
from pipeline.base import FleetgridCommand

OCCUPANCY = ('hourly_occupancy.csv', [('hour', parse_int), ('occupancy', parse_float)])


class Command(FleetgridCommand):
    help = 'Wasserstein, z-scores por estação, utilização e participação modal'

    def add_command_arguments(self, parser):
        parser.add_argument('--sim', required=True, help='Diretório com o log simulado')
        parser.add_argument('--real-days', type=int, help='Dias do log real')
        parser.add_argument('--sim-days', type=int, help='Dias do log simulado')

    def bookings(self, base):
        reservas = self.input_path('reservations.csv', required=False, base=base)
        if reservas is not None:
            lidas = read_reservations(reservas)
            if lidas:
                return bookings_from_reservations(lidas)
        return read_bookings(self.input_path('bookings.csv', base=base))

    def run(self):
        sim_dir = Path(self.options['sim'])
        real = self.bookings(self.in_dir)
        sim = self.bookings(sim_dir)
        relatorio, linhas = validation_report(
            real, sim, real_days=self.options['real_days'], sim_days=self.options['sim_days'],
        )

        veiculos = self.input_path('vehicles.csv', required=False, base=sim_dir)
        reservas = self.input_path('reservations.csv', required=False, base=sim_dir)
        if veiculos is not None and reservas is not None:
            uso = utilization(read_reservations(reservas), read_vehicles(veiculos))
            relatorio['count_rate'] = uso.count_rate
            relatorio['time_rate'] = uso.time_rate
            write_rows(self.output_path('hourly_occupancy.csv'), OCCUPANCY, [
                SimpleNamespace(hour=h, occupancy=o) for h, o in enumerate(uso.hourly_occupancy)
            ])

        log_real = self.input_path('sim_log.csv', required=False)
        log_sim = self.input_path('sim_log.csv', required=False, base=sim_dir)
        if log_real is not None and log_sim is not None:
            compartilhado = mode_share(e.predicted_mode for e in read_sim_log(log_real)).shares
            referencia = {modo: s for modo, s in compartilhado.items() if s > 0}
            modal = mode_share((e.predicted_mode for e in read_sim_log(log_sim)), referencia)
            relatorio['mode_share_ratio'] = modal.ratio
            relatorio['mode_shares'] = modal.shares

        write_report(self.output_path('report.json'), relatorio)
        write_zscores(self.output_path('station_zscores.csv'), linhas)
        self.success(
            f"|z| médio {relatorio['mean_abs_zscore']:.3f}, "
            f"W(duração) {relatorio['wasserstein_duration_min']:.2f} min"
        )
