"""
Envelope de flexibilidade horário da frota.
Uso: python manage.py v2g_envelope --in dados/agentsim --out dados/envelope --jobs 4
"""
from v2g.command import V2GCommand
from v2g.flexibility import baseline_schedule, flexibility_envelope
from v2g.io import write_envelope, write_schedule


class Command(V2GCommand):
    help = 'Calcula envelope.csv (MW para cima e para baixo por hora e preço) e o plano base'

    def add_command_arguments(self, parser):
        super().add_command_arguments(parser)
        parser.add_argument('--hours', type=int, nargs='+', help='Horas do dia (padrão: todas)')

    def run(self):
        perfil = self.load_fleet()
        base = baseline_schedule(perfil, self.tariff, self.options['method'])
        envelope = flexibility_envelope(
            perfil, self.prices, hours=self.options['hours'], tariff=self.tariff,
            method=self.options['method'], jobs=self.jobs, baseline=base,
        )
        write_schedule(self.output_path('schedule.csv'), base)
        write_envelope(self.output_path('envelope.csv'), envelope)
        self.non_converged = envelope.non_converged > 0
        self.success(
            f"envelope de {len(envelope.hours)} horas × {len(envelope.prices)} preços; "
            f"máximo {envelope.up_mw.max(initial=0.0):.4f} MW para cima, "
            f"{envelope.down_mw.max(initial=0.0):.4f} MW para baixo"
        )
