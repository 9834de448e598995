"""
Conta monetária da redução de pico a partir de um peaks.csv.
Uso: python manage.py v2g_money --in dados/pico --out dados/dinheiro --peak-cost 4850
"""
import json
from types import SimpleNamespace

from django.conf import settings

from pipeline.base import FleetgridCommand
from v2g.flexibility import settle
from v2g.io import read_peaks, write_money


class Command(FleetgridCommand):
    help = 'Economia da distribuidora, lucro da frota e a faixa de preços boa para os dois'

    def add_command_arguments(self, parser):
        parser.add_argument('--peak-cost', type=float, help='Custo evitado do pico (CHF/MW)')

    def run(self):
        linhas = []
        for pico in read_peaks(self.input_path('peaks.csv')):
            conta = settle(
                pico.price, pico.peak_before_mw - pico.peak_after_mw, pico.delta_energy_cost,
                peak_cost=self.options['peak_cost'],
            )
            linhas.append(SimpleNamespace(
                scenario=pico.scenario,
                price=conta.price,
                flexibility_mw=conta.flexibility_mw,
                dso_savings=conta.dso_savings,
                fleet_profit=conta.fleet_profit,
                win_win=conta.win_win,
            ))
        write_money(self.output_path('money.csv'), linhas)

        bons = [linha.price for linha in linhas if linha.win_win]
        resumo = {
            'peak_cost_chf_per_mw': (
                settings.PEAK_COST_CHF_PER_MW if self.options['peak_cost'] is None else self.options['peak_cost']
            ),
            'win_win_prices': bons,
            'win_win_band': [min(bons), max(bons)] if bons else None,
        }
        caminho = self.output_path('money.json')
        caminho.write_text(json.dumps(resumo, indent=2, sort_keys=True) + '\n', encoding='utf-8')
        self.success(f"{len(bons)} de {len(linhas)} preços bons para os dois lados")
