"""
Redução do pico de carga da distribuidora em cada preço.
Uso: python manage.py v2g_peakshave --in dados/agentsim --out dados/pico
"""
from types import SimpleNamespace

from v2g.command import V2GCommand
from v2g.flexibility import baseline_schedule, monetary_accounting, peak_shave
from v2g.io import write_peaks, write_schedule


class Command(V2GCommand):
    help = 'Grava peaks.csv (pico antes e depois por preço) e o schedule.csv do maior corte'

    def run(self):
        perfil = self.load_fleet()
        base = baseline_schedule(perfil, self.tariff, self.options['method'])
        linhas, melhor = [], None
        for preco in self.prices:
            resultado = peak_shave(
                perfil, self.bundle.dso_load, preco, tariff=self.tariff,
                method=self.options['method'], baseline=base,
            )
            conta = monetary_accounting(
                resultado.schedule, base, preco, self.tariff,
                resultado.peak_before_mw, resultado.peak_after_mw,
            )
            self.non_converged |= not resultado.converged
            linhas.append(SimpleNamespace(
                scenario=self.scenario_name,
                price=preco,
                peak_before_mw=resultado.peak_before_mw,
                peak_after_mw=resultado.peak_after_mw,
                dso_savings=conta.dso_savings,
                fleet_profit=conta.fleet_profit,
                delta_energy_cost=conta.delta_energy_cost,
            ))
            if melhor is None or resultado.flexibility_mw > melhor.flexibility_mw:
                melhor = resultado

        write_peaks(self.output_path('peaks.csv'), linhas)
        write_schedule(self.output_path('schedule.csv'), melhor.schedule if melhor else base)
        if melhor is not None:
            self.success(
                f"pico {melhor.peak_before_mw:.4f} → {melhor.peak_after_mw:.4f} MW "
                f"a {melhor.price:g} CHF/MW"
            )
