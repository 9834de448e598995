"""
Sorteia os assinantes do car sharing dentro da população base.
Uso: python manage.py sample_users --in dados/base --out dados/usuarios
"""
from corpus.scenarios import derive_seed
from pipeline.base import FleetgridCommand
from population.weights import compute_sampling_weights, read_population_stats, sample_carsharing_users


class Command(FleetgridCommand):
    help = 'Sorteia N assinantes com os pesos estratificados (idade, gênero, estação mais próxima)'

    def run(self):
        bundle = self.load_bundle()
        stats = read_population_stats(self.input_path('population_stats.csv'))
        pesos = compute_sampling_weights(bundle.agents, stats, bundle.stations)
        usuarios = sample_carsharing_users(
            bundle.agents, pesos, self.config.n_users, seed=derive_seed(self.config.seed, 'usuarios'),
        )
        escolhidos = {a.agent_id for a in usuarios}
        viagens = tuple(t for t in bundle.trips if t.agent_id in escolhidos)
        self.write_bundle(bundle._replace(agents=usuarios, trips=viagens, reservations=()))
        self.carry('population_stats.csv', 'home_locations.csv')
        self.success(f"{len(usuarios)} assinantes com {len(viagens)} viagens")
