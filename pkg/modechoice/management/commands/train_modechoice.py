"""
Treina o modelo de escolha modal sobre o corpus rotulado sintético.
Uso: python manage.py train_modechoice --out dados/modelo [--in dados/base] [--samples 20000]
"""
import json

import numpy as np
from django.conf import settings

from corpus.scenarios import derive_seed
from modechoice.evaluation import evaluate_model
from modechoice.gbt import train_gbt
from modechoice.serialization import save_model
from modechoice.synthetic import bayes_accuracy, generate_labeled_corpus, write_labeled_trips
from pipeline.base import FleetgridCommand


class Command(FleetgridCommand):
    help = 'Gera o corpus rotulado, faz a busca em grade de max_depth e grava model.txt'
    needs_input = False

    def add_command_arguments(self, parser):
        parser.add_argument('--samples', type=int, default=20000, help='Viagens rotuladas')
        parser.add_argument('--depth-grid', type=int, nargs='+', help='Valores de max_depth')
        parser.add_argument('--rounds', type=int, help='Rodadas de boosting')
        parser.add_argument('--learning-rate', type=float, help='Taxa de aprendizado')
        parser.add_argument('--test-fraction', type=float, default=0.2, help='Fração reservada para teste')

    def run(self):
        estacoes = self.load_bundle().stations if self.in_dir else None
        corpus = generate_labeled_corpus(self.options['samples'], seed=self.config.seed, stations=estacoes)
        write_labeled_trips(self.output_path('labeled_trips.csv'), corpus.X, corpus.labels)

        rng = np.random.default_rng(derive_seed(self.config.seed, 'teste'))
        ordem = rng.permutation(len(corpus.labels))
        n_teste = int(round(self.options['test_fraction'] * len(ordem)))
        teste, treino = ordem[:n_teste], ordem[n_teste:]
        rotulos = np.array(corpus.labels, dtype=object)

        parametros = {}
        if self.options['rounds'] is not None:
            parametros['n_rounds'] = self.options['rounds']
        if self.options['learning_rate'] is not None:
            parametros['learning_rate'] = self.options['learning_rate']
        modelo = train_gbt(
            corpus.X[treino], rotulos[treino],
            depth_grid=self.options['depth_grid'] or settings.GBT_DEPTH_GRID,
            seed=derive_seed(self.config.seed, 'validacao'),
            **parametros,
        )
        save_model(modelo, self.output_path('model.txt'))

        relatorio = evaluate_model(modelo, corpus.X[teste], rotulos[teste]) if n_teste else {}
        relatorio['bayes_accuracy'] = bayes_accuracy(corpus.probabilities[teste]) if n_teste else None
        self.output_path('modechoice_report.json').write_text(
            json.dumps(relatorio, indent=2, sort_keys=True) + '\n', encoding='utf-8',
        )
        self.success(f"max_depth={modelo.max_depth}, {len(modelo.classes)} classes")
        if n_teste:
            self.success(
                f"acurácia {relatorio['accuracy']:.3f} (Bayes {relatorio['bayes_accuracy']:.3f}), "
                f"balanceada {relatorio['balanced_accuracy']:.3f}"
            )
