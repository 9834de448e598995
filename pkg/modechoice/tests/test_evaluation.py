"""Testes do relatório de avaliação, do formato do modelo e do corpus sintético."""
import numpy as np
import pytest
from django.core.exceptions import ValidationError
from django.core.management import call_command

from modechoice.evaluation import classification_report, evaluate_model
from modechoice.gbt import train_gbt
from modechoice.serialization import HEADER, load_model, save_model
from modechoice.synthetic import (
    bayes_accuracy, generate_labeled_corpus, ground_truth_probabilities,
    read_labeled_trips, write_labeled_trips,
)


@pytest.fixture
def modelo_pequeno():
    rng = np.random.default_rng(0)
    X = rng.random((200, 3))
    y = np.where(X[:, 1] > 0.5, 'Bicycle', 'Tram')
    return train_gbt(X, y, depth_grid=(2,), n_rounds=5, seed=0), X, y


class TestClassificationReport:

    def test_predicoes_perfeitas(self):
        rotulos = ['Car', 'Walk', 'Bus', 'Walk']
        relatorio = classification_report(rotulos, rotulos, ('Car', 'Bus', 'Walk'))
        assert relatorio['balanced_accuracy'] == 1.0
        np.testing.assert_array_equal(relatorio['confusion_by_truth'], np.eye(3))
        np.testing.assert_array_equal(relatorio['confusion_by_prediction'], np.eye(3))

    def test_preditor_constante(self):
        verdade = ['Car'] * 50 + ['Walk'] * 50
        relatorio = classification_report(verdade, ['Car'] * 100, ('Car', 'Walk'))
        assert relatorio['balanced_accuracy'] == 0.5
        assert relatorio['accuracy'] == 0.5
        assert relatorio['share_predicted'] == {'Car': 1.0, 'Walk': 0.0}

    def test_relatorio_do_modelo(self, modelo_pequeno):
        modelo, X, y = modelo_pequeno
        relatorio = evaluate_model(modelo, X, y)
        assert sum(relatorio['feature_importance'].values()) == pytest.approx(1.0)
        assert next(iter(relatorio['feature_importance'])) == 'f1'


class TestSerialization:

    def test_salvar_e_carregar(self, tmp_path, modelo_pequeno):
        modelo, X, _ = modelo_pequeno
        caminho = tmp_path / 'model.txt'
        save_model(modelo, caminho)
        assert caminho.read_text(encoding='utf-8').startswith(HEADER)
        carregado = load_model(caminho)
        np.testing.assert_array_equal(carregado.predict_proba(X), modelo.predict_proba(X))
        assert carregado.classes == modelo.classes

    def test_cabecalho_errado(self, tmp_path):
        caminho = tmp_path / 'model.txt'
        caminho.write_text('outro-formato v9\n', encoding='utf-8')
        with pytest.raises(ValidationError):
            load_model(caminho)

    def test_atributo_inexistente(self, tmp_path, modelo_pequeno):
        modelo, _, _ = modelo_pequeno
        caminho = tmp_path / 'model.txt'
        save_model(modelo, caminho)
        texto = caminho.read_text(encoding='utf-8').replace('n_features 3', 'n_features 1')
        caminho.write_text(texto, encoding='utf-8')
        with pytest.raises(ValidationError):
            load_model(caminho)


class TestCorpusSintetico:

    def test_probabilidades_e_bayes(self):
        corpus = generate_labeled_corpus(400, seed=1)
        assert corpus.X.shape == (400, 29)
        np.testing.assert_allclose(corpus.probabilities.sum(axis=1), 1.0)
        assert 1 / 8 < bayes_accuracy(corpus.probabilities) <= 1.0
        np.testing.assert_array_equal(ground_truth_probabilities(corpus.X), corpus.probabilities)

    def test_csv_rotulado(self, tmp_path):
        corpus = generate_labeled_corpus(50, seed=2)
        caminho = tmp_path / 'labeled_trips.csv'
        write_labeled_trips(caminho, corpus.X, corpus.labels)
        X, rotulos = read_labeled_trips(caminho)
        np.testing.assert_array_equal(X, corpus.X)
        assert rotulos == corpus.labels

    @pytest.mark.slow
    def test_acuracia_perto_da_regra_geradora(self):
        corpus = generate_labeled_corpus(20000, seed=3)
        rotulos = np.array(corpus.labels, dtype=object)
        treino, teste = slice(0, 16000), slice(16000, None)
        modelo = train_gbt(
            corpus.X[treino], rotulos[treino], depth_grid=(3, 4), n_rounds=60, learning_rate=0.2, seed=4,
        )
        acuracia = np.mean(np.array(modelo.predict(corpus.X[teste]), dtype=object) == rotulos[teste])
        classes = np.array(['Car', 'CarSharing', 'Train', 'Bus', 'Tram', 'Bicycle', 'Walk', 'Other'], dtype=object)
        bayes = np.mean(classes[np.argmax(corpus.probabilities[teste], axis=1)] == rotulos[teste])
        assert acuracia >= 0.70 * bayes
        assert acuracia >= bayes - 0.03


class TestTrainCommand:

    def test_comando_grava_modelo_e_relatorio(self, tmp_path):
        call_command(
            'train_modechoice', '--out', str(tmp_path), '--samples', '300',
            '--depth-grid', '2', '--rounds', '3', '--seed', '5',
        )
        assert load_model(tmp_path / 'model.txt').max_depth == 2
        assert (tmp_path / 'modechoice_report.json').is_file()
        assert (tmp_path / 'manifest.json').is_file()
