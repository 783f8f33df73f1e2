"""
Pytest configuration and fixtures
"""

import pytest
import json
import random
import tempfile
from pathlib import Path
from mendler_cdle.config import EvalConfig, BenchConfig
from mendler_cdle.corpus import Corpus
from mendler_cdle.kernel import empty_context
from mendler_cdle.parser import parse_module
from mendler_cdle.syntax import PureApp, PureLam, PureVar


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture(scope="session")
def corpus_run():
    """The shipped corpus checked once per session, with its report"""
    corpus = Corpus()
    report = corpus.check()
    return corpus, report


@pytest.fixture(scope="session")
def checked_corpus(corpus_run):
    """The checked shipped corpus"""
    return corpus_run[0]


@pytest.fixture(scope="session")
def corpus_report(corpus_run):
    """Report of the session corpus run"""
    return corpus_run[1]


@pytest.fixture
def small_fuel():
    """Evaluation config that runs out quickly"""
    return EvalConfig(fuel=50)


@pytest.fixture
def prelude_context():
    """Context holding a few hand-written definitions"""
    source = parse_module(
        "id ◂ ∀ X : ★. X ➔ X = Λ X. λ x. x.\n"
        "const ◂ ∀ X Y : ★. X ➔ Y ➔ X = Λ X Y. λ x y. x.\n"
    )
    corpus = Corpus()
    corpus.check_module(source)
    return corpus.context(source.name)


@pytest.fixture
def empty_ctx():
    """Context with no definitions"""
    return empty_context()


@pytest.fixture
def write_module(temp_dir):
    """Write a .mcd file into the temp directory and return its path"""
    def write(name, text):
        path = temp_dir / f"{name}.mcd"
        path.write_text(text, encoding="utf-8")
        return path
    return write


@pytest.fixture
def sample_config_file(temp_dir):
    """Create a sample settings file"""
    config_path = temp_dir / "test_config.json"
    config_data = {
        "eval": {"fuel": 5000, "eta_enabled": True},
        "bench": {"pred_points": [1, 2, 3, 4, 5, 6], "workers": 2},
        "format": "json-lines",
    }

    with open(config_path, 'w') as f:
        json.dump(config_data, f)

    return config_path


@pytest.fixture
def invalid_json_file(temp_dir):
    """Create an invalid JSON file"""
    config_path = temp_dir / "invalid.json"
    with open(config_path, 'w') as f:
        f.write("{ invalid json")
    return config_path


@pytest.fixture
def small_bench_config():
    """Benchmark points small enough for the unit suite"""
    return BenchConfig(
        pred_points=[1, 2, 3, 4, 5, 6, 7, 8],
        size_points=[1, 2, 3, 4, 5, 6, 7, 8],
        parigot_points=[1, 2, 3, 4, 5, 6, 7],
    )


def random_term(rng, depth, scope=()):
    """Small random pure term; free variables come from a fixed pool"""
    names = list(scope) + ['a', 'b']
    if depth == 0 or rng.random() < 0.25:
        return PureVar(rng.choice(names))
    if rng.random() < 0.45:
        name = rng.choice(['x', 'y', 'z'])
        return PureLam(name, random_term(rng, depth - 1, scope + (name,)))
    return PureApp(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope))


@pytest.fixture
def rng():
    """Seeded generator for property tests"""
    return random.Random(20240517)


@pytest.fixture
def make_term():
    """Random term generator, see random_term"""
    return random_term
