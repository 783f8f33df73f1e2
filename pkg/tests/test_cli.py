"""
Tests for the command-line interface
"""

import json
import pytest
from mendler_cdle.__main__ import (
    EXIT_FUEL, EXIT_OK, EXIT_PARSE_ERROR, EXIT_TYPE_ERROR, exit_code, main,
)
from mendler_cdle.bench import MENDLER_ZERO
from mendler_cdle.corpus import CORPUS_DIR
from mendler_cdle.errors import CorpusError, FuelExhausted, ParseError, TypeMismatch
from mendler_cdle.parser import parse_pure
from mendler_cdle.syntax import alpha_eq


BAD_MODULE = "bad ◂ ∀ X : ★. X = Λ X. λ x. x.\n"
GOOD_MODULE = "Top ◂ ★ = ∀ X : ★. X ➔ X.\ntop ◂ Top = Λ X. λ x. x.\n"


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, temp_dir):
    """Run every command away from any user config or MENDLER_CDLE_* variable"""
    monkeypatch.chdir(temp_dir)
    monkeypatch.setattr("mendler_cdle.config.ConfigManager.DEFAULT_CONFIG_LOCATIONS", [])
    for name in ("FUEL", "ETA", "FORMAT", "WORKERS", "VERBOSE"):
        monkeypatch.delenv(f"MENDLER_CDLE_{name}", raising=False)


@pytest.fixture
def small_bench_file(temp_dir):
    path = temp_dir / "bench.json"
    path.write_text(json.dumps({"bench": {
        "pred_points": [1, 2, 3],
        "size_points": [1, 2, 3],
        "parigot_points": [1, 2, 3],
    }}), encoding="utf-8")
    return path


class TestExitCodes:
    """Test exit_code"""

    def test_mapping(self):
        assert exit_code(TypeMismatch("no")) == EXIT_TYPE_ERROR
        assert exit_code(FuelExhausted("out")) == EXIT_FUEL
        assert exit_code(ParseError("bad", 1, 1)) == EXIT_PARSE_ERROR
        assert exit_code(CorpusError("missing")) == EXIT_PARSE_ERROR
        assert exit_code(OSError("disk")) == EXIT_PARSE_ERROR


class TestCheck:
    """Test the check subcommand"""

    def test_good_file(self, write_module, capsys):
        path = write_module('good', GOOD_MODULE)

        assert main(['check', str(path)]) == EXIT_OK
        assert "[OK] good: 2 definitions" in capsys.readouterr().out

    def test_type_error(self, write_module, capsys):
        path = write_module('bad', BAD_MODULE)

        assert main(['check', str(path)]) == EXIT_TYPE_ERROR
        err = capsys.readouterr().err
        assert f"{path}:1:1" in err
        assert "'bad'" in err

    def test_type_error_as_json(self, write_module, capsys):
        path = write_module('bad', BAD_MODULE)

        assert main(['check', str(path), '--format', 'json-lines']) == EXIT_TYPE_ERROR
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record['definition'] == 'bad'
        assert record['line'] == 1
        assert record['file'] == str(path)
        assert record['rule']

    def test_parse_error(self, write_module, capsys):
        path = write_module('broken', "x ◂ = .\n")

        assert main(['check', str(path)]) == EXIT_PARSE_ERROR
        assert "[parse]" in capsys.readouterr().err

    def test_missing_path(self, temp_dir):
        assert main(['check', str(temp_dir / "nowhere.mcd")]) == EXIT_PARSE_ERROR

    def test_single_definition(self, write_module, capsys):
        path = write_module('good', GOOD_MODULE)

        assert main(['check', str(path), '--def', 'top']) == EXIT_OK
        assert capsys.readouterr().out.strip() == "[OK] good.top"

    def test_unknown_definition(self, write_module):
        path = write_module('good', GOOD_MODULE)

        assert main(['check', str(path), '--def', 'missing']) == EXIT_PARSE_ERROR

    def test_later_files_see_earlier_ones(self, write_module, capsys):
        base = write_module('base', GOOD_MODULE)
        user = write_module('user', "import base.\nagain ◂ Top = top.\n")

        assert main(['check', str(base), str(user)]) == EXIT_OK
        assert "[OK] user: 1 definitions" in capsys.readouterr().out

    def test_importing_quarantined_module(self, write_module, capsys):
        path = write_module('leak', "import prelude.\nimport negf.\nbad ◂ Empty = unsound.\n")

        assert main(['check', str(path)]) == EXIT_PARSE_ERROR
        assert "quarantined" in capsys.readouterr().err

    def test_bad_config_file(self, write_module, invalid_json_file):
        path = write_module('good', GOOD_MODULE)

        assert main(['check', str(path), '--config', str(invalid_json_file)]) == EXIT_PARSE_ERROR


class TestNormalize:
    """Test the normalize subcommand"""

    def test_expression(self, capsys):
        assert main(['normalize', '--expr', '(λ x. x) ((λ y. y) z)']) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert out == ["z", "β-steps: 2"]

    def test_expression_as_json(self, capsys):
        assert main(['normalize', '--expr', '(λ x. x) y', '--format', 'json-lines']) == EXIT_OK
        record = json.loads(capsys.readouterr().out)
        assert record['normal_form'] == 'y'
        assert record['beta_steps'] == 1

    def test_eta_flag(self, capsys):
        assert main(['normalize', '--expr', 'λ x. f x', '--eta']) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "f"
        assert out[1] == "β-steps: 0, η-steps: 1"

    def test_omega_runs_out_of_fuel(self, capsys):
        code = main(['normalize', '--expr', '(λ x. x x) (λ x. x x)', '--fuel', '1000'])

        assert code == EXIT_FUEL
        assert "[fuel]" in capsys.readouterr().err

    def test_nothing_to_normalize(self):
        assert main(['normalize']) == EXIT_PARSE_ERROR

    def test_bad_expression(self):
        assert main(['normalize', '--expr', 'λ . x']) == EXIT_PARSE_ERROR

    @pytest.mark.integration
    def test_term_over_corpus_file(self, capsys):
        assert main(['normalize', str(CORPUS_DIR / 'nat.mcd'), 'pred (suc zero)']) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert alpha_eq(parse_pure(out[0]), MENDLER_ZERO)
        assert out[1].startswith("β-steps: ")

    @pytest.mark.integration
    def test_ill_typed_term(self):
        code = main(['normalize', str(CORPUS_DIR / 'nat.mcd'), 'pred czero'])
        assert code == EXIT_TYPE_ERROR


class TestErase:
    """Test the erase subcommand"""

    def test_erase_definition(self, write_module, capsys):
        path = write_module('good', GOOD_MODULE)

        assert main(['erase', str(path), 'top']) == EXIT_OK
        assert capsys.readouterr().out.strip() == "λx. x"

    def test_erase_unknown_name(self, write_module):
        path = write_module('good', GOOD_MODULE)

        assert main(['erase', str(path), 'missing']) == EXIT_PARSE_ERROR

    @pytest.mark.integration
    def test_erase_elim_id(self, capsys):
        assert main(['erase', str(CORPUS_DIR / 'id.mcd'), 'elimId']) == EXIT_OK
        assert alpha_eq(parse_pure(capsys.readouterr().out.strip()), parse_pure("λ y. y"))


class TestCorpusCommand:
    """Test the corpus subcommand"""

    def test_gaps(self, capsys):
        assert main(['corpus', '--gaps']) == EXIT_OK
        out = capsys.readouterr().out
        for name in ('fm2im', 'convIH', 'uimP'):
            assert f"{name} ◂" in out

    @pytest.mark.integration
    def test_check_shipped_corpus_dir(self, capsys):
        assert main(['check', str(CORPUS_DIR)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "[OK] prelude:" in out
        assert "[OK] negf:" in out and "(quarantined)" in out

    @pytest.mark.integration
    def test_corpus_json_lines(self, capsys):
        assert main(['corpus', '--format', 'json-lines']) == EXIT_OK
        records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert all(r['ok'] for r in records)
        assert {'predSuc', 'inFixIndM', 'unsound'} <= {r['name'] for r in records}


@pytest.mark.integration
class TestBenchCommand:
    """Test the bench subcommand"""

    def test_fuel_exhausted(self, small_bench_file, capsys):
        code = main(['bench', '--config', str(small_bench_file), '--fuel', '3',
                     '--format', 'json-lines'])

        assert code == EXIT_FUEL
        records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert [r['encoding'] for r in records] == ['church', 'parigot', 'mendler']
        assert not any(r['confirmed'] for r in records)
