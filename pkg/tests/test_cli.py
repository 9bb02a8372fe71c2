"""Tests for the session driver: config parsing, reports, exit codes."""

import json

import pytest

from cherednik.cli import (
    ConfigError,
    load_config,
    main,
    run_session,
)

CYCLIC2 = """
params = ["5/7"]
analyses = ["group-info"]

[group]
family = "cyclic"
order = 2
"""

CYCLIC3_FULL = """
name = "census"
seed = 3
params = ["1/2", "1/3"]
analyses = ["group-info", "leaf-census-c0", "restricted-blocks"]

[group]
family = "cyclic"
order = 3
"""

DIHEDRAL3_BE = """
params = ["2/3"]
analyses = ["be-check"]

[group]
family = "dihedral"
order = 3

[be-check]
order = 2
"""


def write(tmp_path, text, name="session.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestLoadConfig:
    def test_valid_config(self, tmp_path):
        cfg = load_config(write(tmp_path, CYCLIC3_FULL))
        assert cfg.name == "census"
        assert cfg.group.order == 3
        assert cfg.params == ["1/2", "1/3"]
        assert cfg.seed == 3
        assert cfg.analyses[0] == "group-info"

    def test_defaults(self, tmp_path):
        cfg = load_config(write(tmp_path, CYCLIC2, name="tiny.toml"))
        assert cfg.name == "tiny"
        assert cfg.seed == 0
        assert cfg.out.name == "reports"

    def test_explicit_generator_matrices(self, tmp_path):
        text = """
params = ["1/5"]
analyses = ["group-info"]

[group]
conductor = 2
generators = [[["-1"]]]
"""
        cfg = load_config(write(tmp_path, text))
        assert cfg.group.order == 2
        assert cfg.group.n == 1

    @pytest.mark.parametrize(
        "mutation",
        [
            ("params = [\"5/7\"]", "# no params"),
            ("params = [\"5/7\"]", "params = [\"5/7\", \"1/3\"]"),
            ("analyses = [\"group-info\"]", "analyses = [\"nonsense\"]"),
            ("analyses = [\"group-info\"]", "analyses = []"),
            ("family = \"cyclic\"", "family = \"icosahedral\""),
            ("order = 2", "order = 1"),
        ],
    )
    def test_invalid_configs_are_rejected(self, tmp_path, mutation):
        old, new = mutation
        text = CYCLIC2.replace(old, new)
        assert text != CYCLIC2
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, text))

    def test_bad_seed_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "seed = -1\n" + CYCLIC2))

    def test_bad_order_option_rejected(self, tmp_path):
        # only mutate the analysis table, not the group table
        text = DIHEDRAL3_BE.replace("[be-check]\norder = 2", "[be-check]\norder = 0")
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, text))

    def test_bad_toml_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "params = [unterminated"))

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.toml"))


class TestRunSession:
    def test_group_info_for_smallest_group(self, tmp_path):
        cfg = load_config(write(tmp_path, CYCLIC2))
        cfg.out = tmp_path / "out"
        assert run_session(cfg) == 0
        data = json.loads((cfg.out / "group-info.json").read_text())
        assert data["order"] == 2
        assert data["reflection_count"] == 1
        assert len(data["reflection_classes"]) == 1
        assert (cfg.out / "summary.md").exists()

    def test_full_cyclic3_session(self, tmp_path):
        cfg = load_config(write(tmp_path, CYCLIC3_FULL))
        cfg.out = tmp_path / "out"
        assert run_session(cfg) == 0
        census = json.loads((cfg.out / "leaf-census-c0.json").read_text())
        assert census["leaf_dims"] == [2, 0]
        blocks = json.loads((cfg.out / "restricted-blocks.json").read_text())
        assert blocks["dimension"] == 27
        assert sorted(blocks["verma_dimensions"].values()) == [3, 3, 3]
        summary = (cfg.out / "summary.md").read_text()
        assert "## restricted-blocks" in summary

    def test_reports_are_byte_reproducible(self, tmp_path):
        first, second = {}, {}
        for target in (first, second):
            cfg = load_config(write(tmp_path, CYCLIC3_FULL))
            cfg.out = tmp_path / ("out_a" if target is first else "out_b")
            assert run_session(cfg) == 0
            for f in sorted(cfg.out.iterdir()):
                target[f.name] = f.read_bytes()
        assert first == second

    def test_only_filter(self, tmp_path):
        cfg = load_config(write(tmp_path, CYCLIC3_FULL))
        cfg.out = tmp_path / "out"
        assert run_session(cfg, only=["group-info"]) == 0
        assert (cfg.out / "group-info.json").exists()
        assert not (cfg.out / "leaf-census-c0.json").exists()

    def test_only_rejects_unconfigured_analysis(self, tmp_path):
        cfg = load_config(write(tmp_path, CYCLIC3_FULL))
        cfg.out = tmp_path / "out"
        with pytest.raises(ConfigError):
            run_session(cfg, only=["be-check"])

    def test_dimension_guard_fails_cleanly(self, tmp_path):
        cfg = load_config(write(tmp_path, CYCLIC3_FULL))
        cfg.out = tmp_path / "out"
        assert run_session(cfg, max_dim=5) == 1
        summary = (cfg.out / "summary.md").read_text()
        assert "FAILED" in summary
        assert "--max-dim" in summary
        # the untouched analyses still report
        assert (cfg.out / "group-info.json").exists()

    def test_be_check_session(self, tmp_path):
        cfg = load_config(write(tmp_path, DIHEDRAL3_BE))
        cfg.out = tmp_path / "out"
        assert run_session(cfg) == 0
        data = json.loads((cfg.out / "be-check.json").read_text())
        assert data["matrix_size"] == 3
        assert data["stabilizer_order"] == 2
        assert data["relations"] == {"checked": 36, "failed": 0}
        assert data["t0_exact"]
        assert data["ledger"]["equal"]
        assert [c["ok"] for c in data["ideal_checks"]] == [True, True]
        assert data["shift_certified"]


class TestMainEntry:
    def test_missing_config_exits_2(self, capsys):
        assert main(["run", "/nonexistent/path.toml"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_bad_only_exits_2(self, tmp_path, capsys):
        path = write(tmp_path, CYCLIC2)
        assert main(["run", path, "--only", "be-check", "--out", str(tmp_path / "o")]) == 2

    def test_negative_seed_exits_2(self, tmp_path):
        path = write(tmp_path, CYCLIC2)
        assert main(["run", path, "--seed", "-4", "--out", str(tmp_path / "o")]) == 2

    def test_guarded_computation_exits_1(self, tmp_path, capsys):
        path = write(tmp_path, CYCLIC3_FULL)
        code = main(["run", path, "--max-dim", "5", "--out", str(tmp_path / "o")])
        assert code == 1
        assert "FAILED" in capsys.readouterr().err

    def test_successful_run_exits_0(self, tmp_path, capsys):
        path = write(tmp_path, CYCLIC2)
        assert main(["run", path, "--out", str(tmp_path / "o")]) == 0
        assert "group-info: ok" in capsys.readouterr().out
