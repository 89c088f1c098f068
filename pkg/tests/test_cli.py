"""Config ingestion, presets, CSV emission and exit codes."""

import math

import pytest

import swipt_mac.cli as cli
from swipt_mac.cli import ConfigError, PRESETS, _parse_number, ingest_config, main


def test_parse_number_db_suffixes():
    assert _parse_number("n", "-30dBW") == pytest.approx(1e-3)
    assert _parse_number("n", "-60dB") == pytest.approx(1e-6)
    assert _parse_number("n", "0dB") == pytest.approx(1.0)
    assert _parse_number("n", "3 db") == pytest.approx(10.0 ** 0.3)
    assert _parse_number("n", "-21dbw") == pytest.approx(10.0 ** -2.1)
    assert _parse_number("p1", "0.5") == 0.5
    with pytest.raises(ConfigError) as exc:
        _parse_number("p1", "half")
    assert exc.value.key == "p1"


def test_all_presets_ingest():
    for name, kv in PRESETS.items():
        cfg = ingest_config(kv)
        assert cfg.scenario in ("classical-simul", "classical-sic", "coop")
        if cfg.scenario == "coop":
            assert cfg.coop is not None
        else:
            assert cfg.classical is not None


def test_channel_gains_derive_from_distances():
    cfg = ingest_config(PRESETS["fig3a"])
    # d=3, alpha=2: amplitude 3^-2, power gain 3^-4
    assert cfg.classical.h1_sq == pytest.approx(3.0 ** -4.0)
    assert cfg.classical.h2_sq == pytest.approx(3.0 ** -4.0)
    assert cfg.classical.n == pytest.approx(1e-6)
    assert cfg.classical.n_p == pytest.approx(1e-3)
    coop = ingest_config(PRESETS["fig5a"])
    assert coop.coop.h1 == pytest.approx(3.0 ** -2.0)
    assert coop.coop.b == pytest.approx(64.0)  # 0.008^2 / 1e-6
    # budgets default to the classical per-user powers
    assert coop.coop.p_u1_budget == 0.5 and coop.coop.p_u2_budget == 0.5
    assert coop.coop.cost_dest.beta == pytest.approx(1e-3)


def test_explicit_gains_override_distances():
    kv = dict(PRESETS["fig3a"], h1_sq="0.02", h2_sq="0.01")
    cfg = ingest_config(kv)
    assert cfg.classical.h1_sq == 0.02 and cfg.classical.h2_sq == 0.01


def test_ingest_rejects_unknown_and_missing_keys():
    with pytest.raises(ConfigError) as exc:
        ingest_config(dict(PRESETS["fig3a"], banana="1"))
    assert exc.value.key == "banana"
    with pytest.raises(ConfigError) as exc:
        ingest_config({k: v for k, v in PRESETS["fig3a"].items() if k != "scenario"})
    assert exc.value.key == "scenario"
    with pytest.raises(ConfigError):
        ingest_config(dict(PRESETS["fig3a"], scenario="quantum"))
    with pytest.raises(ConfigError):
        ingest_config(dict(PRESETS["fig3a"], rho_max="1.5"))
    with pytest.raises(ConfigError):
        ingest_config(dict(PRESETS["fig3a"], rho_points="many"))


def test_config_file_roundtrip(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "scenario = classical-simul\n"
        "eh_model = linear\n"
        "eh_eta = 0.6   # trailing comment\n"
        "cost_model = exp\n"
        "cost_beta = -30dBW\n"
        "h1_sq = 0.0123\n"
        "h2_sq = 0.0123\n"
        "p1 = 0.5\np2 = 0.5\nn = -60dB\nn_p = -30dB\n"
    )
    cfg = ingest_config(cli._read_config_file(str(path)))
    assert cfg.classical.eh.eta == 0.6
    assert cfg.classical.cost.beta == pytest.approx(1e-3)

    bad = tmp_path / "bad.cfg"
    bad.write_text("scenario classical-simul\n")
    with pytest.raises(ConfigError):
        cli._read_config_file(str(bad))
    with pytest.raises(ConfigError):
        cli._read_config_file(str(tmp_path / "missing.cfg"))


def test_region_command_writes_deterministic_csv(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["region", "--preset", "fig3c", "--out", str(out1)]) == 0
    assert main(["region", "--preset", "fig3c", "--out", str(out2)]) == 0
    text = out1.read_text()
    assert out2.read_text() == text
    lines = text.strip().splitlines()
    assert lines[0] == "r2_bits,r1_bits,rho,order_or_weights,hulled"
    assert len(lines) > 10
    prev_r2 = -1.0
    for line in lines[1:]:
        r2, r1, rho = (float(x) for x in line.split(",")[:3])
        assert r2 > prev_r2
        assert r1 >= 0.0 and 0.0 <= rho <= 1.0
        prev_r2 = r2


def test_region_command_emits_empty_marker(tmp_path):
    out = tmp_path / "empty.csv"
    kv = dict(PRESETS["fig3d"], cost_phi0="0.025")
    cfg_file = tmp_path / "empty.cfg"
    cfg_file.write_text("".join(f"{k} = {v}\n" for k, v in kv.items()))
    assert main(["region", "--config", str(cfg_file), "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[1].startswith("# empty:")


def test_sumrate_command_sweep_shape(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sumrate", "--preset", "fig4a", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "rho,sum_rate_bits,binding_constraint"
    assert len(lines) == 1 + 1001 + 1  # header + sweep + optimum row
    assert lines[-1].endswith(",opt")
    rows = [line.split(",") for line in lines[1:-1]]
    assert float(rows[0][0]) == 0.0
    assert float(rows[-1][0]) == pytest.approx(0.95)
    assert {r[2] for r in rows} <= {"cost", "rate"}
    # at this fee slope the harvest cap binds across the whole sweep and the
    # values plateau under the saturation ceiling
    assert all(r[2] == "cost" for r in rows[-100:])
    cap = 0.5 * math.log2(0.024 / 0.1 + 1.0)
    assert max(float(r[1]) for r in rows) <= cap + 1e-9


def test_sumrate_rejects_coop_scenario():
    assert main(["sumrate", "--preset", "fig5a"]) == 2


def test_coop_command_tabulates_solutions(tmp_path):
    cfg_file = tmp_path / "coop.cfg"
    kv = dict(
        PRESETS["fig5a"], weight_count="3", scan_points="21", scan_refine="8"
    )
    cfg_file.write_text("".join(f"{k} = {v}\n" for k, v in kv.items()))
    out = tmp_path / "coop.csv"
    assert main(["coop", "--config", str(cfg_file), "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == (
        "mu1,mu2,r1_bits,r2_bits,rho,p12,p21,pu1,pu2,weighted_rate,source,valid"
    )
    assert len(lines) == 1 + 3
    for line in lines[1:]:
        parts = line.split(",")
        assert len(parts) == 12
        assert parts[11] in ("0", "1")
        mu1, mu2 = float(parts[0]), float(parts[1])
        wr = float(parts[9])
        assert wr == pytest.approx(
            mu1 * float(parts[2]) + mu2 * float(parts[3]), abs=1e-9
        )


def test_coop_command_rejects_classical_scenario():
    assert main(["coop", "--preset", "fig3a"]) == 2


def test_verify_classical_passes(tmp_path, capsys):
    assert main(["verify", "--preset", "fig3a"]) == 0
    text = capsys.readouterr().out
    assert "overall: PASS" in text
    assert "sum_rate_gap_bits" in text


def test_verify_coop_passes(tmp_path):
    cfg_file = tmp_path / "v.cfg"
    kv = dict(
        PRESETS["fig5a"],
        oracle_grid="61",
        scan_points="21",
        scan_refine="8",
        mu1="0.5",
        mu2="0.5",
    )
    cfg_file.write_text("".join(f"{k} = {v}\n" for k, v in kv.items()))
    out = tmp_path / "v.txt"
    assert main(["verify", "--config", str(cfg_file), "--out", str(out)]) == 0
    text = out.read_text()
    assert "overall: PASS" in text
    assert "budget1_residual_w" in text


def test_exit_codes_for_config_errors():
    assert main(["region", "--preset", "nope"]) == 2
    assert main(["region"]) == 2  # neither preset nor config


def test_exit_code_for_unknown_key(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("scenario = classical-simul\nwavelength = 3\n")
    assert main(["region", "--config", str(cfg_file)]) == 2


def test_exit_code_for_infeasible_sumrate(tmp_path):
    cfg_file = tmp_path / "inf.cfg"
    kv = dict(PRESETS["fig3d"], cost_phi0="0.025")
    cfg_file.write_text("".join(f"{k} = {v}\n" for k, v in kv.items()))
    assert main(["sumrate", "--config", str(cfg_file)]) == 3


def test_config_file_overrides_preset(tmp_path):
    cfg_file = tmp_path / "o.cfg"
    cfg_file.write_text("cost_beta = 0.002\n")
    # file entries win over preset entries
    kv = {}
    kv.update(PRESETS["fig3a"])
    kv.update(cli._read_config_file(str(cfg_file)))
    assert ingest_config(kv).classical.cost.beta == pytest.approx(0.002)
