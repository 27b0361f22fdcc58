import numpy as np
import pytest

from envq import cli, config, models, qcore, quantumness

THERMAL_CFG = """
[model]
type = thermal-tls
gamma = 1.0
beta_hw0 = 2.0

[initial_state]
kind = matrix
matrix = 2 2 1+0i 0+0i 0+0i 0+0i

[times]
t_max = 10.0
steps = 51
"""

LINDBLAD_CFG = """
[model]
type = lindblad
h_bar = 2 2 0+0i 0.5+0i 0.5+0i 0+0i
jump_1 = 2 2 0+0i 0+0i 1+0i 0+0i
rates = 1 1 1+0i

[initial_state]
kind = maximally-mixed

[times]
t_max = 4.0
steps = 21
"""

MICRO_CFG = """
[model]
type = microscopic
h_s = 2 2 0.5+0i 0+0i 0+0i -0.5+0i
h_e = 2 2 0+0i 0+0i 0+0i 1+0i
h_i = 4 4 0+0i 0+0i 0+0i 0.6+0i
      0+0i 0+0i 0+0i 0+0i
      0+0i 0+0i 0+0i 0+0i
      0.6+0i 0+0i 0+0i 0+0i
sigma0 = 2 2 1+0i 0+0i 0+0i 0+0i

[initial_state]
kind = pure
theta = 0.0
phi = 0.0

[times]
t_max = 3.0
steps = 13
"""


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_csv(path):
    lines = open(path).read().strip().split("\n")
    header = lines[0]
    rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, rows


def test_load_config_round_trip(tmp_path):
    cfg = config.load_config(write(tmp_path, THERMAL_CFG))
    assert cfg.model_type == "thermal-tls"
    assert cfg.t_max == 10.0 and cfg.steps == 51
    kind, obj = config.build_model(cfg)
    assert isinstance(obj, models.ThermalTlsParams)
    state = config.resolve_initial_state(cfg, kind, obj)
    assert state.matrix[0, 0] == pytest.approx(1.0)


def test_config_errors(tmp_path):
    with pytest.raises(config.ConfigError, match="model"):
        config.load_config(write(tmp_path, "[times]\nt_max = 1\nsteps = 5\n"))
    with pytest.raises(config.ConfigError, match="unknown model type"):
        config.load_config(write(tmp_path, "[model]\ntype = nope\n"))
    bad_seedless = """
[model]
type = stochastic
family = telegraph
amplitude = 1.0
correlation_time = 0.5
coupling = 2 2 0+0i 1+0i 1+0i 0+0i
base_h = 2 2 0.5+0i 0+0i 0+0i -0.5+0i
"""
    with pytest.raises(config.ConfigError, match="seed"):
        config.load_config(write(tmp_path, bad_seedless))


def test_cmd_qt_thermal(tmp_path):
    cfg_path = write(tmp_path, THERMAL_CFG)
    out = tmp_path / "qt.csv"
    assert cli.run(["qt", "--config", cfg_path, "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == "t,Q"
    assert rows.shape == (51, 2)
    assert rows[0, 1] == pytest.approx(1.0)
    # excited-state series decays monotonically toward 1 - tanh(1)
    assert np.all(np.diff(rows[:, 1]) <= 1e-12)
    assert rows[-1, 1] == pytest.approx(1.0 - np.tanh(1.0), abs=1e-4)


def test_cmd_qt_fluorescence_optimal(tmp_path):
    cfg = """
[model]
type = fluorescence
gamma = 1.0
omega = 5.0

[initial_state]
kind = optimal

[times]
t_max = 14.0
steps = 281
"""
    out = tmp_path / "qt.csv"
    assert cli.run(["qt", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    _, rows = read_csv(out)
    q = rows[:, 1]
    dq, _ = models.fluorescence_dq(models.FluorescenceParams(1.0, 5.0))
    assert abs(q[-1] - (1.0 + dq)) < 1e-3
    turning = np.sum(np.diff(np.sign(np.diff(q))) != 0)
    assert turning >= 4


def test_cmd_qt_explicit_lindblad(tmp_path):
    out = tmp_path / "qt.csv"
    assert cli.run(["qt", "--config", write(tmp_path, LINDBLAD_CFG), "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert np.abs(rows[:, 1] - 1.0).max() < 1e-10  # maximally mixed stays unit


def test_cmd_qt_microscopic(tmp_path):
    out = tmp_path / "qt.csv"
    assert cli.run(["qt", "--config", write(tmp_path, MICRO_CFG), "--out", str(out)]) == 0
    _, rows = read_csv(out)
    # resonant exchange with a vacuum qubit: Q = cos^2(g t)
    expected = np.cos(0.6 * rows[:, 0]) ** 2
    assert np.abs(rows[:, 1] - expected).max() < 1e-10


def test_cmd_dq_two_qubit(tmp_path):
    cfg = """
[model]
type = two-qubit
gamma = 1.0
omega = 1.0
"""
    out = tmp_path / "report.txt"
    assert cli.run(["dq", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    text = out.read_text()
    fields = dict(line.split(" = ", 1) for line in text.strip().split("\n"))
    assert float(fields["dq"]) == pytest.approx(1.914214, abs=1e-6)
    assert float(fields["concurrence"]) == pytest.approx(0.707107, abs=1e-6)
    assert float(fields["q_infinity"]) == pytest.approx(2.914214, abs=1e-6)
    assert fields["optimal_state"].startswith("4 4")


def test_cmd_dq_limits(tmp_path):
    hot = """
[model]
type = thermal-tls
gamma = 1.0
beta_hw0 = 1e-6
"""
    out = tmp_path / "r1.txt"
    cli.run(["dq", "--config", write(tmp_path, hot, "h.cfg"), "--out", str(out)])
    fields = dict(line.split(" = ", 1) for line in out.read_text().strip().split("\n"))
    assert abs(float(fields["dq"])) < 1e-5
    undriven = """
[model]
type = fluorescence
gamma = 1.0
omega = 0.0
"""
    out2 = tmp_path / "r2.txt"
    cli.run(["dq", "--config", write(tmp_path, undriven, "u.cfg"), "--out", str(out2)])
    fields = dict(line.split(" = ", 1) for line in out2.read_text().strip().split("\n"))
    assert float(fields["dq"]) == pytest.approx(1.0, abs=1e-10)


def test_cmd_dq_oscillator(tmp_path):
    cfg = """
[model]
type = oscillator
gamma = 1.0
beta_hw0 = 1.0
n_max = 60
"""
    out = tmp_path / "r.txt"
    assert cli.run(["dq", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    fields = dict(line.split(" = ", 1) for line in out.read_text().strip().split("\n"))
    assert float(fields["dq_renormalized"]) == pytest.approx(1 - np.exp(-1.0), abs=1e-10)


def test_cmd_sweep(tmp_path):
    cfg = """
[model]
type = fluorescence
gamma = 1.0
omega = 1.0

[sweep]
param = omega
values = 0.0, 0.5, 1.0, 2.0
"""
    out = tmp_path / "sweep.csv"
    assert cli.run(["sweep", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == "omega,dq"
    for om, dq in rows:
        assert dq == pytest.approx(models.fluorescence_dq(models.FluorescenceParams(1.0, om))[0],
                                   abs=1e-10)


def test_cmd_sweep_two_qubit_has_concurrence(tmp_path):
    cfg = """
[model]
type = two-qubit
gamma = 1.0
omega = 1.0

[sweep]
param = omega
values = 0.5 1.0
"""
    out = tmp_path / "sweep.csv"
    assert cli.run(["sweep", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == "omega,dq,concurrence"
    assert rows[1, 2] == pytest.approx(1 / np.sqrt(2), abs=1e-10)


def test_cmd_sweep_empty_values(tmp_path):
    cfg = """
[model]
type = fluorescence
gamma = 1.0
omega = 1.0

[sweep]
param = omega
values =
"""
    out = tmp_path / "sweep.csv"
    assert cli.run(["sweep", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    assert out.read_text() == "omega,dq\n"


def test_exit_codes(tmp_path, monkeypatch):
    # parse error
    assert cli.run(["qt", "--config", str(tmp_path / "missing.cfg")]) == 2
    bad = write(tmp_path, "[model]\ntype = fluorescence\ngamma = oops\nomega = 1\n", "bad.cfg")
    assert cli.run(["qt", "--config", bad]) == 2
    # model error: invalid parameter value
    neg = write(tmp_path, "[model]\ntype = fluorescence\ngamma = -1.0\nomega = 1\n", "neg.cfg")
    assert cli.run(["qt", "--config", neg]) == 3
    # unknown sweep parameter
    cfg = """
[model]
type = fluorescence
gamma = 1.0
omega = 1.0

[sweep]
param = nope
values = 1.0
"""
    assert cli.run(["sweep", "--config", write(tmp_path, cfg, "s.cfg")]) == 2
    # degenerate stationary manifold
    degen = """
[model]
type = lindblad
h_bar = 2 2 0.5+0i 0+0i 0+0i -0.5+0i

[times]
t_max = 1.0
steps = 5
"""
    assert cli.run(["dq", "--config", write(tmp_path, degen, "d.cfg")]) == 5
    # bound violation surfaces as exit 4
    def broken_series(model, rho0, times, bound_tol=1e-8):
        raise qcore.BoundViolationError("forced")
    monkeypatch.setattr(quantumness, "q_series", broken_series)
    thermal = write(tmp_path, THERMAL_CFG, "t.cfg")
    assert cli.run(["qt", "--config", thermal]) == 4


def test_seed_and_mode_flags(tmp_path):
    cfg = """
[model]
type = collisional
free_hamiltonian = 2 2 0.25+0i 0+0i 0+0i -0.25+0i
kraus_1 = 2 2 0+0i 1+0i 1+0i 0+0i
waiting_family = exponential
waiting_rate = 1.0

[initial_state]
kind = maximally-mixed

[times]
t_max = 2.0
steps = 9

[run]
n_paths = 100
"""
    path = write(tmp_path, cfg)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    # monte-carlo without a seed is a config error
    assert cli.run(["qt", "--config", path, "--mode", "monte-carlo", "--out", str(out1)]) == 2
    assert cli.run(["qt", "--config", path, "--mode", "monte-carlo", "--seed", "5",
                    "--out", str(out1)]) == 0
    assert cli.run(["qt", "--config", path, "--mode", "monte-carlo", "--seed", "5",
                    "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_verify_subcommand(tmp_path):
    out_dir = tmp_path / "artifacts"
    assert cli.run(["verify", "--fast", "--out", str(out_dir)]) == 0
    produced = {p.name for p in out_dir.iterdir()}
    assert "fig2_data.csv" in produced
    assert "fig1_right_sweep.csv" in produced
    assert "thermal_qt.csv" in produced


def test_cli_optimal_state_reaches_max(tmp_path):
    # the propagated series from the resolved optimal state attains 1 + dq
    cfg = config.load_config(write(tmp_path, THERMAL_CFG))
    kind, obj = config.build_model(cfg)
    cfg.initial_state = {"kind": "optimal"}
    state = config.resolve_initial_state(cfg, kind, obj)
    m = obj.lindblad_model()
    report = quantumness.degree_of_quantumness(m)
    q_inf = quantumness.q_stationary(m, state)
    assert q_inf == pytest.approx(1.0 + report.dq, abs=1e-10)
