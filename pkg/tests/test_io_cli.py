import hashlib
import json
import struct

import numpy as np
import pytest

from hsghs.cli import main
from hsghs.io import (SampleFormatError, encode_samples, read_csv, read_header,
                      read_samples, write_csv, write_samples)
from hsghs.metrics import MetricsReport
from hsghs.types import GibbsConfig, PosteriorSamples


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_csv_round_trip_is_exact(tmp_path, rng):
    M = rng.standard_normal((7, 4)) * 10.0 ** rng.integers(-300, 300, (7, 4))
    M[0, 0] = 0.1
    M[0, 1] = -0.0
    write_csv(tmp_path / "m.csv", M)
    back = read_csv(tmp_path / "m.csv")
    np.testing.assert_array_equal(back, M)
    assert (tmp_path / "m.csv").read_text().splitlines()[0].count(",") == 3


def test_csv_single_row_and_column(tmp_path):
    write_csv(tmp_path / "r.csv", np.array([[1.0, 2.0]]))
    write_csv(tmp_path / "c.csv", np.array([[1.0], [2.0]]))
    assert read_csv(tmp_path / "r.csv").shape == (1, 2)
    assert read_csv(tmp_path / "c.csv").shape == (2, 1)


def test_sample_stream_layout(tmp_path, rng):
    beta = rng.standard_normal((3, 4))
    omega = rng.standard_normal((3, 3))
    s = PosteriorSamples(beta, omega, (9, 2, 2), GibbsConfig(burnin=0, nmc=3))
    buf = encode_samples(s)
    assert buf[:4] == b"HSGS"
    assert struct.unpack_from("<I", buf, 4)[0] == 1
    assert struct.unpack_from("<4Q", buf, 8) == (9, 2, 2, 3)
    assert len(buf) == 40 + 3 * (4 + 3) * 8
    first = np.frombuffer(buf[40:40 + 7 * 8], dtype="<f8")
    np.testing.assert_array_equal(first, np.r_[beta[0], omega[0]])
    write_samples(tmp_path / "s.hsgs", s)
    back = read_samples(tmp_path / "s.hsgs")
    np.testing.assert_array_equal(back.beta_draws, beta)
    np.testing.assert_array_equal(back.omega_draws, omega)
    assert back.dims == (9, 2, 2)


def test_sample_stream_corruption(tmp_path, rng):
    s = PosteriorSamples(np.zeros((2, 1)), np.ones((2, 1)), (3, 1, 1), GibbsConfig(nmc=2))
    buf = encode_samples(s)
    with pytest.raises(SampleFormatError):
        read_header(b"XXXX" + buf[4:])
    with pytest.raises(SampleFormatError):
        read_header(buf[:10])
    with pytest.raises(SampleFormatError):
        read_header(buf[:4] + struct.pack("<I", 2) + buf[8:])
    (tmp_path / "t.hsgs").write_bytes(buf[:-8])
    with pytest.raises(SampleFormatError):
        read_samples(tmp_path / "t.hsgs")


@pytest.fixture
def sim_dir(tmp_path):
    out = tmp_path / "sim"
    assert main(["simulate", "--n", "12", "--p", "6", "--q", "3", "--sparsity", "0.2",
                 "--seed", "4", "--out-dir", str(out)]) == 0
    return out


def test_simulate_files(sim_dir, tmp_path):
    shapes = {"X.csv": (12, 6), "Y.csv": (12, 3), "B_true.csv": (6, 3),
              "Omega_true.csv": (3, 3), "X_test.csv": (12, 6), "Y_test.csv": (12, 3)}
    for name, shape in shapes.items():
        assert read_csv(sim_dir / name).shape == shape
    assert np.count_nonzero(read_csv(sim_dir / "B_true.csv")) == round(0.2 * 18)
    manifest = json.loads((sim_dir / "manifest.json").read_text())
    assert manifest["command"] == "simulate" and manifest["seed"] == 4
    assert manifest["params"]["structure"] == "ar1"
    again = tmp_path / "again"
    main(["simulate", "--n", "12", "--p", "6", "--q", "3", "--sparsity", "0.2",
          "--seed", "4", "--out-dir", str(again)])
    for name in shapes:
        assert _sha(sim_dir / name) == _sha(again / name)


def test_simulate_study_setting(tmp_path):
    out = tmp_path / "big"
    assert main(["simulate", "--n", "100", "--p", "200", "--q", "25", "--structure", "ar1",
                 "--coef", "uniform", "--sparsity", "0.05", "--out-dir", str(out)]) == 0
    assert read_csv(out / "X.csv").shape == (100, 200)
    assert np.count_nonzero(read_csv(out / "B_true.csv")) == 250


def test_simulate_cliques_note(tmp_path):
    out = tmp_path / "cl"
    main(["simulate", "--n", "5", "--p", "3", "--q", "25", "--structure", "cliques",
          "--out-dir", str(out)])
    notes = json.loads((out / "manifest.json").read_text())["notes"]
    assert any("isolated" in n for n in notes)


def test_simulate_star_not_pd_is_runtime_error(tmp_path, capsys):
    assert main(["simulate", "--q", "25", "--structure", "star",
                 "--out-dir", str(tmp_path / "s")]) == 1
    assert "positive definite" in capsys.readouterr().err


def _fit(sim_dir, out, nmc="5", extra=()):
    return main(["fit", "--x", str(sim_dir / "X.csv"), "--y", str(sim_dir / "Y.csv"),
                 "--burnin", "3", "--nmc", nmc, "--seed", "11",
                 "--out-samples", str(out / "samples.hsgs"),
                 "--out-summary", str(out / "summary.json"), *extra])


def test_fit_summarize_metrics_roc_pipeline(sim_dir, tmp_path):
    fit_dir = tmp_path / "fit"
    assert _fit(sim_dir, fit_dir, nmc="40") == 0
    samples = read_samples(fit_dir / "samples.hsgs")
    assert samples.nmc == 40 and samples.dims == (12, 6, 3)
    summary = json.loads((fit_dir / "summary.json").read_text())
    assert np.array(summary["B_hat"]).shape == (6, 3)
    assert "loglik_geweke_z" in summary["chains"][0]
    assert summary["runtime_seconds"] > 0

    est = tmp_path / "est"
    assert main(["summarize", "--samples", str(fit_dir / "samples.hsgs"),
                 "--out-dir", str(est)]) == 0
    om_sel = read_csv(est / "Omega_select.csv")
    np.testing.assert_array_equal(om_sel, om_sel.T)
    assert np.all(np.diag(om_sel) == 0)
    assert set(np.unique(read_csv(est / "B_select.csv"))) <= {0.0, 1.0}
    np.testing.assert_allclose(read_csv(est / "Bhat.csv"), summary["B_hat"], rtol=1e-12)

    out_json = tmp_path / "metrics" / "report.json"
    assert main(["metrics", "--truth-dir", str(sim_dir), "--estimate-dir", str(est),
                 "--test-dir", str(sim_dir), "--out", str(out_json)]) == 0
    rep = MetricsReport.from_json(out_json.read_text())
    assert rep.avg_kl >= 0 and 0 <= rep.b_sen <= 1

    roc = tmp_path / "roc"
    assert main(["roc", "--samples", str(fit_dir / "samples.hsgs"), "--truth-dir",
                 str(sim_dir), "--mode", "bayes", "--out-dir", str(roc)]) == 0
    rows = read_csv(roc / "roc_B.csv")
    assert rows.shape == (99, 3)
    assert np.all(np.diff(rows[:, 1]) <= 0) and np.all(np.diff(rows[:, 2]) <= 0)
    assert read_csv(roc / "roc_Omega.csv").shape == (99, 3)
    # parses back and re-serializes identically
    write_csv(tmp_path / "copy.csv", rows)
    assert (tmp_path / "copy.csv").read_bytes() == (roc / "roc_B.csv").read_bytes()

    roc_t = tmp_path / "roct"
    assert main(["roc", "--estimate-dir", str(est), "--truth-dir", str(sim_dir),
                 "--mode", "threshold", "--out-dir", str(roc_t)]) == 0
    rows = read_csv(roc_t / "roc_B.csv")
    assert rows[0, 0] == 0.0


def test_threshold_roc_at_zero_has_full_tpr(tmp_path, sim_dir):
    # an estimate whose support contains the truth
    est = tmp_path / "est"
    B = read_csv(sim_dir / "B_true.csv") + 0.01
    write_csv(est / "Bhat.csv", B)
    write_csv(est / "Omegahat.csv", read_csv(sim_dir / "Omega_true.csv"))
    main(["roc", "--estimate-dir", str(est), "--truth-dir", str(sim_dir), "--mode",
          "threshold", "--out-dir", str(tmp_path / "r")])
    rows = read_csv(tmp_path / "r" / "roc_B.csv")
    assert rows[0, 0] == 0 and rows[0, 2] == 1.0


def test_metrics_identical_estimate(sim_dir, tmp_path):
    est = tmp_path / "est"
    B = read_csv(sim_dir / "B_true.csv")
    om = read_csv(sim_dir / "Omega_true.csv")
    off = (om != 0) & ~np.eye(3, dtype=bool)
    write_csv(est / "Bhat.csv", B)
    write_csv(est / "Omegahat.csv", om)
    write_csv(est / "B_select.csv", (B != 0).astype(int))
    write_csv(est / "Omega_select.csv", off.astype(int))
    out = tmp_path / "m.json"
    main(["metrics", "--truth-dir", str(sim_dir), "--estimate-dir", str(est),
          "--test-dir", str(sim_dir), "--out", str(out)])
    d = json.loads(out.read_text())
    assert d["mse_b"] == 0 and d["mse_omega"] == 0 and abs(d["avg_kl"]) < 1e-12
    assert d["b_sen"] == d["b_spe"] == d["b_prc"] == 1
    # empty selection serializes precision as null
    write_csv(est / "B_select.csv", np.zeros_like(B))
    main(["metrics", "--truth-dir", str(sim_dir), "--estimate-dir", str(est),
          "--test-dir", str(sim_dir), "--out", str(out)])
    assert json.loads(out.read_text())["b_prc"] is None


def test_summarize_constant_draws(tmp_path):
    s = PosteriorSamples(np.full((4, 2), 0.7), np.tile([2.0, 0.0, 1.0], (4, 1)), (3, 1, 2),
                         GibbsConfig(nmc=4))
    write_samples(tmp_path / "c.hsgs", s)
    assert main(["summarize", "--samples", str(tmp_path / "c.hsgs"),
                 "--out-dir", str(tmp_path / "o")]) == 0
    np.testing.assert_array_equal(read_csv(tmp_path / "o" / "B_select.csv"), [[1, 1]])
    np.testing.assert_array_equal(read_csv(tmp_path / "o" / "Omega_select.csv"), np.zeros((2, 2)))


@pytest.mark.parametrize("level", ["0", "1", "1.5", "-0.2"])
def test_summarize_bad_level_is_usage_error(level, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["summarize", "--samples", "x.hsgs", "--ci-level", level,
              "--out-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_runtime_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert main(["fit", "--x", str(bad), "--y", str(bad), "--out-samples",
                 str(tmp_path / "s.hsgs"), "--out-summary", str(tmp_path / "s.json")]) == 1
    (tmp_path / "junk.hsgs").write_bytes(b"nope")
    assert main(["summarize", "--samples", str(tmp_path / "junk.hsgs"),
                 "--out-dir", str(tmp_path)]) == 1
    assert main(["metrics", "--truth-dir", str(tmp_path / "missing"), "--estimate-dir",
                 str(tmp_path), "--test-dir", str(tmp_path), "--out", str(tmp_path / "m.json")]) == 1


def test_fit_dimension_mismatch(tmp_path, sim_dir):
    write_csv(tmp_path / "y.csv", np.ones((5, 3)))
    assert main(["fit", "--x", str(sim_dir / "X.csv"), "--y", str(tmp_path / "y.csv"),
                 "--out-samples", str(tmp_path / "s.hsgs"),
                 "--out-summary", str(tmp_path / "s.json")]) == 1


def test_fit_replay_is_byte_identical(sim_dir, tmp_path):
    fit_dir = tmp_path / "fit"
    _fit(sim_dir, fit_dir)
    assert read_samples(fit_dir / "samples.hsgs").nmc == 5
    manifest = fit_dir / "manifest.json"
    assert json.loads(manifest.read_text())["command"] == "fit"
    assert main(["replay", str(manifest), "--out-dir", str(tmp_path / "replay")]) == 0
    assert _sha(fit_dir / "samples.hsgs") == _sha(tmp_path / "replay" / "samples.hsgs")


def test_multiple_chains(sim_dir, tmp_path):
    fit_dir = tmp_path / "fit"
    assert _fit(sim_dir, fit_dir, extra=("--chains", "2")) == 0
    a = read_samples(fit_dir / "samples.chain0.hsgs")
    b = read_samples(fit_dir / "samples.chain1.hsgs")
    assert a.nmc == b.nmc == 5
    assert not np.array_equal(a.beta_draws, b.beta_draws)
    single = tmp_path / "single"
    _fit(sim_dir, single)
    assert _sha(single / "samples.hsgs") == _sha(fit_dir / "samples.chain0.hsgs")
    summary = json.loads((fit_dir / "summary.json").read_text())
    assert [c["seed"] for c in summary["chains"]] == [11, 12]
    assert main(["summarize", "--samples", str(fit_dir / "samples.chain0.hsgs"),
                 str(fit_dir / "samples.chain1.hsgs"), "--out-dir", str(tmp_path / "e")]) == 0
