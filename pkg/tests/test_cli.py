import csv
import io

import pytest

from supersde import checks, cli
from supersde.checks import Row


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_verify_wick_default(tmp_path, capsys):
    out = tmp_path / "wick.csv"
    assert cli.main(["verify-wick", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == list(cli.HEADER)
    assert [r[1] for r in rows[1:]] == [f"fermionic_det_n{n}" for n in range(1, 7)]
    for n, r in enumerate(rows[1:], 1):
        assert float(r[4]) == 2.0**-n and r[6] == "true" and r[3] == ""
    assert "6/6 rows pass" in capsys.readouterr().out


def test_verify_reduction_reference(tmp_path):
    out = tmp_path / "red.csv"
    assert cli.main(["verify-reduction", "--out", str(out)]) == 0
    rows = read_csv(out)[1:]
    corpus = checks.reduction_corpus()
    for row, (name, t_fn, f_fn, K) in zip(rows, corpus):
        assert row[1] == name
        assert float(row[4]) == -2.0 * float(t_fn(K)) * float(f_fn(K))


def test_missing_config_exits_2_without_csv(tmp_path):
    out = tmp_path / "x.csv"
    assert cli.main(["verify-wick", "--config", str(tmp_path / "nope.cfg"), "--out", str(out)]) == 2
    assert not out.exists()


@pytest.mark.parametrize("text", ["bogus = 1\n", "m = abc\n", "m 1\n", "F.name = cos, sinh\n", "h = 0.3\n",
                                  "V.name = doublewell\n", "n_paths = 2.5\n"])
def test_bad_config_exits_2(tmp_path, text):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(text)
    assert cli.main(["verify-wick", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_parse_config_keys():
    text = """
    # comment line
    m = 1.5          # trailing comment
    h = 2^-8
    T_support = 0.5
    n_paths = 1000
    seed = 42
    V.name = tanhpoly
    V.lambda = 0.25
    F.name = cos, step
    quad_tol = 1e-9
    eps_list = 0.1, 0.05
    """
    fields, obs = cli.parse_config(text)
    assert fields == dict(m=1.5, h=2.0**-8, T_support=0.5, n_paths=1000, seed=42, potential="tanhpoly",
                          potential_scale=0.25, quad_tol=1e-9, eps_list=(0.1, 0.05))
    assert obs == ("cos", "step")


def test_seed_and_fast_flags(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("n_paths = 1000\nseed = 5\n")
    args = cli.build_parser().parse_args(["verify-gibbs", "--config", str(cfg), "--seed", "9", "--fast",
                                          "--workers", "2"])
    rc = cli.build_run_config(args)
    assert rc.sim.seed == 9 and rc.sim.n_paths == 250 and rc.sim.workers == 2


def test_csv_round_trips_and_pass_column():
    rows = [Row("x", "a", 0.1 + 0.2, 1e-3, 0.3, 1e-17), Row("x", "b", 1.0, None, 2.0, 0.5)]
    parsed = list(csv.reader(io.StringIO(cli.rows_to_csv(rows))))[1:]
    for r, p in zip(rows, parsed):
        assert float(p[2]) == r.value and float(p[4]) == r.reference and float(p[5]) == r.tolerance
        assert (p[6] == "true") == (abs(float(p[2]) - float(p[4])) <= float(p[5]))
    assert parsed[1][6] == "false"


def test_failing_row_gives_exit_1(tmp_path, monkeypatch):
    monkeypatch.setattr(checks, "algebra_selftest", lambda: [Row("algebra-selftest", "q", 1.0, None, 0.0, 0.0)])
    assert cli.main(["algebra-selftest", "--out", str(tmp_path / "a.csv")]) == 1


def test_all_runs_suites_in_documented_order(monkeypatch):
    calls = []

    def stub(name):
        def run(*args, **kwargs):
            calls.append(name)
            return [Row(name, "q", 0.0, None, 0.0, 0.0)]
        return run

    for attr, name in [("algebra_selftest", "algebra-selftest"), ("verify_reduction", "verify-reduction"),
                       ("verify_wick", "verify-wick"), ("verify_localization", "verify-localization")]:
        monkeypatch.setattr(checks, attr, stub(name))

    class FakeMC:
        girsanov_rows = staticmethod(stub("verify-girsanov"))
        gibbs_rows = staticmethod(stub("verify-gibbs"))
        wong_zakai_rows = staticmethod(stub("wong-zakai"))

    rows = checks.run_suite("all", checks.SimConfig(), mc=FakeMC())
    assert calls == list(checks.SUITE_ORDER)
    assert [r.check_id for r in rows] == list(checks.SUITE_ORDER)


def test_rerun_is_bit_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["verify-localization", "--out", str(a)]) == 0
    assert cli.main(["verify-localization", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
