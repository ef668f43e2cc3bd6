import csv
import io
import math

import numpy as np
import pytest

from spinprop import cli, config, sech, units
from spinprop.synthesis import GaussDeriv


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


def test_bundled_recipes_listed():
    assert config.builtin_names() == ["fig1", "fig2a", "fig2b", "fig3"]


def test_fig1_swap_prob(capsys):
    code, out, _ = run(capsys, "swap-prob", "--config", "fig1")
    assert code == 0
    header, data = table(out)
    assert header == ["t_ns", "P"]
    t, P = data.T
    assert np.all(np.diff(t) > 0)
    i = next(k for k in range(1, len(P) - 1) if P[k - 1] < P[k] >= P[k + 1])
    assert abs(t[i] - 0.5) <= 0.05 and 0.85 <= P[i] <= 0.95


def test_output_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--config", "fig2b", "--set", "sweep.samples=7"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b), "--set", "workers=3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    header, data = table(a.read_text())
    assert header == ["omega_GHz", "P"]
    assert data.shape == (7, 2)


def test_seventeen_digits():
    assert cli._fmt(1 / 3) == "0.33333333333333331"
    assert float(cli._fmt(math.pi)) == math.pi


def test_zero_coupling_curve(capsys):
    code, out, _ = run(capsys, "swap-prob", "--config", "fig1", "--set", "a_over_omega=0", "--set", "samples=11")
    assert code == 0
    assert np.all(table(out)[1][:, 1] == 0)


def test_closed_form_matches_ode_curve(capsys):
    base = ["swap-prob", "--config", "fig1", "--set", "samples=41", "--set", "t_start=-2", "--set", "t_end=3"]
    _, closed, _ = run(capsys, *base)
    _, ode, _ = run(capsys, *base, "--set", "method=ode", "--tolerance", "1e-11")
    assert np.max(np.abs(table(closed)[1][:, 1] - table(ode)[1][:, 1])) < 1e-6


def test_single_point_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--config", "fig3", "--set", "sweep.samples=1", "--set", "sweep.start=2")
    assert code == 0
    header, data = table(out)
    assert header == ["a_GHz", "P"] and data.shape == (1, 2)
    p = sech.SechPulseParams(2.0, 30.0, 15.0)
    assert data[0, 1] == pytest.approx(sech.swap_probability(p, 1.0), abs=1e-15)


def test_time_sweep(capsys):
    code, out, _ = run(
        capsys, "sweep", "--set", "a_over_omega=3", "--set", "c_over_omega=1",
        "--set", "sweep.var=t", "--set", "sweep.start=0", "--set", "sweep.end=1", "--set", "sweep.samples=3",
    )
    assert code == 0
    _, data = table(out)
    assert data[0, 1] == 0
    assert data[1, 1] == pytest.approx(0.9062924614192313, abs=1e-9)


SYNTH = [
    "--set", "t_start=-3", "--set", "t_end=3", "--set", "samples=61",
    "--set", "phi.family=constant", "--set", "phi.v0=0.4",
]


def test_synthesize_sine_finite_support(capsys):
    code, out, _ = run(
        capsys, "synthesize", *SYNTH,
        "--set", "theta.family=sine", "--set", "theta.v0=0", "--set", "theta.v1=2", "--set", "theta.T=1",
        "--set", "alpha.family=sine", "--set", "alpha.v0=1", "--set", "alpha.v1=-1", "--set", "alpha.T=1.5",
    )
    assert code == 0
    header, data = table(out)
    assert header == ["t", "theta", "phi", "alpha", "F1", "F2", "F3"]
    outside = np.abs(data[:, 0]) >= 1.5
    assert np.all(data[outside, 4:] == 0)
    assert np.any(data[~outside, 4:] != 0)


def test_synthesize_constant_and_gauss(capsys):
    const = ["--set", "theta.family=constant", "--set", "theta.v0=1", "--set", "alpha.family=constant", "--set", "alpha.v0=2"]
    _, out, _ = run(capsys, "synthesize", *SYNTH, *const)
    assert np.all(table(out)[1][:, 4:] == 0)
    gauss = ["--set", "theta.family=gauss", "--set", "theta.v0=1.2", "--set", "theta.v1=0.7", "--set", "theta.T=0.8",
             "--set", "alpha.family=gauss", "--set", "alpha.v0=2", "--set", "alpha.v1=0.3", "--set", "alpha.T=1.1"]
    _, out, _ = run(capsys, "synthesize", *SYNTH, *gauss)
    data = table(out)[1]
    th_p, al_p = GaussDeriv(1.2, 0.7, 0.8), GaussDeriv(2.0, 0.3, 1.1)
    for t, th, ph, al, f1, f2, f3 in data:
        # twice the field, written out directly
        d1 = th_p.deriv(t) * math.sin(ph) + al_p.deriv(t) * math.sin(th) * math.cos(ph)
        d2 = al_p.deriv(t) * math.sin(th) * math.sin(ph) - th_p.deriv(t) * math.cos(ph)
        d3 = -al_p.deriv(t) * math.cos(th)
        assert (2 * f1, 2 * f2, 2 * f3) == pytest.approx((d1, d2, d3), abs=1e-12)


def test_evolve_two_and_four(capsys):
    base = ["evolve", "--config", "fig1", "--set", "samples=5", "--set", "t_end=1"]
    _, out2, _ = run(capsys, *base)
    code, out4, _ = run(capsys, *base, "--set", "system=4", "--set", "Bplus_GHz=3")
    assert code == 0
    h2, d2 = table(out2)
    h4, d4 = table(out4)
    assert len(h2) == 9 and len(h4) == 33 and h4[0] == "t_ns"
    # u21 of the 2x2 block equals U(du <- ud) up to the phase factor
    u21 = d2[:, h2.index("u21_re")] + 1j * d2[:, h2.index("u21_im")]
    u32 = d4[:, h4.index("u32_re")] + 1j * d4[:, h4.index("u32_im")]
    np.testing.assert_allclose(np.abs(u21), np.abs(u32), atol=1e-14)


def test_evolve_from_angles(capsys):
    code, out, _ = run(
        capsys, "evolve", "--set", "field=angles", *SYNTH,
        "--set", "theta.family=linear", "--set", "theta.rate=0.5",
        "--set", "alpha.family=gauss", "--set", "alpha.v0=1", "--set", "alpha.v1=0", "--set", "alpha.T=1",
    )
    assert code == 0
    data = table(out)[1]
    np.testing.assert_allclose(data[0, 1:], [1, 0, 0, 0, 0, 0, 1, 0], atol=1e-15)


def test_units_block(capsys):
    # J chosen so that a/omega = 3 at omega = 1 GHz; B_minus so that c/omega = 1
    j_ev = 3 * units.HBAR_EV_S * 1e9
    b_mt = 1e3 * units.HBAR_EV_S * 1e9 / units.MU_B_EV_PER_T
    a, c = units.ratios_from_units(1.0, j_ev, b_mt * 1e-3)
    assert a == pytest.approx(3, abs=1e-12) and c == pytest.approx(1, abs=1e-12)
    args = ["swap-prob", "--set", "t_start=0", "--set", "t_end=1", "--set", "samples=3"]
    _, by_units, _ = run(capsys, *args, "--set", f"J_eV={j_ev!r}", "--set", f"Bminus_mT={b_mt!r}")
    _, by_ratio, _ = run(capsys, *args, "--set", "a_over_omega=3", "--set", "c_over_omega=1")
    np.testing.assert_allclose(table(by_units)[1], table(by_ratio)[1], atol=1e-12)
    g = ["--set", f"J_eV={j_ev!r}", "--set", f"B1_mT={b_mt / 2!r}", "--set", "B2_mT=0", "--set", "g1=2", "--set", "g2=2"]
    _, by_g, _ = run(capsys, *args, *g)
    np.testing.assert_allclose(table(by_g)[1], table(by_ratio)[1], atol=1e-12)


@pytest.mark.parametrize(
    "argv,match",
    [
        (["swap-prob", "--config", "nope.cfg"], "not found"),
        (["swap-prob", "--config", "fig1", "--set", "a_GHz=1"], "exactly one parameter block"),
        (["swap-prob", "--config", "fig1", "--set", "samples=1"], "samples"),
        (["swap-prob", "--config", "fig1", "--set", "t_end=-1"], "t_end"),
        (["swap-prob", "--config", "fig1", "--set", "omega_GHz=abc"], "omega_GHz"),
        (["swap-prob", "--config", "fig1", "--tolerance", "1e-20"], "tolerance"),
        (["swap-prob", "--config", "fig1", "--set", "method=rk4"], "method"),
        (["sweep", "--config", "fig2a", "--set", "sweep.var=B"], "sweep.var"),
        (["synthesize", "--set", "t_start=0", "--set", "t_end=1", "--set", "samples=3"], "theta"),
        (["evolve", "--config", "fig1", "--set", "system=3"], "system"),
        (["swap-prob", "--config", "fig1", "--set", "noequals"], None),
    ],
)
def test_config_errors(capsys, argv, match):
    if match is None:
        argv = ["swap-prob", "--config", "fig1", "--set", "noequals"]
        match = "key=value"
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert match in err


def test_config_file_parsing(tmp_path, capsys):
    f = tmp_path / "run.cfg"
    f.write_text("# comment\nmode = swap-prob\n a_over_omega = 3  # trailing\nc_over_omega=1\nt_start=0\nt_end=0.5\nsamples=2\n")
    code, out, _ = run(capsys, "swap-prob", "--config", str(f))
    assert code == 0
    assert table(out)[1][-1, 1] == pytest.approx(0.9062924614192313, abs=1e-9)
    f.write_text("just words\n")
    assert run(capsys, "swap-prob", "--config", str(f))[0] == 2


def test_numerical_error_exit(capsys):
    code, out, err = run(capsys, "swap-prob", "--config", "fig1", "--set", "a_over_omega=3039")
    assert code == 3
    assert "numerical error" in err


def test_validate(tmp_path, capsys):
    report = tmp_path / "report.txt"
    code, out, _ = run(capsys, "validate", "--out", str(report))
    assert code == 0
    assert "12/12 checks passed" in out
    assert report.read_text() == out
    line = next(x for x in out.splitlines() if "sech closed form vs ODE" in x)
    achieved = float(line.split("achieved ")[1].split()[0])
    assert line.startswith("[PASS]") and achieved < 1e-6


def test_validate_detects_perturbation(capsys):
    code, out, _ = run(capsys, "validate", "--set", "inject_perturbation=1e-3")
    assert code == 1
    assert "[FAIL] R^dagger R = I" in out
    assert "failed:" in out
