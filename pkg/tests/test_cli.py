import io
import subprocess
import sys
from fractions import Fraction

import pytest

from madic import AlphaParam, build_greedy, load, oscillation_report
from madic.cli import run


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def greedy_file(tmp_path):
    path = tmp_path / "g.madic"
    code, out, _ = cli("construct", "--type", "greedy", "--m", 3, "--alpha", "5/6", "--x0", 1,
                       "--depth", 11, "-o", path)
    assert code == 0
    return path, out


@pytest.fixture
def random_file(tmp_path):
    path = tmp_path / "r.madic"
    assert cli("construct", "--type", "random", "--m", 2, "--depth", 4, "--seed", 3, "-o", path)[0] == 0
    return path


def test_construct_greedy(greedy_file):
    path, out = greedy_file
    assert "s=[2,3,2,3,2,3,2,3,2,3,3]" in out
    assert "f in [1, 3/2]: OK" in out
    assert load(path).alpha == Fraction(5, 6)


def test_construct_uniform_and_random(tmp_path):
    p = tmp_path / "u.madic"
    assert cli("construct", "--type", "uniform", "--m", 3, "--depth", 2, "--s-seq", "2,3",
               "--x0", "3/7", "-o", p)[0] == 0
    mu = load(p)
    assert mu.root_mass == Fraction(3, 7) and len(mu.level(2)) == 6
    code, out, _ = cli("construct", "--type", "random", "--m", 2, "--depth", 3, "--seed", 9, "-o", tmp_path / "x")
    assert code == 0 and out.startswith("seed=9")


def test_bounds_example():
    code, out, _ = cli("verify", "bounds", "--m", 2, "--alpha", "1/2", "--I-max", 32)
    assert code == 0
    assert out.splitlines()[-1] == "lower≈1.414214 (i=1) upper=2 OK"


def test_oscillation_roundtrip(greedy_file):
    path, _ = greedy_file
    code, out, _ = cli("analyze", "oscillation", "--in", path, "--alpha", "5/6")
    assert code == 0
    assert out.splitlines()[-1] == "c_loc_hat≈1.461418 c_hat≈1.461418 ≤ upper=3/2"
    a = AlphaParam(3, 5, 6)
    rep = oscillation_report(build_greedy(a, 1, 11).measure, a)
    assert f"c_hat_approx={rep.c_hat.approx()}" in out


def test_profile_csv(greedy_file, tmp_path):
    path, _ = greedy_file
    csv_path = tmp_path / "p.csv"
    code, out, _ = cli("analyze", "profile", "--in", path, "--path", "00000", "--csv", csv_path)
    assert code == 0
    text = csv_path.read_text()
    assert text.splitlines()[0] == "n,prefix,mass_num,mass_den,f_approx"
    assert text.splitlines()[4] == "3,000,1,12,1.29903810567666"


def test_verify_uniform(greedy_file, random_file):
    code, out, _ = cli("verify", "uniform", "--in", greedy_file[0])
    assert code == 0 and out.strip() == "uniform x0=1 s=[2,3,2,3,2,3,2,3,2,3,3]"
    code, out, _ = cli("verify", "uniform", "--in", random_file)
    assert code == 1 and out.startswith("FAIL not-uniform")


def test_verify_marked(random_file):
    code, out, _ = cli("verify", "marked", "--in", random_file, "--alpha", "1/2")
    assert code == 0 and out.splitlines()[-1] == "OK"
    assert out.startswith("delta=1/10 tau=1/30 u=3")
    code, out, _ = cli("verify", "marked", "--in", random_file, "--alpha", "2/5", "--d-consec", 2)
    assert code == 0
    # lifting alpha=1/2 over base 4 makes w = 2 an integer
    assert cli("verify", "marked", "--in", random_file, "--alpha", "1/2", "--d-consec", 2)[0] == 2
    code, out, _ = cli("verify", "marked", "--in", random_file, "--alpha", "1/2", "--tau", "2/3")
    assert code == 1 and "FAIL marked-hypothesis" in out


def test_verify_dirichlet():
    code, out, _ = cli("verify", "dirichlet", "--w", "5/2", "--u", 6, "--delta", "1/10", "--trials", 200, "--seed", 1)
    assert code == 0 and out.startswith("seed=1 ")
    code, out, _ = cli("verify", "dirichlet", "--w", "5/2", "--u", 6, "--delta", "1/10", "--tau", 1,
                       "--trials", 200, "--seed", 1)
    assert code == 1 and "FAIL dirichlet-selection" in out
    assert cli("verify", "dirichlet", "--w", 3, "--u", 6, "--delta", "1/10")[0] == 2


def test_lift_and_sample(random_file, tmp_path):
    lifted = tmp_path / "l.madic"
    assert cli("lift", "--in", random_file, "--d", 2, "-o", lifted)[0] == 0
    mu = load(lifted)
    assert mu.m == 4 and mu.depth == 2
    code, out, _ = cli("sample", "--in", random_file, "--count", 3, "--seed", 5)
    assert code == 0 and out.splitlines()[0] == "seed=5 count=3" and len(out.splitlines()) == 4


@pytest.mark.parametrize("argv,code", [
    (("verify", "bounds", "--m", 2, "--alpha", "0.5"), 2),
    (("verify", "bounds", "--m", 2, "--alpha", "1/2", "--bogus"), 2),
    (("verify", "bounds", "--m", 4, "--alpha", "1/2"), 0),
    (("verify", "uniform", "--in", "/nonexistent/x.madic"), 3),
    (("construct", "--type", "greedy", "--m", 3, "--depth", 2, "-o", "/nonexistent/dir/x"), 2),
    (("construct", "--type", "greedy", "--m", 3, "--alpha", "5/6", "--depth", 2, "-o", "/nonexistent/dir/x"), 3),
])
def test_exit_codes(argv, code, capsys):
    assert cli(*argv)[0] == code


def test_bad_file_reports_line(tmp_path):
    bad = tmp_path / "bad.madic"
    bad.write_text("MADIC 1\nm=2 depth=1\nnode eps 1/1\nnode 0 1/3\nnode 1 1/3\n")
    code, _, err = cli("verify", "uniform", "--in", bad)
    assert code == 3 and str(bad) in err and "consistency" in err
    bad.write_text("MADIC 1\nm=2 depth=1\nnode eps one\n")
    code, _, err = cli("verify", "uniform", "--in", bad)
    assert code == 3 and "line 3" in err


def test_determinism_subprocess(tmp_path):
    argv = [sys.executable, "-m", "madic", "verify", "dirichlet", "--w", "7/3", "--u", 5, "--delta", "1/20",
            "--trials", 300, "--seed", 11]
    runs = [subprocess.run([str(a) for a in argv], capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.madic"
        subprocess.run([sys.executable, "-m", "madic", "construct", "--type", "random", "--m", "3",
                        "--depth", "5", "--seed", "4", "-o", str(p)], check=True, capture_output=True)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
