import json
import subprocess
import sys
from pathlib import Path

import pytest

from cobalg.cli import default_cap, main, run
from cobalg.textio import canonicalize, load, parse

CORPUS = Path(__file__).parent / "corpus"
SRC = Path(__file__).parent.parent / "src"


def c(name):
    return str(CORPUS / name)


def write(tmp_path, text, name="in.txt"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


@pytest.mark.parametrize("argv,code", [
    (["check-complex", c("01_complex_example.txt")], 0),
    (["check-complex", c("03_complex_not_square_zero.txt")], 1),
    (["snake", c("04_snake_l3.txt")], 0),
    (["cone-decomp", c("07_conedecomp.txt")], 0),
    (["check-ainf", c("11_category_0.txt")], 0),
    (["check-module", c("17_module_cone.txt")], 0),
    (["check-morphism", c("16_module_morphism.txt")], 0),
    (["assemble", c("20_cobordism_m3.txt")], 0),
    (["k0", c("21_null_cobordism_k0.txt")], 0),
    (["k0", c("27_theta_negative.txt")], 1),
    (["index", c("26_profiles.txt")], 0),
    (["yoneda-probe", c("12_category_1.txt")], 0),
    (["compose-compat", c("22_gluing_triple.txt"), "--datum", "V", "--inner", "W", "--end", "1",
      "--glued", "VW"], 0),
])
def test_exit_codes(argv, code):
    got, out, err = run(argv)
    assert got == code, err
    # emitted sections (snake, assemble) come first, then only report lines
    tail = out[out.index("CHECK "):] if "CHECK " in out else ""
    assert tail and all(ln.startswith("CHECK ") for ln in tail.splitlines())


def test_report_line_format():
    code, out, _ = run(["check-complex", c("03_complex_not_square_zero.txt")])
    line = out.splitlines()[0].split(" ", 3)
    assert line[0] == "CHECK" and line[2] == "fail"


def test_input_errors_exit_2(tmp_path):
    bad = write(tmp_path, "complex C dim 2\nd 00\nd 1\n")
    code, out, err = run(["check-complex", bad])
    assert code == 2 and "3:3" in err
    assert run(["check-complex", str(tmp_path / "missing.txt")])[0] == 2
    assert run(["check-ainf", c("01_complex_example.txt")])[0] == 2
    assert run(["nonsense"])[0] == 2
    assert run(["check-complex", c("01_complex_example.txt"), "--arity-cap", "0"])[0] == 2
    raw = tmp_path / "raw.bin"
    raw.write_bytes(b"\xff\xfe\x00")
    assert run(["check-complex", str(raw)])[0] == 2


def test_worst_exit_code_wins():
    code, _, _ = run(["check-complex", c("01_complex_example.txt"), c("03_complex_not_square_zero.txt")])
    assert code == 1


def test_json_report_is_deterministic():
    argv = ["assemble", c("19_cobordism_m2.txt"), "--json"]
    a, b = run(argv), run(argv)
    assert a == b
    doc = json.loads(a[1])
    assert doc["exit"] == 0 and doc["files"][0]["status"] == "pass"
    assert all(r["status"] == "pass" for r in doc["files"][0]["reports"])


def test_quiet_suppresses_stdout():
    code, out, _ = run(["check-complex", c("03_complex_not_square_zero.txt"), "--quiet"])
    assert code == 1 and out == ""


def test_ts_compose_emits_composed_file(tmp_path):
    out_file = tmp_path / "composed.txt"
    code, out, err = run(["ts-compose", c("10_ts_compose_m2.txt"), "--outer", "outer", "--inner", "inner",
                          "--name", "comp", "--output", str(out_file)])
    assert code == 0, err
    text = out_file.read_text(encoding="utf-8")
    assert canonicalize(text) == canonicalize(canonicalize(text))
    Phi = load(text)["comp"]
    assert len(Phi.summands) == 1
    # the composed file passes the cone-decomposition checker again
    assert run(["cone-decomp", str(out_file)])[0] == 0


def test_ts_compose_to_stdout():
    code, out, _ = run(["ts-compose", c("10_ts_compose_m2.txt"), "--outer", "outer", "--inner", "inner"])
    assert code == 0
    body = out[: out.index("CHECK ")]
    assert "tsmorphism" in body and parse(body)


def test_snake_emits_total():
    code, out, _ = run(["snake", c("04_snake_l3.txt")])
    body = out[: out.index("CHECK ")]
    totals = [o for name, o in load(body).items() if name.endswith(".total")]
    assert totals and totals[0].dim == 3


def test_index_random_uses_seed():
    a = run(["index", "--random", "20", "--seed", "3"])
    b = run(["index", "--random", "20", "--seed", "3"])
    assert a == b and a[0] == 0
    assert len(a[1].splitlines()) == 20


def test_arity_cap_env(monkeypatch, tmp_path):
    monkeypatch.delenv("AINF_ARITY_CAP", raising=False)
    assert default_cap() == 4
    monkeypatch.setenv("AINF_ARITY_CAP", "6")
    assert default_cap() == 6
    monkeypatch.setenv("AINF_ARITY_CAP", "junk")
    assert default_cap() == 4
    # an arity-5 table entry needs a cap of at least 5
    p = write(tmp_path, "category A objects (X)\nhom (X,X) 1\nmu 5 (X,X,X,X,X,X) (0,0,0,0,0) -> 1\n")
    monkeypatch.delenv("AINF_ARITY_CAP")
    assert run(["check-ainf", p])[0] == 2
    monkeypatch.setenv("AINF_ARITY_CAP", "5")
    # μ5(.., μ5(..), ..) has 5 insertion slots on a 1-dim hom: odd, so μ⋆μ ≠ 0
    assert run(["check-ainf", p])[0] == 1
    assert run(["check-ainf", p, "--arity-cap", "4"])[0] == 2


def test_main_and_module_entry_point(capsys):
    assert main(["check-complex", c("01_complex_example.txt")]) == 0
    assert "CHECK" in capsys.readouterr().out
    proc = subprocess.run([sys.executable, "-m", "cobalg", "check-complex", c("03_complex_not_square_zero.txt")],
                          capture_output=True, text=True, env={"PYTHONPATH": str(SRC)})
    assert proc.returncode == 1 and proc.stdout.startswith("CHECK")
