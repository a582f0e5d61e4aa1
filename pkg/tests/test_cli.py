import hashlib
import json

import pytest

from sturmhankel import cli
from sturmhankel.oracle import eval_oracle
from sturmhankel.partition import Window
from sturmhankel.render import PALETTE_VERSION, color, ppm_bytes, value_grid

CSV_30x20 = "e6d1962d30bec27f7299c4eaca23b1667bc3ddb7cf0687027911d69e2ebfb3e0"
PPM_40x30 = "f7c62048ce4a73481ceade6398ebdd6d603055a19bda9ee56f4b55af00c3c578"
PPM_40x30_T = "479fdcc7a19d1a228b0e78a3d1000c8b472cba93c1abe6c1840aba2bb24b884f"


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_eval_both(capsys):
    code, out = run(capsys, "eval", "--m", "3", "--n", "9", "--method", "both")
    rec = json.loads(out.out)
    assert code == 0
    assert rec["closed"] == rec["oracle"] == rec["value"] == 2 and rec["match"]


def test_eval_records(capsys):
    _, out = run(capsys, "eval", "--m", "13", "--n", "4")
    rec = json.loads(out.out)
    assert (rec["value"], rec["region"], rec["k"], rec["i"], rec["class"]) == (0, "V", 1, 1, "Interior")
    _, out = run(capsys, "eval", "--m", "0", "--n", "1", "--method", "oracle")
    rec = json.loads(out.out)
    assert rec["value"] == 1 and rec["region"] == "SpecialOrigin"


def test_eval_mismatch_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli, "eval_oracle", lambda m, n: 99)
    code, _ = run(capsys, "eval", "--m", "3", "--n", "9", "--method", "both")
    assert code == cli.EXIT_MISMATCH


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--m", "0", "--n", "0"],
        ["eval", "--m", "-3", "--n", "2"],
        ["eval", "--m", "x", "--n", "2"],
        ["verify", "--mmax", "5"],
        ["dump", "family", "--kind", "G", "--k", "0", "--bound", "3"],
        ["frobnicate"],
        [],
    ],
)
def test_bad_args(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == cli.EXIT_USAGE


def test_overflow_exit(capsys):
    code, out = run(capsys, "eval", "--m", str(2**63 - 1), "--n", "5")
    assert code == cli.EXIT_OVERFLOW and "64-bit" in out.err
    code, _ = run(capsys, "eval", "--m", str(10**12), "--n", "5", "--method", "oracle")
    assert code == cli.EXIT_OVERFLOW


def test_config_exit(capsys):
    code, out = run(capsys, "eval", "--m", "0", "--n", "600", "--method", "oracle")
    assert code == cli.EXIT_CONFIG


def test_verify(capsys):
    code, out = run(capsys, "verify", "--mmax", "0", "--nmax", "1")
    assert code == 0 and "mismatches=0" in out.out and "cells=1" in out.out
    code, out = run(capsys, "verify", "--mmax", "50", "--nmax", "50", "--jobs", "2")
    census = dict(kv.split("=") for kv in out.out.splitlines()[1].split()[1:])
    assert code == 0 and sum(map(int, census.values())) == 51 * 50


def test_verify_mismatch_exit(capsys, monkeypatch):
    import sturmhankel.verify as verify

    monkeypatch.setattr(verify, "evaluate", lambda cell: 7)
    code, out = run(capsys, "verify", "--mmax", "3", "--nmax", "3")
    assert code == cli.EXIT_MISMATCH and "mismatches=12" in out.out


def test_verify_coverage_exit(capsys, monkeypatch):
    import sturmhankel.partition as partition

    monkeypatch.setattr(partition, "_allowed_gap", lambda m, n, c: False)
    code, out = run(capsys, "verify", "--mmax", "5", "--nmax", "3")
    assert code == cli.EXIT_COVERAGE


def test_dump(capsys):
    assert run(capsys, "dump", "seq", "--len", "17")[1].out.strip() == "10111011011011101"
    assert json.loads(run(capsys, "dump", "frep", "--n", "12")[1].out)["indices"] == [1, 5]
    out = run(capsys, "dump", "family", "--kind", "Eprime", "--k", "0", "--bound", "20")[1].out
    assert out.strip() == "2,6,9,12,16,19"


def test_partition_csv_golden(capsys):
    code, out = run(capsys, "dump", "partition", "--mmax", "30", "--nmax", "20")
    lines = out.out.splitlines()
    assert lines[0].startswith("#") and f"palette={PALETTE_VERSION}" in lines[0]
    assert lines[1] == "m,n,value,region,k,i,class"
    assert len(lines) == 2 + 31 * 20
    assert lines[2] == "0,1,1,SpecialOrigin,,,Origin"
    assert hashlib.sha256(out.out.encode()).hexdigest() == CSV_30x20


def test_render_golden(tmp_path, capsys):
    out = tmp_path / "w.ppm"
    assert run(capsys, "render", "--mmax", "40", "--nmax", "30", "--out", str(out))[0] == 0
    data = out.read_bytes()
    assert data.startswith(b"P6\n41 30\n255\n")
    assert hashlib.sha256(data).hexdigest() == PPM_40x30
    run(capsys, "render", "--mmax", "40", "--nmax", "30", "--out", str(out))
    assert out.read_bytes() == data
    run(capsys, "render", "--mmax", "40", "--nmax", "30", "--out", str(out), "--transpose")
    assert hashlib.sha256(out.read_bytes()).hexdigest() == PPM_40x30_T


def _pixel(data, width, height, x, y_from_top):
    header = f"P6\n{width} {height}\n255\n".encode()
    off = len(header) + 3 * (y_from_top * width + x)
    return tuple(data[off : off + 3])


def test_render_layout():
    data = ppm_bytes(value_grid(Window(5, 3)))
    # (0,1) sits in the bottom-left corner
    assert _pixel(data, 6, 3, 0, 2) == (243, 50, 40)
    for n in range(1, 4):
        for m in range(6):
            assert _pixel(data, 6, 3, m, 3 - n) == color(eval_oracle(m, n))


def test_palette():
    assert color(0) == (255, 255, 255)
    assert color(1) == (243, 50, 40)
    assert color(-1) == (40, 50, 243)
    assert color(10**6) == color(15) == (75, 190, 40)
    assert color(-20) == (40, 190, 75)


def test_bench(capsys):
    code, out = run(capsys, "bench", "--n", "1", "3", "--repeats", "3")
    lines = out.out.splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[1].split()[:3] == ["1", "0", "1"]
