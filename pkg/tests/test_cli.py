import numpy as np
import pytest

from specproj.cli import main
from specproj.repfile import load

from instances import DATA


@pytest.fixture
def reps(tmp_path):
    for name in ("hyperbola", "origin"):
        (tmp_path / f"{name}.rep").write_text((DATA / f"{name}.rep").read_text())
    return tmp_path


def test_info(capsys):
    assert main(["info", str(DATA / "hyperbola.rep")]) == 0
    out = capsys.readouterr().out
    assert "k: 2" in out and "n: 2" in out and "m: 0" in out
    assert "provenance: hyperbola" in out


def test_compose_conv_union_sizes(reps, capsys):
    out = reps / "out.rep"
    assert main(["compose", "conv-union", str(reps / "hyperbola.rep"), str(reps / "origin.rep"), "-o", str(out)]) == 0
    assert main(["info", str(out)]) == 0
    text = capsys.readouterr().out
    assert "k: 14" in text and "n: 2" in text and "m: 5" in text
    assert out.read_text() == (DATA / "convhull.rep").read_text()


@pytest.mark.parametrize(
    "op, files, dims",
    [
        ("cone-hull", ["hyperbola"], (6, 2, 2)),
        ("homogenize", ["hyperbola"], (6, 3, 1)),
        ("intersect", ["hyperbola", "origin"], (6, 2, 0)),
        ("product", ["hyperbola", "origin"], (6, 4, 0)),
        ("minkowski", ["hyperbola", "origin", "hyperbola"], (8, 2, 4)),
        ("conv-union", ["hyperbola", "origin", "hyperbola"], (20, 2, 9)),
    ],
)
def test_compose_outputs_reload(reps, op, files, dims):
    out = reps / "out.rep"
    args = ["compose", op, *[str(reps / f"{f}.rep") for f in files], "-o", str(out)]
    assert main(args) == 0
    R = load(out)
    assert (R.k, R.n, R.m) == dims
    assert R.provenance


def test_compose_slice(reps):
    h = reps / "h.rep"
    assert main(["compose", "homogenize", str(reps / "hyperbola.rep"), "-o", str(h)]) == 0
    assert main(["compose", "slice", str(h), "-o", str(reps / "s.rep")]) == 0
    R = load(reps / "s.rep")
    assert (R.k, R.n, R.m) == (6, 2, 1)
    assert R.provenance == "slice(homogenize(hyperbola))"


def test_compose_arity_errors(reps, capsys):
    h = str(reps / "hyperbola.rep")
    assert main(["compose", "cone-hull", h, h, "-o", str(reps / "x.rep")]) == 1
    assert main(["compose", "minkowski", h, "-o", str(reps / "x.rep")]) == 1
    assert main(["compose", "slice", str(reps / "origin.rep"), "-o", str(reps / "x.rep")]) == 0


def test_member_exit_codes(capsys):
    conv = str(DATA / "convhull.rep")
    assert main(["member", conv, "--point", "1,1"]) == 0
    out = capsys.readouterr().out
    assert "status:" in out and "margin:" in out and "witness:" in out and "radius_hit:" in out
    assert main(["member", conv, "--point", "-0.1,1"]) == 2
    assert "EpsInfeasible" in capsys.readouterr().out
    assert main(["member", conv, "--point", "1"]) == 1
    assert main(["member", conv, "--point", "a,b"]) == 1


def test_usage_errors_exit_one(capsys):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["member", str(DATA / "convhull.rep")]) == 1
    assert main(["info", "/nonexistent/file.rep"]) == 1


def test_export_sdpa(tmp_path):
    out = tmp_path / "h.dat-s"
    assert main(["export-sdpa", str(DATA / "hyperbola.rep"), "--point", "1,1", "-o", str(out)]) == 0
    golden = (DATA.parents[2] / "tests" / "data" / "hyperbola_1_1.dat-s").read_text()
    assert out.read_text() == golden


def _read_pgm(path):
    data = path.read_bytes()
    header, _, rest = data.partition(b"\n255\n")
    magic, dims = header.split(b"\n")
    w, h = map(int, dims.split())
    assert magic == b"P5"
    return np.frombuffer(rest, dtype=np.uint8).reshape(h, w)


def test_rasterize_deterministic(tmp_path):
    args = ["rasterize", str(DATA / "hyperbola.rep"), "--xrange", "0:3", "--yrange", "0:3", "--res", "12"]
    assert main([*args, "-o", str(tmp_path / "a.pgm")]) == 0
    assert main([*args, "-o", str(tmp_path / "b.pgm")]) == 0
    a = _read_pgm(tmp_path / "a.pgm")
    assert a.shape == (12, 12)
    assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()
    # top-right (3, 3) is inside, bottom-left (0, 0) is outside
    assert a[0, -1] > 127 and a[-1, 0] < 127


def test_rasterize_lifted_with_jobs(tmp_path):
    args = ["rasterize", str(DATA / "convhull.rep"), "--xrange", "-1:2", "--yrange", "-1:2", "--res", "4"]
    assert main([*args, "--jobs", "2", "-o", str(tmp_path / "a.pgm")]) == 0
    assert main([*args, "-o", str(tmp_path / "b.pgm")]) == 0
    assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()


def test_rasterize_needs_plane(tmp_path):
    h = tmp_path / "h.rep"
    main(["compose", "homogenize", str(DATA / "hyperbola.rep"), "-o", str(h)])
    assert main(["rasterize", str(h), "--xrange", "0:1", "--yrange", "0:1", "-o", str(tmp_path / "x.pgm")]) == 1


def test_sample(capsys):
    assert main(["sample", str(DATA / "convhull.rep"), "--count", "5", "--box", "-1:3,-1:3", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 5
    pts = np.array([[float(v) for v in line.split(",")] for line in lines])
    assert np.all(pts >= -1e-9)
    assert main(["sample", str(DATA / "convhull.rep"), "--count", "5", "--box", "-1:3,-1:3", "--seed", "1"]) == 0
    assert capsys.readouterr().out.strip().splitlines() == lines
    assert main(["sample", str(DATA / "convhull.rep"), "--count", "1", "--box", "0:1"]) == 1
