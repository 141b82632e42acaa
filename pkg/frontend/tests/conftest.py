import subprocess

import pytest


def _qfp(*args):
    proc = subprocess.run(["qfp", *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def surface_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "surface.csv"
    _qfp(
        "chernoff", "--ve", "0", "--vd", "0",
        "--grid", "21", "--output", str(path),
    )
    return path


@pytest.fixture(scope="session")
def operating_point_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "operating.csv"
    _qfp(
        "sweep", "--axis", "noise-param",
        "--start", "1e-4", "--stop", "1e4", "--points", "17",
        "--output", str(path),
    )
    return path


@pytest.fixture(scope="session")
def budget_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "budget.csv"
    _qfp(
        "sweep", "--axis", "n",
        "--start", "1e4", "--stop", "1e12", "--points", "17",
        "--nu", "1e-7", "--eps", "1e-5",
        "--output", str(path),
    )
    return path
