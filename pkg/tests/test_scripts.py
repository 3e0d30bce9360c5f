import runpy
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize(
    "name,argv",
    [
        ("gbm_convergence.py", ["--grids", "4", "8", "--degree", "4"]),
        ("zero_divisor_sweep.py", ["--dims", "2", "--degrees", "2", "--trials", "5"]),
        ("growth_ladder.py", ["--random", "2", "--radii", "0.5", "1", "2", "4"]),
    ],
)
def test_script_runs(name, argv, monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", [name, *argv])
    try:
        runpy.run_path(str(SCRIPTS / name), run_name="__main__")
    except SystemExit as exc:
        assert not exc.code
    assert capsys.readouterr().out.strip()
