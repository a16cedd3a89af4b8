import json

import numpy as np
import pytest

import mubs


def test_fourier_is_hadamard():
    f = mubs.fourier(6)
    assert f.shape == (6, 6)
    assert mubs.is_complex_hadamard(f)
    assert mubs.unbiased_deviation(np.eye(6), f) < 1e-12


def test_prime_set_distances():
    bases = mubs.prime_mub_set(5)
    table = mubs.distance_table(bases)
    off = table[~np.eye(len(bases), dtype=bool)]
    assert np.allclose(off, 4.0, atol=1e-9)


def test_gaussian_census_and_search():
    census = mubs.root_census(6, 12)
    assert len(census["sequences"]) == 12
    records, summary = mubs.search("quartets", 6, 12)
    assert records == []
    assert summary["verdict"] == "empty"


def test_newton_census_report():
    census = mubs.newton_census(6, restarts=4000, seed=7)
    assert census["status"] == "complete"
    assert len(census["sequences"]) == 48
    assembled = mubs.assemble(census)
    assert len(assembled["bases"]) == 16
    summary = mubs.report(assembled)
    for value in ("2.000", "3.71", "4.62", "4.64"):
        assert value in summary


def test_spread_reaches_bound_for_qubit():
    f, bases, trace = mubs.maximize_spread(2, 3, seed=3)
    assert f == pytest.approx(3.0, abs=1e-8)
    assert all(b - a >= -1e-12 for a, b in zip(trace, trace[1:]))


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        mubs.prime_mub_set(6)
    with pytest.raises(ValueError):
        mubs.beauchamp_nicoara(0.5)


def test_cli_round_trip():
    code, out, _ = mubs.run_cli(["gen", "fourier", "--n", "4"])
    assert code == 0
    doc = json.loads(out)
    assert doc["form"] == "roots" and doc["k"] == 4
    code, _, err = mubs.run_cli(["verify", "hadamard", "/nonexistent.json"])
    assert code == 3 and "cannot open" in err
