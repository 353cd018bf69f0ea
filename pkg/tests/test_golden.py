"""Golden CSV fixtures: headers, shapes, and invariants.

These files feed the figure renderers; regeneration goes through
scripts/make_golden.py and must be byte-stable, so content checks here
stay structural (full numeric pins live in test_acceptance).
"""

from pathlib import Path

import numpy as np
import pytest

GOLDEN = Path(__file__).resolve().parent.parent / "golden"


def _read(name):
    lines = (GOLDEN / name).read_text().strip().split("\n")
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def test_duration_golden():
    header, rows = _read("duration.csv")
    assert header == ["scheme", "n", "tau_fs", "phi", "fidelity", "mean", "std"]
    assert len(rows) == 6 * 7 * 16
    series = {(r[0], r[1]) for r in rows}
    assert ("frag", "2") in series and ("gzc", "10") in series
    assert all(0 <= float(r[4]) <= 1 + 1e-12 for r in rows)


def test_xi_golden():
    header, rows = _read("xi.csv")
    assert header == ["scheme", "n", "xi", "rotation_infidelity", "n_c", "n_r",
                      "fidelity", "occ_mean", "occ_std"]
    assert len(rows) == 8 * 5
    perfect = [r for r in rows if float(r[2]) == 1.0]
    assert len(perfect) == 8
    for r in perfect:
        assert float(r[3]) == 0.0


def test_populations_golden():
    header, rows = _read("populations.csv")
    assert header == ["xi", "internal_state", "n", "probability"]
    sums = {}
    for r in rows:
        sums[r[0]] = sums.get(r[0], 0.0) + float(r[3])
    assert set(sums) == {"0.9", "0.95", "1"}
    for total in sums.values():
        assert np.isclose(total, 1.0, atol=1e-9)


def test_trajectory_golden():
    header, rows = _read("trajectory.csv")
    assert header == ["event_index", "re", "im"]
    assert len(rows) == 13
    end = complex(float(rows[-1][1]), float(rows[-1][2]))
    assert abs(end) < 1e-9  # closed loop: the polygon figure relies on this


def test_snapshots_golden():
    header, rows = _read("trajectory_snapshots.csv")
    assert header == ["model", "event_index", "internal_state", "n", "probability"]
    assert {r[0] for r in rows} == {"ideal", "pulse_area", "nonrwa"}
    assert {int(r[1]) for r in rows} == set(range(14))


@pytest.mark.parametrize("stem", ["duration", "xi", "populations", "trajectory"])
def test_configs_present(stem):
    assert (GOLDEN / f"{stem}_config.json").exists()
