"""HTTP endpoints, status mapping, and payload shapes."""

import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from starlette.testclient import TestClient

import fastgates.service as service
from fastgates.schemes import NoSolution


@pytest.fixture(scope="module")
def client(solved):
    # solved warms the scheme cache so endpoint calls never re-solve
    with TestClient(service.create_app(), raise_server_exceptions=False) as c:
        yield c


def test_healthz(client):
    body = client.get("/healthz").json()
    assert body["status"] == "ok"
    assert isinstance(body["version"], str)


def test_solve_returns_scheme_document(client):
    r = client.post("/solve", json={"kind": "frag", "n": 2})
    assert r.status_code == 200
    doc = r.json()
    assert set(doc) == {"kind", "n", "z", "t", "T_G", "residuals"}
    assert doc["z"] == [-2, 4, -4, 4, -4, 2]
    assert doc["T_G"] > 0
    assert len(doc["residuals"]) == 3


def test_solve_rejects_unknown_kind(client):
    assert client.post("/solve", json={"kind": "warp", "n": 2}).status_code == 422
    assert client.post("/solve", json={"kind": "frag", "n": 0}).status_code == 422


def test_solve_no_solution_maps_to_409(client, monkeypatch):
    def boom(kind, n, modes, ions=(0, 1)):
        raise NoSolution("forced", best_residuals=(1.0, 1.0, 1.0))

    monkeypatch.setattr(service, "build_scheme", boom)
    r = client.post("/solve", json={"kind": "gzc", "n": 1})
    assert r.status_code == 409
    assert "no scheme solution" in r.json()["detail"]


def test_run_reports_gate(client):
    r = client.post("/run", json={"kind": "gzc", "n": 2})
    assert r.status_code == 200
    doc = r.json()
    assert set(doc) == {"fidelity", "occ_mean", "occ_std", "T_G", "populations"}
    assert abs(doc["fidelity"] - 1.0) < 1e-6
    total = sum(sum(v) for v in doc["populations"].values())
    assert np.isclose(total, 1.0, atol=1e-9)


def test_run_bad_config_is_400(client):
    r = client.post("/run", json={"kind": "frag", "n": 2,
                                  "model": {"name": "bogus"}})
    assert r.status_code == 400
    r = client.post("/run", json={"kind": "frag", "n": 2,
                                  "initial": [[40, 0]], "dim": 80})
    assert r.status_code == 400  # occupation outside basis headroom


def test_run_truncation_overflow_is_409(client):
    r = client.post("/run", json={"kind": "frag", "n": 10, "dim": 30})
    assert r.status_code == 409
    assert "truncation overflow" in r.json()["detail"]


def test_duration_sweep_returns_csv(client):
    r = client.post("/sweep/duration", json={
        "kind": "gzc", "n": 2, "tau_fs": [60], "phi_samples": 8,
        "initial": [[2, 2]]})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("text/csv")
    assert r.text.splitlines()[0] == "scheme,n,tau_fs,phi,fidelity,mean,std"
    assert len(r.text.strip().splitlines()) == 9


def test_duration_sweep_bad_grid_is_400(client):
    r = client.post("/sweep/duration", json={"kind": "gzc", "n": 2,
                                             "tau_fs": [60, 50]})
    assert r.status_code == 400
    assert "tau_fs" in r.json()["detail"]


def test_xi_sweep_returns_csv(client):
    r = client.post("/sweep/xi", json={"kind": "gzc", "n": 2, "xi": [0.95, 1.0],
                                       "initial": [[1, 1]]})
    assert r.status_code == 200
    lines = r.text.strip().splitlines()
    assert lines[0] == "scheme,n,xi,rotation_infidelity,n_c,n_r,fidelity,occ_mean,occ_std"
    assert len(lines) == 3


def test_populations_returns_csv(client):
    r = client.post("/populations", json={"kind": "gzc", "n": 2, "xi": [1.0],
                                          "initial": [[2, 0]]})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("text/csv")
    assert r.text.splitlines()[0] == "xi,internal_state,n,probability"


def test_trajectory_returns_both_payloads(client):
    r = client.post("/trajectory", json={"kind": "gzc", "n": 2, "initial": [[2, 0]]})
    assert r.status_code == 200
    doc = r.json()
    assert set(doc) == {"trajectory", "snapshots"}
    assert doc["trajectory"].splitlines()[0] == "event_index,re,im"
    assert doc["snapshots"].splitlines()[0] == "model,event_index,internal_state,n,probability"
