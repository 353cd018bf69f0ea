"""HTTP facade over the solver and simulator.

The CLI talks to this app (in-process by default), so every capability is
exposed here: scheme solving, single gate runs, and the three sweep
families. Sweep endpoints return finished CSV text; solve/run return JSON.

Error mapping: malformed configs are 400 (client usage), solver and
truncation failures are 409 (the request was well-formed but the
simulation cannot deliver).
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import __version__
from .chain import TrapConfig, two_ion_modes
from .gatesim import SimulationRequest, simulate_gate
from .pulses import TruncationOverflow
from .schemes import NoSolution, build_scheme
from .sweeps import (ConfigError, RunConfig, sweep_duration, sweep_populations,
                     sweep_xi, trajectory_outputs)


class TrapBody(BaseModel):
    nu: Optional[float] = Field(None, gt=0)
    mass: Optional[float] = Field(None, gt=0)
    k: Optional[float] = Field(None, gt=0)
    omega_at: Optional[float] = Field(None, gt=0)
    delta: Optional[float] = None
    num_ions: Optional[int] = Field(None, ge=2)

    def overrides(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class SolveBody(BaseModel):
    kind: Literal["frag", "gzc"]
    n: int = Field(ge=1)
    trap: TrapBody = TrapBody()


class ConfigBody(BaseModel):
    """Mirrors the JSON run-config document; deep validation happens in RunConfig."""

    trap: dict = {}
    schemes: Optional[list] = None
    kind: Optional[str] = None
    n: Optional[int] = None
    tau_fs: Optional[list] = None
    phi_samples: Optional[int] = None
    xi: Optional[list] = None
    rotation_infidelity: Optional[list] = None
    initial: Optional[list] = None
    dim: Optional[int] = None
    threads: Optional[int] = None
    model: Optional[dict] = None

    def to_config(self) -> RunConfig:
        doc = {k: v for k, v in self.model_dump().items() if v is not None}
        try:
            return RunConfig.from_dict(doc)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc


def _simulation_errors(fn):
    try:
        return fn()
    except NoSolution as exc:
        raise HTTPException(status_code=409, detail=f"no scheme solution: {exc}") from exc
    except TruncationOverflow as exc:
        raise HTTPException(status_code=409, detail=f"truncation overflow: {exc}") from exc
    except ValueError as exc:
        # ConfigError and model/request validation errors alike are
        # client mistakes, not server faults
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="fastgates", version=__version__)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/solve")
    def solve(body: SolveBody):
        trap = TrapConfig().override(**body.trap.overrides())
        modes = two_ion_modes(trap)
        scheme = _simulation_errors(lambda: build_scheme(body.kind, body.n, modes))
        return scheme.to_dict()

    @app.post("/run")
    def run(body: ConfigBody):
        config = body.to_config()
        modes = two_ion_modes(config.trap)
        kind, n = config.schemes[0]

        def go():
            scheme = build_scheme(kind, n, modes)
            report = simulate_gate(SimulationRequest(
                scheme=scheme, trap=config.trap, error_model=config.error_model,
                n_init=config.initial[0], dim=config.dim))
            return report.to_dict()

        return _simulation_errors(go)

    @app.post("/sweep/duration", response_class=PlainTextResponse)
    def duration(body: ConfigBody):
        config = body.to_config()
        return PlainTextResponse(_simulation_errors(lambda: sweep_duration(config)),
                                 media_type="text/csv")

    @app.post("/sweep/xi", response_class=PlainTextResponse)
    def xi(body: ConfigBody):
        config = body.to_config()
        return PlainTextResponse(_simulation_errors(lambda: sweep_xi(config)),
                                 media_type="text/csv")

    @app.post("/populations", response_class=PlainTextResponse)
    def pops(body: ConfigBody):
        config = body.to_config()
        return PlainTextResponse(_simulation_errors(lambda: sweep_populations(config)),
                                 media_type="text/csv")

    @app.post("/trajectory")
    def trajectory(body: ConfigBody):
        config = body.to_config()
        traj, snaps = _simulation_errors(lambda: trajectory_outputs(config))
        return {"trajectory": traj, "snapshots": snaps}

    return app


app = create_app()
