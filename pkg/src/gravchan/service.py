"""REST front end: one endpoint per batch command.

Every request body is a complete run config (the same JSON document the CLI
reads), every response carries the deterministic payloads the thin client
writes to disk.  Requests are stateless; nothing is steered mid-run.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .config import FringeConfig, NoiseConfig, OptimizeConfig, PrepareConfig
from .errors import GravchanError, IllConditionedError, InvalidSpecError, MultimodalError
from .runners import run_fringe, run_noise, run_optimize, run_prepare


class TabularResponse(BaseModel):
    csv: str
    summary: dict


class SummaryResponse(BaseModel):
    summary: dict


app = FastAPI(
    title="gravchan",
    version=__version__,
    description=(
        "Entangled-atom quantum channel simulator: fringe scans, transfer "
        "experiments, shot/phase-noise comparisons, channel optimization."
    ),
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/fringe", response_model=TabularResponse)
def fringe(config: FringeConfig) -> TabularResponse:
    csv_text, summary = _guarded(run_fringe, config)
    return TabularResponse(csv=csv_text, summary=summary)


@app.post("/noise", response_model=TabularResponse)
def noise(config: NoiseConfig) -> TabularResponse:
    csv_text, summary = _guarded(run_noise, config)
    return TabularResponse(csv=csv_text, summary=summary)


@app.post("/optimize", response_model=SummaryResponse)
def optimize(config: OptimizeConfig) -> SummaryResponse:
    return SummaryResponse(summary=_guarded(run_optimize, config))


@app.post("/prepare", response_model=SummaryResponse)
def prepare(config: PrepareConfig) -> SummaryResponse:
    return SummaryResponse(summary=_guarded(run_prepare, config))


def _guarded(runner, config):
    try:
        return runner(config)
    except (InvalidSpecError, IllConditionedError, MultimodalError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except GravchanError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
