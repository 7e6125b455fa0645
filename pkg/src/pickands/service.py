"""FastAPI service wrapping the core package.

All endpoints are stateless: they parse a request, run the corresponding
library computation, and return the result as CSV text (plus a plot script
for the benchmark). File handling is left to the client.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .asymptotics import quadrature_report_csv
from .bench import (
    ExperimentConfig,
    plot_script_text,
    run_experiment,
    summary_csv_text,
)
from .errors import PickandsError
from .estimators import curve_to_csv, estimate_curve, shape_correct
from .sampling import draw_sample, sample_from_csv, sample_to_csv
from .schemas import (
    AsymptoticsRequest,
    AsymptoticsResponse,
    BenchRequest,
    BenchResponse,
    EstimateRequest,
    EstimateResponse,
    HealthResponse,
    SimulateRequest,
    SimulateResponse,
)
from .simplex import grid_from_csv, line_grid_w1_eq_w2


def create_app() -> FastAPI:
    app = FastAPI(
        title="pickands",
        version=__version__,
        description="Pickands dependence function estimation service",
    )

    @app.exception_handler(PickandsError)
    async def _domain_error(request: Request, exc: PickandsError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        sample = draw_sample(req.model.to_model(), req.n, req.seed, stream_id=req.stream)
        return SimulateResponse(
            csv=sample_to_csv(sample),
            model_tag=sample.model_tag,
            n=req.n,
            seed=req.seed,
            stream=req.stream,
        )

    @app.post("/estimate", response_model=EstimateResponse)
    def estimate(req: EstimateRequest) -> EstimateResponse:
        sample = sample_from_csv(req.sample_csv)
        if req.grid_csv is not None:
            grid = grid_from_csv(req.grid_csv)
        else:
            grid = line_grid_w1_eq_w2(req.step)
        curve = estimate_curve(sample, grid, tuple(req.estimators))
        if req.shape_correct:
            curve = shape_correct(curve)
        return EstimateResponse(csv=curve_to_csv(curve))

    @app.post("/asymptotics", response_model=AsymptoticsResponse)
    def asymptotics(req: AsymptoticsRequest) -> AsymptoticsResponse:
        model = req.model.to_model()
        if req.grid_csv is not None:
            grid = grid_from_csv(req.grid_csv)
        else:
            grid = line_grid_w1_eq_w2(req.step)
        return AsymptoticsResponse(csv=quadrature_report_csv(model, grid, req.nodes))

    @app.post("/bench", response_model=BenchResponse)
    def bench(req: BenchRequest) -> BenchResponse:
        config = ExperimentConfig(
            model=req.model.to_model(),
            n_list=tuple(req.n),
            replications=req.replications,
            seed=req.seed,
            step=req.step,
            estimators=tuple(req.estimators),
            shape_correct=req.shape_correct,
        )
        summary = run_experiment(config)
        return BenchResponse(
            summary_csv=summary_csv_text(summary),
            plot_script=plot_script_text(summary),
        )

    return app


app = create_app()
