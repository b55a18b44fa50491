"""FastAPI application exposing catalogs, campaigns, comparisons, and the
benchmark harness.  Campaign execution can run synchronously (wait=true)
or as a background job polled by id; artifacts land on the server's
filesystem under the configured output directory.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException

from .. import __version__, data_path
from ..campaign import bench_comparison, compare_campaigns, run_campaign
from ..catalog import load_catalog
from ..errors import FenoptError, ConfigError
from ..reporting import catalog_listing, comparison_report, solution_report
from ..runconfig import RunConfig
from .models import (BenchRequest, BenchResponse, CampaignJob, CampaignRequest,
                     CatalogRequest, CatalogResponse, CompareRequest,
                     CompareResponse, CompositionRow, HealthResponse,
                     InspectRequest, InspectResponse)


class JobStore:
    def __init__(self):
        self._jobs: dict[str, CampaignJob] = {}
        self._lock = threading.Lock()

    def create(self, total_runs: int) -> CampaignJob:
        job = CampaignJob(job_id=uuid.uuid4().hex[:12], status="queued",
                          total_runs=total_runs)
        with self._lock:
            self._jobs[job.job_id] = job
        return job

    def update(self, job_id: str, **changes):
        with self._lock:
            job = self._jobs[job_id]
            self._jobs[job_id] = job.model_copy(update=changes)

    def get(self, job_id: str) -> CampaignJob | None:
        with self._lock:
            return self._jobs.get(job_id)


def create_app() -> FastAPI:
    app = FastAPI(title="fenopt", version=__version__)
    jobs = JobStore()

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(version=__version__)

    @app.post("/catalog/compositions", response_model=CatalogResponse)
    def catalog_compositions(request: CatalogRequest) -> CatalogResponse:
        path = request.catalog_path or data_path("catalog.json")
        try:
            catalog = load_catalog(path)
            rows = catalog_listing(catalog, request.orientation)
        except FenoptError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return CatalogResponse(
            orientation=request.orientation, count=len(rows),
            compositions=[CompositionRow(**row) for row in rows])

    @app.post("/solutions/inspect", response_model=InspectResponse)
    def inspect(request: InspectRequest) -> InspectResponse:
        try:
            report = solution_report(request.solution)
        except (KeyError, TypeError) as exc:
            raise HTTPException(status_code=400,
                                detail=f"malformed solution payload: {exc}")
        return InspectResponse(report=report, solution=request.solution)

    def _execute(job_id: str, config: RunConfig):
        def progress(done, total):
            jobs.update(job_id, completed_runs=done, total_runs=total)

        jobs.update(job_id, status="running")
        try:
            manifest = run_campaign(config, progress=progress)
        except Exception as exc:
            jobs.update(job_id, status="failed",
                        error=f"{type(exc).__name__}: {exc}")
            return
        jobs.update(job_id, status="done", manifest=manifest,
                    completed_runs=config.runs)

    @app.post("/campaigns", response_model=CampaignJob)
    def campaigns(request: CampaignRequest) -> CampaignJob:
        try:
            config = RunConfig.from_dict(request.config)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        job = jobs.create(total_runs=config.runs)
        if request.wait:
            _execute(job.job_id, config)
        else:
            thread = threading.Thread(target=_execute,
                                      args=(job.job_id, config), daemon=True)
            thread.start()
        result = jobs.get(job.job_id)
        if request.wait and result.status == "failed":
            raise HTTPException(status_code=422, detail=result.error)
        return result

    @app.get("/campaigns/{job_id}", response_model=CampaignJob)
    def campaign_status(job_id: str) -> CampaignJob:
        job = jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no job {job_id}")
        return job

    @app.post("/compare", response_model=CompareResponse)
    def compare(request: CompareRequest) -> CompareResponse:
        try:
            report = compare_campaigns(request.dirs_a, request.dirs_b,
                                       request.alpha)
        except FenoptError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return CompareResponse(report=report, summary=comparison_report(report))

    @app.post("/bench", response_model=BenchResponse)
    def bench(request: BenchRequest) -> BenchResponse:
        seeds = [request.base_seed + i for i in range(request.runs)]
        try:
            report = bench_comparison(request.function, request.dim,
                                      request.budget, seeds,
                                      algorithms=tuple(request.algorithms))
        except FenoptError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return BenchResponse(report=report)

    return app


app = create_app()
