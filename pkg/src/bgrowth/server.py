"""HTTP facade for the segmentation engines and phantom generator.

Endpoints (JSON bodies, rasters as base64 binary PGM):

    POST /api/segment   run a method, optionally score against a gt and
                        return per-iteration label snapshots
    GET  /api/phantom   deterministic phantom case for a given seed
    GET  /api/health    version and status

Handlers are stateless: concurrent requests share only read-only
configuration, and identical requests produce identical responses
except for the wall-clock ``elapsed_s`` field.
"""

from __future__ import annotations

import base64
import math
import os
import time

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .baselines import GrowCutParams, otsu_segment, run_growcut
from .engine import BGrowthParams, run_bgrowth
from .grid import (
    GrayImage,
    LabelMap,
    PgmFormatError,
    SeedEncodingError,
    decode_labelmap,
    encode_labelmap,
    image_to_mask,
    mask_to_image,
    pgm_bytes,
    pgm_from_bytes,
)
from .metrics import score_masks
from .seedgen import PhantomError, PhantomSpec, SeedingError, generate_phantom, sloppy_seeds

DEFAULT_PIXEL_BUDGET = 4096 * 4096
TRACE_SNAPSHOT_CAP = 64

VALID_METHODS = ("bgrowth", "growcut", "otsu")


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail


class SegmentRequest(BaseModel):
    image: str
    seeds: str | None = None
    method: str = "bgrowth"
    max_iters: int = 30
    trace: bool = False
    trace_stride: int = 1
    gt: str | None = None


def _b64_pgm(field: str, payload: str) -> GrayImage:
    try:
        raw = base64.b64decode(payload, validate=True)
    except Exception as exc:
        raise ApiError(400, "bad_base64", f"{field}: {exc}") from exc
    try:
        return pgm_from_bytes(raw)
    except PgmFormatError as exc:
        raise ApiError(400, "bad_pgm", f"{field}: {exc}") from exc


def _encode_labels(labels: LabelMap) -> str:
    return base64.b64encode(pgm_bytes(encode_labelmap(labels))).decode("ascii")


def create_app(pixel_budget: int | None = None, ui_dir: str | None = None) -> FastAPI:
    budget = pixel_budget or int(os.environ.get("SEGSERVE_PIXEL_BUDGET", DEFAULT_PIXEL_BUDGET))
    app = FastAPI(title="bgrowth segmentation service", version=__version__)

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.code, "detail": exc.detail})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "invalid_request", "detail": str(exc.errors())})

    @app.get("/api/health")
    def health():
        return {"status": "ok", "service": "segserve", "version": __version__}

    @app.post("/api/segment")
    def segment(req: SegmentRequest):
        if req.method not in VALID_METHODS:
            raise ApiError(400, "unknown_method", f"method must be one of {VALID_METHODS}")
        if req.max_iters < 1:
            raise ApiError(400, "bad_params", "max_iters must be >= 1")
        if req.trace_stride < 1:
            raise ApiError(400, "bad_params", "trace_stride must be >= 1")

        image = _b64_pgm("image", req.image)
        if image.rows * image.cols > budget:
            raise ApiError(413, "pixel_budget_exceeded", f"{image.rows}x{image.cols} exceeds {budget} pixels")

        seeds = None
        if req.seeds is not None:
            seeds_img = _b64_pgm("seeds", req.seeds)
            if (seeds_img.rows, seeds_img.cols) != (image.rows, image.cols):
                raise ApiError(400, "dimension_mismatch", "seeds dimensions differ from image")
            try:
                seeds = decode_labelmap(seeds_img)
            except SeedEncodingError as exc:
                raise ApiError(400, "bad_seed_encoding", str(exc)) from exc

        gt = None
        if req.gt is not None:
            gt_img = _b64_pgm("gt", req.gt)
            if (gt_img.rows, gt_img.cols) != (image.rows, image.cols):
                raise ApiError(400, "dimension_mismatch", "gt dimensions differ from image")
            gt = image_to_mask(gt_img)

        # cap the trace payload regardless of the requested stride
        stride = max(req.trace_stride, math.ceil(req.max_iters / TRACE_SNAPSHOT_CAP))

        if req.method == "otsu":
            start = time.perf_counter()
            seg_mask = otsu_segment(image)
            elapsed = time.perf_counter() - start
            labels = decode_labelmap(mask_to_image(seg_mask))
            iterations, converged, trace = 0, True, None
        else:
            if seeds is None or seeds.seed_count() == 0:
                raise ApiError(400, "no_seeds", "seeds with at least one labelled pixel are required")
            if req.method == "bgrowth":
                res = run_bgrowth(image, seeds, BGrowthParams(max_iters=req.max_iters, capture_trace=req.trace, trace_stride=stride))
            else:
                res = run_growcut(image, seeds, GrowCutParams(max_iters=req.max_iters, capture_trace=req.trace, trace_stride=stride))
            seg_mask = res.foreground()
            labels = res.labels
            iterations, converged, elapsed = res.iterations_run, res.converged, res.elapsed
            trace = res.trace

        body = {
            "labels": _encode_labels(labels),
            "iterations_run": iterations,
            "converged": converged,
            "elapsed_s": elapsed,
        }
        if gt is not None:
            row = score_masks(gt, seg_mask, method=req.method, case_id="request", elapsed=elapsed)
            body["metrics"] = {
                "accuracy": row.accuracy,
                "jaccard": row.jaccard,
                "dice": row.dice,
                "precision": row.precision,
                "recall": row.recall,
                "f_measure": row.f_measure,
                "method": row.method,
                "case_id": row.case_id,
                "elapsed": row.elapsed,
            }
        if trace is not None:
            body["trace"] = [
                {"iteration": k, "labels": _encode_labels(snap)} for k, snap in trace[:TRACE_SNAPSHOT_CAP]
            ]
        return body

    @app.get("/api/phantom")
    def phantom(
        rng_seed: int = 1,
        rows: int = 64,
        cols: int = 64,
        noise_sigma: float = 8.0,
        dark_fraction: float = 0.25,
        interior_fraction: float = 0.5,
        exterior_distance: int = 6,
        include_seeds: bool = True,
    ):
        if rows * cols > budget:
            raise ApiError(413, "pixel_budget_exceeded", f"{rows}x{cols} exceeds {budget} pixels")
        try:
            spec = PhantomSpec(rows=rows, cols=cols, noise_sigma=noise_sigma, dark_fraction=dark_fraction, rng_seed=rng_seed)
            case = generate_phantom(spec)
        except PhantomError as exc:
            raise ApiError(400, "bad_phantom_spec", str(exc)) from exc
        body = {
            "id": case.id,
            "rng_seed": rng_seed,
            "rows": rows,
            "cols": cols,
            "image": base64.b64encode(pgm_bytes(case.image)).decode("ascii"),
            "gt": base64.b64encode(pgm_bytes(mask_to_image(case.gt))).decode("ascii"),
        }
        if include_seeds:
            try:
                seeds = sloppy_seeds(case.gt, interior_fraction, exterior_distance)
            except SeedingError as exc:
                raise ApiError(400, "bad_seed_protocol", str(exc)) from exc
            body["seeds"] = _encode_labels(seeds)
        return body

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
