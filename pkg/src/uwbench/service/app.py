"""FastAPI service wrapping the simulation and evaluation pipeline.

The CLI talks to this app through an in-process ASGI transport by default,
or over the network against ``uvicorn uwbench.service.app:app``. Errors
surface as JSON bodies ``{"kind": "config"|"data", "detail": ...}`` with
status 400 / 422, which clients map onto the exit-code contract.
"""

import json
import logging
from pathlib import Path

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse
from PIL import Image

from .. import __version__
from ..config import EvalConfig, SimulationConfig
from ..depthio import read_depth
from ..errors import ConfigError, DataError, UwbenchError
from ..formation import planar_depth_to_range
from ..manifest import save_manifest
from ..metrics import evaluate_tree
from ..pipeline import prepare_manifest, render_condition_grid, simulate_dataset
from ..report import emit_table, rows_from_eval_summaries
from ..water import CoefficientTable, resolve_table
from . import schemas

logger = logging.getLogger(__name__)


def _simulation_config(options):
    mapping = options.model_dump(exclude_none=True)
    if "intrinsics" in mapping:
        mapping["intrinsics"] = options.intrinsics.model_dump()
    if options.augment is not None:
        mapping["augment"] = options.augment.model_dump(exclude_none=True)
    return SimulationConfig.from_mapping(mapping)


def _eval_config(options):
    return EvalConfig.from_mapping(options.model_dump(exclude_none=True))


def create_app():
    app = FastAPI(title="uwbench", version=__version__)

    @app.exception_handler(ConfigError)
    def _config_error(request, exc):
        return JSONResponse(status_code=400,
                            content={"kind": "config", "detail": str(exc)})

    @app.exception_handler(DataError)
    def _data_error(request, exc):
        return JSONResponse(status_code=422,
                            content={"kind": "data", "detail": str(exc)})

    @app.exception_handler(UwbenchError)
    def _other_error(request, exc):
        return JSONResponse(status_code=400,
                            content={"kind": "error", "detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.get("/water-classes", response_model=schemas.WaterClassesResponse)
    def water_classes(coefficients: str | None = None):
        table = resolve_table(coefficients)
        return schemas.WaterClassesResponse(
            source=table.source,
            classes=[
                schemas.WaterClassEntry(class_id=c.class_id, beta=c.beta, veil=c.veil)
                for c in table.entries.values()
            ],
        )

    @app.post("/manifest", response_model=schemas.ManifestResponse)
    def manifest(request: schemas.ManifestRequest):
        table = resolve_table(request.coefficients)
        config = _simulation_config(request.options)
        built = prepare_manifest(request.rgb_root, request.depth_root, table, config)
        out = Path(request.output_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        save_manifest(built, out)
        return schemas.ManifestResponse(
            records=len(built.records),
            manifest_path=str(out),
            config_digest=built.config_digest,
        )

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(request: schemas.SimulateRequest):
        table = resolve_table(request.coefficients)
        config = _simulation_config(request.options)
        built = prepare_manifest(request.rgb_root, request.depth_root, table, config)
        summary = simulate_dataset(built, table, config, request.rgb_root,
                                   request.depth_root, request.output_dir)
        return schemas.SimulateResponse(**summary.to_dict())

    @app.post("/grid", response_model=schemas.GridResponse)
    def grid(request: schemas.GridRequest):
        table = resolve_table(request.coefficients)
        config = _simulation_config(request.options)
        if config.water_classes is not None:
            entries = {c: table.lookup(c) for c in config.water_classes}
            table = CoefficientTable(entries=entries, source=table.source)
        with Image.open(request.rgb_path) as img:
            rgb_u8 = np.asarray(img.convert("RGB"))
        depth = read_depth(request.depth_path,
                           meters_per_unit=config.meters_per_unit)
        if config.depth_kind == "planar":
            depth = planar_depth_to_range(depth, config.intrinsics)
        composite, labels = render_condition_grid(
            rgb_u8, depth, table, color_space=config.color_space)
        out = Path(request.output_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(composite).save(out, format="PNG",
                                        compress_level=config.png_compress_level)
        return schemas.GridResponse(
            output_path=str(out),
            tiles=len(labels),
            labels=labels,
            width=composite.shape[1],
            height=composite.shape[0],
        )

    @app.post("/eval", response_model=schemas.EvalResponse)
    def evaluate(request: schemas.EvalRequest):
        config = _eval_config(request.options)
        records, summary = evaluate_tree(request.pred_root, request.gt_root, config)
        skipped = sum(1 for r in records if "skipped" in r)
        records_path = None
        if request.records_path:
            path = Path(request.records_path)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w") as fh:
                for record in records:
                    fh.write(json.dumps(record, sort_keys=True) + "\n")
            records_path = str(path)
        return schemas.EvalResponse(
            summary=summary.to_dict(),
            model=request.model,
            dataset=request.dataset,
            images=summary.images,
            skipped=skipped,
            records=records if request.include_records else None,
            records_path=records_path,
        )

    @app.post("/table", response_model=schemas.TableResponse)
    def table(request: schemas.TableRequest):
        if request.rows:
            rows = [{"model": r.model, "cells": r.cells} for r in request.rows]
        elif request.summaries:
            rows = rows_from_eval_summaries(request.summaries)
        else:
            raise DataError("table request needs rows or summaries")
        return schemas.TableResponse(text=emit_table(rows, fmt=request.fmt),
                                     fmt=request.fmt)

    return app


app = create_app()
