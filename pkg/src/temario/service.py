"""HTTP service over a report bundle.

Read endpoints serve the bundle artifacts as written; labels.json is the one
mutable artifact, updated last-writer-wins through a single lock with a
version counter. Classification is stateless; models load lazily on first
use. The web client's static build, when present, is hosted at /.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .pipeline import _BundleClassifier, _write_json_atomic

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>report service</title></head>
<body><h1>report service</h1>
<p>No web client build found. API endpoints:</p>
<ul>
<li>GET /api/manifest</li>
<li>GET /api/sweep</li>
<li>GET /api/points?radius=</li>
<li>GET /api/clusters</li>
<li>GET /api/clusters/{id}/representatives?n=</li>
<li>PUT /api/clusters/{id}/label</li>
<li>POST /api/classify</li>
</ul></body></html>
"""


class LabelBody(BaseModel):
    label: str


class ClassifyBody(BaseModel):
    texts: list[str]


def create_app(bundle_dir: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    bundle = Path(bundle_dir)

    def _read(name: str) -> dict | list:
        return json.loads((bundle / name).read_text(encoding="utf-8"))

    manifest = _read("manifest.json")
    sweep = _read("sweep.json")
    points = _read("points.json")
    clusters_doc = _read("clusters.json")
    cluster_ids = {c["id"] for c in clusters_doc["clusters"]}
    labels_path = bundle / "labels.json"

    label_lock = threading.Lock()
    classifier_lock = threading.Lock()
    classifier: list[_BundleClassifier] = []

    def _labels_state() -> dict:
        try:
            payload = json.loads(labels_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return {"version": 0, "labels": {}}
        return {"version": int(payload.get("version", 0)), "labels": dict(payload.get("labels", {}))}

    def _classifier() -> _BundleClassifier:
        with classifier_lock:
            if not classifier:
                classifier.append(_BundleClassifier(bundle))
            return classifier[0]

    app = FastAPI(title="report service")

    @app.exception_handler(RequestValidationError)
    async def _validation_to_400(request: Request, exc: RequestValidationError):
        detail = [
            {"loc": [str(part) for part in err.get("loc", ())], "msg": str(err.get("msg", ""))}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/api/manifest")
    def get_manifest():
        return manifest

    @app.get("/api/sweep")
    def get_sweep():
        return sweep

    @app.get("/api/points")
    def get_points(radius: float | None = Query(default=None)):
        if radius is None:
            return points
        if radius < 0:
            raise HTTPException(status_code=400, detail="radius must be >= 0")
        return [p for p in points if p["distance_to_centroid"] <= radius]

    @app.get("/api/clusters")
    def get_clusters():
        state = _labels_state()
        return {
            "version": state["version"],
            "k": clusters_doc["k"],
            "plot_radius": clusters_doc["plot_radius"],
            "clusters": [
                {
                    "id": c["id"],
                    "size": c["size"],
                    "dispersion": c["dispersion"],
                    "label": state["labels"].get(str(c["id"])),
                }
                for c in clusters_doc["clusters"]
            ],
        }

    @app.get("/api/clusters/{cluster_id}/representatives")
    def get_representatives(cluster_id: int, n: int | None = Query(default=None)):
        if cluster_id not in cluster_ids:
            raise HTTPException(status_code=404, detail=f"unknown cluster id {cluster_id}")
        if n is not None and n < 1:
            raise HTTPException(status_code=400, detail="n must be >= 1")
        record = next(c for c in clusters_doc["clusters"] if c["id"] == cluster_id)
        reps = record["representatives"]
        state = _labels_state()
        return {
            "cluster_id": cluster_id,
            "label": state["labels"].get(str(cluster_id)),
            "representatives": reps if n is None else reps[:n],
        }

    @app.put("/api/clusters/{cluster_id}/label")
    def put_label(cluster_id: int, body: LabelBody):
        if cluster_id not in cluster_ids:
            raise HTTPException(status_code=404, detail=f"unknown cluster id {cluster_id}")
        with label_lock:
            state = _labels_state()
            state["labels"][str(cluster_id)] = body.label
            state["version"] += 1
            _write_json_atomic(labels_path, state)
            return {"cluster_id": cluster_id, "label": body.label, "version": state["version"]}

    @app.post("/api/classify")
    def post_classify(body: ClassifyBody):
        return {"results": _classifier().classify(body.texts)}

    if static_dir is None:
        candidate = bundle / "static"
        static_dir = candidate if candidate.is_dir() else None
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app


def serve_report(
    bundle_dir: str | Path,
    port: int = 8000,
    static_dir: str | Path | None = None,
    host: str = "127.0.0.1",
) -> None:
    import uvicorn

    uvicorn.run(create_app(bundle_dir, static_dir), host=host, port=port, log_level="info")
