"""Embedded HTTP service for the examiner UI.

Uploads and computed maps are content-addressed under the working directory,
so the cache key (image hash, operation, params digest) is also the file
name; a cache hit is bit-identical to recomputation by construction.
Concurrent identical requests compute at most once behind a per-key lock.
"""

from __future__ import annotations

import threading
from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, Request, Response, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import metrology
from .core import canonical_json, compute_hash, load_image, map_to_png
from .errors import (
    AnnotationError,
    CorruptStream,
    InvalidParameter,
    PrintproofError,
    UnsupportedFormat,
)
from .filters import (
    ElaParams,
    LgaParams,
    NoiseParams,
    PcaParams,
    ela_map,
    lga_map,
    noise_map,
    pca_basis,
    pca_map,
)
from .metadata import summarize
from .metrology.annotations import AnnotationSet
from .report import run_pipeline

_EXT = {"jpeg": ".jpg", "png": ".png"}

ANALYSIS_KINDS = ("ela", "pca", "lga", "noise")


def _json_error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": message, **extra}, status_code=status)


def _int_param(params: dict, name: str, default: int) -> int:
    raw = params.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise InvalidParameter(name, f"{name} must be an integer")


def _float_param(params: dict, name: str, default: float) -> float:
    raw = params.get(name)
    if raw is None:
        return default
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise InvalidParameter(name, f"{name} must be a number")


def _bool_param(params: dict, name: str, default: bool) -> bool:
    raw = params.get(name)
    if raw is None:
        return default
    text = str(raw).lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise InvalidParameter(name, f"{name} must be a boolean")


def parse_analysis_params(kind: str, params: dict):
    if kind == "ela":
        return ElaParams(quality=_int_param(params, "quality", 75),
                         scale=_int_param(params, "scale", 50),
                         contrast=_int_param(params, "contrast", 20))
    if kind == "pca":
        mode = params.get("mode", "distance")
        return PcaParams(component=_int_param(params, "component", 1), mode=mode)
    if kind == "lga":
        return LgaParams(intensity=_int_param(params, "intensity", 95),
                         channel=params.get("channel", "blue"),
                         normalized=_bool_param(params, "normalized", True))
    if kind == "noise":
        return NoiseParams(radius=_int_param(params, "radius", 1),
                           gain=_float_param(params, "gain", 8.0))
    raise InvalidParameter("kind", f"unknown analysis kind {kind!r}")


def _run_analysis(kind: str, img, params):
    if kind == "ela":
        return ela_map(img, params)
    if kind == "pca":
        return pca_map(img, pca_basis(img), params)
    if kind == "lga":
        return lga_map(img, params)
    return noise_map(img, params)


class Workspace:
    def __init__(self, root: Path):
        self.root = Path(root)
        (self.root / "images").mkdir(parents=True, exist_ok=True)
        (self.root / "maps").mkdir(exist_ok=True)
        (self.root / "annotations").mkdir(exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock_for(self, key: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(key, threading.Lock())

    def image_path(self, image_id: str) -> Path | None:
        for ext in _EXT.values():
            p = self.root / "images" / f"{image_id}{ext}"
            if p.is_file():
                return p
        return None

    def store_image(self, data: bytes) -> str:
        img = load_image(data)  # raises on undecodable input
        image_id = str(img.source_bytes_hash)
        path = self.root / "images" / f"{image_id}{_EXT[img.source_format]}"
        if not path.is_file():
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_bytes(data)
            tmp.replace(path)
        return image_id

    def map_path(self, image_id: str, kind: str, digest: str) -> Path:
        d = self.root / "maps" / image_id
        d.mkdir(exist_ok=True)
        return d / f"{kind}-{digest[:16]}.png"

    def annotation_path(self, image_id: str, name: str) -> Path:
        d = self.root / "annotations" / image_id
        d.mkdir(exist_ok=True)
        return d / f"{name}.json"


def create_app(workdir: Path | str, static_dir: Path | str | None = None) -> FastAPI:
    ws = Workspace(Path(workdir))
    app = FastAPI(title="printproof", docs_url=None, redoc_url=None)

    @app.exception_handler(PrintproofError)
    async def _printproof_error(request: Request, exc: PrintproofError):
        if isinstance(exc, InvalidParameter):
            return JSONResponse({"field": exc.field, "error": str(exc)}, status_code=422)
        if isinstance(exc, AnnotationError):
            return JSONResponse({"error": str(exc), "problems": exc.problems},
                                status_code=422)
        if isinstance(exc, (UnsupportedFormat, CorruptStream)):
            return _json_error(415, str(exc), code=exc.code)
        return _json_error(422, str(exc), code=exc.code)

    def _load(image_id: str):
        path = ws.image_path(image_id)
        if path is None:
            return None, _json_error(404, f"unknown image {image_id}")
        return load_image(path.read_bytes()), None

    @app.post("/api/images", status_code=201)
    async def upload(file: UploadFile):
        data = await file.read()
        try:
            image_id = ws.store_image(data)
        except (UnsupportedFormat, CorruptStream) as exc:
            return _json_error(415, str(exc), code=exc.code)
        return {"image_id": image_id}

    @app.get("/api/images/{image_id}/file")
    async def raw_file(image_id: str):
        path = ws.image_path(image_id)
        if path is None:
            return _json_error(404, f"unknown image {image_id}")
        media = "image/png" if path.suffix == ".png" else "image/jpeg"
        return Response(path.read_bytes(), media_type=media)

    @app.get("/api/images/{image_id}/meta")
    async def meta(image_id: str):
        path = ws.image_path(image_id)
        if path is None:
            return _json_error(404, f"unknown image {image_id}")
        data = path.read_bytes()
        if not data.startswith(b"\xff\xd8"):
            img = load_image(data)
            return Response(canonical_json({
                "file": {"size": len(data), "hash": image_id},
                "mime": "image/png",
                "sof": {"image_size": f"{img.width}x{img.height}",
                        "image_width": img.width, "image_height": img.height,
                        "megapixels": round(img.width * img.height / 1e6, 3)},
            }), media_type="application/json")
        return Response(canonical_json(summarize(data).to_json_dict()),
                        media_type="application/json")

    @app.get("/api/images/{image_id}/analysis/{kind}")
    async def analysis(image_id: str, kind: str, request: Request):
        if kind not in ANALYSIS_KINDS:
            return JSONResponse({"field": "kind", "error": f"unknown kind {kind!r}"},
                                status_code=422)
        params = parse_analysis_params(kind, dict(request.query_params))
        digest = params.digest()
        target = ws.map_path(image_id, kind, digest)
        headers = {"X-Printproof-Params": digest}
        if target.is_file():
            headers["X-Cache"] = "hit"
            return Response(target.read_bytes(), media_type="image/png",
                            headers=headers)
        with ws.lock_for(f"{image_id}/{kind}/{digest}"):
            if target.is_file():
                headers["X-Cache"] = "hit"
                return Response(target.read_bytes(), media_type="image/png",
                                headers=headers)
            img, err = _load(image_id)
            if err is not None:
                return err
            png = map_to_png(_run_analysis(kind, img, params))
            tmp = target.with_name(target.name + ".tmp")
            tmp.write_bytes(png)
            tmp.replace(target)
        headers["X-Cache"] = "miss"
        return Response(png, media_type="image/png", headers=headers)

    @app.put("/api/images/{image_id}/annotations/{name}")
    async def put_annotations(image_id: str, name: str, request: Request):
        img, err = _load(image_id)
        if err is not None:
            return err
        if not name.replace("-", "").replace("_", "").isalnum():
            return JSONResponse({"field": "name", "error": "annotation names are alphanumeric"},
                                status_code=422)
        body = await request.body()
        ann = AnnotationSet.from_json(body)
        if ann.image_hash and ann.image_hash != image_id:
            return _json_error(409, "annotations reference a different image",
                               expected=image_id, got=ann.image_hash)
        ann.validate(img.width, img.height)
        path = ws.annotation_path(image_id, name)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(ann.to_json().encode("utf-8"))
        tmp.replace(path)  # last writer wins
        return {"stored": name, "segments": len(ann.segments)}

    @app.get("/api/images/{image_id}/annotations/{name}")
    async def get_annotations(image_id: str, name: str):
        path = ws.annotation_path(image_id, name)
        if not path.is_file():
            return _json_error(404, f"no annotation set {name!r}")
        return Response(path.read_bytes(), media_type="application/json")

    @app.get("/api/images/{image_id}/metrology")
    async def run_metrology(image_id: str, annotations: str, seed: int = 0):
        img, err = _load(image_id)
        if err is not None:
            return err
        path = ws.annotation_path(image_id, annotations)
        if not path.is_file():
            return _json_error(404, f"no annotation set {annotations!r}")
        ann = AnnotationSet.from_json(path.read_text(encoding="utf-8"))
        result = metrology.analyze(ann, img.width, img.height, seed=seed)
        return Response(canonical_json(result), media_type="application/json")

    @app.get("/api/images/{image_id}/report")
    async def report(image_id: str, annotations: str | None = None, seed: int = 0):
        path = ws.image_path(image_id)
        if path is None:
            return _json_error(404, f"unknown image {image_id}")
        ann = None
        if annotations:
            ann_path = ws.annotation_path(image_id, annotations)
            if not ann_path.is_file():
                return _json_error(404, f"no annotation set {annotations!r}")
            ann = AnnotationSet.from_json(ann_path.read_text(encoding="utf-8"))
        result = run_pipeline(path.read_bytes(), annotations=ann, seed=seed)
        return Response(canonical_json(result), media_type="application/json")

    @app.get("/api/images/{image_id}/pixels")
    async def pixels(image_id: str, x: int, y: int, r: int = 2):
        img, err = _load(image_id)
        if err is not None:
            return err
        if r < 0 or r > 64:
            return JSONResponse({"field": "r", "error": "radius must be in 0..64"},
                                status_code=422)
        x0, x1 = max(0, x - r), min(img.width, x + r + 1)
        y0, y1 = max(0, y - r), min(img.height, y + r + 1)
        if x0 >= x1 or y0 >= y1:
            return JSONResponse({"field": "x", "error": "window outside the image"},
                                status_code=422)
        window = img.pixels[y0:y1, x0:x1]
        return {
            "x0": x0, "y0": y0,
            "width": int(window.shape[1]), "height": int(window.shape[0]),
            "pixels": window.tolist(),
        }

    @app.get("/api/demo")
    async def demo():
        """Upload the built-in synthetic demo scene and return its ids."""
        png = metrology.synthetic.render_demo_image()
        image_id = ws.store_image(png)
        scene = metrology.synthetic.demo_scene()
        ann = scene.annotations
        ann.image_hash = image_id
        path = ws.annotation_path(image_id, "demo")
        path.write_bytes(ann.to_json().encode("utf-8"))
        return {
            "image_id": image_id,
            "annotations": "demo",
            "reference_height_cm": scene.reference_height_cm,
            "target_truth_cm": scene.target_truth_cm,
        }

    static_root = Path(static_dir) if static_dir else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if static_root.is_dir():
        app.mount("/", StaticFiles(directory=static_root, html=True), name="ui")

    return app
