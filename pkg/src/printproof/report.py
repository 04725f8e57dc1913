"""Hash-anchored forensic report assembly and verification.

A report directory is self-checking: report.json lists every artifact with
its digest, audit.jsonl repeats the audit chain line-for-line and ends with
the digest of report.json itself, so any single flipped bit in any file is
detectable. Canonical JSON (sorted keys, 6 significant digits) makes equal
inputs produce byte-equal reports.
"""

from __future__ import annotations

import datetime as _dt
import html
import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path

from . import metrology
from .core import (
    AnalysisMap,
    RasterImage,
    canonical_json,
    compute_hash,
    digest_params,
    load_image,
    map_to_png,
)
from .errors import HashMismatch, PrintproofError
from .filters import ElaParams, LgaParams, NoiseParams, PcaParams, ela_map, lga_map, noise_map, pca_basis, pca_map
from .metadata import summarize
from .metrology.annotations import AnnotationSet

PRINT_REPRO_CAVEAT = (
    "Error-level and noise-residual maps are weak evidence when the subject "
    "is a photograph of a physical print; treat them as corroborative only."
)
NON_JPEG_CAVEAT = (
    "recompression baseline absent: the source is not a JPEG, so error-level "
    "results have no prior compression to compare against."
)
INTERVAL_CAVEAT = (
    "height intervals come from re-running the measurement with every "
    "annotation endpoint displaced to its +/-2 px corners."
)

DEFAULT_ANALYSES = ("ela", "pca", "lga", "noise")


@dataclass(frozen=True)
class AuditEntry:
    timestamp: str
    operation: str
    params_digest: str
    input_hash: str
    output_hash: str

    def to_json_dict(self) -> dict:
        return asdict(self)


def _timestamp(fixed_time: str | None) -> str:
    if fixed_time is not None:
        return fixed_time
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def build_report(image_hash: str, image_summary: dict, analyses: list[dict],
                 metrology_result: dict | None, caveats: list[str],
                 audit: list[AuditEntry],
                 external_attachments: list[dict] | None = None) -> dict:
    for entry in analyses:
        if entry.get("image_hash") != image_hash:
            raise HashMismatch(
                f"analysis {entry.get('kind')} references image "
                f"{entry.get('image_hash')}, report subject is {image_hash}")
    if metrology_result is not None and metrology_result.get("image_hash") not in ("", image_hash):
        raise HashMismatch("metrology annotations reference a different image")
    return {
        "format": "printproof-report/1",
        "image": {"hash": image_hash, "summary": image_summary},
        "analyses": analyses,
        "metrology": metrology_result,
        "caveats": sorted(set(caveats)),
        "external_attachments": external_attachments or [],
        "audit": [e.to_json_dict() for e in audit],
    }


def render_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return canonical_json(report)
    if fmt == "html":
        return _render_html(report)
    raise ValueError(f"unknown format {fmt!r}")


def _render_html(report: dict) -> bytes:
    esc = html.escape
    parts = [
        "<!doctype html>",
        "<html><head><meta charset='utf-8'><title>printproof report</title>",
        "<style>body{font-family:sans-serif;margin:2em}figure{display:inline-block;"
        "margin:1em;max-width:45%}img{max-width:100%}figcaption{font-size:0.85em;"
        "color:#333}table{border-collapse:collapse}td{padding:0 0.6em 0.15em 0}</style>",
        "</head><body>",
        f"<h1>Forensic report</h1><p>Image SHA-256: <code>{esc(report['image']['hash'])}</code></p>",
    ]
    sof = report["image"]["summary"].get("sof", {})
    if sof.get("image_size"):
        parts.append(
            f"<p>{esc(str(sof['image_size']))} px, "
            f"{esc(str(sof.get('encoding_process')))}</p>")
    for entry in report["analyses"]:
        caption = ", ".join(f"{k} {v}" for k, v in sorted(entry["params"].items()))
        stats = entry["summary_stats"]
        parts.append(
            f"<figure><img src='{esc(entry['map_reference'])}' alt='{esc(entry['kind'])}'>"
            f"<figcaption>{esc(entry['kind'])} ({esc(caption)}) &mdash; "
            f"mean {stats['mean']:.4f}, p95 {stats['p95']:.4f}, max {stats['max']:.4f}"
            f"</figcaption></figure>")
    if report.get("metrology"):
        parts.append("<h2>Metrology</h2><table>")
        for h in report["metrology"].get("heights", []):
            lo, hi = h["interval_cm"]
            parts.append(
                f"<tr><td>{esc(h['target_id'])}</td><td>{h['height_cm']:.1f} cm</td>"
                f"<td>[{lo:.1f}, {hi:.1f}] cm</td></tr>")
        parts.append("</table>")
    if report["caveats"]:
        parts.append("<h2>Caveats</h2><ul>")
        parts.extend(f"<li>{esc(c)}</li>" for c in report["caveats"])
        parts.append("</ul>")
    parts.append("</body></html>")
    return "\n".join(parts).encode("utf-8")


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _run_analysis(kind: str, img: RasterImage) -> tuple[AnalysisMap, dict]:
    if kind == "ela":
        params = ElaParams()
        return ela_map(img, params), asdict(params)
    if kind == "pca":
        params = PcaParams()
        basis = pca_basis(img)
        return pca_map(img, basis, params), asdict(params)
    if kind == "lga":
        params = LgaParams()
        return lga_map(img, params), asdict(params)
    if kind == "noise":
        params = NoiseParams()
        return noise_map(img, params), asdict(params)
    raise ValueError(f"unknown analysis kind {kind!r}")


def run_pipeline(image_bytes: bytes, annotations: AnnotationSet | None = None,
                 out_dir: Path | str | None = None,
                 analyses: tuple = DEFAULT_ANALYSES,
                 fixed_time: str | None = None, seed: int = 0) -> dict:
    """Full pipeline: decode, summarize, filter maps, metrology, report.

    With out_dir set, writes report.json, maps/*.png, annotations.json and
    audit.jsonl; identical inputs plus a fixed time yield byte-identical
    directories.
    """
    img = load_image(image_bytes)
    image_hash = str(img.source_bytes_hash)
    audit: list[AuditEntry] = []
    caveats: list[str] = []

    audit.append(AuditEntry(
        timestamp=_timestamp(fixed_time), operation="load",
        params_digest=digest_params("load", {}),
        input_hash=image_hash, output_hash=image_hash))

    summary = summarize(image_bytes).to_json_dict() if img.source_format == "jpeg" else {
        "file": {"size": len(image_bytes), "hash": image_hash},
        "mime": "image/png",
        "sof": {"image_size": f"{img.width}x{img.height}",
                "image_width": img.width, "image_height": img.height,
                "megapixels": round(img.width * img.height / 1e6, 3)},
    }
    audit.append(AuditEntry(
        timestamp=_timestamp(fixed_time), operation="summarize",
        params_digest=digest_params("summarize", {}),
        input_hash=image_hash,
        output_hash=str(compute_hash(canonical_json(summary)))))

    artifacts: dict[str, bytes] = {}
    analysis_entries: list[dict] = []
    for kind in analyses:
        amap, params = _run_analysis(kind, img)
        png = map_to_png(amap)
        ref = f"maps/{amap.kind}-{amap.params_digest[:16]}.png"
        artifacts[ref] = png
        map_hash = str(compute_hash(png))
        analysis_entries.append({
            "kind": amap.kind,
            "image_hash": image_hash,
            "params": params,
            "params_digest": amap.params_digest,
            "map_reference": ref,
            "map_hash": map_hash,
            "summary_stats": amap.summary_stats(),
        })
        audit.append(AuditEntry(
            timestamp=_timestamp(fixed_time), operation=amap.kind,
            params_digest=amap.params_digest,
            input_hash=image_hash, output_hash=map_hash))
        if kind in ("ela", "noise"):
            caveats.append(PRINT_REPRO_CAVEAT)
            if img.source_format != "jpeg":
                caveats.append(NON_JPEG_CAVEAT)

    metrology_result = None
    if annotations is not None:
        ann_bytes = annotations.to_json().encode("utf-8")
        artifacts["annotations.json"] = ann_bytes
        audit.append(AuditEntry(
            timestamp=_timestamp(fixed_time), operation="annotations",
            params_digest=digest_params("annotations", {}),
            input_hash=image_hash,
            output_hash=str(compute_hash(ann_bytes))))
        metrology_result = metrology.analyze(
            annotations, img.width, img.height, seed=seed)
        audit.append(AuditEntry(
            timestamp=_timestamp(fixed_time), operation="metrology",
            params_digest=digest_params("metrology", {"seed": seed}),
            input_hash=image_hash,
            output_hash=str(compute_hash(canonical_json(metrology_result)))))
        if metrology_result.get("heights"):
            caveats.append(INTERVAL_CAVEAT)

    report = build_report(image_hash, summary, analysis_entries,
                          metrology_result, caveats, audit)
    if out_dir is not None:
        write_report_dir(Path(out_dir), report, artifacts)
    return report


def write_report_dir(out_dir: Path, report: dict, artifacts: dict[str, bytes]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "maps").mkdir(exist_ok=True)
    for ref, data in artifacts.items():
        _atomic_write(out_dir / ref, data)
    report_bytes = render_report(report, "json")
    _atomic_write(out_dir / "report.json", report_bytes)
    lines = [canonical_json(e) for e in report["audit"]]
    final = AuditEntry(
        timestamp=report["audit"][-1]["timestamp"] if report["audit"] else _timestamp(None),
        operation="report",
        params_digest=digest_params("report", {}),
        input_hash=report["image"]["hash"],
        output_hash=str(compute_hash(report_bytes)))
    lines.append(canonical_json(final.to_json_dict()))
    _atomic_write(out_dir / "audit.jsonl", b"\n".join(lines) + b"\n")
    _atomic_write(out_dir / "report.html", render_report(report, "html"))


def verify_report_dir(path: Path | str) -> list[str]:
    """Recompute every digest in a report directory; return the list of
    mismatches (empty means the audit chain is intact)."""
    root = Path(path)
    problems: list[str] = []
    report_path = root / "report.json"
    audit_path = root / "audit.jsonl"
    if not report_path.is_file():
        return ["report.json missing"]
    report_bytes = report_path.read_bytes()
    try:
        report = json.loads(report_bytes)
    except json.JSONDecodeError as exc:
        return [f"report.json unparseable: {exc}"]
    if not audit_path.is_file():
        return ["audit.jsonl missing"]
    lines = audit_path.read_bytes().splitlines()
    if not lines:
        return ["audit.jsonl empty"]
    try:
        final = json.loads(lines[-1])
    except json.JSONDecodeError as exc:
        return [f"audit.jsonl final entry unparseable: {exc}"]
    if final.get("operation") != "report":
        problems.append("audit.jsonl does not end with a report entry")
    elif final.get("output_hash") != str(compute_hash(report_bytes)):
        problems.append("report.json digest does not match the audit chain")
    embedded = [canonical_json(e) for e in report.get("audit", [])]
    if len(lines) - 1 != len(embedded):
        problems.append(
            f"audit length mismatch: {len(lines) - 1} lines vs "
            f"{len(embedded)} embedded entries")
    else:
        for k, (line, want) in enumerate(zip(lines[:-1], embedded)):
            if line != want:
                problems.append(f"audit entry {k} differs from report.json")
    for entry in report.get("analyses", []):
        ref = entry.get("map_reference", "")
        target = root / ref
        if not target.is_file():
            problems.append(f"{ref}: artifact missing")
            continue
        actual = str(compute_hash(target.read_bytes()))
        if actual != entry.get("map_hash"):
            problems.append(f"{ref}: digest mismatch")
    ann_entries = [e for e in report.get("audit", [])
                   if e.get("operation") == "annotations"]
    if ann_entries:
        ann_path = root / "annotations.json"
        if not ann_path.is_file():
            problems.append("annotations.json missing")
        elif str(compute_hash(ann_path.read_bytes())) != ann_entries[0].get("output_hash"):
            problems.append("annotations.json: digest mismatch")
    html_path = root / "report.html"
    if html_path.is_file():
        # derived artifact: must re-render byte-identically from report.json
        if html_path.read_bytes() != render_report(report, "html"):
            problems.append("report.html does not match its source report")
    return problems
