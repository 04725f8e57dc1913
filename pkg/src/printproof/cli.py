"""Headless command-line front end.

Exit codes: 0 success, 1 input or processing errors, 2 invalid flags.
Diagnostics go to stderr with a machine-parseable "error[CODE]:" prefix;
data goes to stdout or the requested output path.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, metrology
from .core import canonical_json, load_image, map_to_png
from .errors import PrintproofError
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
from .report import run_pipeline, verify_report_dir


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error[BAD_FLAG]: {message}", file=sys.stderr)
        raise SystemExit(2)


def _fail(code: str, message: str) -> int:
    print(f"error[{code}]: {message}", file=sys.stderr)
    return 1


def _read_input(path: str) -> bytes:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(path)
    return p.read_bytes()


def _bounded_int(lo: int, hi: int | None = None):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
        if value < lo or (hi is not None and value > hi):
            bound = f">= {lo}" if hi is None else f"in {lo}..{hi}"
            raise argparse.ArgumentTypeError(f"must be {bound}")
        return value
    return parse


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not value > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="printproof",
        description="Forensic image analysis: metadata, tamper maps, metrology.",
    )
    parser.add_argument("--version", action="version", version=f"printproof {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("meta", help="metadata listing", formatter_class=fmt)
    p.add_argument("input")
    p.add_argument("--json", action="store_true", help="emit canonical JSON")

    p = sub.add_parser("ela", help="error level analysis map", formatter_class=fmt)
    p.add_argument("input")
    p.add_argument("--quality", type=_bounded_int(1, 100), default=75,
                   help="recompression quality")
    p.add_argument("--scale", type=_bounded_int(0, 100), default=50,
                   help="difference amplification")
    p.add_argument("--contrast", type=_bounded_int(0, 100), default=20,
                   help="contrast stretch strength")
    p.add_argument("-o", "--output", required=True, help="output map PNG")

    p = sub.add_parser("pca", help="principal component map", formatter_class=fmt)
    p.add_argument("input")
    p.add_argument("--component", type=_bounded_int(1, 3), default=1,
                   help="principal component index")
    p.add_argument("--mode", choices=("projection", "distance"), default="distance",
                   help="map mode")
    p.add_argument("-o", "--output", required=True, help="output map PNG")

    p = sub.add_parser("lga", help="luminance gradient map", formatter_class=fmt)
    p.add_argument("input")
    p.add_argument("--intensity", type=_bounded_int(0, 100), default=95,
                   help="gradient gain")
    p.add_argument("--channel", choices=("red", "green", "blue", "luminance"),
                   default="blue", help="analyzed channel")
    p.add_argument("--normalized", action=argparse.BooleanOptionalAction, default=True,
                   help="normalize gain by the image's gradient peak")
    p.add_argument("-o", "--output", required=True, help="output map PNG")

    p = sub.add_parser("noise", help="median-residual noise map", formatter_class=fmt)
    p.add_argument("input")
    p.add_argument("--radius", type=_bounded_int(1, 64), default=1,
                   help="median window radius")
    p.add_argument("--gain", type=_positive_float, default=8.0,
                   help="residual amplification")
    p.add_argument("-o", "--output", required=True, help="output map PNG")

    p = sub.add_parser("metrology", help="vanishing-point and height analysis",
                       formatter_class=fmt)
    p.add_argument("input")
    p.add_argument("--annotations", required=True, help="annotation JSON path")
    p.add_argument("--seed", type=int, default=0, help="perturbation RNG seed")
    p.add_argument("--json", action="store_true", help="emit canonical JSON")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")

    p = sub.add_parser("report", help="full pipeline into a report directory",
                       formatter_class=fmt)
    p.add_argument("input")
    p.add_argument("--annotations", help="annotation JSON path")
    p.add_argument("-o", "--output", required=True, help="report directory")
    p.add_argument("--seed", type=int, default=0, help="perturbation RNG seed")
    p.add_argument("--fixed-time", nargs="?", const="1970-01-01T00:00:00Z",
                   default=None, metavar="ISO8601",
                   help="pin audit timestamps for reproducible output")

    p = sub.add_parser("verify", help="check a report directory's audit chain",
                       formatter_class=fmt)
    p.add_argument("directory")

    p = sub.add_parser("serve", help="run the examiner HTTP service",
                       formatter_class=fmt)
    p.add_argument("--port", type=_bounded_int(1, 65535), default=8745)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--dir", default=".", help="working directory for uploads and cache")

    return parser


def _load_annotations(path: str) -> AnnotationSet:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(path)
    return AnnotationSet.from_json(p.read_text(encoding="utf-8"))


def _write_map(amap, path: str) -> None:
    Path(path).write_bytes(map_to_png(amap))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except FileNotFoundError as exc:
        return _fail("NO_INPUT", f"cannot read {exc}")
    except PrintproofError as exc:
        return _fail(exc.code, str(exc))


def _dispatch(args) -> int:
    if args.command == "meta":
        summary = summarize(_read_input(args.input))
        if args.json:
            sys.stdout.buffer.write(canonical_json(summary.to_json_dict()) + b"\n")
        else:
            print(summary.to_listing())
        return 0

    if args.command == "ela":
        img = load_image(_read_input(args.input))
        params = ElaParams(quality=args.quality, scale=args.scale,
                           contrast=args.contrast)
        _write_map(ela_map(img, params), args.output)
        return 0

    if args.command == "pca":
        img = load_image(_read_input(args.input))
        params = PcaParams(component=args.component, mode=args.mode)
        _write_map(pca_map(img, pca_basis(img), params), args.output)
        return 0

    if args.command == "lga":
        img = load_image(_read_input(args.input))
        params = LgaParams(intensity=args.intensity, channel=args.channel,
                           normalized=args.normalized)
        _write_map(lga_map(img, params), args.output)
        return 0

    if args.command == "noise":
        img = load_image(_read_input(args.input))
        params = NoiseParams(radius=args.radius, gain=args.gain)
        _write_map(noise_map(img, params), args.output)
        return 0

    if args.command == "metrology":
        img = load_image(_read_input(args.input))
        ann = _load_annotations(args.annotations)
        if ann.image_hash and ann.image_hash != str(img.source_bytes_hash):
            return _fail("HASH_MISMATCH",
                         "annotations were drawn on a different image")
        result = metrology.analyze(ann, img.width, img.height, seed=args.seed)
        payload = canonical_json(result) + b"\n"
        if args.output:
            Path(args.output).write_bytes(payload)
        else:
            sys.stdout.buffer.write(payload)
        return 0

    if args.command == "report":
        data = _read_input(args.input)
        ann = _load_annotations(args.annotations) if args.annotations else None
        img = load_image(data)
        if ann is not None and ann.image_hash and ann.image_hash != str(img.source_bytes_hash):
            return _fail("HASH_MISMATCH",
                         "annotations were drawn on a different image")
        run_pipeline(data, annotations=ann, out_dir=args.output,
                     fixed_time=args.fixed_time, seed=args.seed)
        print(f"report written to {args.output}")
        return 0

    if args.command == "verify":
        directory = Path(args.directory)
        if not directory.is_dir():
            return _fail("NO_INPUT", f"{args.directory} is not a directory")
        problems = verify_report_dir(directory)
        if problems:
            for item in problems:
                print(f"error[VERIFY_FAILED]: {item}", file=sys.stderr)
            return 1
        print(f"verified: audit chain intact ({args.directory})")
        return 0

    if args.command == "serve":
        import uvicorn

        from .server import create_app

        app = create_app(Path(args.dir))
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
