"""Command-line client for the uwbench service.

Subcommands build requests from a JSON config file (``--config`` or the
``UWBENCH_CONFIG`` environment variable) overlaid with flags, validate
them locally, and send them to the FastAPI app — in-process by default,
or to a running server with ``--server URL``.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 data or
runtime error.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import httpx

from . import __version__
from .config import (
    EvalConfig,
    SimulationConfig,
    load_config_file,
    merge_overrides,
)
from .errors import ConfigError, DataError, UwbenchError

logger = logging.getLogger("uwbench.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3

CONFIG_ENV_VAR = "UWBENCH_CONFIG"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract reserves 2 for config."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file "
                        f"(default: ${CONFIG_ENV_VAR} if set)")
    parser.add_argument("--server", help="base URL of a running uwbench service "
                        "(default: run the service in-process)")
    parser.add_argument("--coefficients", help="water coefficient table "
                        "(default: bundled Jerlov table)")


def _add_simulate_flags(parser):
    parser.add_argument("--seed", type=int)
    parser.add_argument("--water-classes",
                        help="comma-separated class labels, e.g. I,II,3C")
    parser.add_argument("--color-space", choices=["srgb", "linear"])
    parser.add_argument("--depth-kind", choices=["range", "planar"])
    parser.add_argument("--intrinsics", metavar="FX,FY,CX,CY",
                        help="pinhole intrinsics for --depth-kind planar")
    parser.add_argument("--meters-per-unit", type=float,
                        help="scale for 16-bit integer depth files")
    parser.add_argument("--assignment", choices=["sampled", "all"],
                        help="one sampled class per image, or every class")
    parser.add_argument("--pairing-rule",
                        help="depth path template over {stem} (default '{stem}')")
    parser.add_argument("--png-level", type=int, dest="png_compress_level",
                        help="PNG compression level for outputs (default 1)")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--augment", action="store_true",
                        help="enable photometric augmentations")
    parser.add_argument("--gain-min", type=float)
    parser.add_argument("--gain-max", type=float)
    parser.add_argument("--grayscale-prob", type=float)
    parser.add_argument("--augment-order", choices=["after", "before"])


def _add_eval_flags(parser):
    parser.add_argument("--unit-scale", type=float,
                        help="multiplier applied to predictions")
    parser.add_argument("--max-depth", type=float,
                        help="exclude ground truth beyond this depth (meters)")
    parser.add_argument("--median-align", action="store_true", default=None,
                        help="median-scale predictions before scoring")
    parser.add_argument("--pooling", choices=["per-image", "per-pixel"])
    parser.add_argument("--silog-lambda", type=float)
    parser.add_argument("--meters-per-unit", type=float)


def build_parser():
    parser = _Parser(prog="uwbench",
                     description="Underwater RGB-D synthesis and depth evaluation")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classes", help="list water classes and coefficients")
    _add_common(p)

    p = sub.add_parser("manifest", help="pair RGB/depth trees into a manifest")
    p.add_argument("rgb_root")
    p.add_argument("depth_root")
    p.add_argument("-o", "--output", required=True, help="manifest path")
    _add_common(p)
    _add_simulate_flags(p)

    p = sub.add_parser("simulate", help="render a synthetic underwater dataset")
    p.add_argument("rgb_root")
    p.add_argument("depth_root")
    p.add_argument("-o", "--output", required=True, help="output directory")
    _add_common(p)
    _add_simulate_flags(p)

    p = sub.add_parser("grid", help="render one scene under every water class")
    p.add_argument("rgb_path")
    p.add_argument("depth_path")
    p.add_argument("-o", "--output", required=True, help="composite PNG path")
    _add_common(p)
    _add_simulate_flags(p)

    p = sub.add_parser("eval", help="score predicted depth against ground truth")
    p.add_argument("pred_root")
    p.add_argument("gt_root")
    p.add_argument("-o", "--output", help="directory for summary.json + per_image.jsonl")
    p.add_argument("--model", help="model label recorded in the summary")
    p.add_argument("--dataset", help="dataset label recorded in the summary")
    _add_common(p)
    _add_eval_flags(p)

    p = sub.add_parser("table", help="render benchmark tables from eval summaries")
    p.add_argument("inputs", nargs="+",
                   help="eval summary JSON files, or one rows JSON file")
    p.add_argument("--format", choices=["md", "csv"], default="md")
    p.add_argument("-o", "--output", help="write table here instead of stdout")
    _add_common(p)

    p = sub.add_parser("serve", help="run the HTTP service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _load_config(args):
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if path:
        return load_config_file(path)
    from .config import ConfigFile
    return ConfigFile()


def _parse_intrinsics(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--intrinsics expects FX,FY,CX,CY, got {text!r}")
    try:
        fx, fy, cx, cy = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"--intrinsics values must be numbers, got {text!r}") from None
    return {"fx": fx, "fy": fy, "cx": cx, "cy": cy}


def _simulate_options(args, config_file):
    overrides = {
        "seed": args.seed,
        "color_space": args.color_space,
        "depth_kind": args.depth_kind,
        "meters_per_unit": args.meters_per_unit,
        "assignment": args.assignment,
        "pairing_rule": args.pairing_rule,
        "png_compress_level": args.png_compress_level,
        "workers": args.workers,
    }
    if args.water_classes is not None:
        overrides["water_classes"] = [c.strip() for c in args.water_classes.split(",")
                                      if c.strip()]
    if args.intrinsics is not None:
        overrides["intrinsics"] = _parse_intrinsics(args.intrinsics)

    augment_flags = {
        "gain_min": args.gain_min,
        "gain_max": args.gain_max,
        "grayscale_prob": args.grayscale_prob,
        "order": args.augment_order,
    }
    augment_flags = {k: v for k, v in augment_flags.items() if v is not None}
    if args.augment or augment_flags:
        block = dict(config_file.simulate.get("augment") or {})
        block.update(augment_flags)
        if args.augment:
            block["enabled"] = True
        else:
            block.setdefault("enabled", True)
        overrides["augment"] = block

    merged = merge_overrides(config_file.simulate, overrides)
    SimulationConfig.from_mapping(merged)  # validate before sending
    return merged


def _eval_options(args, config_file):
    overrides = {
        "unit_scale": args.unit_scale,
        "max_depth": args.max_depth,
        "median_align": args.median_align,
        "pooling": args.pooling,
        "silog_lambda": args.silog_lambda,
        "meters_per_unit": args.meters_per_unit,
    }
    merged = merge_overrides(config_file.eval, overrides)
    EvalConfig.from_mapping(merged)
    return merged


class _InProcessClient:
    """Sync facade over the ASGI app; ASGITransport is async-only."""

    def __init__(self, app):
        self._app = app

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    def request(self, method, url, **kwargs):
        import asyncio

        async def go():
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://uwbench.local",
                                         timeout=None) as client:
                return await client.request(method, url, **kwargs)

        return asyncio.run(go())


def _client(args):
    server = getattr(args, "server", None)
    if server:
        return httpx.Client(base_url=server, timeout=3600.0)
    from .service.app import create_app
    return _InProcessClient(create_app())


def _request(client, method, url, **kwargs):
    response = client.request(method, url, **kwargs)
    if response.status_code >= 400:
        try:
            body = response.json()
            kind = body.get("kind", "")
            detail = body.get("detail", response.text)
        except (ValueError, AttributeError):
            kind, detail = "", response.text
        print(f"error ({kind or response.status_code}): {detail}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG if kind == "config" else EXIT_DATA)
    return response.json()


def _coefficient_path(args, config_file):
    return args.coefficients or config_file.coefficients


def cmd_classes(args):
    config_file = _load_config(args)
    params = {}
    if _coefficient_path(args, config_file):
        params["coefficients"] = _coefficient_path(args, config_file)
    with _client(args) as client:
        body = _request(client, "GET", "/water-classes", params=params)
    if body["source"]:
        print(f"# source: {body['source']}")
    print(f"{'class':<8}{'beta_r':>9}{'beta_g':>9}{'beta_b':>9}"
          f"{'veil_r':>9}{'veil_g':>9}{'veil_b':>9}")
    for entry in body["classes"]:
        beta, veil = entry["beta"], entry["veil"]
        print(f"{entry['class_id']:<8}"
              f"{beta[0]:>9.3f}{beta[1]:>9.3f}{beta[2]:>9.3f}"
              f"{veil[0]:>9.3f}{veil[1]:>9.3f}{veil[2]:>9.3f}")
    return EXIT_OK


def cmd_manifest(args):
    config_file = _load_config(args)
    payload = {
        "rgb_root": args.rgb_root,
        "depth_root": args.depth_root,
        "output_path": args.output,
        "coefficients": _coefficient_path(args, config_file),
        "options": _simulate_options(args, config_file),
    }
    with _client(args) as client:
        body = _request(client, "POST", "/manifest", json=payload)
    print(json.dumps(body, indent=2))
    return EXIT_OK


def cmd_simulate(args):
    config_file = _load_config(args)
    payload = {
        "rgb_root": args.rgb_root,
        "depth_root": args.depth_root,
        "output_dir": args.output,
        "coefficients": _coefficient_path(args, config_file),
        "options": _simulate_options(args, config_file),
    }
    with _client(args) as client:
        body = _request(client, "POST", "/simulate", json=payload)
    for failure in body.get("failed", []):
        logger.warning("record failed: %(rgb_path)s (%(error)s)", failure)
    summary_path = Path(args.output) / "summary.json"
    summary_path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
    print(json.dumps(body, indent=2))
    return EXIT_OK


def cmd_grid(args):
    config_file = _load_config(args)
    payload = {
        "rgb_path": args.rgb_path,
        "depth_path": args.depth_path,
        "output_path": args.output,
        "coefficients": _coefficient_path(args, config_file),
        "options": _simulate_options(args, config_file),
    }
    with _client(args) as client:
        body = _request(client, "POST", "/grid", json=payload)
    print(f"wrote {body['output_path']} ({body['tiles']} tiles, "
          f"{body['width']}x{body['height']}): {' '.join(body['labels'])}")
    return EXIT_OK


def cmd_eval(args):
    config_file = _load_config(args)
    records_path = None
    if args.output:
        Path(args.output).mkdir(parents=True, exist_ok=True)
        records_path = str(Path(args.output) / "per_image.jsonl")
    payload = {
        "pred_root": args.pred_root,
        "gt_root": args.gt_root,
        "options": _eval_options(args, config_file),
        "model": args.model,
        "dataset": args.dataset,
        "records_path": records_path,
    }
    with _client(args) as client:
        body = _request(client, "POST", "/eval", json=payload)
    summary = dict(body["summary"])
    summary["model"] = body.get("model")
    summary["dataset"] = body.get("dataset")
    summary["skipped"] = body.get("skipped", 0)
    if args.output:
        out = Path(args.output) / "summary.json"
        out.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_table(args):
    rows = None
    summaries = []
    for path in args.inputs:
        try:
            doc = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise DataError(f"table input not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise DataError(f"table input {path}: {exc}") from None
        if isinstance(doc, dict) and "rows" in doc:
            rows = doc["rows"]
        elif isinstance(doc, dict) and {"model", "dataset"} <= doc.keys():
            summaries.append(doc)
        else:
            raise DataError(
                f"table input {path} is neither a rows file nor an eval summary "
                "(needs 'model' and 'dataset' labels; pass --model/--dataset to eval)"
            )
    payload = {"fmt": args.format}
    if rows is not None:
        payload["rows"] = rows
    else:
        payload["summaries"] = summaries
    with _client(args) as client:
        body = _request(client, "POST", "/table", json=payload)
    if args.output:
        Path(args.output).write_text(body["text"])
    else:
        sys.stdout.write(body["text"])
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    uvicorn.run("uwbench.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


_HANDLERS = {
    "classes": cmd_classes,
    "manifest": cmd_manifest,
    "simulate": cmd_simulate,
    "grid": cmd_grid,
    "eval": cmd_eval,
    "table": cmd_table,
    "serve": cmd_serve,
}


def main(argv=None):
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    logging.getLogger("httpx").setLevel(logging.WARNING)
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"error (config): {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error (data): {exc}", file=sys.stderr)
        return EXIT_DATA
    except UwbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except httpx.HTTPError as exc:
        print(f"error (transport): {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
