"""Command-line front end: ``psinterp interpolate | model | benchmark``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from .bench import BenchRun, run_benchmark, summary_path, write_report
from .decimation import DecimationScheme
from .fusion import FusionWeights
from .imageio import read_image, write_image
from .pipeline import ModelResult, interpolate, model_channels
from .pso import PsoConfig
from .wavelet import FILTER_NAMES

__all__ = ["main", "build_parser", "load_weights", "save_weights"]


def _scale(text: str) -> float:
    value = float(text)
    if not value > 1:
        raise argparse.ArgumentTypeError(f"scale must exceed 1, got {text}")
    return value


def _add_pso_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wavelet", choices=FILTER_NAMES, default="db2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stall-tol", type=float, default=1e-6, help="early-stop tolerance in dB")
    p.add_argument("--max-iters", type=int, default=15)
    p.add_argument(
        "--fitness",
        choices=("direct", "gram"),
        default="direct",
        help="direct recomputes each estimate; gram uses the closed-form quadratic",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psinterp", description="Wavelet-domain image interpolation with learned fusion weights."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interpolate", help="enlarge one image")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path)
    p.add_argument("--scale", type=_scale, default=2.0)
    p.add_argument("--weights-in", type=Path, help="JSON weights; skips modeling")
    p.add_argument("--remodel-each-level", action="store_true")
    _add_pso_flags(p)

    p = sub.add_parser("model", help="learn and save fusion weights")
    p.add_argument("input", type=Path)
    p.add_argument("--weights-out", type=Path, required=True)
    _add_pso_flags(p)

    p = sub.add_parser("benchmark", help="evaluate a directory of ground-truth images")
    p.add_argument("dataset", type=Path)
    p.add_argument("--report", type=Path, required=True, help="detail CSV path")
    p.add_argument(
        "--schemes",
        nargs="+",
        type=DecimationScheme.parse,
        default=list(DecimationScheme),
        metavar="SCHEME",
    )
    p.add_argument("--factors", nargs="+", type=int, default=[2], choices=(2, 4))
    p.add_argument("--wavelets", nargs="+", choices=FILTER_NAMES, default=["db2"])
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-figures", action="store_true", help="skip the PNG charts")
    _add_pso_flags(p)
    return parser


def _pso_config(args) -> PsoConfig:
    return replace(
        PsoConfig(),
        seed=args.seed,
        stall_tolerance=args.stall_tol,
        max_iters=args.max_iters,
        min_iters_before_early_stop=min(PsoConfig().min_iters_before_early_stop, args.max_iters),
    )


def save_weights(path: Path, wavelet: str, models: list[ModelResult], seed: int) -> None:
    doc = {
        "wavelet": wavelet,
        "channels": [
            {
                "weights": list(m.weights.values),
                "fitness_db": m.fitness_db,
                "iterations": m.iterations,
            }
            for m in models
        ],
        "seed": seed,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_weights(path: Path) -> tuple[str, list[FusionWeights]]:
    doc = json.loads(Path(path).read_text())
    try:
        wavelet = doc["wavelet"]
        weights = [FusionWeights(tuple(ch["weights"])) for ch in doc["channels"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed weights file {path}: {exc}") from exc
    return wavelet, weights


def _print_models(models: list[ModelResult]) -> None:
    for c, m in enumerate(models):
        w = " ".join(f"{v:.6f}" for v in m.weights.values)
        print(f"channel {c}: W = [{w}]  fitness {m.fitness_db:.4f} dB  iterations {m.iterations}")


def cmd_interpolate(args) -> int:
    image = read_image(args.input)
    cfg = _pso_config(args)
    start = time.perf_counter()
    if args.weights_in is not None:
        wavelet, models = load_weights(args.weights_in)
        if wavelet != args.wavelet:
            print(f"using wavelet {wavelet} from {args.weights_in}", file=sys.stderr)
        for c, w in enumerate(models):
            print(f"channel {c}: W = [{' '.join(f'{v:.6f}' for v in w.values)}]  (loaded)")
    else:
        wavelet = args.wavelet
        models = model_channels(image, wavelet, cfg, args.fitness)
        _print_models(models)
    out = interpolate(
        image,
        args.scale,
        wavelet,
        cfg,
        models=models,
        remodel_each_level=args.remodel_each_level,
        fitness_mode=args.fitness,
    )
    elapsed = time.perf_counter() - start
    write_image(args.output, out)
    print(f"{image.shape[1]}x{image.shape[0]} -> {out.shape[1]}x{out.shape[0]} in {elapsed:.3f} s")
    return 0


def cmd_model(args) -> int:
    image = read_image(args.input)
    models = model_channels(image, args.wavelet, _pso_config(args), args.fitness)
    _print_models(models)
    save_weights(args.weights_out, args.wavelet, models, args.seed)
    return 0


def cmd_benchmark(args) -> int:
    run = BenchRun(
        dataset_path=args.dataset,
        schemes=args.schemes,
        factors=args.factors,
        wavelets=args.wavelets,
        repeats=args.repeats,
        seed_base=args.seed,
        workers=args.workers,
        pso_config=_pso_config(args),
    )
    records = run_benchmark(run)
    write_report(records, args.report)
    print(f"wrote {len(records)} rows to {args.report} and {summary_path(args.report)}")
    if not args.no_figures:
        from .plotting import save_figures

        for path in save_figures(records, args.report):
            print(f"wrote {path}")
    return 0


_COMMANDS = {"interpolate": cmd_interpolate, "model": cmd_model, "benchmark": cmd_benchmark}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, FloatingPointError) as exc:
        print(f"psinterp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
