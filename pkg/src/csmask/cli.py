"""csmask command line: ingest, learn, baseline, evaluate, bound.

Every command writes a run record (config echo, input hashes, output
list) next to its outputs. Outputs carry no timestamps, so identical
inputs and seeds reproduce byte-identical files.

Exit codes: 0 success, 1 validation error, 2 I/O or file-format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import baselines, dataset, io, learning, metrics, plotting, reporting
from .errors import (
    CsmaskError,
    EmptyInput,
    FileFormatError,
    InvalidBudget,
    InvalidParams,
    InvalidShape,
)
from .patterns import SubsamplingPattern
from .reconstruction import reconstruct
from .transforms import TransformOperator

OUT_ENV = "CSMASK_OUT"


def _load_config(path, command: str) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{path}: unreadable config: {exc}")
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: config must be a JSON object")
    section = doc.get(command, {})
    if not isinstance(section, dict):
        raise FileFormatError(f"{path}: section {command!r} must be an object")
    return section


def _setting(args, config: dict, name: str, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _out_dir(args, config: dict) -> Path:
    out = getattr(args, "out", None) or os.environ.get(OUT_ENV) or config.get("out")
    if out is None:
        raise InvalidParams("no output directory (use --out or CSMASK_OUT)")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _operator_from_manifest(transform: dict) -> TransformOperator:
    try:
        return TransformOperator(transform["kind"], tuple(transform["shape"]))
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"manifest transform block is invalid: {exc}")


def _budget(args, config: dict, p: int) -> tuple[int, float | None]:
    """Resolve --n / --rate into an explicit sample count."""
    n = _setting(args, config, "n")
    rate = _setting(args, config, "rate")
    if n is None and rate is None:
        raise InvalidBudget("give a budget with --n or --rate")
    if n is not None and rate is not None:
        raise InvalidBudget("--n and --rate are mutually exclusive")
    if n is None:
        rate = float(rate)
        if not 0.0 < rate <= 1.0:
            raise InvalidBudget(f"rate must be in (0, 1], got {rate}")
        return round(rate * p), rate
    return int(n), None


def cmd_ingest(args) -> int:
    config = _load_config(args.config, "ingest")
    input_dir = _setting(args, config, "input")
    if input_dir is None:
        raise InvalidParams("ingest needs --input")
    input_dir = Path(input_dir)
    tau = float(_setting(args, config, "tau", 0.05))
    train_patients = _setting(args, config, "train_patients")
    out = _out_dir(args, config)

    volume_files = sorted(
        f for f in input_dir.glob("*") if f.suffix.lower() in io.VOLUME_READERS
    )
    if not volume_files:
        raise EmptyInput(f"no volume files in {input_dir}")

    slice_dir = out / "slices"
    slice_dir.mkdir(exist_ok=True)
    per_patient: list[dataset.SliceSet] = []
    input_hashes = {}
    plane_shape: tuple[int, int] | None = None
    for f in volume_files:
        input_hashes[str(f)] = io.sha256_file(f)
        vol = dataset.KSpaceVolume(io.read_volume(f), f.stem)
        if plane_shape is None:
            plane_shape = vol.dims[:2]
        elif vol.dims[:2] != plane_shape:
            raise InvalidShape(
                f"{f}: x-y plane {vol.dims[:2]} differs from {plane_shape}"
            )
        kept = dataset.filter_slices(dataset.ifft_z(vol), tau)
        per_patient.append(kept)
        print(f"{f.stem}: kept {len(kept)} of {vol.dims[2]} slices")

    all_slices = dataset.concat_slices(per_patient)
    entries = []
    outputs = []
    for rec in all_slices.slices:
        name = f"{rec.patient}_z{rec.z_index:03d}.csig"
        io.write_signal(slice_dir / name, rec.signal)
        entries.append(
            {
                "file": f"slices/{name}",
                "patient": rec.patient,
                "z": rec.z_index,
                "sha256": io.sha256_file(slice_dir / name),
            }
        )
        outputs.append(slice_dir / name)

    assert plane_shape is not None
    manifests = {"all": (out / "manifest_all.json", all_slices)}
    if train_patients is not None:
        train, test = dataset.split_patients(all_slices, int(train_patients))
        manifests["train"] = (out / "manifest_train.json", train)
        manifests["test"] = (out / "manifest_test.json", test)
    by_key = {(rec["patient"], rec["z"]): rec for rec in entries}
    for role, (path, subset) in manifests.items():
        io.write_manifest(
            path,
            role,
            "dft2d",
            plane_shape,
            [by_key[(rec.patient, rec.z_index)] for rec in subset.slices],
        )
        outputs.append(path)
        print(f"{path.name}: {len(subset)} slices, {len(subset.patients())} patients")

    io.write_run_record(
        out / "run_ingest.json",
        "ingest",
        {"input": str(input_dir), "tau": tau, "train_patients": train_patients},
        input_hashes,
        outputs,
    )
    print(f"total: {len(all_slices)} slices")
    return 0


def cmd_learn(args) -> int:
    config = _load_config(args.config, "learn")
    manifest_path = _setting(args, config, "train")
    if manifest_path is None:
        raise InvalidParams("learn needs --train manifest")
    out = _out_dir(args, config)
    label = _setting(args, config, "label", "learned")

    transform, signals, _ = io.load_manifest_signals(manifest_path)
    op = _operator_from_manifest(transform)
    n, rate = _budget(args, config, op.p)
    scores = learning.compute_scores(op, signals, normalized=not args.unnormalized)
    pattern = learning.learn_pattern(scores, n)

    mask_path = out / f"mask_{label}.json"
    png_path = out / f"mask_{label}.png"
    io.write_mask(mask_path, pattern)
    plotting.save_mask_png(pattern, png_path)
    io.write_run_record(
        out / f"run_learn_{label}.json",
        "learn",
        {
            "train": str(manifest_path),
            "p": op.p,
            "rate": rate,
            "n": n,
            "normalized": not args.unnormalized,
            "label": label,
        },
        {str(manifest_path): io.sha256_file(manifest_path)},
        [mask_path, png_path],
    )
    objective = learning.empirical_objective(pattern, scores)
    print(
        f"learned {pattern.n}/{pattern.p} indices (rate {pattern.rate}),"
        f" training objective {objective:.6f}"
    )
    print(f"wrote {mask_path} and {png_path}")
    return 0


def cmd_baseline(args) -> int:
    config = _load_config(args.config, "baseline")
    manifest_path = _setting(args, config, "train")
    if manifest_path is None:
        raise InvalidParams("baseline needs --train manifest")
    out = _out_dir(args, config)
    label = _setting(args, config, "label", "baseline")
    seed = int(_setting(args, config, "seed", 0))
    grid_r = _setting(args, config, "grid_r")
    grid_d = _setting(args, config, "grid_d")
    if grid_r is None or grid_d is None:
        raise InvalidParams("baseline needs --grid-r and --grid-d")
    if isinstance(grid_r, str):
        grid_r = [float(v) for v in grid_r.split(",") if v]
    if isinstance(grid_d, str):
        grid_d = [float(v) for v in grid_d.split(",") if v]

    transform, signals, _ = io.load_manifest_signals(manifest_path)
    op = _operator_from_manifest(transform)
    n, rate = _budget(args, config, op.p)
    grid = [(r, d) for r in grid_r for d in grid_d]
    result = baselines.tune_variable_density(signals, op, n, grid, seed=seed)
    pattern = baselines.sample_variable_density(result.best)

    mask_path = out / f"mask_{label}.json"
    png_path = out / f"mask_{label}.png"
    log_path = out / f"tuning_{label}.csv"
    io.write_mask(mask_path, pattern)
    plotting.save_mask_png(pattern, png_path)
    reporting.write_tuning_log(log_path, result.entries)
    io.write_run_record(
        out / f"run_baseline_{label}.json",
        "baseline",
        {
            "train": str(manifest_path),
            "p": op.p,
            "rate": rate,
            "n": n,
            "seed": seed,
            "grid_r": grid_r,
            "grid_d": grid_d,
            "best": {"r": result.best.r, "d": result.best.d, "seed": result.best.seed},
            "label": label,
        },
        {str(manifest_path): io.sha256_file(manifest_path)},
        [mask_path, png_path, log_path],
    )
    print(
        f"tuned (r, d) = ({result.best.r}, {result.best.d}) over {len(grid)} points;"
        f" pattern {pattern.n}/{pattern.p}"
    )
    print(f"wrote {mask_path}, {png_path}, {log_path}")
    return 0


def cmd_evaluate(args) -> int:
    config = _load_config(args.config, "evaluate")
    mask_path = _setting(args, config, "mask")
    manifest_path = _setting(args, config, "test")
    if mask_path is None or manifest_path is None:
        raise InvalidParams("evaluate needs --mask and --test")
    out = _out_dir(args, config)
    images = int(_setting(args, config, "images", 0))
    basename = _setting(args, config, "label", "report")

    pattern = io.read_mask(mask_path)
    transform, signals, labels = io.load_manifest_signals(manifest_path)
    op = _operator_from_manifest(transform)
    if pattern.p != op.p:
        raise InvalidShape(
            f"mask universe {pattern.p} does not match manifest p={op.p}"
        )
    report = metrics.evaluate(op, pattern, signals, labels)

    outputs = reporting.write_report(report, out, basename)
    figure_path = out / f"{basename}_psnr.png"
    plotting.save_psnr_figure(report, figure_path)
    outputs.append(figure_path)
    for i in range(min(images, len(signals))):
        rec = reconstruct(op, pattern, signals[i])
        img_path = out / f"{basename}_recon_{i:03d}.png"
        plotting.save_recon_figure(
            signals[i],
            rec.estimate,
            report.psnr_db[i],
            labels[i],
            img_path,
        )
        outputs.append(img_path)

    io.write_run_record(
        out / f"run_evaluate_{basename}.json",
        "evaluate",
        {
            "mask": str(mask_path),
            "test": str(manifest_path),
            "images": images,
            "label": basename,
        },
        {
            str(mask_path): io.sha256_file(mask_path),
            str(manifest_path): io.sha256_file(manifest_path),
        },
        outputs,
    )
    mean = report.mean_psnr_db
    print(
        f"pattern {report.pattern_id} rate {report.rate}:"
        f" mean PSNR {'inf' if mean == float('inf') else f'{mean:.4f}'} dB,"
        f" mean error {report.mean_error:.6e}"
        f" ({report.exact_count} exact excluded)"
    )
    print(f"wrote {', '.join(str(o) for o in outputs[:3])}, ...")
    return 0


def cmd_bound(args) -> int:
    config = _load_config(args.config, "bound")
    spec = metrics.BoundInput(
        int(_setting(args, config, "m")),
        int(_setting(args, config, "p")),
        int(_setting(args, config, "n")),
        float(_setting(args, config, "beta")),
    )
    value = spec.value
    print(f"epsilon_m <= {value:.6f} (m={spec.m}, p={spec.p}, n={spec.n}, beta={spec.beta})")
    if getattr(args, "out", None) or os.environ.get(OUT_ENV) or config.get("out"):
        out = _out_dir(args, config)
        io.write_run_record(
            out / "run_bound.json",
            "bound",
            {"m": spec.m, "p": spec.p, "n": spec.n, "beta": spec.beta, "value": value},
            {},
            [],
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csmask",
        description="Learn, sample and evaluate k-space sub-sampling masks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file with per-command sections")
        p.add_argument("--out", help=f"output directory (env {OUT_ENV} as fallback)")

    p = sub.add_parser("ingest", help="turn raw 3D k-space volumes into slice sets")
    p.add_argument("--input", help="directory of per-patient volume files")
    p.add_argument("--tau", type=float, help="slice energy threshold (default 0.05)")
    p.add_argument(
        "--train-patients",
        dest="train_patients",
        type=int,
        help="also write train/test manifests with this many training patients",
    )
    add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("learn", help="learn a mask from a training manifest")
    p.add_argument("--train", help="training manifest")
    p.add_argument("--n", type=int, help="sample budget")
    p.add_argument("--rate", type=float, help="sampling rate in (0, 1]")
    p.add_argument("--label", help="output name suffix (default learned)")
    p.add_argument(
        "--unnormalized",
        action="store_true",
        help="skip per-signal energy normalization (comparison mode)",
    )
    add_common(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("baseline", help="tune a variable-density random mask")
    p.add_argument("--train", help="training manifest")
    p.add_argument("--n", type=int, help="sample budget")
    p.add_argument("--rate", type=float, help="sampling rate in (0, 1]")
    p.add_argument("--grid-r", dest="grid_r", help="comma-separated radii in [0, 1]")
    p.add_argument("--grid-d", dest="grid_d", help="comma-separated degrees >= 0")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--label", help="output name suffix (default baseline)")
    add_common(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("evaluate", help="score a mask against a test manifest")
    p.add_argument("--mask", help="mask JSON file")
    p.add_argument("--test", help="test manifest")
    p.add_argument("--images", type=int, help="write this many reconstruction PNGs")
    p.add_argument("--label", help="report basename (default report)")
    add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bound", help="print the captured-energy gap bound")
    p.add_argument("--m", type=int, help="number of training signals")
    p.add_argument("--p", type=int, help="ambient dimension")
    p.add_argument("--n", type=int, help="sample budget")
    p.add_argument("--beta", type=float, help="confidence parameter in (0, 1)")
    add_common(p)
    p.set_defaults(func=cmd_bound)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CsmaskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
