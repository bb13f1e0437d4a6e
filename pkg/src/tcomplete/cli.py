"""Command-line interface: synthesize, complete, inpaint, benchmark, inspect.

Every command prints its fully resolved configuration as a JSON line before
any computation starts, so a result can be reproduced from its log alone.

Exit codes: 0 success, 2 usage error, 3 data error (unreadable or invalid
files), 4 numerical failure inside a solver.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .admm import AdmmConfig, solve_admm, write_history_csv
from .benchmark import ExperimentSpec, read_rows, run_sweep, write_rows
from .cur import IcurcConfig, tccur, write_slice_history_csv
from .errors import (
    CompletionError,
    DimensionMismatch,
    NumericalFailure,
    UnsupportedFormat,
)
from .metrics import psnr, relative_error, synth_low_tubal_rank
from .sampling import load_mask, project, random_tubal_mask, save_mask
from .tensor_io import T3B_MAGIC, load_image, load_tensor, save_image, save_tensor
from .tensor_ops import tubal_rank

EPILOG = (
    "Linear-algebra thread count follows the usual numpy environment "
    "variables (OMP_NUM_THREADS, OPENBLAS_NUM_THREADS); set them before "
    "launching for reproducible timings."
)


def _print_config(command, payload):
    print(json.dumps({"command": command, **payload}, sort_keys=True))


def _print_result(payload):
    print(json.dumps({"result": payload}, sort_keys=True))


def _add_method_flags(p):
    g = p.add_argument_group("method selection")
    g.add_argument(
        "--method", choices=("tnn", "tl12", "tccur"), default="tnn", help="completion method"
    )
    g.add_argument("--max-iters", type=int, default=500, help="iteration cap (all methods)")
    a = p.add_argument_group("spectral-shrinkage options (tnn, tl12)")
    a.add_argument("--rho", type=float, default=1e-2, help="penalty parameter")
    a.add_argument(
        "--lambda", dest="lambda_weight", type=float, default=1.0, help="regularization weight"
    )
    a.add_argument("--tol", type=float, default=1e-6, help="relative-change stopping tolerance")
    a.add_argument(
        "--rho-growth", action="store_true", help="grow the penalty 5%% per iteration (capped)"
    )
    c = p.add_argument_group("cross-approximation options (tccur)")
    c.add_argument("--rank", type=int, help="target tubal rank (required for tccur)")
    c.add_argument("--core-rows", type=int, help="row index-set size (default: oversampled)")
    c.add_argument("--core-cols", type=int, help="column index-set size")
    c.add_argument("--eps", type=float, default=1e-6, help="observed-residual stopping tolerance")


def _add_mask_flags(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--mask", help="tubal mask file")
    g.add_argument("--ratio", type=float, help="sampling ratio for a random tubal mask")
    p.add_argument("--seed", type=int, default=0, help="seed for mask drawing and tccur resampling")
    p.add_argument("--save-mask", help="write the mask actually used to this file")


def _resolve_mask(args, n1, n2):
    if args.mask is not None:
        mask = load_mask(args.mask)
        if (mask.n1, mask.n2) != (n1, n2):
            raise DimensionMismatch(
                f"mask is {mask.n1}x{mask.n2} but data is {n1}x{n2}"
            )
    else:
        mask = random_tubal_mask(n1, n2, args.ratio, args.seed)
    if args.save_mask:
        save_mask(args.save_mask, mask)
    return mask


def _method_config(args, n1, n2):
    """Build the solver config; returns (kind, cfg, jsonable description)."""
    if args.method in ("tnn", "tl12"):
        cfg = AdmmConfig(
            regularizer=args.method,
            rho=args.rho,
            lambda_weight=args.lambda_weight,
            tol=args.tol,
            max_iters=args.max_iters,
            rho_growth=args.rho_growth,
        )
        return "admm", cfg, asdict(cfg)
    if args.rank is None:
        raise ValueError("--method tccur requires --rank")
    cfg = IcurcConfig(
        rank=args.rank,
        eps=args.eps,
        max_iters=args.max_iters,
        seed=args.seed,
        row_count=args.core_rows,
        col_count=args.core_cols,
    ).resolved(n1, n2)
    desc = asdict(cfg)
    desc["rows"] = list(cfg.rows)
    desc["cols"] = list(cfg.cols)
    return "cur", cfg, desc


def _run_solver(kind, cfg, y, mask, truth=None):
    """Run the chosen solver; returns (estimate, stats dict, history writer)."""
    start = time.perf_counter()
    if kind == "admm":
        estimate, state = solve_admm(y, mask, cfg, truth=truth)
        elapsed = time.perf_counter() - start
        stats = {"iters": state.iters, "converged": state.converged, "time_s": elapsed}
        return estimate, stats, lambda path: write_history_csv(path, state.history)
    result = tccur(y, mask, cfg)
    elapsed = time.perf_counter() - start
    stats = {
        "iters": int(result.iters.max()),
        "converged": result.converged,
        "time_s": elapsed,
    }
    return result.estimate, stats, lambda path: write_slice_history_csv(path, result.histories)


def _cmd_synth(args):
    n1, n2, n3 = args.dims
    _print_config(
        "synth",
        {"output": args.output, "dims": [n1, n2, n3], "rank": args.rank, "seed": args.seed},
    )
    if args.rank < 1 or args.rank > min(n1, n2):
        raise ValueError(f"rank {args.rank} out of range for dims {args.dims}")
    x = synth_low_tubal_rank(n1, n2, n3, args.rank, args.seed)
    save_tensor(args.output, x)
    _print_result({"output": args.output, "fro_norm": float(np.linalg.norm(x))})
    return 0


def _cmd_complete(args):
    x_full = load_tensor(args.input)
    n1, n2, n3 = x_full.shape
    mask = _resolve_mask(args, n1, n2)
    kind, cfg, desc = _method_config(args, n1, n2)
    _print_config(
        "complete",
        {
            "input": args.input,
            "output": args.output,
            "dims": [n1, n2, n3],
            "mask_count": mask.count,
            "mask_ratio": mask.ratio,
            "seed": args.seed,
            "method": args.method,
            "method_config": desc,
        },
    )
    truth = load_tensor(args.truth) if args.truth else None
    y = project(x_full, mask)
    estimate, stats, dump_history = _run_solver(kind, cfg, y, mask, truth=truth)
    save_tensor(args.output, estimate)
    if args.history:
        dump_history(args.history)
    if truth is not None:
        stats["re"] = relative_error(estimate, truth)
        stats["psnr"] = psnr(estimate, truth)
    _print_result(stats)
    return 0


def _cmd_inpaint(args):
    image = load_image(args.input)
    n1, n2, n3 = image.shape
    mask = _resolve_mask(args, n1, n2)
    kind, cfg, desc = _method_config(args, n1, n2)
    _print_config(
        "inpaint",
        {
            "input": args.input,
            "output": args.output,
            "dims": [n1, n2, n3],
            "mask_count": mask.count,
            "mask_ratio": mask.ratio,
            "seed": args.seed,
            "method": args.method,
            "method_config": desc,
        },
    )
    if mask.is_full():
        # nothing is missing; the completion is the input itself
        estimate = image.copy()
        stats = {"iters": 0, "converged": True, "time_s": 0.0}
        dump_history = None
    else:
        y = project(image, mask)
        estimate, stats, dump_history = _run_solver(kind, cfg, y, mask)
    save_image(args.output, estimate)
    if args.history and dump_history is not None:
        dump_history(args.history)
    stats["psnr"] = psnr(estimate, image)  # pre-clamp, against the original
    _print_result(stats)
    return 0


def _cmd_bench(args):
    try:
        spec = ExperimentSpec.from_json(Path(args.spec).read_text())
    except (ValueError, TypeError) as exc:
        raise UnsupportedFormat(f"bad experiment spec {args.spec}: {exc}") from exc
    _print_config("bench", {"spec": args.spec, "output": args.output, **asdict(spec)})
    done = set()
    header = True
    mode = "w"
    out = Path(args.output)
    if args.resume and out.exists():
        with open(out) as fh:
            for row in read_rows(fh):
                done.add((row.method, row.ratio, row.trial))
        if done:
            header = False
            mode = "a"
    todo = (
        row
        for row in run_sweep(spec)
        if (row.method, row.ratio, row.trial) not in done
    )
    n_done = 0
    with open(out, mode, newline="") as fh:
        for row in write_rows(fh, todo, header=header):
            n_done += 1
            status = "failed" if row.failed else f"re={row.re:.3e} psnr={row.psnr:.2f}"
            print(f"{row.method} ratio={row.ratio} trial={row.trial} {status}", file=sys.stderr)
    _print_result({"rows_written": n_done, "rows_skipped": len(done), "output": args.output})
    return 0


def _cmd_info(args):
    path = args.path
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head[:4] == T3B_MAGIC:
        a = load_tensor(path)
        ranks, rank = tubal_rank(a)
        payload = {
            "format": "t3b",
            "dims": list(a.shape),
            "fro_norm": float(np.linalg.norm(a)),
            "abs_max": float(np.abs(a).max()),
            "tubal_rank": rank,
            "multi_rank": [int(r) for r in ranks],
        }
    elif head[:8] == b"\x89PNG\r\n\x1a\n":
        a = load_image(path)
        payload = {
            "format": "png",
            "dims": list(a.shape),
            "value_range": [float(a.min()), float(a.max())],
        }
    else:
        mask = load_mask(path)
        payload = {
            "format": "mask",
            "dims": [mask.n1, mask.n2],
            "count": mask.count,
            "ratio": mask.ratio,
        }
    print(json.dumps(payload, sort_keys=True))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tcomplete",
        description="Low-tubal-rank tensor completion under tubal sampling.",
        epilog=EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic low-tubal-rank tensor")
    p.add_argument("output", help="output tensor file (T3B)")
    p.add_argument("--dims", type=int, nargs=3, required=True, metavar=("N1", "N2", "N3"))
    p.add_argument("--rank", type=int, required=True, help="target tubal rank")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("complete", help="complete a tensor from tubally sampled entries")
    p.add_argument("input", help="tensor file (T3B); entries off the mask are ignored")
    p.add_argument("output", help="completed tensor file (T3B)")
    _add_mask_flags(p)
    _add_method_flags(p)
    p.add_argument("--truth", help="ground-truth tensor file for error reporting")
    p.add_argument("--history", help="write per-iteration convergence CSV here")
    p.set_defaults(func=_cmd_complete)

    p = sub.add_parser("inpaint", help="complete missing pixels of an RGB image")
    p.add_argument("input", help="input image (PNG)")
    p.add_argument("output", help="output image (PNG)")
    _add_mask_flags(p)
    _add_method_flags(p)
    p.add_argument("--history", help="write per-iteration convergence CSV here")
    p.set_defaults(func=_cmd_inpaint)

    p = sub.add_parser("bench", help="run a sweep described by a JSON experiment spec")
    p.add_argument("spec", help="experiment spec (JSON)")
    p.add_argument("output", help="metrics CSV")
    p.add_argument("--resume", action="store_true", help="skip rows already in the output")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("info", help="describe a tensor, image, or mask file")
    p.add_argument("path")
    p.set_defaults(func=_cmd_info)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (CompletionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
