"""``infft-bench``: run one experiment and write its rows as CSV.

Exit status is 0 on success, 2 for an invalid configuration and 3 when a
requested size exceeds the desk-scale caps (see ``--unsafe-large``).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import itertools
import json
import os
import subprocess
import sys
from pathlib import Path

from . import bench, nfft
from .errors import InfftError, InvalidParameter, SizeLimitExceeded

EXIT_CONFIG = 2
EXIT_SIZE = 3


def _git_hash() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "--short", "HEAD"], cwd=Path(__file__).resolve().parent,
                             capture_output=True, text=True, timeout=5, check=True)
    except (OSError, subprocess.SubprocessError):
        return ""
    return out.stdout.strip()


def _timestamp(stamp: bool) -> str:
    """``SOURCE_DATE_EPOCH`` if set, the current UTC time with ``--stamp``, else empty."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        t = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc)
    elif stamp:
        t = _dt.datetime.now(_dt.timezone.utc)
    else:
        return ""
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def _options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("sizes")
    g.add_argument("--n", type=int, help="fixed number of nodes (or the single N of a sweep)")
    g.add_argument("--M", type=int, nargs="+", help="bandwidth(s); even")
    g.add_argument("--n-min", type=int, help="smallest exponent c of the swept size 2^c")
    g.add_argument("--n-max", type=int, help="largest exponent c of the swept size 2^c")
    g.add_argument("--n-fixed", type=int, help="size held fixed in the second sweep")
    g = p.add_argument_group("method")
    g.add_argument("--nodes", help=f"node family: {', '.join(bench.NODE_KINDS)} (cond also accepts 'all')")
    g.add_argument("--window", choices=["bspline", "gaussian", "kaiser_bessel", "sinc"])
    g.add_argument("--kernel", choices=["window", "dirichlet", "both"])
    g.add_argument("--sigma", type=float, help="oversampling factor")
    g.add_argument("--m", type=int, help="window cut-off of the first sweep")
    g.add_argument("--m-list", type=int, nargs="+", help="window cut-offs")
    g.add_argument("--p", type=int, help="fast-summation smoothness of the first sweep")
    g.add_argument("--p-list", type=int, nargs="+", help="smoothness values m = p of the second sweep")
    g.add_argument("--factor", type=int, help="aspect ratio of the rectangular sweeps")
    g.add_argument("--ridge", type=float, help="Tikhonov weight for rank-deficient columns")
    g.add_argument("--algorithm", choices=["under", "over", "both"])
    g = p.add_argument_group("run")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="CSV path (default stdout)")
    g.add_argument("--unsafe-large", action="store_true", default=None, help="lift the desk-scale size caps")
    g.add_argument("--stamp", action="store_true", default=None, help="write the current UTC time into the timestamp column")
    g.add_argument("--config", help="JSON file whose keys mirror the long flags (command line wins)")
    return p


OPTION_KEYS = frozenset(a.dest for a in _options()._actions) - {"config"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infft-bench", description="Direct inverse NFFT experiments, CSV output.")
    p.add_argument("--list", action="store_true", help="list the experiments and exit")
    sub = p.add_subparsers(dest="command", metavar="experiment")
    opts = _options()
    for name, (_, text) in bench.EXPERIMENTS.items():
        sub.add_parser(name, parents=[opts], help=text, description=text)
    return p


_DEST_DEFAULTS = {"seed": 0, "unsafe_large": False, "stamp": False}


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParameter(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise InvalidParameter("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def _resolve(args: argparse.Namespace, known=OPTION_KEYS) -> dict:
    opts = {}
    if args.config:
        cfg = _load_config(args.config)
        cfg.pop("command", None)
        unknown = set(cfg) - known
        if unknown:
            raise InvalidParameter(f"unknown config keys: {sorted(unknown)}")
        opts.update(cfg)
    for k in known:
        v = getattr(args, k, None)
        if v is not None:
            opts[k] = v
    for k, v in _DEST_DEFAULTS.items():
        opts.setdefault(k, v)
    if "M" in opts and isinstance(opts["M"], int):
        opts["M"] = [opts["M"]]
    return opts


def _command_from_config(argv):
    # allow `infft-bench --config run.json` with the experiment named inside the file
    if "--config" not in argv or any(a in bench.EXPERIMENTS for a in argv):
        return argv
    path = argv[argv.index("--config") + 1] if argv.index("--config") + 1 < len(argv) else None
    if path is None:
        return argv
    cmd = _load_config(path).get("command")
    return [cmd, *argv] if cmd else argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _command_from_config(argv)
        args = parser.parse_args(argv)
    except InvalidParameter as exc:
        print(f"infft-bench: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.list:
        width = max(map(len, bench.EXPERIMENTS))
        for name, (_, text) in bench.EXPERIMENTS.items():
            print(f"{name:<{width}}  {text}")
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG

    try:
        opts = _resolve(args)
        out_path = opts.pop("out", None)
        stamp = opts.pop("stamp")
        unsafe = opts.pop("unsafe_large")
        if unsafe:
            nfft.DENSE_LIMIT = 2**62
        warn = lambda msg: print(f"infft-bench: warning: {msg}", file=sys.stderr)  # noqa: E731
        rows = bench.run(args.command, unsafe=unsafe, warn=warn, **opts)
        # surface configuration errors before anything is written
        first = next(rows, None)
        rows = itertools.chain([] if first is None else [first], rows)
        git, ts = _git_hash(), _timestamp(stamp)
        fh = open(out_path, "w", newline="", encoding="utf-8") if out_path else sys.stdout
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(bench.CSV_HEADER)
            for rec in rows:
                w.writerow(rec.row(git, ts))
                fh.flush()
        finally:
            if out_path:
                fh.close()
    except SizeLimitExceeded as exc:
        print(f"infft-bench: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except InfftError as exc:
        print(f"infft-bench: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
