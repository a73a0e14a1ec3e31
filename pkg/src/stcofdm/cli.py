"""Command line entry point: ``stcofdm <subcommand> [options]``.

Options may also come from a ``key=value`` config file (``--config``); flags
given on the command line win over file values.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .harness import Experiment, ExperimentSpec, run, transmit_file
from .modem import Scheme

# per-subcommand defaults that differ from ExperimentSpec
SUBCOMMAND_DEFAULTS = {
    "ber": {},
    "papr": {"mu_values": [0.0]},
    "psd": {},
    "mulaw": {"schemes": [Scheme.DUAL_STC], "ebn0_range": [float(x) for x in range(21)]},
    "complexity": {},
}

INT_KEYS = {"n_loops", "n_symbols", "seed", "n_frames", "oversample", "psd_samples",
            "segment_len", "workers"}
FLOAT_KEYS = {"bw_fraction", "target_ber"}
BOOL_KEYS = {"deep"}


def parse_range(text: str) -> list[float]:
    """``"0:1:12"`` (start:step:stop, inclusive) or ``"0,2,4.5"``."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) == 2:
            start, stop, step = parts[0], parts[1], 1.0
        elif len(parts) == 3:
            start, step, stop = parts
        else:
            raise ValueError(f"bad range {text!r}")
        if step <= 0:
            raise ValueError(f"range step must be positive: {text!r}")
        n = int(round((stop - start) / step))
        return [round(start + i * step, 10) for i in range(n + 1)]
    return [float(p) for p in text.split(",") if p.strip()]


def _convert(key: str, value: str):
    if key == "schemes":
        return [Scheme.parse(s) for s in value.split(",") if s.strip()]
    if key in ("ebn0_range", "mu_values"):
        return parse_range(value)
    if key == "n_values":
        return [int(v) for v in value.split(",") if v.strip()]
    if key in INT_KEYS:
        return int(value)
    if key in FLOAT_KEYS:
        return float(value)
    if key in BOOL_KEYS:
        return value.strip().lower() in ("1", "true", "yes", "on")
    return value


def read_config(path) -> dict:
    """Parse a ``key=value`` file; ``#`` starts a comment, keys may use dashes."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "mu":
            key = "mu_values"
        if key == "out":
            key = "output_path"
        values[key] = _convert(key, value)
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file with ExperimentSpec fields")
    p.add_argument("--schemes", help="comma list: ofdm,fast,stc,dual")
    p.add_argument("--ebn0-range", help='Eb/N0 list in dB, "start:step:stop" or "a,b,c"')
    p.add_argument("--n-loops", type=int)
    p.add_argument("--n-symbols", type=int, help="frames per loop")
    p.add_argument("--mu", help="mu-law values, comma list")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--n-frames", type=int, help="frames per PAPR curve")
    p.add_argument("--oversample", type=int)
    p.add_argument("--psd-samples", type=int)
    p.add_argument("--segment-len", type=int)
    p.add_argument("--target-ber", type=float)
    p.add_argument("--n-values", help="FFT sizes for the complexity table")
    p.add_argument("--workers", type=int)
    p.add_argument("--deep", action="store_true", default=None,
                   help="long run (~1e8 bits per BER point)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stcofdm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("ber", "BER versus Eb/N0 sweep"),
        ("papr", "PAPR CCDF per scheme"),
        ("psd", "power spectral density and occupied bandwidth"),
        ("mulaw", "mu-law PAPR/BER trade-off"),
        ("complexity", "multiplication/addition count table"),
    ]:
        _add_common(sub.add_parser(name, help=help_text))
    sf = sub.add_parser("sendfile", help="send file(s) through a chain")
    sf.add_argument("inputs", nargs="+", help="one file, or two for --scheme dual")
    sf.add_argument("--scheme", default="ofdm")
    sf.add_argument("--ebn0", type=float, default=30.0)
    sf.add_argument("--mu", type=float, default=0.0)
    sf.add_argument("--seed", type=int, default=0)
    sf.add_argument("--out", help="directory for received files and the report")
    return parser


FLAG_TO_FIELD = {
    "schemes": "schemes", "ebn0_range": "ebn0_range", "n_loops": "n_loops",
    "n_symbols": "n_symbols", "mu": "mu_values", "seed": "seed", "out": "output_path",
    "n_frames": "n_frames", "oversample": "oversample", "psd_samples": "psd_samples",
    "segment_len": "segment_len", "target_ber": "target_ber", "n_values": "n_values",
    "workers": "workers", "deep": "deep",
}


def spec_from_args(args) -> ExperimentSpec:
    values = dict(SUBCOMMAND_DEFAULTS[args.command])
    if args.config:
        values.update(read_config(args.config))
    for flag, fieldname in FLAG_TO_FIELD.items():
        v = getattr(args, flag)
        if v is None:
            continue
        values[fieldname] = _convert(fieldname, v) if isinstance(v, str) else v
    values["experiment"] = Experiment(args.command)
    values.setdefault("output_path", "results")
    return ExperimentSpec(**values)


def _sendfile(args) -> int:
    if len(args.inputs) > 2:
        raise ValueError("at most two input files")
    report = transmit_file(
        args.inputs[0], args.inputs[1] if len(args.inputs) > 1 else None,
        scheme=args.scheme, ebn0_db=args.ebn0, seed=args.seed, out_dir=args.out, mu=args.mu,
    )
    print(f"scheme={report.scheme} Eb/N0={report.ebn0_db:g} dB frames={report.frames} "
          f"pad_bits={report.pad_bits}")
    if report.note:
        print(f"note: {report.note}")
    for src in report.sources:
        print(f"{src.input_path} -> {src.output_path}: BER {src.ber:.3e} "
              f"({src.errors}/{src.bits}) byte_exact={src.byte_exact}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "sendfile":
            return _sendfile(args)
        spec = spec_from_args(args)
        records = run(spec)
        print(f"{spec.experiment.value}: {len(records)} records written to {spec.output_path}")
        return 0
    except (OSError, ValueError) as exc:
        print(f"stcofdm: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
