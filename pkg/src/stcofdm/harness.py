"""Monte Carlo experiments and their CSV outputs.

Each experiment takes an :class:`ExperimentSpec`, returns a list of
:class:`MetricRecord` rows and, when the experiment spec names an output directory,
writes them as comma-separated files alongside a plain-text manifest.

Randomness is derived per task from ``SeedSequence`` entropy built out of the
base seed and the task coordinates (scheme, mu, Eb/N0, loop), so results do
not depend on which other schemes were requested or on the worker count.
"""
from __future__ import annotations

import csv
import dataclasses
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__
from .channel import awgn, noise_sigma
from .compander import mu_compress, mu_expand
from .metrics import (
    COMPLEXITY_LABELS,
    COMPLEXITY_ROWS,
    ccdf,
    ccdf_crossing,
    complexity_counts,
    occupied_bandwidth,
    papr_db,
    psd_welch,
    snr_at_ber,
    wilson_interval,
)
from .modem import Scheme, SchemeConfig, TimeFrame, body_samples, receive, transmit

log = logging.getLogger(__name__)

SCHEME_ORDER = (Scheme.OFDM, Scheme.FAST_OFDM, Scheme.STC_OFDM, Scheme.DUAL_STC)
DEEP_BITS = 10**8


class Experiment(str, Enum):
    BER_SWEEP = "ber"
    PAPR_CCDF = "papr"
    PSD = "psd"
    MULAW_TRADEOFF = "mulaw"
    COMPLEXITY_TABLE = "complexity"
    FILE_TX = "sendfile"


@dataclass
class ExperimentSpec:
    experiment: Experiment = Experiment.BER_SWEEP
    schemes: list = field(default_factory=lambda: list(SCHEME_ORDER))
    ebn0_range: list = field(default_factory=lambda: [float(x) for x in range(13)])
    n_loops: int = 100
    n_symbols: int = 1000
    mu_values: list = field(default_factory=lambda: [0.0, 1.0, 4.0, 10.0, 100.0])
    seed: int = 0
    output_path: str = ""
    # experiment-specific knobs
    n_frames: int = 100_000
    oversample: int = 1
    psd_samples: int = 1_000_000
    segment_len: int = 1024
    bw_fraction: float = 0.99
    target_ber: float = 1e-4
    n_values: list = field(default_factory=lambda: [64, 128, 256])
    deep: bool = False
    workers: int = 1

    def __post_init__(self):
        self.experiment = Experiment(self.experiment)
        self.schemes = [Scheme.parse(s) for s in self.schemes]
        self.ebn0_range = [float(x) for x in self.ebn0_range]
        self.mu_values = [float(x) for x in self.mu_values]
        self.n_values = [int(x) for x in self.n_values]
        if self.n_loops < 1 or self.n_symbols < 1:
            raise ValueError("n_loops and n_symbols must be >= 1")
        if self.n_frames < 1:
            raise ValueError("n_frames must be >= 1")
        if any(m < 0 for m in self.mu_values):
            raise ValueError("mu values must be >= 0")


@dataclass(frozen=True)
class MetricRecord:
    experiment: str
    scheme: str
    metric: str
    abscissa: float
    value: float
    trials: int = 0
    errors: int = 0
    ci_low: float = float("nan")
    ci_high: float = float("nan")
    mu: float = 0.0


RECORD_FIELDS = [f.name for f in dataclasses.fields(MetricRecord)]


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


class RecordWriter:
    """CSV writer that flushes after every row batch."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "w", newline="")
        self._csv = csv.writer(self._fh, lineterminator="\n")
        self._csv.writerow(RECORD_FIELDS)

    def write(self, records: Iterable[MetricRecord]) -> None:
        for r in records:
            self._csv.writerow([_fmt(getattr(r, name)) for name in RECORD_FIELDS])
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_records(path, records: Iterable[MetricRecord]) -> Path:
    with RecordWriter(path) as w:
        w.write(records)
    return Path(path)


def read_records(path) -> list[MetricRecord]:
    types = {f.name: f.type for f in dataclasses.fields(MetricRecord)}
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            kw = {}
            for k, v in row.items():
                t = types[k]
                kw[k] = int(v) if t in ("int", int) else float(v) if t in ("float", float) else v
            out.append(MetricRecord(**kw))
    return out


def write_manifest(out_dir, spec: ExperimentSpec, extra: dict | None = None) -> Path:
    path = Path(out_dir) / f"manifest_{spec.experiment.value}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# stcofdm {__version__}"]
    for k, v in dataclasses.asdict(spec).items():
        if k in ("workers", "output_path"):
            continue  # do not affect results
        lines.append(f"{k}={_spec_value(v)}")
    for k, v in (extra or {}).items():
        lines.append(f"{k}={v}")
    path.write_text("\n".join(lines) + "\n")
    return path


def _spec_value(v) -> str:
    if isinstance(v, Enum):
        return str(v.value)
    if isinstance(v, list):
        return ",".join(_spec_value(x) for x in v)
    return _fmt(v)


# -- seeding ------------------------------------------------------------------


def _scheme_index(scheme: Scheme) -> int:
    return SCHEME_ORDER.index(scheme)


def _milli(x: float) -> int:
    return int(round(x * 1000)) + 10**6  # SeedSequence wants non-negative words


def task_seed(seed: int, *coords) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *coords])


# -- one Monte Carlo point ------------------------------------------------------


def simulate_batch(cfg: SchemeConfig, n_frames: int, ebn0_db: float, rng: np.random.Generator,
                   mu: float = 0.0):
    """Generate, transmit, add noise and receive one batch. Returns (sent, received)."""
    bits = rng.integers(0, 2, size=(n_frames, cfg.bits_per_frame), dtype=np.uint8)
    frame = transmit(bits, cfg)
    frame = mu_compress(frame, mu)
    power = float(np.mean(np.abs(body_samples(frame, cfg)) ** 2))
    sigma = noise_sigma(ebn0_db, power, cfg.bits_per_frame, cfg.useful_samples)
    noisy = awgn(frame, sigma, rng)
    noisy = mu_expand(noisy, mu)
    return bits, receive(noisy, cfg)


def _ber_point(task) -> tuple[int, int]:
    cfg, ebn0_db, mu, n_loops, n_symbols, seed = task
    errors = total = 0
    s_idx = _scheme_index(cfg.scheme)
    for loop in range(n_loops):
        rng = np.random.default_rng(task_seed(seed, s_idx, _milli(mu), _milli(ebn0_db), loop))
        sent, got = simulate_batch(cfg, n_symbols, ebn0_db, rng, mu)
        errors += int(np.count_nonzero(sent != got))
        total += sent.size
    return errors, total


def _map(func, tasks: list, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        yield from map(func, tasks)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(func, tasks)


def _ber_record(experiment: str, scheme: Scheme, ebn0: float, errors: int, total: int,
                mu: float) -> MetricRecord:
    lo, hi = wilson_interval(errors, total)
    return MetricRecord(experiment, scheme.value, "ber", ebn0, errors / total, total, errors,
                        lo, hi, mu)


def _deep_loops(spec: ExperimentSpec, cfg: SchemeConfig) -> int:
    if not spec.deep:
        return spec.n_loops
    need = math.ceil(DEEP_BITS / (spec.n_symbols * cfg.bits_per_frame))
    return max(spec.n_loops, need)


def _ber_curves(spec, points, experiment, writer=None) -> list[MetricRecord]:
    """Run (scheme, mu, ebn0) points in order; rows are flushed as they complete."""
    tasks = []
    for scheme, mu, ebn0 in points:
        cfg = SchemeConfig.default(scheme, mu=mu)
        tasks.append((cfg, ebn0, mu, _deep_loops(spec, cfg), spec.n_symbols, spec.seed))
    records = []
    for (scheme, mu, ebn0), (errors, total) in zip(points, _map(_ber_point, tasks, spec.workers)):
        rec = _ber_record(experiment, scheme, ebn0, errors, total, mu)
        log.info("%s mu=%g Eb/N0=%.2f dB: BER %.3e (%d/%d)", scheme.value, mu, ebn0,
                 rec.value, errors, total)
        records.append(rec)
        if writer is not None:
            writer.write([rec])
    return records


def _ber_points(spec: ExperimentSpec) -> list:
    ebn0 = list(spec.ebn0_range)
    if spec.deep and 10.5 not in ebn0:
        ebn0 = sorted(ebn0 + [10.5])
    return ebn0


def run_ber_sweep(spec: ExperimentSpec) -> list[MetricRecord]:
    """BER versus Eb/N0 for every requested scheme (mu from the scheme config)."""
    points = [(s, 0.0, e) for s in spec.schemes for e in _ber_points(spec)]
    if not spec.output_path:
        return _ber_curves(spec, points, Experiment.BER_SWEEP.value)
    out = Path(spec.output_path)
    with RecordWriter(out / "ber.csv") as w:
        records = _ber_curves(spec, points, Experiment.BER_SWEEP.value, w)
    write_manifest(out, spec)
    return records


# -- PAPR -------------------------------------------------------------------------

PAPR_BATCH = 10_000


def papr_samples(cfg: SchemeConfig, n_frames: int, seed: int, mu: float = 0.0,
                 oversample: int = 1) -> np.ndarray:
    out = np.empty(n_frames)
    s_idx = _scheme_index(cfg.scheme)
    for b, start in enumerate(range(0, n_frames, PAPR_BATCH)):
        n = min(PAPR_BATCH, n_frames - start)
        rng = np.random.default_rng(task_seed(seed, s_idx, _milli(mu), 7, b))
        bits = rng.integers(0, 2, size=(n, cfg.bits_per_frame), dtype=np.uint8)
        frame = mu_compress(transmit(bits, cfg), mu)
        out[start:start + n] = papr_db(frame, oversample)
    return out


def _papr_task(task):
    cfg, n_frames, seed, mu, oversample = task
    return papr_samples(cfg, n_frames, seed, mu, oversample)


def _ccdf_records(experiment, scheme: Scheme, mu: float, values: np.ndarray,
                  probability: float = 1e-3) -> list[MetricRecord]:
    thresholds, prob = ccdf(values)
    n = values.size
    rows = [MetricRecord(experiment, scheme.value, "ccdf", round(float(t), 10), float(p), n,
                         int(round(p * n)), mu=mu)
            for t, p in zip(thresholds, prob)]
    rows.append(MetricRecord(experiment, scheme.value, f"papr_db_at_{probability:g}",
                             probability, ccdf_crossing(values, probability), n, mu=mu))
    return rows


def run_papr_experiment(spec: ExperimentSpec) -> list[MetricRecord]:
    """CCDF of PAPR for each scheme and each mu in ``spec.mu_values``."""
    combos = [(s, mu) for s in spec.schemes for mu in spec.mu_values]
    tasks = [(SchemeConfig.default(s, mu=mu), spec.n_frames, spec.seed, mu, spec.oversample)
             for s, mu in combos]
    records = []
    for (s, mu), values in zip(combos, _map(_papr_task, tasks, spec.workers)):
        records.extend(_ccdf_records(Experiment.PAPR_CCDF.value, s, mu, values))
    if spec.output_path:
        write_records(Path(spec.output_path) / "papr.csv", records)
        write_manifest(spec.output_path, spec)
    return records


def papr_summary(records: Iterable[MetricRecord], probability: float = 1e-3) -> dict:
    """``{(scheme, mu): PAPR at probability}`` from CCDF records."""
    name = f"papr_db_at_{probability:g}"
    return {(r.scheme, r.mu): r.value for r in records if r.metric == name}


# -- PSD --------------------------------------------------------------------------


def psd_capture(cfg: SchemeConfig, n_samples: int, seed: int, segment_len: int = 1024):
    n_frames = -(-n_samples // cfg.frame_length)
    rng = np.random.default_rng(task_seed(seed, _scheme_index(cfg.scheme), _milli(cfg.mu), 11))
    bits = rng.integers(0, 2, size=(n_frames, cfg.bits_per_frame), dtype=np.uint8)
    frame = mu_compress(transmit(bits, cfg), cfg.mu)
    stream = frame.samples.ravel()
    return psd_welch(stream, cfg.sampling_rate, segment_len), stream


def run_psd_experiment(spec: ExperimentSpec) -> list[MetricRecord]:
    """PSD per scheme plus one occupied-bandwidth summary row per scheme."""
    records, summary = [], []
    for s in spec.schemes:
        cfg = SchemeConfig.default(s)
        est, stream = psd_capture(cfg, spec.psd_samples, spec.seed, spec.segment_len)
        rows = [MetricRecord(Experiment.PSD.value, s.value, "psd_db_per_hz", float(f), float(p),
                             stream.size)
                for f, p in zip(est.freqs, est.power_db)]
        records.extend(rows)
        bw = occupied_bandwidth(est, spec.bw_fraction)
        summary.append(MetricRecord(Experiment.PSD.value, s.value,
                                    f"occupied_bw_hz_{spec.bw_fraction:g}", spec.bw_fraction,
                                    bw, stream.size))
        if spec.output_path:
            write_records(Path(spec.output_path) / f"psd_{s.value}.csv", rows)
    if spec.output_path:
        write_records(Path(spec.output_path) / "psd_summary.csv", summary)
        write_manifest(spec.output_path, spec)
    return records + summary


# -- mu-law trade-off --------------------------------------------------------------


def run_mulaw_tradeoff(spec: ExperimentSpec) -> list[MetricRecord]:
    """PAPR improvement and Eb/N0 penalty of mu-law companding on dual-STC.

    The baseline is conventional OFDM without companding. PAPR is read at the
    CCDF 1e-3 point, the penalty at ``spec.target_ber`` (1e-6 in deep mode).
    """
    exp = Experiment.MULAW_TRADEOFF.value
    target = 1e-6 if spec.deep else spec.target_ber
    schemes = [Scheme.DUAL_STC] if not spec.schemes else [
        s for s in spec.schemes if s is not Scheme.OFDM] or [Scheme.DUAL_STC]
    combos = [(Scheme.OFDM, 0.0)] + [(s, mu) for s in schemes for mu in spec.mu_values]

    tasks = [(SchemeConfig.default(s, mu=mu), spec.n_frames, spec.seed, mu, spec.oversample)
             for s, mu in combos]
    paprs = {}
    records = []
    for (s, mu), values in zip(combos, _map(_papr_task, tasks, spec.workers)):
        paprs[(s, mu)] = ccdf_crossing(values, 1e-3)
        records.extend(_ccdf_records(exp, s, mu, values))

    points = [(s, mu, e) for s, mu in combos for e in _ber_points(spec)]
    ber_rows = _ber_curves(spec, points, exp)
    records.extend(ber_rows)

    def curve(s, mu):
        rows = [r for r in ber_rows if r.scheme == s.value and r.mu == mu]
        return [r.abscissa for r in rows], [r.value for r in rows]

    base_papr = paprs[(Scheme.OFDM, 0.0)]
    base_snr = snr_at_ber(*curve(Scheme.OFDM, 0.0), target)
    for s, mu in combos[1:]:
        snr = snr_at_ber(*curve(s, mu), target)
        records.append(MetricRecord(exp, s.value, "papr_improvement_db", mu,
                                    base_papr - paprs[(s, mu)], spec.n_frames, mu=mu))
        records.append(MetricRecord(exp, s.value, f"ebn0_db_at_ber_{target:g}", mu, snr, mu=mu))
        records.append(MetricRecord(exp, s.value, "ber_degradation_db", mu, snr - base_snr, mu=mu))
    if spec.output_path:
        write_records(Path(spec.output_path) / "mulaw.csv", records)
        write_manifest(spec.output_path, spec, {"target_ber_used": _fmt(target)})
    return records


def mulaw_summary(records: Iterable[MetricRecord]) -> dict:
    """``{metric: {mu: value}}`` for the improvement/degradation rows."""
    out: dict = {}
    for r in records:
        if r.metric in ("papr_improvement_db", "ber_degradation_db") or r.metric.startswith("ebn0_db_at"):
            out.setdefault(r.metric, {})[r.mu] = r.value
    return out


# -- complexity -------------------------------------------------------------------


def emit_complexity_table(n_values, path=None) -> list[tuple]:
    """Rows ``(row, label, n, multiplications, additions)``; optionally written as CSV."""
    rows = []
    for n in n_values:
        for key in COMPLEXITY_ROWS:
            rep = complexity_counts(key, n)
            rows.append((key, COMPLEXITY_LABELS[key], n, rep.multiplications, rep.additions))
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["scheme", "label", "n", "multiplications", "additions"])
            w.writerows(rows)
    return rows


# -- file transmission ------------------------------------------------------------


@dataclass
class SourceReport:
    input_path: str
    output_path: str
    bits: int
    errors: int
    ber: float
    byte_exact: bool


@dataclass
class TransferReport:
    scheme: str
    ebn0_db: float
    frames: int
    pad_bits: int
    sources: list
    note: str = ""

    def records(self) -> list[MetricRecord]:
        out = []
        for i, src in enumerate(self.sources):
            lo, hi = wilson_interval(src.errors, src.bits)
            out.append(MetricRecord(Experiment.FILE_TX.value, f"{self.scheme}:source{i + 1}", "ber",
                                    self.ebn0_db, src.ber, src.bits, src.errors, lo, hi))
        return out


def _bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def transmit_file(path_a, path_b=None, scheme="ofdm", ebn0_db: float = 30.0, seed: int = 0,
                  out_dir=None, mu: float = 0.0) -> TransferReport:
    """Send one file (two for dual-STC) through the chain and write what arrives.

    Bytes become bits, bits are zero-padded to whole frames, and the padding is
    stripped after decoding. Received copies are written as ``<name>.rx`` in
    ``out_dir`` (default: next to the input).
    """
    scheme = Scheme.parse(scheme)
    cfg = SchemeConfig.default(scheme, mu=mu)
    inputs = [Path(path_a)] + ([Path(path_b)] if path_b is not None else [])
    if scheme is Scheme.DUAL_STC and len(inputs) != 2:
        raise ValueError("dual-STC file transfer needs two input files")
    if scheme is not Scheme.DUAL_STC and len(inputs) != 1:
        raise ValueError(f"{scheme.value} file transfer takes exactly one input file")
    payloads = []
    for p in inputs:
        try:
            payloads.append(p.read_bytes())
        except OSError as exc:
            raise OSError(f"cannot read input {p}: {exc}") from exc

    note = ""
    per_source = cfg.fft_size if scheme is Scheme.DUAL_STC else cfg.bits_per_frame
    longest = max(len(d) for d in payloads)
    if len(payloads) == 2 and len(payloads[0]) != len(payloads[1]):
        note = f"inputs differ in size; shorter source zero-padded to {longest} bytes"
    streams = [_bytes_to_bits(d.ljust(longest, b"\0")) for d in payloads]
    n_frames = max(1, -(-streams[0].size // per_source))
    pad = n_frames * per_source - streams[0].size
    blocks = [np.concatenate([s, np.zeros(pad, np.uint8)]).reshape(n_frames, per_source)
              for s in streams]

    frame = transmit(np.concatenate(blocks, axis=-1), cfg)
    frame = dataclasses.replace(frame, pad_bits=pad)
    frame = mu_compress(frame, mu)
    power = float(np.mean(np.abs(body_samples(frame, cfg)) ** 2))
    sigma = noise_sigma(ebn0_db, power, cfg.bits_per_frame, cfg.useful_samples)
    rx = mu_expand(awgn(frame, sigma, np.random.default_rng(task_seed(seed, 13))), mu)
    got = receive(rx, cfg)

    out_dir = Path(out_dir) if out_dir is not None else None
    reports = []
    for i, (path, data) in enumerate(zip(inputs, payloads)):
        bits = got[:, i * per_source:(i + 1) * per_source].ravel()
        bits = bits[: bits.size - pad] if pad else bits
        received = np.packbits(bits).tobytes()[: len(data)]
        sent_bits = _bytes_to_bits(data)
        errors = int(np.count_nonzero(sent_bits != _bytes_to_bits(received)))
        target = (out_dir or path.parent) / f"{path.name}.rx"
        if len(inputs) == 2 and inputs[0].name == inputs[1].name:
            target = target.with_name(f"{path.name}.source{i + 1}.rx")
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(received)
        except OSError as exc:
            raise OSError(f"cannot write output {target}: {exc}") from exc
        nbits = max(sent_bits.size, 1)
        reports.append(SourceReport(str(path), str(target), int(sent_bits.size), errors,
                                    errors / nbits, received == data))
    report = TransferReport(scheme.value, float(ebn0_db), n_frames, pad, reports, note)
    if out_dir is not None:
        write_records(out_dir / "sendfile.csv", report.records())
    return report


RUNNERS = {
    Experiment.BER_SWEEP: run_ber_sweep,
    Experiment.PAPR_CCDF: run_papr_experiment,
    Experiment.PSD: run_psd_experiment,
    Experiment.MULAW_TRADEOFF: run_mulaw_tradeoff,
}


def run(spec: ExperimentSpec) -> list[MetricRecord]:
    if spec.experiment is Experiment.COMPLEXITY_TABLE:
        path = Path(spec.output_path) / "complexity.csv" if spec.output_path else None
        rows = emit_complexity_table(spec.n_values, path)
        return [MetricRecord(spec.experiment.value, r[0], m, r[2], v)
                for r in rows for m, v in (("multiplications", r[3]), ("additions", r[4]))]
    if spec.experiment is Experiment.FILE_TX:
        raise ValueError("file transmission is driven by transmit_file()")
    return RUNNERS[spec.experiment](spec)


def default_workers() -> int:
    return max(1, (os.cpu_count() or 1) - 1)
