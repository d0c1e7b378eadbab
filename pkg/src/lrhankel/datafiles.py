"""Binary container for signal records plus a JSON manifest sidecar.

The format is deliberately simple so other languages can read it
byte-for-byte.  All values are little-endian.

Header:  int64 version | int64 N | int64 M | int64 Q | float64 dt
Record:  int64 J
         J x 4 float64   component rows (amplitude, phase, damping, frequency)
         M x uint32      sample positions (1-based, sorted)
         N x 2 float64   reference signal, interleaved re/im
         M x 2 float64   measurements, interleaved re/im

J = 0 marks a record without model parameters (e.g. a reconstruction).
Every record in one file shares N and M; M = 0 means not yet sampled.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .sampling import SamplingMask
from .signals import ExponentialModel, GeneratorSpec

FORMAT_VERSION = 1


@dataclass
class SignalRecord:
    """One (model, mask, reference signal, measurements) tuple."""

    x: np.ndarray
    y: np.ndarray
    mask: SamplingMask
    model: ExponentialModel | None = None


@dataclass
class FileHeader:
    version: int
    n: int
    m: int
    q: int
    dt: float


def _complex_to_interleaved(z: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(z), dtype="<f8")
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def _interleaved_to_complex(buf: np.ndarray) -> np.ndarray:
    return buf[0::2] + 1j * buf[1::2]


def write_signal_file(path, records: list[SignalRecord], dt: float = 1.0) -> None:
    """Write records to `path`; all records must share N and M."""
    if not records:
        raise ValueError("need at least one record")
    n = len(records[0].x)
    m = records[0].mask.m
    for r in records:
        if len(r.x) != n or r.mask.m != m or len(r.y) != m:
            raise ValueError("records disagree on N or M")

    with open(path, "wb") as fh:
        fh.write(np.array([FORMAT_VERSION, n, m, len(records)], dtype="<i8").tobytes())
        fh.write(np.array([dt], dtype="<f8").tobytes())
        for r in records:
            if r.model is None:
                fh.write(np.array([0], dtype="<i8").tobytes())
            else:
                fh.write(np.array([r.model.j], dtype="<i8").tobytes())
                rows = np.column_stack(
                    [r.model.amplitudes, r.model.phases, r.model.dampings, r.model.frequencies]
                )
                fh.write(rows.astype("<f8").tobytes())
            fh.write(r.mask.indices.astype("<u4").tobytes())
            fh.write(_complex_to_interleaved(np.asarray(r.x, dtype=complex)).tobytes())
            fh.write(_complex_to_interleaved(np.asarray(r.y, dtype=complex)).tobytes())


def read_signal_file(path, pattern: str = "poisson_gap"):
    """Read a signal file; returns (records, header).

    The binary format does not store the mask pattern name, so ``pattern``
    is attached to the reconstructed masks (it is bookkeeping only).
    """
    raw = np.fromfile(path, dtype=np.uint8)
    if len(raw) < 40:
        raise ValueError(f"{path}: too short for a signal file header")
    version, n, m, q = np.frombuffer(raw[:32], dtype="<i8")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    dt = float(np.frombuffer(raw[32:40], dtype="<f8")[0])
    header = FileHeader(int(version), int(n), int(m), int(q), dt)

    records = []
    off = 40
    for _ in range(header.q):
        j = int(np.frombuffer(raw[off : off + 8], dtype="<i8")[0])
        off += 8
        model = None
        if j < 0:
            raise ValueError(f"{path}: negative component count")
        if j > 0:
            rows = np.frombuffer(raw[off : off + 32 * j], dtype="<f8").reshape(j, 4)
            off += 32 * j
            model = ExponentialModel.from_arrays(rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3], dt)
        idx = np.frombuffer(raw[off : off + 4 * header.m], dtype="<u4").astype(np.int64)
        off += 4 * header.m
        x = _interleaved_to_complex(np.frombuffer(raw[off : off + 16 * header.n], dtype="<f8"))
        off += 16 * header.n
        y = _interleaved_to_complex(np.frombuffer(raw[off : off + 16 * header.m], dtype="<f8"))
        off += 16 * header.m
        records.append(SignalRecord(x, y, SamplingMask(header.n, idx, pattern), model))
    if off != len(raw):
        raise ValueError(f"{path}: {len(raw) - off} trailing bytes")
    return records, header


def generator_digest(spec: GeneratorSpec) -> str:
    """Stable sha256 digest of a generator spec."""
    blob = json.dumps(asdict(spec), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass
class DatasetManifest:
    """Sidecar describing a generated dataset: header fields, the exact
    per-record seeds, and the generation recipe."""

    format_version: int
    count: int
    n: int
    m: int
    dt: float
    rate: float
    pattern: str
    noise_sigma: float
    split: float
    n_train: int
    n_val: int
    base_seed: int
    normalize_amplitudes: bool
    generator: dict
    generator_digest: str
    record_seeds: list = field(default_factory=list)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "DatasetManifest":
        return cls(**json.loads(Path(path).read_text()))
