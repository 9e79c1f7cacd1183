"""Dataset semantics: labels, manifests, and window extraction.

A dataset is a directory of .bin recordings indexed by ``manifest.csv``.
Manifest paths are stored relative to the manifest file so the directory
is relocatable.  The header block carries the dataset-wide constants.
"""

import csv
import io
import os
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import ParseError, ValidationError
from .iqio import IqBuffer

FORMAT_TAG = "iqdataset-v1"
MANIFEST_COLUMNS = ["path", "waveform", "tx_id", "day", "provenance", "policy", "seed"]


class WaveformKind(Enum):
    FIVE_G = "5g"
    WIFI = "wifi"
    LTE = "lte"


class Day(Enum):
    DAY1 = "day1"
    DAY2 = "day2"


@dataclass(frozen=True)
class Provenance:
    """Original capture or augmented copy (which policy, which derived seed)."""

    origin: str  # "original" | "augmented"
    policy: str | None = None
    seed: int | None = None

    @classmethod
    def original(cls) -> "Provenance":
        return cls("original")

    @classmethod
    def augmented(cls, policy: str, seed: int) -> "Provenance":
        return cls("augmented", policy, seed)

    @property
    def is_original(self) -> bool:
        return self.origin == "original"


@dataclass(frozen=True)
class RecordingMeta:
    waveform: WaveformKind
    transmitter_id: int
    day: Day
    provenance: Provenance


@dataclass
class Example:
    """One fixed-length training window with its label."""

    window: np.ndarray
    label: int
    meta: RecordingMeta


@dataclass(frozen=True)
class ManifestHeader:
    num_tx: int
    sample_rate_hz: float
    window_len: int
    format_tag: str = FORMAT_TAG


@dataclass(frozen=True)
class ManifestRecord:
    path: str  # relative to the manifest file's directory
    meta: RecordingMeta


@dataclass
class DatasetManifest:
    header: ManifestHeader
    records: list[ManifestRecord]
    root: str = "."  # directory the relative paths resolve against

    def resolve(self, record: ManifestRecord) -> str:
        return os.path.normpath(os.path.join(self.root, record.path))

    def validate(self, check_paths: bool = True) -> None:
        if self.header.window_len < 16:
            raise ValidationError("manifest window_len must be >= 16")
        for rec in self.records:
            if not 0 <= rec.meta.transmitter_id < self.header.num_tx:
                raise ValidationError(
                    f"{rec.path}: tx_id {rec.meta.transmitter_id} outside "
                    f"0..{self.header.num_tx - 1}"
                )
            if check_paths and not os.path.exists(self.resolve(rec)):
                raise ValidationError(f"manifest references missing file: {self.resolve(rec)}")


def slice_examples(buffer: IqBuffer, meta: RecordingMeta, window_len: int = 256,
                   stride: int = 128) -> list[Example]:
    """Cut a recording into overlapping fixed-length windows.

    Yields floor((L - W)/S) + 1 windows for L >= W, none otherwise; window i
    covers samples [i*S, i*S + W).
    """
    if window_len < 16:
        raise ValidationError("window_len must be >= 16")
    if stride < 1:
        raise ValidationError("stride must be >= 1")
    n = len(buffer)
    if n < window_len:
        return []
    count = (n - window_len) // stride + 1
    out = []
    for i in range(count):
        start = i * stride
        out.append(Example(buffer.samples[start:start + window_len].copy(),
                           meta.transmitter_id, meta))
    return out


def _format_seed(prov: Provenance) -> str:
    return "" if prov.seed is None else str(prov.seed)


def write_manifest(manifest: DatasetManifest, path) -> None:
    manifest.validate(check_paths=False)
    h = manifest.header
    buf = io.StringIO()
    buf.write(f"# format={h.format_tag}\n")
    buf.write(f"# num_tx={h.num_tx}\n")
    buf.write(f"# sample_rate_hz={h.sample_rate_hz!r}\n")
    buf.write(f"# window_len={h.window_len}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MANIFEST_COLUMNS)
    for rec in manifest.records:
        m = rec.meta
        writer.writerow([
            rec.path, m.waveform.value, m.transmitter_id, m.day.value,
            m.provenance.origin, m.provenance.policy or "", _format_seed(m.provenance),
        ])
    with open(path, "w", newline="") as f:
        f.write(buf.getvalue())


def read_manifest(path, check_paths: bool = True) -> DatasetManifest:
    """Parse a manifest; malformed lines raise ParseError with the line number."""
    with open(path, "r", newline="") as f:
        lines = f.read().splitlines()

    header_kv = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body_start = i
            break
        body_start = i + 1
        kv = line.lstrip("#").strip()
        if "=" not in kv:
            raise ParseError(f"{path}:{i + 1}: malformed header line {line!r}")
        key, value = kv.split("=", 1)
        header_kv[key.strip()] = value.strip()

    try:
        header = ManifestHeader(
            num_tx=int(header_kv["num_tx"]),
            sample_rate_hz=float(header_kv["sample_rate_hz"]),
            window_len=int(header_kv["window_len"]),
            format_tag=header_kv.get("format", FORMAT_TAG),
        )
    except (KeyError, ValueError) as e:
        raise ParseError(f"{path}: bad or missing header field ({e})") from e
    if header.format_tag != FORMAT_TAG:
        raise ParseError(f"{path}: unsupported format tag {header.format_tag!r}")

    body = lines[body_start:]
    if not body or body[0].split(",")[0] != "path":
        raise ParseError(f"{path}:{body_start + 1}: expected column header line")

    records = []
    reader = csv.reader(body[1:])
    for offset, row in enumerate(reader):
        lineno = body_start + 2 + offset
        if not row:
            continue
        if len(row) != len(MANIFEST_COLUMNS):
            raise ParseError(f"{path}:{lineno}: expected {len(MANIFEST_COLUMNS)} fields, "
                             f"got {len(row)}")
        try:
            waveform = WaveformKind(row[1])
            tx_id = int(row[2])
            day = Day(row[3])
            origin = row[4]
            if origin == "original":
                prov = Provenance.original()
            elif origin == "augmented":
                prov = Provenance.augmented(row[5], int(row[6]))
            else:
                raise ValueError(f"unknown provenance {origin!r}")
        except ValueError as e:
            raise ParseError(f"{path}:{lineno}: {e}") from e
        records.append(ManifestRecord(row[0], RecordingMeta(waveform, tx_id, day, prov)))

    manifest = DatasetManifest(header, records, root=os.path.dirname(os.path.abspath(path)))
    manifest.validate(check_paths=check_paths)
    return manifest


def rebase_record(record: ManifestRecord, old_root: str, new_root: str) -> ManifestRecord:
    """Re-express a record's relative path against a different manifest directory."""
    absolute = os.path.normpath(os.path.join(old_root, record.path))
    return replace(record, path=os.path.relpath(absolute, new_root))
