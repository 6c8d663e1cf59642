"""Binary checkpoints and report emission (JSON, CSV, two-column .dat)."""

import csv
import io as _io
import json
import math
import os
import struct
import tempfile

import numpy as np

from .errors import CorruptHeaderError, TruncatedPayloadError, VersionMismatchError
from .grid import TorusGrid
from .path import GeodesicPath

MAGIC = b"HCMA"
FORMAT_VERSION = 1
# magic, version, n, N, Nt, eps, metadata length
_HEADER = struct.Struct("<4sIIIIdI")


def atomic_write_bytes(path, data):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text):
    atomic_write_bytes(path, text.encode("utf-8"))


# -- checkpoints ------------------------------------------------------------


def encode_checkpoint(path, eps, metadata=None):
    grid = path.grid
    meta = json.dumps(metadata or {}, sort_keys=True).encode("utf-8")
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, grid.n, grid.N, grid.Nt, float(eps), len(meta))
    payload = np.ascontiguousarray(path.values, dtype="<f8").tobytes()
    return header + meta + payload


def decode_checkpoint(data):
    """Returns ``(GeodesicPath, eps, metadata)``."""
    if len(data) < 4 or data[:4] != MAGIC:
        raise CorruptHeaderError("bad magic bytes")
    if len(data) < _HEADER.size:
        raise TruncatedPayloadError(f"header needs {_HEADER.size} bytes, file has {len(data)}")
    _, version, n, N, Nt, eps, meta_len = _HEADER.unpack_from(data)
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"format version {version}, expected {FORMAT_VERSION}")
    if n not in (1, 2) or N < 8 or Nt < 5:
        raise CorruptHeaderError(f"inconsistent dimensions n={n} N={N} Nt={Nt}")
    if not (eps > 0 and math.isfinite(eps)):
        raise CorruptHeaderError(f"invalid eps {eps}")
    start = _HEADER.size
    if len(data) < start + meta_len:
        raise TruncatedPayloadError("metadata block truncated")
    try:
        metadata = json.loads(data[start : start + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptHeaderError(f"unreadable metadata: {exc}") from exc
    grid = TorusGrid(n, N, Nt)
    expected = 8 * int(np.prod(grid.shape))
    body = data[start + meta_len :]
    if len(body) < expected:
        raise TruncatedPayloadError(f"payload has {len(body)} bytes, expected {expected}")
    if len(body) > expected:
        raise CorruptHeaderError(f"{len(body) - expected} trailing bytes after payload")
    values = np.frombuffer(body, dtype="<f8").reshape(grid.shape).astype(float)
    return GeodesicPath(grid, values), eps, metadata


def checkpoint_write(filename, path, eps, metadata=None):
    atomic_write_bytes(filename, encode_checkpoint(path, eps, metadata))


def checkpoint_read(filename):
    with open(filename, "rb") as fh:
        return decode_checkpoint(fh.read())


# -- reports ------------------------------------------------------------------


def jsonable(obj):
    """Recursively convert numpy types; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps_report(report):
    return json.dumps(jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(filename, report):
    atomic_write_text(filename, dumps_report(report))


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(filename, columns, rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c, "")) for c in columns])
    atomic_write_text(filename, buf.getvalue())


def write_dat(filename, xs, ys, header=None):
    lines = [f"# {header}"] if header else []
    lines += [f"{float(x)!r} {float(y)!r}" for x, y in zip(xs, ys)]
    atomic_write_text(filename, "\n".join(lines) + "\n")
