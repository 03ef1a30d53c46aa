"""CSV/JSON writers shared by the experiment drivers.

CSV files start with ``#``-prefixed metadata lines (seed, version, config);
JSON documents carry the same metadata under a ``"_meta"`` key.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from importlib import metadata
from pathlib import Path

import numpy as np


def package_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _jsonable(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)
                if not f.name.startswith("_")}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def metadata_dict(seed=None, config=None) -> dict:
    return {"version": package_version(), "seed": seed, "config": _jsonable(config or {})}


def format_csv(header, rows, seed=None, config=None) -> str:
    buf = io.StringIO()
    meta = metadata_dict(seed, config)
    buf.write(f"# version={meta['version']}\n")
    buf.write(f"# seed={meta['seed']}\n")
    buf.write(f"# config={json.dumps(meta['config'], sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buf.getvalue()


def write_csv(path, header, rows, seed=None, config=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(header, rows, seed, config))
    return path


def format_json(payload, seed=None, config=None) -> str:
    doc = {"_meta": metadata_dict(seed, config)}
    doc.update(_jsonable(payload))
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path, payload, seed=None, config=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_json(payload, seed, config))
    return path
