"""JSON/CSV file formats used by the command line tool.

Signal file::

    {"format_version": 1, "start": <int>, "values": [[re, im], ...]}

Sampled function file::

    {"format_version": 1, "t0": <real>, "t1": <real>, "values": [[re, im], ...]}

Floats are written with 17 significant digits so doubles survive a round trip.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .continuous import SampledFunction
from .core import Signal

FORMAT_VERSION = 1


class FileFormatError(ValueError):
    """Malformed or invalid input file."""


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0 for stable output
    return format(x, ".17g")


def dumps(obj, indent: int | None = 2, _level: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats.

    Lists of scalars stay on one line so sample arrays remain readable.
    """
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + ",".join(pad + it for it in items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, None) for v in obj) + "]"
        items = [dumps(v, indent, _level + 1) for v in obj]
        return "[" + ",".join(pad + it for it in items) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex)]


def signal_to_dict(x: Signal) -> dict:
    return {"format_version": FORMAT_VERSION, "start": x.start, "values": _pairs(x.values)}


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    if data.get("format_version") != FORMAT_VERSION:
        raise FileFormatError(
            f"{path}: unsupported format_version {data.get('format_version')!r}"
        )
    return data


def _complex_values(path, raw) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise FileFormatError(f"{path}: 'values' must be a nonempty list of [re, im]")
    out = np.empty(len(raw), dtype=complex)
    for i, pair in enumerate(raw):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise FileFormatError(f"{path}: values[{i}] must be [re, im], got {pair!r}")
        out[i] = complex(pair[0], pair[1])
    return out


def signal_from_dict(data: dict, path="<signal>") -> Signal:
    start = data.get("start")
    if not isinstance(start, int) or isinstance(start, bool):
        raise FileFormatError(f"{path}: 'start' must be an integer")
    values = _complex_values(path, data.get("values"))
    try:
        return Signal(start, values)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def read_signal(path) -> Signal:
    return signal_from_dict(_load_json(path), path)


def write_signal(path, x: Signal) -> None:
    Path(path).write_text(dumps(signal_to_dict(x)) + "\n", encoding="utf-8")


def function_to_dict(f: SampledFunction) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "t0": f.t0,
        "t1": f.t1,
        "values": _pairs(f.samples),
    }


def read_function(path) -> SampledFunction:
    data = _load_json(path)
    t0, t1 = data.get("t0"), data.get("t1")
    for name, v in (("t0", t0), ("t1", t1)):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise FileFormatError(f"{path}: '{name}' must be a number")
    values = _complex_values(path, data.get("values"))
    try:
        return SampledFunction(t0, t1, values)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def write_function(path, f: SampledFunction) -> None:
    Path(path).write_text(dumps(function_to_dict(f)) + "\n", encoding="utf-8")


def transform_csv(omega, values) -> str:
    """Rows ``omega,re,im,abs`` with LF endings."""
    lines = ["omega,re,im,abs"]
    for w, c in zip(np.asarray(omega, dtype=float), np.asarray(values, dtype=complex)):
        lines.append(",".join(fmt_float(v) for v in (w, c.real, c.imag, abs(c))))
    return "\n".join(lines) + "\n"
