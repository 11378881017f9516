"""JSON and CSV (de)serialization of demonstrations, trajectories and models."""
import csv
import json

import numpy as np

from .errors import InvalidParameter
from .spd_dmp import SpdDemonstration, SpdDmpModel


def _dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def series_to_json(times, points):
    return [{"t": float(t), "matrix": np.asarray(X).tolist()} for t, X in zip(times, points)]


def series_from_json(doc):
    if not isinstance(doc, list) or not doc:
        raise InvalidParameter("expected a non-empty list of {t, matrix} records")
    try:
        times = np.array([rec["t"] for rec in doc], dtype=float)
        points = np.array([rec["matrix"] for rec in doc], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameter(f"malformed trajectory record: {exc}") from exc
    if points.ndim != 3 or points.shape[1] != points.shape[2]:
        raise InvalidParameter("matrices must be square and of a common size")
    return times, points


def save_series(path, times, points):
    _dump(series_to_json(times, points), path)


def load_series(path):
    with open(path) as fh:
        return series_from_json(json.load(fh))


def load_demo(path):
    return SpdDemonstration(*load_series(path))


def save_model(path, model):
    _dump(model.to_dict(), path)


def load_model(path):
    with open(path) as fh:
        doc = json.load(fh)
    try:
        return SpdDmpModel.from_dict(doc)
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"malformed model file: missing or bad field {exc}") from exc


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else repr(float(v)) for v in row])
