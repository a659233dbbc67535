"""CSV ingestion, angle-convention conversion and JSON map export.

Internal angles are always math-convention radians (counterclockwise from
East).  Compass input (clockwise from North, the usual meteorological
convention) is converted on the way in:

    theta_math = wrap(pi/2 - theta_compass)

which is an involution, so the same formula converts back for display.
CSV dialect is pinned: comma-separated, header row required, UTF-8, '.'
decimal separator.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .density import CircularSample, EmptySampleError
from .inference import BootstrapConfig, CellState
from .regression import CircLinearSample
from .kernels import wrap
from .sizer import SizerMap, SmoothingGrid

__all__ = [
    "SchemaError",
    "IngestSpec",
    "compass_to_math",
    "math_to_compass",
    "ingest",
    "lag_subsample",
    "export_map",
    "import_map",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Raised when an input file does not match the declared schema."""


@dataclass(frozen=True)
class IngestSpec:
    """How to read one CSV file of circular (optionally paired) data.

    sentinel, when set, drops rows whose raw angle equals that value
    (some archives code calm periods with an out-of-range marker; the
    convention varies by provider, so it is left configurable).
    """

    angle_column: str
    response_column: str = None
    angle_unit: str = "degrees"
    angle_convention: str = "compass"
    timestamp_column: str = None
    lag: int = None
    sentinel: float = None

    def __post_init__(self):
        if self.angle_unit not in ("degrees", "radians"):
            raise ValueError("angle_unit must be 'degrees' or 'radians'")
        if self.angle_convention not in ("compass", "math"):
            raise ValueError("angle_convention must be 'compass' or 'math'")
        if self.lag is not None and self.lag < 1:
            raise ValueError("lag must be a positive integer")


def compass_to_math(theta):
    """Compass radians (clockwise from North) to math radians, wrapped."""
    return wrap(0.5 * math.pi - np.asarray(theta, dtype=float))


def math_to_compass(theta):
    """Inverse of compass_to_math (the map is its own inverse)."""
    return compass_to_math(theta)


def _to_internal(raw, spec):
    val = float(raw)
    if spec.angle_unit == "degrees":
        val = math.radians(val)
    if spec.angle_convention == "compass":
        return float(compass_to_math(val))
    return float(wrap(val))


def ingest(path, spec):
    """Read a CSV file into a CircularSample or CircLinearSample.

    A CircLinearSample is returned iff spec.response_column is set.  Rows
    with missing or unparseable values (or matching the sentinel) are
    dropped and reported through the module logger; lag subsampling, when
    requested, is applied after cleaning.
    """
    angles, responses = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for col in (spec.angle_column, spec.response_column):
            if col is not None and col not in fields:
                raise SchemaError(f"column {col!r} not found in {path}")
        for line_no, row in enumerate(reader, start=2):
            raw_angle = (row.get(spec.angle_column) or "").strip()
            try:
                angle_val = float(raw_angle)
            except ValueError:
                log.warning("%s:%d: unparseable angle %r, row dropped", path, line_no, raw_angle)
                continue
            if not math.isfinite(angle_val):
                log.warning("%s:%d: non-finite angle, row dropped", path, line_no)
                continue
            if spec.sentinel is not None and angle_val == spec.sentinel:
                log.warning("%s:%d: sentinel angle %s, row dropped", path, line_no, angle_val)
                continue
            if spec.response_column is not None:
                raw_resp = (row.get(spec.response_column) or "").strip()
                try:
                    resp_val = float(raw_resp)
                except ValueError:
                    log.warning(
                        "%s:%d: unparseable response %r, row dropped", path, line_no, raw_resp
                    )
                    continue
                if not math.isfinite(resp_val):
                    log.warning("%s:%d: non-finite response, row dropped", path, line_no)
                    continue
                responses.append(resp_val)
            angles.append(_to_internal(angle_val, spec))

    if not angles:
        raise EmptySampleError(f"no usable rows in {path}")
    if spec.response_column is not None:
        sample = CircLinearSample(np.array(angles), np.array(responses))
    else:
        sample = CircularSample(np.array(angles))
    if spec.lag is not None:
        sample = lag_subsample(sample, spec.lag)
    return sample


def lag_subsample(sample, lag):
    """Keep rows at indices 0, lag, 2*lag, ... (decorrelation by row lag)."""
    if lag < 1:
        raise ValueError("lag must be a positive integer")
    if isinstance(sample, CircLinearSample):
        return CircLinearSample(sample.angles[::lag], sample.responses[::lag])
    return CircularSample(sample.angles[::lag])


def _clean(values):
    return [None if not math.isfinite(v) else v for v in values]


def map_to_dict(sizer_map):
    """JSON-serializable form of a SizerMap (NaN encoded as null)."""
    cfg = sizer_map.config
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": sizer_map.mode,
        "grid": {
            "ngrid": sizer_map.grid.ngrid,
            "nu_grid": list(sizer_map.grid.nu_grid),
        },
        "config": {
            "alpha": cfg.alpha,
            "B": cfg.B,
            "B2": cfg.B2,
            "seed": cfg.seed,
            "ess_threshold": sizer_map.ess_threshold,
        },
        "cells": {
            "states": [[st.value for st in row] for row in sizer_map.states],
            "ess": [list(row) for row in sizer_map.ess],
            "estimate": [_clean(row) for row in sizer_map.estimate],
            "sd": [_clean(row) for row in sizer_map.sd],
            "lower": [_clean(row) for row in sizer_map.lower],
            "upper": [_clean(row) for row in sizer_map.upper],
        },
        "provenance": sizer_map.provenance,
    }


def map_from_dict(doc):
    """Inverse of map_to_dict."""
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")
    grid = SmoothingGrid(doc["grid"]["ngrid"], np.array(doc["grid"]["nu_grid"]))
    cfg = doc["config"]
    cells = doc["cells"]

    def arr(name):
        return np.array(
            [[math.nan if v is None else v for v in row] for row in cells[name]]
        )

    states = np.array(
        [[CellState(tok) for tok in row] for row in cells["states"]], dtype=object
    )
    return SizerMap(
        grid=grid,
        mode=doc["mode"],
        states=states,
        ess=arr("ess"),
        estimate=arr("estimate"),
        sd=arr("sd"),
        lower=arr("lower"),
        upper=arr("upper"),
        config=BootstrapConfig(
            alpha=cfg["alpha"], B=cfg["B"], B2=cfg["B2"], seed=cfg["seed"]
        ),
        ess_threshold=cfg["ess_threshold"],
        provenance=doc.get("provenance", {}),
    )


def export_map(sizer_map, path):
    """Write a SizerMap as JSON; export -> import -> export is byte-stable."""
    text = json.dumps(map_to_dict(sizer_map), sort_keys=True, indent=1)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.write("\n")


def import_map(path):
    """Read a SizerMap previously written by export_map."""
    with open(path, encoding="utf-8") as fh:
        return map_from_dict(json.load(fh))
