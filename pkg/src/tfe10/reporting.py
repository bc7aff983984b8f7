"""CSV/JSON output with provenance headers.

Every file starts with (or embeds) the package version, a short hash of
the originating configuration, and the subcommand, so identical runs
produce byte-identical artifacts.  Floats are written with 17
significant digits.
"""

from __future__ import annotations

import hashlib
import json
from typing import Iterable, Optional

import numpy as np

from . import __version__


def config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def provenance_line(subcommand: str, cfg: dict) -> str:
    return (f"# tfe10 {__version__} subcommand={subcommand} "
            f"config={config_hash(cfg)}")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path: str, header: Iterable[str], rows, subcommand: str,
              cfg: dict, footer: Optional[dict] = None) -> None:
    lines = [provenance_line(subcommand, cfg), ",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    if footer:
        for key, val in footer.items():
            lines.append(f"# {key}={fmt(val)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: str, payload: dict, subcommand: str, cfg: dict) -> None:
    doc = {
        "tfe10_version": __version__,
        "subcommand": subcommand,
        "config_hash": config_hash(cfg),
        **_jsonable(payload),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float):
        return obj
    return obj


def profile_rows(profile, jmax: Optional[int] = None):
    """Rows y, f, f1, ..., f9 (missing derivative columns zero-filled)."""
    y = profile.grid.points
    cols = [y, profile.values]
    have = 0 if profile.derivatives is None else profile.derivatives.shape[0]
    top = 10 if jmax is None else jmax + 1
    for j in range(1, top):
        cols.append(profile.derivatives[j] if j < have
                    else np.zeros_like(y))
    return np.column_stack(cols)
