"""Loss-table bundle serialization.

A bundle is a directory containing ``manifest.json`` plus one CSV matrix per
objective (header row of grid indices, one row per example) and an optional
``labels.csv``. Floating point values are written with 17 significant digits
so the round trip is bit exact; the manifest records a sha256 checksum per
data file so corruption is caught at load time.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .types import ConfigGrid, LossTable, ObjectiveSpec

__all__ = ["write_bundle", "read_bundle", "read_manifest", "BundleError"]

_FORMAT_VERSION = 1


class BundleError(ValueError):
    """Raised when a bundle is missing, malformed, or fails its checksums."""


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _matrix_filename(obj_id: str) -> str:
    safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in obj_id)
    return f"losses_{safe}.csv"


def write_bundle(table: LossTable, path, objectives=None) -> Path:
    """Write a loss table (and optional objective metadata) as a bundle.

    ``objectives`` carries the calibration roles (controlled flags and alpha
    defaults) so a bundle is self-describing; omit it to store losses only.
    """
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    header = ",".join(str(i) for i in range(table.config_count))
    checksums = {}
    for oid in table.objective_ids:
        fname = _matrix_filename(oid)
        np.savetxt(
            path / fname,
            table.matrix(oid),
            fmt="%.17g",
            delimiter=",",
            header=header,
            comments="",
        )
        checksums[fname] = _sha256(path / fname)
    if table.labels is not None:
        np.savetxt(path / "labels.csv", table.labels, fmt="%d")
        checksums["labels.csv"] = _sha256(path / "labels.csv")
    manifest = {
        "format_version": _FORMAT_VERSION,
        "example_count": table.example_count,
        "config_count": table.config_count,
        "objectives": [
            _objective_entry(oid, objectives) for oid in table.objective_ids
        ],
        "class_count": table.class_count,
        "grid": None if table.grid is None else table.grid.to_dict(),
        "checksums": checksums,
    }
    (path / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return path


def _objective_entry(oid: str, objectives) -> dict:
    entry = {"id": oid, "file": _matrix_filename(oid)}
    if objectives is not None:
        for o in objectives:
            if o.id == oid:
                entry.update(
                    controlled=o.kind == "controlled",
                    alpha=o.alpha,
                    aggregation=o.aggregation,
                )
                break
    return entry


def read_manifest(path) -> dict:
    path = Path(path)
    manifest_path = path / "manifest.json"
    if not manifest_path.is_file():
        raise BundleError(f"missing manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as e:
        raise BundleError(f"unparseable manifest {manifest_path}: {e}") from e
    for key in ("example_count", "config_count", "objectives", "checksums"):
        if key not in manifest:
            raise BundleError(f"manifest {manifest_path} lacks field {key!r}")
    return manifest


def read_bundle(path) -> tuple[LossTable, list[ObjectiveSpec] | None]:
    """Load a bundle; returns the table and, when the manifest carries roles,
    the reconstructed objective specs (controlled first, bundle order kept
    otherwise)."""
    path = Path(path)
    manifest = read_manifest(path)
    for fname, expected in manifest["checksums"].items():
        fpath = path / fname
        if not fpath.is_file():
            raise BundleError(f"missing data file: {fpath}")
        actual = _sha256(fpath)
        if actual != expected:
            raise BundleError(f"checksum mismatch for {fpath}")
    matrices = {}
    for entry in manifest["objectives"]:
        fpath = path / entry["file"]
        data = np.loadtxt(fpath, delimiter=",", skiprows=1, ndmin=2)
        if data.shape != (manifest["example_count"], manifest["config_count"]):
            raise BundleError(
                f"{fpath}: shape {data.shape} does not match manifest"
            )
        matrices[entry["id"]] = data
    labels = None
    if "labels.csv" in manifest["checksums"]:
        labels = np.loadtxt(path / "labels.csv", dtype=int, ndmin=1)
    grid = None
    if manifest.get("grid") is not None:
        grid = ConfigGrid.from_dict(manifest["grid"])
    table = LossTable(
        matrices,
        labels=labels,
        class_count=manifest.get("class_count"),
        grid=grid,
    )
    specs = _specs_from_manifest(manifest)
    return table, specs


def _specs_from_manifest(manifest) -> list[ObjectiveSpec] | None:
    entries = manifest["objectives"]
    if not all("controlled" in e for e in entries):
        return None
    specs = []
    for e in entries:
        controlled = bool(e["controlled"])
        specs.append(
            ObjectiveSpec(
                id=e["id"],
                kind="controlled" if controlled else "free",
                alpha=e.get("alpha") if controlled else None,
                aggregation=e.get("aggregation", "mean"),
            )
        )
    specs.sort(key=lambda o: o.kind != "controlled")
    return specs
