"""Loading and validation of a solver run directory.

A run directory holds run.json plus the CSV files it lists.  Everything here
is read-only; nothing in the input directory is ever modified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ArtifactError(RuntimeError):
    """Missing, malformed, or inconsistent run artifacts."""


@dataclass
class EnergySeries:
    times: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    per_node: np.ndarray


@dataclass
class RunArtifacts:
    """Parsed run directory: metadata plus lazily loaded tables."""

    root: Path
    log: dict

    @property
    def node_count(self) -> int:
        return int(self.log["basis"]["node_count"])

    @property
    def n_cells(self) -> int:
        return int(self.log["grid"]["n_cells"])

    @property
    def domain(self) -> tuple[float, float]:
        lo, hi = self.log["grid"]["domain"]
        return float(lo), float(hi)

    @property
    def v_grid(self) -> tuple[tuple[float, float], int]:
        vg = self.log["v_grid"]
        return (float(vg["range"][0]), float(vg["range"][1])), int(vg["n_cells"])

    def energy(self) -> EnergySeries:
        path = self.root / self.log.get("energy_file", "energy.csv")
        if not path.exists():
            raise ArtifactError(f"energy series missing: {path}")
        with open(path) as fh:
            lines = fh.read().strip().splitlines()
        if len(lines) < 2:
            raise ArtifactError(f"energy series is empty: {path}")
        data = np.atleast_2d(np.genfromtxt(lines[1:], delimiter=","))
        expected = 3 + self.node_count
        if data.shape[1] != expected:
            raise ArtifactError(
                f"{path.name} has {data.shape[1]} columns but run.json declares "
                f"{self.node_count} quadrature nodes (expected {expected})"
            )
        return EnergySeries(times=data[:, 0], mean=data[:, 1], variance=data[:, 2],
                            per_node=data[:, 3:])

    def dump_times(self, kind: str) -> list[float]:
        return [entry["time"] for entry in self.log.get("dumps", {}).get(kind, [])]

    def _dump_file(self, kind: str, time: float) -> Path:
        for entry in self.log.get("dumps", {}).get(kind, []):
            if abs(entry["time"] - time) < 1e-12:
                path = self.root / entry["file"]
                if not path.exists():
                    raise ArtifactError(f"listed dump missing on disk: {path}")
                return path
        raise ArtifactError(f"no {kind} dump at t={time:g}; have {self.dump_times(kind)}")

    def density(self, stat: str, time: float) -> np.ndarray:
        path = self._dump_file(f"density_{stat}", time)
        matrix = np.atleast_2d(np.genfromtxt(path, delimiter=","))
        (_, _), n_v = self.v_grid
        if matrix.shape != (self.n_cells, n_v):
            raise ArtifactError(
                f"{path.name} is {matrix.shape}, but run.json declares a "
                f"{self.n_cells} x {n_v} phase-space grid"
            )
        return matrix

    def moments(self, time: float) -> dict:
        path = self._dump_file("moments", time)
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        data = np.atleast_2d(np.genfromtxt(path, delimiter=",", skip_header=1))
        if data.shape[0] != self.n_cells:
            raise ArtifactError(
                f"{path.name} has {data.shape[0]} rows but the grid has {self.n_cells} cells"
            )
        return {name: data[:, i] for i, name in enumerate(header)}

    def convergence(self) -> tuple[np.ndarray, np.ndarray]:
        path = self.root / self.log.get("convergence_file", "convergence.csv")
        if not path.exists():
            raise ArtifactError(f"convergence table missing: {path}")
        data = np.atleast_2d(np.genfromtxt(path, delimiter=",", skip_header=1))
        return data[:, 0].astype(int), data[:, 1]


def load_run(path) -> RunArtifacts:
    root = Path(path)
    log_path = root / "run.json"
    if not log_path.exists():
        raise ArtifactError(f"not a run directory (no run.json): {root}")
    try:
        log = json.loads(log_path.read_text())
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"run.json does not parse: {exc}") from exc
    return RunArtifacts(root=root, log=log)
