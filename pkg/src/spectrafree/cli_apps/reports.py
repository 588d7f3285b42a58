"""Report and CSV plumbing for the CLI drivers.

Every command emits plot-ready CSV (header row, '.' decimal, shortest
round-trip floats) plus one JSON report whose metrics are recomputable from
the emitted files.
"""

from __future__ import annotations

import hashlib
import json
import os
import time

import numpy as np


def sha256_of(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip decimal
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return str(path)


class ExperimentReport:
    """Command echo, input digests, metrics, timings and output paths."""

    def __init__(self, command, rng_seed):
        self.command = command
        self.rng_seed = rng_seed
        self.inputs = {}
        self.methods = []
        self.metrics = {}
        self.timings_ms = {}
        self.solver = []
        self.outputs = []
        self.figures = []
        self._marks = {}

    def add_input(self, path):
        if path:
            self.inputs[str(path)] = sha256_of(path)

    def tic(self, label):
        self._marks[label] = time.perf_counter()

    def toc(self, label):
        self.timings_ms[label] = 1000.0 * (time.perf_counter() - self._marks[label])

    def add_output(self, path):
        self.outputs.append(str(path))
        return str(path)

    def add_figure(self, path):
        if path:
            self.figures.append(str(path))

    def write(self, out_dir, name="report.json"):
        path = os.path.join(out_dir, name)
        payload = {
            "command": self.command,
            "rng_seed": self.rng_seed,
            "inputs": self.inputs,
            "methods": self.methods,
            "metrics": self.metrics,
            "timings_ms": self.timings_ms,
            "solver": self.solver,
            "outputs": self.outputs,
            "figures": self.figures,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path
