"""Output directory bookkeeping: every file written is listed in the manifest."""

import datetime
import json
import platform

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import scipy

from . import core

COLORS = ("#0022ff", "#ff0011", "#33aa00", "#ddaa00", "#cc44dd", "#0088aa")


def jsonable(value):
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


class Recorder:

    def __init__(self, out_dir, config=None, svg=True):
        self.out_dir = core.Path(out_dir)
        self.out_dir.mkdirs()
        self.config = config
        self.svg = svg
        self.outputs = []

    def _register(self, name, kind, **info):
        filename = self.out_dir / name
        self.outputs.append({"file": name, "kind": kind, **info})
        return filename

    def csv(self, name, columns, rows):
        filename = self._register(name, "csv", rows=len(rows), columns=list(columns))
        pd.DataFrame(list(rows), columns=list(columns)).to_csv(
            str(filename), index=False, float_format="%.17g"
        )
        return filename

    def json(self, name, payload):
        filename = self._register(name, "json")
        filename.write(json.dumps(jsonable(payload), indent=2))
        return filename

    def register(self, name, kind):
        """Lists a file written by someone else, such as the metrics log."""
        return self._register(name, kind)

    def scatter(self, name, clouds, title=None, xlabel="Re", ylabel="Im"):
        """One colour per labelled point set of complex values."""
        if not self.svg:
            return None
        fig, ax = plt.subplots(figsize=(5, 4.5))
        for index, (label, values) in enumerate(clouds.items()):
            values = np.asarray(values, dtype=complex)
            ax.scatter(
                values.real, values.imag, s=4, label=label,
                color=COLORS[index % len(COLORS)],
            )
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if len(clouds) > 1:
            ax.legend(frameon=False, fontsize=8)
        return self._save(fig, name)

    def heatmap(self, name, re, im, values, title=None, label=None,
                xlabel="Re omega", ylabel="Im omega"):
        """values[i, j] belongs to the point (re[i], im[j])."""
        if not self.svg:
            return None
        fig, ax = plt.subplots(figsize=(5, 4.5))
        mesh = ax.pcolormesh(re, im, np.asarray(values, dtype=float).T, shading="auto")
        fig.colorbar(mesh, ax=ax, label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        return self._save(fig, name)

    def _save(self, fig, name):
        filename = self._register(name, "svg")
        fig.tight_layout()
        fig.savefig(str(filename), format="svg")
        plt.close(fig)
        return filename

    def manifest(self, scenario, seed, timings=None):
        import fragile

        payload = {
            "scenario": scenario,
            "config": self.config.plain() if self.config is not None else None,
            "seeds": {"seed": seed},
            "versions": {
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "fragile": fragile.__version__,
            },
            "basis_order": "row-major, x outer and y inner, 1-based sites",
            "outputs": list(self.outputs),
            "timings": timings or {},
            "created": datetime.datetime.now().isoformat(timespec="seconds"),
        }
        filename = self.out_dir / "manifest.json"
        filename.write(json.dumps(jsonable(payload), indent=2))
        core.print_(f"Wrote {len(self.outputs)} outputs to {self.out_dir}", "green")
        return payload
