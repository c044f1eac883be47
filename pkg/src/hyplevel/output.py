"""CSV, JSON and SVG writers with byte-stable output.

Floats are written with ``%.17g`` (round-trip exact). Non-finite floats
become ``null`` in JSON and ``nan``/``inf`` in CSV.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os

import numpy as np

SVG_SALT = "hyplevel"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats as %.17g; keys keep insertion order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return "%.17g" % float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, obj) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(obj) + "\n")


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(header, rows))


def write_svg(path, p, curve, color_by_kh: bool = True, grid: int = 201) -> None:
    """Unit circle, shaded {u > 0}, and the traced curve."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .problem import level_jet

    matplotlib.rcParams["svg.hashsalt"] = SVG_SALT
    fig, ax = plt.subplots(figsize=(6, 6))
    x = np.linspace(-1, 1, grid)
    X, Y = np.meshgrid(x, x)
    Z = X + 1j * Y
    inside = np.abs(Z) < 1
    U = np.full(Z.shape, np.nan)
    U[inside] = level_jet(p, Z[inside])[0]
    ax.contourf(X, Y, U, levels=[0, np.inf], colors=["#cfe3f5"])
    t = np.linspace(0, 2 * np.pi, 721)
    ax.plot(np.cos(t), np.sin(t), color="black", lw=1)
    zs = np.append(curve.z, curve.z[:1]) if curve.closed else curve.z
    ax.plot(zs.real, zs.imag, color="#1f4e79", lw=1.2)
    if color_by_kh:
        sc = ax.scatter(curve.z.real, curve.z.imag, c=curve.kh, s=4, cmap="viridis", zorder=3)
        fig.colorbar(sc, ax=ax, shrink=0.8, label="hyperbolic curvature")
    ax.set_aspect("equal")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_title(p.describe(), fontsize=8)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def thread_count() -> int:
    """Worker cap from HYPLEVEL_THREADS (default 1)."""
    raw = os.environ.get("HYPLEVEL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
