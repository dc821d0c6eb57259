"""Figures written next to CLI output files.

Uses the non-interactive Agg backend, and PNG metadata is stripped so
that reruns produce identical images.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "savefig.bbox": "tight",
}


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_td_sweep(rows, path, alpha):
    """Re, Im and |G| against r, one curve set per dt."""
    arr = np.array([r[:5] for r in rows], dtype=float)
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        for dt in np.unique(arr[:, 1]):
            sel = arr[arr[:, 1] == dt]
            label = f"dt={dt:g}"
            ax.plot(sel[:, 0], np.hypot(sel[:, 2], sel[:, 3]), label=f"|G|, {label}")
            ax.plot(sel[:, 0], sel[:, 2], "--", lw=0.9, label=f"Re G, {label}")
            ax.plot(sel[:, 0], sel[:, 3], ":", lw=0.9, label=f"Im G, {label}")
        ax.set_xlabel("r")
        ax.set_ylabel("G")
        ax.set_title(f"time-dependent Green's function, alpha={alpha:g}")
        ax.legend(fontsize=7)
        return _save(fig, path)


def plot_ti_sweep(rows, path, alpha):
    arr = np.array([r[:5] for r in rows], dtype=float)
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ax.plot(arr[:, 0], arr[:, 1], label="Re G+")
        ax.plot(arr[:, 0], arr[:, 2], "--", label="Im G+")
        ax.plot(arr[:, 0], np.hypot(arr[:, 1], arr[:, 2]), "k", lw=0.8, label="|G+|")
        ax.set_xlabel("r")
        ax.set_title(f"outgoing Green's function, alpha={alpha:g}")
        ax.legend()
        return _save(fig, path)


def plot_field(field, path):
    """|phi| of a Born iterate on its grid."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ext = (field.x[0], field.x[-1], field.y[0], field.y[-1])
        im = ax.imshow(np.abs(field.values), origin="lower", extent=ext, cmap="viridis")
        fig.colorbar(im, ax=ax, label="|phi|")
        ax.grid(False)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title(f"Born order {field.order}")
        return _save(fig, path)


def plot_amplitude(rows, path):
    arr = np.array(rows, dtype=float)
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ax.plot(arr[:, 0], arr[:, 4], "o-", ms=3)
        ax.set_xlabel("theta")
        ax.set_ylabel("|f(theta)|")
        ax.set_title("first-Born scattering amplitude")
        return _save(fig, path)
