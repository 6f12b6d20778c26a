"""Matplotlib rendering of command outputs to image files.

Each renderer consumes the same OutputRecord the CLI writes as CSV/JSON, so
a saved figure always shows exactly the emitted data.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import OutputRecord

plt.rcParams["figure.figsize"] = (6.4, 4.4)
plt.rcParams["font.size"] = 10
plt.rcParams["axes.grid"] = True
plt.rcParams["grid.alpha"] = 0.3


def _col(record: OutputRecord, name: str) -> int:
    return record.columns.index(name)


def render_sweep(record: OutputRecord, path: str) -> None:
    """Eigenvalue curves W_nu(gamma), truncation lines, and exact states."""
    i_series = _col(record, "series")
    i_level = _col(record, "level")
    i_gamma = _col(record, "gamma")
    i_w = _col(record, "W")
    fig, ax = plt.subplots()
    curves: dict[int, list[tuple[float, float]]] = {}
    lines: dict[int, list[tuple[float, float]]] = {}
    points: list[tuple[float, float]] = []
    for row in record.rows:
        key = int(row[i_level])
        if row[i_w] is None:
            continue
        if row[i_series] == "rrm":
            curves.setdefault(key, []).append((row[i_gamma], row[i_w]))
        elif row[i_series] == "qs_line":
            lines.setdefault(key, []).append((row[i_gamma], row[i_w]))
        else:
            points.append((row[i_gamma], row[i_w]))
    for nu, pts in sorted(curves.items()):
        xs, ys = zip(*pts)
        ax.plot(xs, ys, "-", color="tab:blue", lw=1.4,
                label=r"RRM $W_\nu(\gamma)$" if nu == 0 else None)
    for n, pts in sorted(lines.items()):
        xs, ys = zip(*pts)
        ax.plot(xs, ys, "--", color="tab:red", lw=1.0,
                label=r"QS lines $\gamma(n+s+1)/2$" if n == 0 else None)
    if points:
        xs, ys = zip(*points)
        ax.plot(xs, ys, "o", color="tab:red", ms=5, label="QS states")
    ax.set_xlabel(r"$\gamma$")
    ax.set_ylabel(r"$W$")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_rrm(record: OutputRecord, path: str) -> None:
    """Convergence of each tracked level with basis size."""
    i_n = _col(record, "N")
    w_cols = [(j, name) for j, name in enumerate(record.columns) if name.startswith("W_nu")]
    fig, ax = plt.subplots()
    Ns = [row[i_n] for row in record.rows]
    for j, name in w_cols:
        ax.plot(Ns, [row[j] for row in record.rows], "o-", label=name.replace("W_nu", r"$\nu$="))
    ax.set_xlabel("basis size N")
    ax.set_ylabel(r"$W_\nu(N)$")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_critical(record: OutputRecord, path: str) -> None:
    """Critical fields versus the radial quantum number (log scale)."""
    i_nu = _col(record, "nu")
    i_g = _col(record, "gamma_c")
    rows = [(row[i_nu], row[i_g]) for row in record.rows if row[i_g] is not None]
    fig, ax = plt.subplots()
    if rows:
        nus, gcs = zip(*rows)
        ax.semilogy(nus, gcs, "o-", color="tab:blue")
    ax.set_xlabel(r"$\nu$")
    ax.set_ylabel(r"$\gamma^c_{\nu s}$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


RENDERERS = {
    "sweep": render_sweep,
    "rrm": render_rrm,
    "critical": render_critical,
}
