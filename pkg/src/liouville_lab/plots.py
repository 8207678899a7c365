"""Figure rendering for the report paths.

Each CSV table a subcommand or scenario writes can be rendered to a PNG next
to it.  Figures are diagnostic, not publication styling; the CSV stays the
primary artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_table", "plot_field", "plot_mesh"]

_DPI = 150


def _subplot():
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.grid(True, alpha=0.3)
    return fig, ax


def render_table(stem: str, header: list, rows: list, png_path) -> bool:
    """Render a table written by the CLI to a figure; returns False when the
    table has no meaningful plot."""
    if not rows:
        return False
    cols = {name: [r[i] for r in rows] for i, name in enumerate(header)}

    def as_float(name):
        return np.array([float(v) for v in cols[name]])

    if {"t", "m", "ell"} <= set(header):
        fig, ax = _subplot()
        t = as_float("t")
        ax.plot(t, as_float("m"), label="m(t)")
        ax.plot(t, as_float("ell"), label="l(t)")
        if "defect" in header:
            ax.plot(t, as_float("defect"), label="Bol defect")
        ax.set_xlabel("level t")
        ax.legend()
    elif {"mass", "nu_hat"} <= set(header):
        fig, ax = _subplot()
        ax.plot(as_float("mass") / np.pi, as_float("nu_hat"), "o-")
        ax.set_xlabel("mass / pi")
        ax.set_ylabel("nu_hat")
    elif {"name", "lhs", "rhs"} <= set(header):
        fig, ax = _subplot()
        names = cols["name"]
        margin = as_float("lhs") - as_float("rhs")
        y = np.arange(len(names))
        ax.barh(y, margin)
        ax.set_yticks(y, names, fontsize=7)
        ax.set_xlabel("lhs - rhs")
        ax.axvline(0.0, color="k", lw=0.8)
        fig.set_size_inches(6.0, 0.5 + 0.3 * len(names))
    elif {"t", "R", "phi_star"} <= set(header):
        fig, ax = _subplot()
        ax.plot(as_float("R"), as_float("phi_star"), ".-")
        ax.set_xlabel("r")
        ax.set_ylabel("phi*")
    elif {"h", "nu_hat"} <= set(header):
        fig, ax = _subplot()
        ax.loglog(as_float("h"), np.abs(as_float("nu_hat")) + 1e-16, "o-")
        ax.set_xlabel("h")
        ax.set_ylabel("|nu_hat|")
    elif {"c", "rel_dmass"} <= set(header):
        fig, ax = _subplot()
        ax.semilogy(as_float("c"), as_float("rel_dmass") + 1e-18, "o-", label="mass")
        ax.semilogy(as_float("c"), as_float("rel_dell") + 1e-18, "s-", label="ell")
        ax.set_xlabel("gauge constant c")
        ax.set_ylabel("relative drift")
        ax.legend()
    else:
        return False
    ax.set_title(stem)
    fig.tight_layout()
    fig.savefig(png_path, dpi=_DPI)
    plt.close(fig)
    return True


def plot_field(field, png_path, title: str = "") -> None:
    """Filled-contour rendering of a nodal field on its mesh."""
    mesh = field.mesh
    fig, ax = plt.subplots(figsize=(5.0, 4.6))
    tp = ax.tripcolor(mesh.vertices[:, 0], mesh.vertices[:, 1],
                      mesh.triangles, field.values, shading="gouraud")
    fig.colorbar(tp, ax=ax)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(png_path, dpi=_DPI)
    plt.close(fig)


def plot_mesh(mesh, png_path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.triplot(mesh.vertices[:, 0], mesh.vertices[:, 1], mesh.triangles,
               lw=0.3, color="tab:blue")
    for lp in mesh.boundary_loops:
        pts = mesh.vertices[np.append(lp, lp[0])]
        ax.plot(pts[:, 0], pts[:, 1], "r-", lw=1.0)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(png_path, dpi=_DPI)
    plt.close(fig)
