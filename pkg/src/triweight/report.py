"""Figure rendering for the CLI report path.

Every renderer writes one PNG next to the delimited output.  matplotlib is
forced onto the Agg backend so the CLI stays headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import matplotlib.tri as mtri    # noqa: E402
import numpy as np               # noqa: E402

_DPI = 150


def _triangle_outline(ax):
    ax.plot([0, 1, 0, 0], [0, 0, 1, 0], color="black", linewidth=1.0)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_aspect("equal")


def _triangle_grid(resolution=60):
    pts = []
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            pts.append((i / resolution, j / resolution))
    pts = np.array(pts)
    tri = mtri.Triangulation(pts[:, 0], pts[:, 1])
    # drop cells whose centroid leaves the triangle
    cx = pts[tri.triangles, 0].mean(axis=1)
    cy = pts[tri.triangles, 1].mean(axis=1)
    tri.set_mask(cx + cy > 1.0 + 1e-12)
    return tri


def render_quadrature(rule, path):
    fig, ax = plt.subplots(figsize=(5, 4.5))
    sizes = 300.0 * rule.weights / rule.weights.max()
    sc = ax.scatter(rule.nodes[:, 0], rule.nodes[:, 1], s=sizes,
                    c=rule.weights, cmap="viridis")
    fig.colorbar(sc, ax=ax, label="weight")
    _triangle_outline(ax)
    ax.set_title(f"{len(rule.weights)} quadrature nodes")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_moments(rows, path):
    max_m = max(r[0] for r in rows)
    max_n = max(r[1] for r in rows)
    grid = np.full((max_m + 1, max_n + 1), np.nan)
    for m, n, value in rows:
        grid[m, n] = np.log10(value) if value > 0 else np.nan
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(grid.T, origin="lower", cmap="magma")
    fig.colorbar(im, ax=ax, label="log10 moment")
    ax.set_xlabel("m")
    ax.set_ylabel("n")
    ax.set_title("Dirichlet moments")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_spectrum(values, path):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(np.arange(len(values)), values, marker=".", linestyle="none")
    ax.axhline(2.0, color="gray", linewidth=0.8, linestyle="--",
               label="lower bound 2")
    ax.set_xlabel("index")
    ax.set_ylabel("Ritz value")
    ax.set_title("eigenvalues (ascending)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_solution(poly, path, title="solution"):
    tri = _triangle_grid()
    values = np.array([float(poly(x, y)) for x, y in zip(tri.x, tri.y)])
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    cs = ax.tricontourf(tri, values, levels=24, cmap="viridis")
    fig.colorbar(cs, ax=ax)
    _triangle_outline(ax)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_convergence(rows, path, count=10):
    """rows: sequence of (degree, values ascending)."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    degrees = [r[0] for r in rows]
    for k in range(min(count, min(len(r[1]) for r in rows))):
        ax.plot(degrees, [r[1][k] for r in rows], marker="o",
                label=f"value {k}" if k < 5 else None)
    ax.set_xlabel("basis degree")
    ax.set_ylabel("Ritz value")
    ax.set_title("Ritz value convergence")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
