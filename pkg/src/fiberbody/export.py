"""Geometry export: SVG polygons, OBJ/PLY boundary point clouds, report figures.

SVG files carry one path element per body with a viewBox fitted at 5%
margin; point clouds are gradient-sampled boundary points with the run
manifest in the comment header.  Report figures are matplotlib renderings
written next to the delimited output.
"""

from __future__ import annotations

import numpy as np

from .bodies import Body, SampledSupport, sphere_sample, support_gradient
from .errors import InputError
from .reconstruct import polygon_from_support
from .resultio import RunManifest


# ---------------------------------------------------------------------------
# SVG polygons
# ---------------------------------------------------------------------------

def _svg_path(points: np.ndarray) -> str:
    cmds = [f"M {points[0][0]:.6g} {points[0][1]:.6g}"]
    cmds += [f"L {p[0]:.6g} {p[1]:.6g}" for p in points[1:]]
    cmds.append("Z")
    return " ".join(cmds)


_SVG_COLORS = ("#1f77b4", "#2ca02c", "#7f7f7f", "#d62728", "#9467bd")


def write_svg(path, polygons, manifest: RunManifest, labels=None) -> None:
    """Write one closed path per polygon; y axis flipped so up is positive."""
    polygons = [np.atleast_2d(np.asarray(p, dtype=float)) for p in polygons]
    if not polygons:
        raise InputError("need at least one polygon")
    allpts = np.vstack(polygons)
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * span
    lo, hi = lo - margin, hi + margin
    w, h = hi - lo
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{lo[0]:.6g} {-hi[1]:.6g} {w:.6g} {h:.6g}">',
        "<!--",
        *manifest.to_lines(),
        "-->",
        f'<line x1="{lo[0]:.6g}" y1="0" x2="{hi[0]:.6g}" y2="0" stroke="#bbbbbb" stroke-width="{0.004 * max(w, h):.6g}"/>',
        f'<line x1="0" y1="{-hi[1]:.6g}" x2="0" y2="{-lo[1]:.6g}" stroke="#bbbbbb" stroke-width="{0.004 * max(w, h):.6g}"/>',
    ]
    for i, poly in enumerate(polygons):
        flipped = poly * np.array([1.0, -1.0])
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        label = f'><title>{labels[i]}</title' if labels else ""
        if len(poly) == 1:
            lines.append(
                f'<circle cx="{flipped[0][0]:.6g}" cy="{flipped[0][1]:.6g}" '
                f'r="{0.01 * max(w, h):.6g}" fill="{color}"{label}></circle>'
            )
            continue
        lines.append(
            f'<path d="{_svg_path(flipped)}" fill="none" stroke="{color}" '
            f'stroke-width="{0.008 * max(w, h):.6g}"{label}></path>'
        )
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def export_svg(path, samples, manifest: RunManifest, labels=None) -> list[np.ndarray]:
    """Reconstruct polygons from one or more 2-d support samples and write SVG."""
    if isinstance(samples, SampledSupport):
        samples = [samples]
    polygons = [polygon_from_support(s) for s in samples]
    write_svg(path, polygons, manifest, labels)
    return polygons


# ---------------------------------------------------------------------------
# boundary point clouds
# ---------------------------------------------------------------------------

def boundary_points(body: Body, samples: int, mode: str = "fibonacci") -> np.ndarray:
    """Gradient-sampled boundary points x = grad h(u) on sampled directions.

    At nonsmooth directions the central difference returns a subgradient
    average, which still lies in the (closed convex) boundary face.
    """
    dirs = sphere_sample(body.dim, samples, mode)
    return np.array([support_gradient(body, u) for u in dirs])


def write_pointcloud(path, points: np.ndarray, fmt: str, manifest: RunManifest) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 3:
        raise InputError("point clouds are for 3-dimensional bodies")
    note = "nonsmooth directions yield subgradient points inside boundary faces"
    rows = [" ".join(repr(float(c)) for c in p) for p in pts]
    if fmt == "obj":
        lines = manifest.to_lines() + [f"# {note}"]
        lines += [f"v {row}" for row in rows]
    elif fmt == "ply":
        lines = ["ply", "format ascii 1.0"]
        lines += ["comment " + l.lstrip("# ") for l in manifest.to_lines()]
        lines += [f"comment {note}", f"element vertex {len(pts)}"]
        lines += [f"property double {c}" for c in "xyz"]
        lines += ["end_header"]
        lines += rows
    else:
        raise InputError(f"unknown point cloud format {fmt!r} (use obj or ply)")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def export_pointcloud(path, body: Body, samples: int, fmt: str,
                      manifest: RunManifest) -> np.ndarray:
    pts = boundary_points(body, samples)
    write_pointcloud(path, pts, fmt, manifest)
    return pts


# ---------------------------------------------------------------------------
# matplotlib report figures
# ---------------------------------------------------------------------------

def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_support_figure(path, samples, labels=None, title: str = "") -> None:
    """Render reconstructed bodies (m=2) or support profiles to an image file.

    Written alongside the delimited output as the human-readable half of a
    report: polygons for planar data, value-vs-direction-index otherwise.
    """
    if isinstance(samples, SampledSupport):
        samples = [samples]
    labels = labels or [f"body {i + 1}" for i in range(len(samples))]
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 6))
    if all(s.dim == 2 and len(s) >= 3 for s in samples):
        for s, label in zip(samples, labels):
            poly = polygon_from_support(s)
            closed = np.vstack([poly, poly[:1]])
            ax.plot(closed[:, 0], closed[:, 1], label=label)
            ax.plot(s.directions[:, 0] * s.values, s.directions[:, 1] * s.values,
                    ".", markersize=2, alpha=0.4)
        ax.set_aspect("equal")
        ax.axhline(0.0, color="0.8", lw=0.6)
        ax.axvline(0.0, color="0.8", lw=0.6)
    else:
        for s, label in zip(samples, labels):
            if s.stderr is not None:
                ax.errorbar(np.arange(len(s)), s.values, yerr=3 * s.stderr, fmt=".-",
                            label=label, capsize=2)
            else:
                ax.plot(np.arange(len(s)), s.values, ".-", label=label)
        ax.set_xlabel("direction index")
        ax.set_ylabel("support value")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_residual_figure(path, names, residuals, tolerances, title: str = "") -> None:
    """Bar chart of verification residuals against their tolerances."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 3.5))
    idx = np.arange(len(names))
    resid = np.maximum(np.abs(np.asarray(residuals, dtype=float)), 1e-18)
    tols = np.asarray(tolerances, dtype=float)
    ax.bar(idx, resid, width=0.5, label="residual")
    ax.plot(idx, tols, "r_", markersize=18, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(idx)
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=7)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
