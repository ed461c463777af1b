"""Quick-look figures rendered next to the delimited outputs.

Everything is drawn through the Agg backend with a fixed svg.hashsalt
and no embedded date, so rendering the same data twice produces
byte-identical files. These are inspection aids, not publication
graphics.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .distance import format_distance
from .typology import _ordered

matplotlib.rcParams["svg.hashsalt"] = "deppoly"


def _save(fig, path):
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)


def save_heatmap(matrix, path):
    """Annotated heat map of a language distance matrix."""
    n = matrix.size
    data = np.array([[float(v) for v in row] for row in matrix.values])
    fig, ax = plt.subplots(figsize=(0.55 * n + 1.6, 0.55 * n + 1.2))
    image = ax.imshow(data, cmap="viridis")
    ax.set_xticks(range(n), matrix.labels, rotation=90, fontsize=7)
    ax.set_yticks(range(n), matrix.labels, fontsize=7)
    threshold = data.max() / 2 if data.max() > 0 else 0
    for i in range(n):
        for j in range(n):
            ax.text(
                j, i, format_distance(matrix.values[i][j]),
                ha="center", va="center", fontsize=5,
                color="white" if data[i, j] < threshold else "black",
            )
    fig.colorbar(image, ax=ax, shrink=0.8)
    ax.set_title("pairwise language distance")
    fig.tight_layout()
    _save(fig, path)


def save_mds(embedding, path):
    """Scatter of the first two embedding coordinates with labels."""
    xs = embedding.coords[:, 0]
    ys = embedding.coords[:, 1] if embedding.coords.shape[1] > 1 else np.zeros_like(xs)
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(xs, ys, s=18, color="#1f6fb4")
    for label, x, y in zip(embedding.labels, xs, ys):
        ax.annotate(label, (x, y), textcoords="offset points", xytext=(4, 3), fontsize=8)
    ax.axhline(0, color="0.85", lw=0.8, zorder=0)
    ax.axvline(0, color="0.85", lw=0.8, zorder=0)
    ax.set_xlabel("dimension 1")
    ax.set_ylabel("dimension 2")
    ax.set_title("classical MDS of language distances")
    fig.tight_layout()
    _save(fig, path)


def _layout(node, next_x, segments, positions):
    # returns the node's x position; fills segments with line coordinates
    if node.is_leaf:
        x = next_x[0]
        next_x[0] += 1
        positions.append((node.label, x))
        return x
    child_info = []
    for child in _ordered(node.children):
        cx = _layout(child, next_x, segments, positions)
        child_info.append((cx, float(child.height)))
        segments.append(((cx, float(child.height)), (cx, float(node.height))))
    lo = min(cx for cx, _ in child_info)
    hi = max(cx for cx, _ in child_info)
    segments.append(((lo, float(node.height)), (hi, float(node.height))))
    return (lo + hi) / 2


def save_dendrogram(dendrogram, path):
    """Draw a merge tree with leaves on the x axis and height on y."""
    segments = []
    positions = []
    _layout(dendrogram, [0], segments, positions)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.45 * len(positions) + 1), 4.5))
    for (x0, y0), (x1, y1) in segments:
        ax.plot([x0, x1], [y0, y1], color="#1f6fb4", lw=1.2)
    ax.set_xticks([x for _, x in positions], [lab for lab, _ in positions],
                  rotation=90, fontsize=8)
    ax.set_ylabel("merge height")
    ax.set_title("UPGMA dendrogram")
    ax.set_ylim(bottom=0)
    fig.tight_layout()
    _save(fig, path)


def save_histogram(stats, path):
    """Bar chart of a corpus's pairwise-distance bins, diameter marked."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    lows = [float(lo) for lo, _, _ in stats.bins]
    counts = [count for _, _, count in stats.bins]
    width = float(stats.bin_width)
    ax.bar(lows, counts, width=width, align="edge", color="#1f6fb4", edgecolor="white")
    ax.axvline(float(stats.diameter), color="#b02a1f", lw=1.2,
               label=f"diameter {format_distance(stats.diameter)}")
    ax.set_xlabel("pairwise sentence distance")
    ax.set_ylabel("pairs")
    ax.set_title(f"{stats.language}: {stats.n_pairs} pairwise distances")
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
