"""Heatmaps of the hom-dimension tables carried by check reports."""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# detail keys holding rows [u, v, dim, dim]
PAIR_TABLES = {
    "table": ("left side", "right side"),
    "ideal_quotient_table": ("modulo maps through S", "quotient hom"),
}


def _walk(check: dict, path: tuple = ()):
    yield path + (check["name"],), check
    for part in check.get("parts", []):
        yield from _walk(part, path + (check["name"],))


def dimension_tables(report: dict) -> list[tuple[str, list[str], list[str], np.ndarray]]:
    """``(title, row labels, column labels, matrix)`` for every pair table in a report dict."""
    out = []
    for top in report.get("checks", []):
        for path, check in _walk(top):
            details = check.get("details", {})
            for key, names in PAIR_TABLES.items():
                rows = details.get(key)
                if not rows or not isinstance(rows[0], list) or len(rows[0]) < 4:
                    continue
                rlab = list(dict.fromkeys(r[0] for r in rows))
                clab = list(dict.fromkeys(r[1] for r in rows))
                ri = {lab: i for i, lab in enumerate(rlab)}
                ci = {lab: i for i, lab in enumerate(clab)}
                for col, what in enumerate(names, start=2):
                    mat = np.full((len(rlab), len(clab)), -1, dtype=np.int64)
                    for r in rows:
                        mat[ri[r[0]], ci[r[1]]] = r[col]
                    out.append((f"{' / '.join(path[-2:])}: {what}", rlab, clab, mat))
    return out


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-")


def heatmap(title: str, rows: list[str], cols: list[str], mat: np.ndarray, path: Path) -> Path:
    h, w = max(4.0, 0.35 * len(rows) + 2.0), max(4.0, 0.35 * len(cols) + 2.0)
    fig, ax = plt.subplots(figsize=(w + 1.0, h))
    shown = np.ma.masked_less(mat, 0)
    im = ax.imshow(shown, cmap="viridis", vmin=0, vmax=max(1, int(mat.max())))
    ax.set_xticks(range(len(cols)), cols, rotation=90, fontsize=7)
    ax.set_yticks(range(len(rows)), rows, fontsize=7)
    ax.set_xlabel("second object")
    ax.set_ylabel("first object")
    ax.set_title(title, fontsize=9)
    if mat.size <= 400:
        for i in range(len(rows)):
            for j in range(len(cols)):
                if mat[i, j] >= 0:
                    ax.text(j, i, str(mat[i, j]), ha="center", va="center", fontsize=6, color="w" if mat[i, j] < mat.max() / 2 else "k")
    fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04, label="dimension")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_heatmaps(report: dict, outdir) -> list[Path]:
    """Write one PNG per dimension table; returns the paths written."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    seen: dict[str, int] = {}
    for title, rows, cols, mat in dimension_tables(report):
        stem = _slug(title)
        seen[stem] = seen.get(stem, 0) + 1
        if seen[stem] > 1:
            stem = f"{stem}-{seen[stem]}"
        paths.append(heatmap(title, rows, cols, mat, outdir / f"{stem}.png"))
    return paths
