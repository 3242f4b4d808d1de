"""Figures for sweep reports: verdict counts per check and a check-by-prime grid."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

COLORS = {"pass": "#4c9a5b", "fail": "#c8453c", "precondition-unmet": "#b9b9b9"}
# Cell codes for the grid: no case, all unmet, all pass, some failure.
GRID_CMAP = ListedColormap(["#ffffff", COLORS["precondition-unmet"], COLORS["pass"], COLORS["fail"]])


def verdict_bars(counts: dict, path: Path) -> Path:
    checks = list(counts)
    fig, ax = plt.subplots(figsize=(8, 0.3 * len(checks) + 1.5))
    left = [0] * len(checks)
    for verdict, color in COLORS.items():
        widths = [counts[c].get(verdict, 0) for c in checks]
        ax.barh(checks, widths, left=left, color=color, label=verdict)
        left = [a + b for a, b in zip(left, widths)]
    ax.invert_yaxis()
    ax.set_xscale("symlog")
    ax.set_xlabel("cases")
    ax.legend(loc="lower right", fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def prime_grid(records: list, path: Path) -> Path | None:
    """One cell per (check, prime): red if any case failed, green if any passed."""
    cells = {}
    for r in records:
        if r["p"] is None:
            continue
        key = (r["check"], r["p"])
        code = {"precondition-unmet": 1, "pass": 2, "fail": 3}[r["verdict"]]
        cells[key] = max(cells.get(key, 0), code)
    if not cells:
        return None
    checks = list(dict.fromkeys(c for c, _ in cells))
    primes = sorted({p for _, p in cells})
    grid = [[cells.get((c, p), 0) for p in primes] for c in checks]
    fig, ax = plt.subplots(figsize=(max(6, 0.22 * len(primes) + 2), 0.3 * len(checks) + 1.5))
    ax.imshow(grid, cmap=GRID_CMAP, vmin=0, vmax=3, aspect="auto", interpolation="nearest")
    ax.set_yticks(range(len(checks)), checks, fontsize=8)
    step = max(1, len(primes) // 20)
    ax.set_xticks(range(0, len(primes), step), [str(p) for p in primes[::step]], fontsize=7)
    ax.set_xlabel("p")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def write_figures(report, plot_dir: str | Path) -> list[str]:
    plot_dir = Path(plot_dir)
    plot_dir.mkdir(parents=True, exist_ok=True)
    written = [verdict_bars(report.counts, plot_dir / "verdicts.png")]
    grid = prime_grid(report.records, plot_dir / "prime_grid.png")
    if grid is not None:
        written.append(grid)
    return [p.name for p in written]
