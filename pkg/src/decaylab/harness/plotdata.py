"""Delimited data series behind each comparison figure.

Every file starts with ``#`` lines naming the figure and its columns;
rendering is left to whatever plotting tool reads them.
"""

from __future__ import annotations

from pathlib import Path

from .scenarios import ComparisonReport, _slug


def _write(path: Path, title: str, columns: list[str], rows) -> Path:
    lines = [f"# {title}", f"# columns: {','.join(columns)}", ",".join(columns)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    return path


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_plot_data(report: ComparisonReport, out_dir) -> list[Path]:
    """Write one CSV per figure analogue and return the paths written.

    * ``<arm>_entropy.csv``: window_index, H (one row per sliding window)
    * ``frequency.csv``: arm, symbol, fraction (two rows per arm)
    * ``plateau.csv``: voltage, count, breakdown (plateau scans only)
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create plot-data directory {out_dir}: {exc.strerror}") from None
    written = []
    for arm in report.arms:
        p = arm.profile
        written.append(
            _write(
                out_dir / f"{_slug(arm.label)}_entropy.csv",
                f"sliding-window Shannon entropy, {arm.label}, window={p.window_size}, "
                f"stride={p.stride}, mean={p.mean_entropy!r}",
                ["window_index", "H"],
                ((i, float(h)) for i, h in enumerate(p.entropies)),
            )
        )
    if report.arms:
        rows = []
        for arm in report.arms:
            rows.append((arm.label, 0, arm.balance[0]))
            rows.append((arm.label, 1, arm.balance[1]))
        written.append(_write(out_dir / "frequency.csv", "bit frequency", ["arm", "symbol", "fraction"], rows))
    if report.plateau:
        pts = report.plateau["points"]
        written.append(
            _write(
                out_dir / "plateau.csv",
                "count vs applied voltage",
                ["voltage", "count", "breakdown"],
                ((pt["voltage"], pt["counts"], pt["breakdown"]) for pt in pts),
            )
        )
    return written
