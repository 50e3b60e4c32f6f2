"""Benchmark tables: AbsRel / delta-1 per model per dataset.

``emit_table`` is a pure function of its rows: values print with four
decimals, the best value per column is marked (bold in markdown), and
missing cells render as ``--``. Column order is fixed as
(FLSea-Canyon, FLSea-Red Sea, SQUID) when those labels appear, with any
other datasets following in first-appearance order.
"""

from dataclasses import dataclass, field

PREFERRED_DATASET_ORDER = ("FLSea-Canyon", "FLSea-Red Sea", "SQUID")

#: (column key, header label, True if higher is better)
_METRICS = (("abs_rel", "AbsRel", False), ("delta1", "δ1", True))


@dataclass(frozen=True)
class BenchmarkRow:
    """One model row: dataset label -> (abs_rel, delta1), missing allowed."""

    model: str
    cells: dict = field(default_factory=dict)


def dataset_columns(rows):
    """Preferred datasets first, then the rest in first-appearance order."""
    seen = []
    for row in rows:
        for name in row.cells:
            if name not in seen:
                seen.append(name)
    preferred = [name for name in PREFERRED_DATASET_ORDER if name in seen]
    rest = [name for name in seen if name not in PREFERRED_DATASET_ORDER]
    return preferred + rest


def _best_values(rows, dataset, index, higher_better):
    values = [row.cells[dataset][index] for row in rows
              if row.cells.get(dataset) is not None]
    if not values:
        return None
    return max(values) if higher_better else min(values)


def _format_cells(rows, datasets):
    """Per-row list of (text, is_best) cells, two per dataset."""
    formatted = {row.model: [] for row in rows}
    for dataset in datasets:
        for index, (_, _, higher_better) in enumerate(_METRICS):
            best = _best_values(rows, dataset, index, higher_better)
            for row in rows:
                cell = row.cells.get(dataset)
                if cell is None:
                    formatted[row.model].append(("--", False))
                else:
                    value = cell[index]
                    formatted[row.model].append(
                        (f"{value:.4f}", best is not None and value == best)
                    )
    return formatted


def emit_table(rows, fmt="md"):
    """Render rows as markdown (bold best) or CSV; same numbers either way."""
    rows = [row if isinstance(row, BenchmarkRow) else BenchmarkRow(**row)
            for row in rows]
    if not rows:
        raise ValueError("emit_table needs at least one row")
    datasets = dataset_columns(rows)
    headers = ["Model"] + [
        f"{dataset} {label}" for dataset in datasets for _, label, _ in _METRICS
    ]
    formatted = _format_cells(rows, datasets)

    if fmt == "md":
        lines = [
            "| " + " | ".join(headers) + " |",
            "|" + "|".join("---" for _ in headers) + "|",
        ]
        for row in rows:
            cells = [
                f"**{text}**" if best else text
                for text, best in formatted[row.model]
            ]
            lines.append("| " + " | ".join([row.model] + cells) + " |")
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        lines = [",".join(headers)]
        for row in rows:
            cells = [text for text, _ in formatted[row.model]]
            lines.append(",".join([_csv_quote(row.model)] + cells))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}, expected 'md' or 'csv'")


def _csv_quote(text):
    if "," in text or '"' in text:
        return '"' + text.replace('"', '""') + '"'
    return text


def rows_from_eval_summaries(summaries):
    """Build table rows from eval summary dicts carrying model/dataset labels.

    Each summary needs ``model``, ``dataset``, ``abs_rel`` and ``delta``
    (delta1 is the first entry). Rows keep first-appearance model order.
    """
    rows = {}
    for summary in summaries:
        model = summary["model"]
        dataset = summary["dataset"]
        row = rows.setdefault(model, BenchmarkRow(model=model, cells={}))
        row.cells[dataset] = (float(summary["abs_rel"]), float(summary["delta"][0]))
    return list(rows.values())
