"""Per-water-class optical coefficients: registry, validation, file I/O.

A coefficient table is a plain-text CSV so users can substitute their own
measurements. Format, also documented in the README:

* lines starting with ``#`` are comments; a ``# source:`` comment carries
  the provenance note,
* the first non-comment line must be the exact header
  ``class,beta_r,beta_g,beta_b,veil_r,veil_g,veil_b``,
* each following line holds one class: a label, three attenuation
  coefficients in 1/m (must be > 0) and three veiling-light values in
  [0, 1]. Channel order is (R, G, B) everywhere.

Tables are immutable after loading and safe to share across workers.
"""

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import math

import numpy as np

from .errors import InvalidCoefficient, MissingFile, ParseError, UnknownWaterClass

#: Built-in Jerlov class labels, open ocean through turbid coastal.
JERLOV_CLASSES = ("I", "II", "III", "1C", "3C", "5C", "7C", "9C")

_HEADER = ("class", "beta_r", "beta_g", "beta_b", "veil_r", "veil_g", "veil_b")
_CHANNELS = ("r", "g", "b")


@dataclass(frozen=True)
class WaterCoefficients:
    """Attenuation and veiling light for one water class, RGB order."""

    class_id: str
    beta: tuple[float, float, float]
    veil: tuple[float, float, float]

    def __post_init__(self):
        if not self.class_id:
            raise InvalidCoefficient(self.class_id, "class", self.class_id)
        for c, value in zip(_CHANNELS, self.beta):
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidCoefficient(self.class_id, f"beta_{c}", value)
        for c, value in zip(_CHANNELS, self.veil):
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise InvalidCoefficient(self.class_id, f"veil_{c}", value)

    def beta_array(self, dtype=np.float64):
        return np.asarray(self.beta, dtype=dtype)

    def veil_array(self, dtype=np.float64):
        return np.asarray(self.veil, dtype=dtype)


@dataclass(frozen=True)
class CoefficientTable:
    """Ordered mapping of class label -> coefficients, plus provenance."""

    entries: dict[str, WaterCoefficients]
    source: str = ""

    @property
    def classes(self):
        return tuple(self.entries)

    def lookup(self, class_id):
        try:
            return self.entries[class_id]
        except KeyError:
            raise UnknownWaterClass(
                f"water class {class_id!r} not in table "
                f"(available: {', '.join(self.entries)})"
            ) from None

    def __contains__(self, class_id):
        return class_id in self.entries

    def __len__(self):
        return len(self.entries)


def parse_coefficient_table(text, origin="<string>"):
    """Parse coefficient-table text. Raises ParseError / InvalidCoefficient."""
    source = ""
    header_seen = False
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.lower().startswith("source:"):
                source = body[len("source:"):].strip()
            continue
        fields = [f.strip() for f in line.split(",")]
        if not header_seen:
            if tuple(f.lower() for f in fields) != _HEADER:
                raise ParseError(
                    f"expected header {','.join(_HEADER)!r}, got {line!r}",
                    line=lineno,
                )
            header_seen = True
            continue
        if len(fields) != 7:
            raise ParseError(f"expected 7 fields, got {len(fields)}", line=lineno)
        class_id = fields[0]
        if class_id in entries:
            raise ParseError(f"duplicate water class {class_id!r}", line=lineno)
        try:
            values = [float(f) for f in fields[1:]]
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        entries[class_id] = WaterCoefficients(
            class_id=class_id,
            beta=(values[0], values[1], values[2]),
            veil=(values[3], values[4], values[5]),
        )
    if not header_seen:
        raise ParseError(f"{origin}: no header line found")
    if not entries:
        raise ParseError(f"{origin}: table has no coefficient rows")
    return CoefficientTable(entries=entries, source=source)


def load_coefficient_table(path):
    """Load and validate a coefficient table from ``path``."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"coefficient table not found: {path}")
    return parse_coefficient_table(path.read_text(), origin=str(path))


def format_coefficient_table(table):
    """Render a table back to its file format (parse round-trips)."""
    lines = []
    if table.source:
        lines.append(f"# source: {table.source}")
    lines.append(",".join(_HEADER))
    for coeffs in table.entries.values():
        row = [coeffs.class_id] + [repr(v) for v in coeffs.beta + coeffs.veil]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def save_coefficient_table(table, path):
    Path(path).write_text(format_coefficient_table(table))


def default_table():
    """The bundled nominal Jerlov table (classes I..III, 1C..9C)."""
    text = resources.files("uwbench.data").joinpath("jerlov_nominal.csv").read_text()
    return parse_coefficient_table(text, origin="uwbench.data/jerlov_nominal.csv")


def resolve_table(path=None):
    """Load ``path`` if given, otherwise the bundled default table."""
    if path is None:
        return default_table()
    return load_coefficient_table(path)
