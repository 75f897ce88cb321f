"""
Self-describing CSV and JSON tables written by the command line.

CSV: a ``#`` provenance block (one ``# key: value`` line per parameter), one
header row, comma-separated values with 12 significant digits. JSON: a single
object {schema_version, params, data: {columns, rows}}. Column orders are
frozen in docs/output_schema.md.
"""
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

import pandas as pd

from offdelta.utils.config import SCHEMA_VERSION

FLOAT_FORMAT = "%.12g"


def _plain(value: Any) -> Any:
    # numpy scalars and enums to JSON-native values
    if hasattr(value, "value") and not isinstance(value, (int, float, str)):
        return value.value
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _format_param(value: Any) -> str:
    if isinstance(value, float):
        return FLOAT_FORMAT % value if math.isfinite(value) else repr(value)
    if isinstance(value, str):
        return value
    return json.dumps(value)


@dataclass
class OutputEnvelope:
    """
    A result table with its provenance.

    Attributes:
        columns (List[str]): Column names in frozen order.
        rows (List[List[Any]]): Row values.
        params (Dict[str, Any]): Parameter echo and tolerances.
        schema_version (str): Version of the column schema.
    """
    columns: List[str]
    rows: List[List[Any]]
    params: Dict[str, Any] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        self.rows = [[_plain(v) for v in row] for row in self.rows]
        self.params = {k: _plain(v) for k, v in self.params.items()}
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row!r} does not match columns {self.columns!r}")

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write(f"# schema_version: {self.schema_version}\n")
        for key, value in self.params.items():
            buffer.write(f"# {key}: {_format_param(value)}\n")
        self.frame().to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buffer.getvalue()

    def to_json(self) -> str:
        document = {
            "schema_version": self.schema_version,
            "params": self.params,
            "data": {"columns": self.columns, "rows": self.rows},
        }
        return json.dumps(document, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    @classmethod
    def from_json(cls, text: str) -> "OutputEnvelope":
        """
        Rebuilds an envelope from its JSON form.

        Raises:
            ValueError: If the document lacks the envelope keys.
        """
        document = json.loads(text)
        try:
            data = document["data"]
            return cls(
                columns=list(data["columns"]),
                rows=[list(row) for row in data["rows"]],
                params=dict(document["params"]),
                schema_version=str(document["schema_version"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"not an output envelope: {exc}") from exc

