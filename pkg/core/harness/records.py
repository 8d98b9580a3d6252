import csv
import os
import sys
from dataclasses import dataclass
from enum import Enum

from core.errors import RunError

TRIAL_FIELDS = ['experiment', 'point', 'trial', 'seed', 'metric', 'value']


def format_value(value) -> str:
    """Floats with 12 significant digits, enums by value, everything else as text."""
    if value is None:
        return ''
    if isinstance(value, Enum):
        value = value.value
    if isinstance(value, float):
        return '%.12g' % value
    return str(value)


@dataclass(frozen=True)
class TrialRecord:
    """One metric of one trial at one parameter point."""
    experiment: str
    point: str
    trial: int
    seed: int
    metric: str
    value: float

    def as_row(self) -> dict:
        return {field: format_value(getattr(self, field)) for field in TRIAL_FIELDS}


def point_label(point: dict) -> str:
    """Stable text form of a parameter point, e.g. ``k=3;eps=0.1``."""
    return ';'.join(f"{key}={format_value(value)}" for key, value in point.items())


class CsvSink:
    """
    CSV writer with a fixed header; counts the rows it has flushed so a failure can report them.

    :param path: Output file, parent directories created on open; ``-`` writes to stdout.
    :param fieldnames: Column order.
    """

    def __init__(self, path: str, fieldnames: list[str]):
        self.path = path
        self.fieldnames = fieldnames
        self.rows_written = 0
        self._file = None
        self._writer = None

    def __enter__(self) -> 'CsvSink':
        if self.path == '-':
            self._writer = csv.DictWriter(sys.stdout, fieldnames=self.fieldnames, lineterminator='\n')
            self._writer.writeheader()
            return self
        try:
            os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
            self._file = open(self.path, 'w', encoding='utf-8', newline='')
            self._writer = csv.DictWriter(self._file, fieldnames=self.fieldnames, lineterminator='\n')
            self._writer.writeheader()
        except OSError as e:
            raise RunError(f"Cannot open {self.path}: {e}", 0)
        return self

    def write(self, row: dict):
        try:
            self._writer.writerow({key: format_value(row.get(key, '')) for key in self.fieldnames})
            if self._file is not None:
                self._file.flush()
        except OSError as e:
            raise RunError(f"Cannot write {self.path}: {e}", self.rows_written)
        self.rows_written += 1

    def __exit__(self, *exc):
        if self._file is not None:
            self._file.close()
        return False


def write_rows(path: str, fieldnames: list[str], rows) -> int:
    """Write every row, returning the count."""
    with CsvSink(path, fieldnames) as sink:
        for row in rows:
            sink.write(row)
        return sink.rows_written
