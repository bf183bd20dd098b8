import csv
import hashlib
import json
import logging
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

logger = logging.getLogger(__name__)


class ReportLevel(Enum):
    BASIC = 1
    VERBOSE = 2


class RunReport:
    """Ordered key/value report for one command run.

    Plain mode writes `key=value` lines; structured mode writes one sorted JSON
    object. Nothing time-dependent goes in, so identical runs give identical bytes.
    """

    def __init__(self, command: str, level: ReportLevel = ReportLevel.BASIC,
                 output_file: Optional[str] = None, structured: bool = False):
        self.command = command
        self.level = level
        self.structured = structured
        self.output_file = output_file
        self.entries: List[Tuple[str, Any]] = [('command', command)]
        self.outputs: List[str] = []
        self._file_handle: Optional[TextIO] = None

    def __enter__(self):
        if self.output_file:
            self._file_handle = open(self.output_file, 'w')
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self._file_handle:
            self._file_handle.close()
            self._file_handle = None

    def add(self, key: str, value: Any, level: ReportLevel = ReportLevel.BASIC) -> None:
        if level.value > self.level.value:
            return
        self.entries.append((key, value))

    def add_digest(self, name: str, text: str) -> None:
        self.add(f"input.{name}.sha256", input_digest(text))

    def add_output(self, path: str) -> None:
        self.outputs.append(path)

    def get(self, key: str, default: Any = None) -> Any:
        for k, v in reversed(self.entries):
            if k == key:
                return v
        return default

    def as_dict(self) -> Dict[str, Any]:
        data = {k: _plain(v) for k, v in self.entries}
        if self.outputs:
            data['outputs'] = list(self.outputs)
        return data

    def render(self) -> str:
        if self.structured:
            return json.dumps(self.as_dict(), sort_keys=True)
        lines = [f"{k}={_format_value(v)}" for k, v in self.entries]
        lines += [f"output={path}" for path in self.outputs]
        return "\n".join(lines)

    def emit(self, stream: Optional[TextIO] = None) -> None:
        text = self.render()
        if self._file_handle:
            self._file_handle.write(text + '\n')
            self._file_handle.flush()
        if stream is not None:
            stream.write(text + '\n')
        elif not self._file_handle:
            print(text)


def input_digest(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if hasattr(value, 'item'):
        return _plain(value.item())
    return value


def _format_value(value: Any) -> str:
    value = _plain(value)
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    count = 0
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
            count += 1
    logger.debug(f"Wrote {count} rows to {path}")
    return count
