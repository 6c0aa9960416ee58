"""JSON-lines report sink"""

import json
import sys
from pathlib import Path


class ReportWriter:
    """Writes one JSON record per line, keys sorted, to a file or stdout"""

    def __init__(self, filepath=None, stream=None):
        """
        Initialize writer

        Args:
            filepath: Output path; None writes to stream
            stream: Fallback stream (default stdout)
        """
        self.filepath = Path(filepath) if filepath else None
        self._stream = stream if stream is not None else sys.stdout
        self._file = None
        self.count = 0

    def __enter__(self):
        if self.filepath is not None:
            self.filepath.parent.mkdir(parents=True, exist_ok=True)
            self._file = open(self.filepath, 'w')
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def write(self, record):
        target = self._file if self._file is not None else self._stream
        target.write(json.dumps(record, sort_keys=True) + "\n")
        self.count += 1

    def close(self):
        if self._file is not None:
            self._file.close()
            self._file = None


def save_json(data, filepath):
    """Save one JSON document (almost representation or paradoxical pair export)"""
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=2)


def load_json(filepath):
    with open(filepath, 'r') as f:
        return json.load(f)
