"""Tagged status output"""

import sys


class Console:
    """Status lines tagged [INFO] / [OK] / [WARNING] / [ERROR]; reports never go here"""

    def __init__(self, quiet=False, stream=None):
        self.quiet = quiet
        self.stream = stream if stream is not None else sys.stderr

    def _emit(self, tag, message):
        print(f"[{tag}] {message}", file=self.stream)

    def info(self, message):
        if not self.quiet:
            self._emit("INFO", message)

    def ok(self, message):
        if not self.quiet:
            self._emit("OK", message)

    def warning(self, message):
        if not self.quiet:
            self._emit("WARNING", message)

    def error(self, message):
        self._emit("ERROR", message)

    def section(self, title):
        if not self.quiet:
            print("\n" + "=" * 80, file=self.stream)
            print(title, file=self.stream)
            print("=" * 80, file=self.stream)

    def table(self, frame):
        """Print a pandas DataFrame summary"""
        if not self.quiet and frame is not None and len(frame):
            print(frame.to_string(index=False), file=self.stream)
