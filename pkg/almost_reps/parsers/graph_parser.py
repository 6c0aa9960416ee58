"""
Graph File Parser
Reads undirected graphs stored as a "n m" header line followed by m lines "u v" (0-based)
"""

from pathlib import Path

import pandas as pd

from almost_reps.utils.errors import SpecError


class GraphFileParser:
    """Parser for edge-list graph files"""

    def __init__(self, filepath):
        """
        Initialize parser with graph file path

        Args:
            filepath: Path to the graph file
        """
        self.filepath = Path(filepath)
        self.n = None
        self.edges = None

    def parse(self):
        """
        Parse the graph file

        Returns:
            Tuple (n, edges) with edges a list of (u, v) pairs
        """
        if not self.filepath.exists():
            raise FileNotFoundError(f"Graph file not found: {self.filepath}")

        with open(self.filepath, 'r') as f:
            header = f.readline().split()
        if len(header) != 2:
            raise SpecError(f"Graph file header must be 'n m': {self.filepath}")
        try:
            n, m = int(header[0]), int(header[1])
        except ValueError as e:
            raise SpecError(f"Graph file header must hold two integers: {header}") from e

        if m == 0:
            edges = []
        else:
            try:
                df = pd.read_csv(self.filepath, sep=r"\s+", skiprows=1, header=None, names=["u", "v"],
                                 comment="#", dtype=int)
            except ValueError as e:
                raise SpecError(f"Malformed edge line in {self.filepath}: {e}") from e
            if len(df) != m:
                raise SpecError(f"Header announces {m} edges, file has {len(df)}")
            edges = list(zip(df["u"].tolist(), df["v"].tolist()))

        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise SpecError(f"Edge ({u},{v}) references a vertex outside 0..{n - 1}")
        self.n, self.edges = n, edges
        return n, edges
