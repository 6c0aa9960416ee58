"""Run configuration for Almost Reps"""

import json
from pathlib import Path

from almost_reps.linalg.field import make_field
from almost_reps.utils.errors import SpecError

COMMANDS = (
    "folner-scan",
    "almostrep-build",
    "amplify",
    "tensor",
    "paradox",
    "audit-rank",
    "commutator-check",
    "rr-estimate",
    "verify",
)

DEFAULTS = {
    "command": None,
    "field": "gfp:32003",
    "algebra": {"carrier": "group", "group": "Z^d", "d": 1},
    "algebra_b": None,
    "graph": None,
    "B": None,
    "L": None,
    "Q": None,
    "exhaustion": None,
    "n": 5,
    "n_max": 10,
    "K": 1,
    "K_scan": None,
    "boundary_shells": 2,
    "m": 2,
    "n_cols": 1,
    "A": None,
    "B_matrix": None,
    "p": None,
    "a": None,
    "delta": None,
    "amplify_n": 2,
    "trials": 100,
    "sizes": [2, 16],
    "perturbation_rank": 1,
    "seed": 0,
    "rep": None,
    "rep_output": None,
    "pair_output": None,
    "output": None,
}

INTEGER_KEYS = ("n", "n_max", "K", "boundary_shells", "m", "n_cols", "amplify_n", "trials", "seed",
                "perturbation_rank")
POSITIVE_KEYS = ("n", "n_max", "K", "amplify_n")

_MISSING = object()


class RunConfig:
    """Layered run configuration: built-in defaults, then a JSON file, then explicit overrides"""

    def __init__(self, config_path=None, overrides=None):
        """
        Initialize configuration

        Args:
            config_path: Optional path to a JSON run configuration
            overrides: Optional dict of values taking precedence (None values are ignored)
        """
        self.config_path = Path(config_path) if config_path else None
        self.data = dict(DEFAULTS)
        if self.config_path is not None:
            self.data.update(self._load(self.config_path))
        for key, value in (overrides or {}).items():
            if value is not None:
                self.data[key] = value

    @staticmethod
    def _load(path):
        if not path.exists():
            raise SpecError(f"Config file not found: {path}")
        with open(path, 'r') as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise SpecError(f"Config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise SpecError(f"Config file {path} must hold a JSON object")
        return data

    def get(self, *keys, default=_MISSING):
        """
        Get nested config value

        Args:
            *keys: Sequence of keys to traverse nested dicts
            default: Returned when the path is missing (raises KeyError if not given)

        Returns:
            Configuration value at specified path

        Example:
            config.get('exhaustion', 'type', default='ball')
        """
        value = self.data
        for key in keys:
            if not isinstance(value, dict) or key not in value or value[key] is None:
                if default is _MISSING:
                    raise KeyError("/".join(keys))
                return default
            value = value[key]
        return value

    @property
    def command(self):
        return self.data.get("command")

    def resolve_path(self, value):
        """Relative file references are taken relative to the config file"""
        path = Path(value)
        if not path.is_absolute() and self.config_path is not None and not path.exists():
            candidate = self.config_path.parent / path
            if candidate.exists():
                return candidate
        return path

    def validate(self):
        """
        Check the configuration before a run

        Raises:
            SpecError: unknown command, bad field, bad integer parameter or missing file
        """
        if self.command not in COMMANDS:
            raise SpecError(f"Unknown or missing command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        make_field(self.data.get("field"))
        for key in INTEGER_KEYS:
            value = self.data.get(key)
            if isinstance(value, bool) or not isinstance(value, int):
                raise SpecError(f"Parameter {key} must be an integer, got {value!r}")
            if value < 0:
                raise SpecError(f"Parameter {key} must be non-negative, got {value}")
        for key in POSITIVE_KEYS:
            if self.data[key] < 1:
                raise SpecError(f"Parameter {key} must be >= 1")
        for key in ("algebra", "algebra_b", "rep"):
            value = self.data.get(key)
            if isinstance(value, str) and not self.resolve_path(value).exists():
                raise SpecError(f"File for {key} not found: {value}")
        graph = self.data.get("graph")
        if isinstance(graph, dict) and graph.get("type") == "file":
            graph = graph.get("path")
        if isinstance(graph, str) and not self.resolve_path(graph).exists():
            raise SpecError(f"Graph file not found: {graph}")
        if self.command == "verify" and not self.data.get("rep"):
            raise SpecError("verify needs an almost representation file (rep)")
        if self.command == "tensor" and self.data.get("algebra_b") is None:
            self.data["algebra_b"] = self.data["algebra"]
        return self

    def params(self):
        """Parameters echoed into every report record"""
        keys = ("field", "n", "n_max", "K", "seed", "amplify_n", "trials")
        return {k: self.data[k] for k in keys if self.data.get(k) is not None}
