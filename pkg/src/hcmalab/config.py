"""Flat key = value run configuration and endpoint/density specifications.

Endpoint specs::

    zero | const:<c> | cos:<amplitude>[:<mode>] | degenerate:<fraction>[:<mode>]
    | ckpt:<file>[:<level>]

where ``<mode>`` is a comma-separated integer vector over (x_1, y_1, ...).
Density specs for f::

    zero | cos:<amplitude>[:<mode>] | npy:<file>
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import potentials
from .continuation import default_schedule, default_smoothing
from .errors import CheckpointError, ConfigError
from .grid import TorusGrid
from .oracle import DEFAULT_SEED


@dataclass
class RunConfig:
    n: int = 1
    N: int = 32
    Nt: int = 17
    phi0: str = "zero"
    phi1: str = "zero"
    phi2: str = "zero"
    eps: float = 0.1
    delta: float = None  # endpoint smoothing for single solves
    schedule: list = field(default_factory=default_schedule)
    smoothing: list = None  # None/auto -> pair defaults only for H11 endpoints; [] / none -> never
    f: str = "zero"
    tol: float = 1e-9
    max_newton: int = 50
    max_krylov: int = 400
    damping: float = 0.1
    out: str = "out"
    seed: int = DEFAULT_SEED
    oracle_count: int = 100_000
    checkpoint: str = None
    fd_step: float = 1e-4
    progress: bool = False

    def grid(self):
        return TorusGrid(self.n, self.N, self.Nt)

    def resolved_smoothing(self, degenerate=True):
        """Smoothing deltas paired with the schedule, or None for no smoothing."""
        if self.smoothing is None:
            return default_smoothing(self.schedule) if degenerate else None
        if len(self.smoothing) == 0:
            return None
        return list(self.smoothing)

    def validate(self):
        if self.n not in (1, 2):
            raise ConfigError(f"n must be 1 or 2, got {self.n}")
        if self.N < 8:
            raise ConfigError(f"grid must be >= 8, got {self.N}")
        if self.Nt < 5:
            raise ConfigError(f"nt must be >= 5, got {self.Nt}")
        if not self.eps > 0:
            raise ConfigError(f"epsilon must be positive, got {self.eps}")
        if self.delta is not None and not 0 < self.delta <= 1:
            raise ConfigError(f"delta must lie in (0, 1], got {self.delta}")
        if not self.schedule or any(e <= 0 for e in self.schedule):
            raise ConfigError("schedule must be a nonempty list of positive eps")
        if any(b >= a for a, b in zip(self.schedule, self.schedule[1:])):
            raise ConfigError("schedule must be strictly decreasing")
        sm = self.resolved_smoothing()
        if sm is not None:
            if len(sm) != len(self.schedule):
                raise ConfigError("smoothing must have one delta per schedule entry")
            if any(not 0 < d <= 1 for d in sm):
                raise ConfigError("smoothing deltas must lie in (0, 1]")
        if self.tol <= 0 or self.max_newton < 1 or self.max_krylov < 1:
            raise ConfigError("solver options must be positive")
        if not 0 < self.damping < 1:
            raise ConfigError("damping must lie in (0, 1)")
        if self.oracle_count < 1:
            raise ConfigError("oracle_count must be positive")
        if self.fd_step <= 0:
            raise ConfigError("fd_step must be positive")
        return self

    def to_dict(self):
        return dataclasses.asdict(self)


_CASTS = {
    int: int,
    float: float,
    str: str,
    bool: lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def _parse_list(text):
    text = text.strip()
    if text.lower() in ("", "none", "[]"):
        return []
    return [float(x) for x in text.split(",") if x.strip()]


def _coerce(key, raw):
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    if key not in fields:
        raise ConfigError(f"unknown config key {key!r}")
    if isinstance(raw, str) and raw.strip().lower() == "none" and key in ("delta", "checkpoint"):
        return None
    if key == "smoothing" and isinstance(raw, str) and raw.strip().lower() == "auto":
        return None
    try:
        if key in ("schedule", "smoothing"):
            return _parse_list(raw) if isinstance(raw, str) else [float(x) for x in raw]
        if key == "seed":
            return int(raw, 0) if isinstance(raw, str) else int(raw)
        if key == "delta":
            return float(raw)
        default = fields[key].default
        cast = _CASTS.get(type(default), str)
        return cast(raw) if isinstance(raw, str) else type(default)(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc


def parse_config_text(text):
    """``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        values[key] = _coerce(key, raw)
    return values


def build_config(file_text=None, overrides=None):
    values = parse_config_text(file_text) if file_text else {}
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = _coerce(k, v) if isinstance(v, str) else v
    try:
        return RunConfig(**values).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_mode(text, grid):
    if text is None:
        return None
    try:
        mode = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad mode {text!r}") from exc
    if len(mode) != grid.ndim_real or not any(mode):
        raise ConfigError(f"mode {mode} must be a nonzero {grid.ndim_real}-vector")
    return mode


def endpoint_from_spec(spec, grid):
    """Build a KahlerPotential from an endpoint spec string."""
    parts = spec.split(":")
    kind = parts[0].strip().lower()
    try:
        if kind == "zero":
            return potentials.zero(grid)
        if kind == "const":
            return potentials.constant(grid, float(parts[1]))
        if kind == "cos":
            mode = _parse_mode(parts[2], grid) if len(parts) > 2 else None
            return potentials.cosine(grid, float(parts[1]), mode)
        if kind == "degenerate":
            frac = float(parts[1]) if len(parts) > 1 else 1.0
            mode = _parse_mode(parts[2], grid) if len(parts) > 2 else None
            return potentials.make_degenerate_endpoint(grid, frac, mode)
        if kind == "ckpt":
            from .store import checkpoint_read

            path, _, _ = checkpoint_read(parts[1])
            if path.grid != grid:
                raise ConfigError(f"checkpoint grid {path.grid} differs from run grid {grid}")
            level = int(parts[2]) if len(parts) > 2 else 0
            return path.snapshot(level)
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad endpoint spec {spec!r}: {exc}") from exc
    except (CheckpointError, OSError) as exc:
        raise ConfigError(f"cannot load endpoint {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown endpoint family {kind!r}")


def density_from_spec(spec, grid):
    parts = spec.split(":")
    kind = parts[0].strip().lower()
    try:
        if kind == "zero":
            return np.zeros(grid.spatial_shape)
        if kind == "cos":
            mode = _parse_mode(parts[2], grid) if len(parts) > 2 else None
            return potentials.cosine(grid, float(parts[1]), mode).values.copy()
        if kind == "npy":
            f = np.load(parts[1])
            if f.shape not in (grid.spatial_shape, grid.interior_shape):
                raise ConfigError(f"density array has shape {f.shape}")
            return f
    except (IndexError, ValueError, OSError) as exc:
        raise ConfigError(f"bad density spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown density family {kind!r}")
