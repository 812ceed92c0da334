"""Experiment configuration: per-kind defaults, config files, flag overrides.

Config files are flat ``key = value`` text ('#' starts a comment); keys match
the CLI flag names with underscores.  CLI flags win over file values, which
win over the per-kind defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from ..errors import ConfigError
from ..initializer import InitScheme

KINDS = ("run", "fig1", "fig2", "theory", "montecarlo", "verify")

DEFAULT_SEED = 777
MATRIX_STREAM = 2**63

_BASE_DEFAULTS = dict(
    m=100, n=100, r=5, d=6,
    sigma1=1.0, sigmar=0.5,
    seed=DEFAULT_SEED, matrix_seed=None,
    trials=5,
    eta=None, eta_mult=None,
    epsilon=1e-8,
    c=4.0, nu=1e-10,
    scheme="unbalanced",
    record_every=10,
    max_iters=5000,
    target=1e-6,
    monitors="log",
    jobs=1,
    out="out",
    t=(0.5, 1.0, 2.0, 3.0),
)

_KIND_DEFAULTS = {
    "run": dict(trials=1),
    "fig1": dict(eta=0.0683),
    "fig2": dict(eta_mult=1e4, record_every=25, max_iters=1000, target=0.0),
    "theory": dict(),
    "montecarlo": dict(d=50, r=10, trials=2000),
    "verify": dict(),
}

_INT_KEYS = {"m", "n", "r", "d", "seed", "matrix_seed", "trials",
             "record_every", "max_iters", "jobs"}
_FLOAT_KEYS = {"sigma1", "sigmar", "eta", "eta_mult", "epsilon", "c", "nu", "target"}
_STR_KEYS = {"scheme", "monitors", "out"}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    m: int
    n: int
    r: int
    d: int
    sigma1: float
    sigmar: float
    seed: int
    matrix_seed: int
    trials: int
    eta: float | None
    eta_mult: float | None
    epsilon: float
    c: float
    nu: float
    scheme: str
    record_every: int
    max_iters: int
    target: float
    monitors: str
    jobs: int
    out: str
    t: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind: unknown experiment kind {self.kind!r}")
        for name in ("m", "n", "r", "d", "trials", "record_every", "max_iters", "jobs"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: must be >= 1, got {getattr(self, name)}")
        if self.r > min(self.m, self.n):
            raise ConfigError(f"r: rank {self.r} exceeds min(m, n) = {min(self.m, self.n)}")
        for name in ("seed", "matrix_seed"):
            if not 0 <= getattr(self, name) < 2**64:
                raise ConfigError(f"{name}: must fit in 64 unsigned bits")
        if not self.sigmar > 0 or self.sigma1 < self.sigmar:
            raise ConfigError(
                f"sigma1/sigmar: need sigma1 >= sigmar > 0, got {self.sigma1}, {self.sigmar}"
            )
        if self.eta is not None and not self.eta > 0:
            raise ConfigError(f"eta: must be positive, got {self.eta}")
        if self.eta_mult is not None and not self.eta_mult > 0:
            raise ConfigError(f"eta_mult: must be positive, got {self.eta_mult}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon: must be positive, got {self.epsilon}")
        if not self.c >= 1:
            raise ConfigError(f"c: must be >= 1, got {self.c}")
        if not 0 < self.nu < 1:
            raise ConfigError(f"nu: must lie in (0, 1), got {self.nu}")
        if self.target < 0:
            raise ConfigError(f"target: must be >= 0, got {self.target}")
        if self.monitors not in ("off", "log", "fatal"):
            raise ConfigError(f"monitors: must be off, log or fatal, got {self.monitors!r}")
        try:
            InitScheme(self.scheme)
        except ValueError:
            raise ConfigError(
                f"scheme: must be one of {[s.value for s in InitScheme]}, got {self.scheme!r}"
            ) from None
        if any(v < 0 for v in self.t):
            raise ConfigError(f"t: deviation values must be >= 0, got {self.t}")


def parse_config_file(path: str | Path) -> dict:
    """Read a flat key=value config file into a raw-value dict."""
    values: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"config: cannot read {path}: {err}") from err
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config: {path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        values[key] = _parse_value(key, value.strip(), where=f"{path}:{lineno}")
    return values


def _parse_value(key: str, value: str, where: str):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _STR_KEYS:
            return value
        if key == "t":
            return tuple(float(v) for v in value.split(","))
    except ValueError as err:
        raise ConfigError(f"config: {where}: bad value for {key}: {err}") from err
    raise ConfigError(f"config: {where}: unknown key {key!r}")


def build_config(kind: str, file_values: dict | None = None,
                 flag_values: dict | None = None) -> ExperimentConfig:
    """Merge defaults, config-file values and CLI flag overrides (flags win)."""
    if kind not in KINDS:
        raise ConfigError(f"kind: unknown experiment kind {kind!r}")
    merged = dict(_BASE_DEFAULTS)
    merged.update(_KIND_DEFAULTS[kind])
    for source in (file_values or {}), (flag_values or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in merged:
                raise ConfigError(f"config: unknown key {key!r}")
            merged[key] = value
    if merged["matrix_seed"] is None:
        merged["matrix_seed"] = merged["seed"]
    if kind == "run" and merged["eta"] is None and merged["eta_mult"] is None:
        merged["eta_mult"] = 1.0
    merged["t"] = tuple(float(v) for v in merged["t"])
    known = {f.name for f in fields(ExperimentConfig)} - {"kind"}
    return ExperimentConfig(kind=kind, **{k: merged[k] for k in known})
