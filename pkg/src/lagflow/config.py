"""Run configuration shared by the command-line subcommands."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .integer_family import IntegerSlice, LambdaSpec
from .ode_family import OdeSlice, SeedRecord, find_periodic, load_seeds
from .quadrature import GridSpec, TestFunction

FAMILIES = ("integer", "ode")
SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; serialises to JSON and back unchanged."""

    family: str = "integer"
    lambdas: tuple[float, ...] = (1.0, 1.0, -1.0)
    t_values: tuple[float, ...] = (-0.5,)
    t0: float = 1e-2
    count: int = 8
    alpha: float = 1.0
    phi_center_re: tuple[float, ...] = ()
    phi_center_im: tuple[float, ...] = ()
    phi_radius: float = 1.0
    phi_amplitude: float = 1.0
    n_r: int = 48
    n_polar: int = 24
    n_azimuth: int = 48
    n_s: int = 96
    samples: int = 1000
    rng_seed: int = 0
    limit_tol: float = 0.02
    flow_tol: float = 0.01
    check_flow: bool = True
    output_dir: str = "."
    seed_file: str | None = None
    seed_name: str | None = None

    def __post_init__(self):
        for name in ("lambdas", "t_values", "phi_center_re", "phi_center_im"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        self.validate()

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}")
        if len(self.lambdas) < 2 or any(v == 0 for v in self.lambdas):
            raise ConfigError("lambdas must have at least two nonzero entries")
        n = len(self.lambdas)
        for name in ("phi_center_re", "phi_center_im"):
            vals = getattr(self, name)
            if vals and len(vals) != n:
                raise ConfigError(f"{name} must have {n} entries")
        if self.phi_radius <= 0:
            raise ConfigError("phi_radius must be positive")
        if self.count < 3:
            raise ConfigError("count must be at least 3 for extrapolation")
        if self.seed_file is not None and not Path(self.seed_file).is_file():
            raise ConfigError(f"seed file not found: {self.seed_file}")

    # serialisation
    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return {"schema": SCHEMA_VERSION, **d}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        schema = d.pop("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema {schema}")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.from_json(Path(path).read_text())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    # derived objects
    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.n_r, self.n_polar, self.n_azimuth, self.n_s)

    def test_function(self) -> TestFunction:
        re = self.phi_center_re or (0.0,) * self.n
        im = self.phi_center_im or (0.0,) * self.n
        center = tuple(complex(a, b) for a, b in zip(re, im))
        return TestFunction(center, self.phi_radius, self.phi_amplitude)

    def lambda_spec(self) -> LambdaSpec:
        return LambdaSpec(self.lambdas)

    def seed_record(self) -> SeedRecord:
        lam = tuple(self.lambdas)
        for rec in load_seeds(self.seed_file):
            if self.seed_name is not None and rec.name != self.seed_name:
                continue
            if rec.params.lambdas == lam and rec.params.alpha == self.alpha:
                return rec
        raise ConfigError(f"no periodic seed for lambdas={lam}, alpha={self.alpha}")

    def slice_factory(self):
        """Callable ``t -> slice`` for the configured family."""
        if self.family == "integer":
            spec = self.lambda_spec()
            if spec.total == 0:
                raise ConfigError("special Lagrangian weights have no time dependence")
            return lambda t: IntegerSlice.at_time(spec, t)
        rec = self.seed_record()
        orbit = find_periodic(rec.params, rec.state, period_hint=rec.period_hint)
        return lambda t: OdeSlice(orbit, t)


def as_float_tuple(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(" ", "").split(",") if v)
