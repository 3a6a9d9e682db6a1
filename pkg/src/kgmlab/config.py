"""Run configuration: defaults, flat key=value config files, CLI overrides.

Precedence is defaults < config file < CLI flags.  The resolved configuration
(minus the output directory) is hashed and the hash is stamped into every
report, so identical configurations are guaranteed byte-identical reports.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields

from .errors import ParameterDomainError

MODES = ("solve", "instanton", "verify")

_BOOL_KEYS = {"override_admissibility", "mu_rule"}
_INT_KEYS = {"dimension", "nodes", "knots", "seed", "max_nodes"}
_FLOAT_KEYS = {"mass", "omega", "mu", "q", "r_max", "tol",
               "mu_continuation_factor", "R"}
_STR_KEYS = {"mode", "phi_boundary", "eps_decades"}


@dataclass
class RunConfig:
    mode: str = "verify"
    # physical parameters
    dimension: int = 4
    mass: float = 2.0
    omega: float = 1.0
    mu: float = 1.0
    q: float = 3.0
    # grid settings
    r_max: float = 20.0
    nodes: int = 2049
    # solver settings
    tol: float = 1e-9
    knots: int = 11
    mu_continuation_factor: float = 0.8
    override_admissibility: bool = False
    phi_boundary: str = "dirichlet"
    # instanton settings
    R: float = 1.0
    eps_decades: str = "1:4"
    mu_rule: bool = False
    max_nodes: int = 2 ** 18 + 1
    # reproducibility
    seed: int = 0

    def validate(self):
        if self.mode not in MODES:
            raise ParameterDomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.nodes < 16:
            raise ParameterDomainError("nodes must be >= 16")
        if not (self.r_max > 0):
            raise ParameterDomainError("r_max must be > 0")
        if not (0 < self.tol < 1):
            raise ParameterDomainError("tol must lie in (0, 1)")
        if self.knots < 3:
            raise ParameterDomainError("knots must be >= 3")
        if not (0 < self.mu_continuation_factor < 1):
            raise ParameterDomainError("mu_continuation_factor must lie in (0, 1)")
        if self.phi_boundary not in ("dirichlet", "robin"):
            raise ParameterDomainError("phi_boundary must be 'dirichlet' or 'robin'")
        if self.seed < 0:
            raise ParameterDomainError("seed must be >= 0")
        if not (self.R > 0):
            raise ParameterDomainError("R must be > 0")
        self.decades()  # parse check
        return self

    def decades(self) -> tuple[int, int]:
        try:
            a_str, b_str = self.eps_decades.split(":")
            a, b = int(a_str), int(b_str)
        except ValueError as exc:
            raise ParameterDomainError(
                f"eps_decades must look like 'A:B' with integers, got "
                f"{self.eps_decades!r}") from exc
        if a > b or a < 0:
            raise ParameterDomainError(
                f"eps_decades needs 0 <= A <= B, got {self.eps_decades!r}")
        return a, b

    def eps_list(self) -> list[float]:
        a, b = self.decades()
        return [10.0 ** (-d) for d in range(a, b + 1)]

    def as_payload(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        blob = json.dumps(self.as_payload(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def parse_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment; blank lines ignored."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterDomainError(
                    f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
    return values


def _coerce(key: str, value):
    if isinstance(value, str):
        try:
            if key in _BOOL_KEYS:
                low = value.lower()
                if low in ("1", "true", "yes", "on"):
                    return True
                if low in ("0", "false", "no", "off"):
                    return False
                raise ValueError(f"not a boolean: {value!r}")
            if key in _INT_KEYS:
                return int(value)
            if key in _FLOAT_KEYS:
                return float(value)
            return value
        except ValueError as exc:
            raise ParameterDomainError(f"config key {key}: {exc}") from exc
    return value


def resolve_config(mode: str, file_values: dict | None = None,
                   cli_values: dict | None = None) -> RunConfig:
    """Layer file values then CLI values over the defaults and validate."""
    cfg = RunConfig(mode=mode)
    known = {f.name for f in fields(RunConfig)}
    for source_name, source in (("config file", file_values), ("flag", cli_values)):
        if not source:
            continue
        for key, value in source.items():
            if value is None:
                continue
            if key not in known:
                raise ParameterDomainError(f"unknown {source_name} key {key!r}")
            setattr(cfg, key, _coerce(key, value))
    cfg.mode = mode
    return cfg.validate()
