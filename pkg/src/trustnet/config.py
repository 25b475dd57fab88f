"""Flat ``key = value`` simulation config files.

::

    # trust process
    J = 2000
    alpha = 0.1
    gamma_kind = constant        # constant | geometric | sleeper
    gamma_params = 1.0           # gamma | gamma1,rho | L
    gamma_bot = 1.0
    steps = 2000000
    seed = 7
    init = uniform-tau-one       # uniform-tau-one | from-sigma
    snapshot = geometric         # geometric | none | <interval>
"""
from __future__ import annotations

from .dynamics import DEFAULT_SEED, GammaSchedule, SimConfig
from .errors import ParseError

__all__ = ["KEYS", "REQUIRED", "MissingKeyError", "UnknownKeyError", "parse_config_text",
           "read_config", "build_config"]

KEYS = ("J", "alpha", "gamma_kind", "gamma_bot", "gamma_params", "steps", "seed", "init", "snapshot")
REQUIRED = ("J", "alpha", "gamma_kind", "gamma_params", "steps")


class MissingKeyError(KeyError):
    def __init__(self, key):
        super().__init__(key)
        self.key = key

    def __str__(self):
        return f"missing config key {self.key!r}"


class UnknownKeyError(KeyError):
    def __init__(self, key):
        super().__init__(key)
        self.key = key

    def __str__(self):
        return f"unknown config key {self.key!r} (allowed: {', '.join(KEYS)})"


def parse_config_text(text: str) -> dict:
    """Raw ``{key: string}`` mapping; rejects unknown and repeated keys."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise UnknownKeyError(key)
        if key in out:
            raise ParseError(f"key {key!r} given twice", lineno)
        out[key] = value
    return out


def read_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _num(raw, key, kind):
    try:
        return kind(raw)
    except ValueError:
        raise ParseError(f"{key} = {raw!r} is not a valid {kind.__name__}") from None


def build_config(raw: dict, tau0=None) -> SimConfig:
    """Turn a raw mapping (strings or numbers) into a validated :class:`SimConfig`."""
    for key in raw:
        if key not in KEYS:
            raise UnknownKeyError(key)
    for key in REQUIRED:
        if key not in raw:
            raise MissingKeyError(key)
    params = raw["gamma_params"]
    if isinstance(params, str):
        params = [_num(p.strip(), "gamma_params", float) for p in params.split(",") if p.strip()]
    schedule = GammaSchedule(str(raw["gamma_kind"]), tuple(params),
                             _num(raw.get("gamma_bot", 1.0), "gamma_bot", float))
    snapshot = str(raw.get("snapshot", "geometric"))
    if snapshot not in ("geometric", "none"):
        snapshot = _num(snapshot, "snapshot", int)
    return SimConfig(
        J=_num(raw["J"], "J", int),
        alpha=_num(raw["alpha"], "alpha", float),
        schedule=schedule,
        steps=_num(raw["steps"], "steps", int),
        seed=_num(raw.get("seed", DEFAULT_SEED), "seed", int),
        init=str(raw.get("init", "uniform-tau-one")),
        tau0=tuple(int(x) for x in tau0) if tau0 is not None else None,
        snapshot=snapshot,
    )
