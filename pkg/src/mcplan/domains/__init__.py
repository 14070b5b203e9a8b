"""Benchmark domains and their key-value instance files.

An instance file is an INI file with a single ``[domain]`` section::

    [domain]
    kind = sailing          ; sailing | navigation | sysadmin
    name = sailing_5x5
    horizon = 15
    ...                     ; kind-specific keys, see below

Sailing keys: ``width, height, start (x, y), goal (x, y), initial_wind,
p_stay, costs (4 values for angles 0..3)``.
Navigation keys: ``width, height, disappearance (one per column), start,
goal, step_reward, goal_reward``.
SysAdmin keys: ``n, edges (i-j pairs or "ring"), p_fail, p_infect,
p_reboot, reward_per_running, explicit (bool)``.

Every numeric parameter must be present in the file; nothing is defaulted.
"""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Mapping, Union

from mcplan.domains.navigation import DEAD, NavigationConfig, NavigationMdp, build_navigation
from mcplan.domains.sailing import SailingConfig, SailingMdp, build_sailing
from mcplan.domains.sysadmin import NOOP, SysAdminConfig, SysAdminMdp, build_sysadmin, ring
from mcplan.errors import ConfigError
from mcplan.mdp import GenerativeMdp

__all__ = [
    "DEAD", "NOOP", "NavigationConfig", "NavigationMdp", "SailingConfig", "SailingMdp",
    "SysAdminConfig", "SysAdminMdp", "build_domain", "build_navigation", "build_sailing",
    "build_sysadmin", "load_instance", "ring",
]


def _floats(text: str):
    return tuple(float(v) for v in text.replace(",", " ").split())


def _ints(text: str):
    return tuple(int(v) for v in text.replace(",", " ").split())


def _edges(text: str, n: int):
    if text.strip() == "ring":
        return ring(n)
    out = []
    for tok in text.replace(",", " ").split():
        i, _, j = tok.partition("-")
        out.append((int(i), int(j)))
    return tuple(out)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def build_domain(params: Mapping[str, str]) -> GenerativeMdp:
    """Build a domain from the string key-values of a ``[domain]`` section."""
    p = dict(params)
    try:
        kind = p.pop("kind")
        name = p.pop("name", kind)
        H = int(p.pop("horizon"))
        if kind == "sailing":
            cfg = SailingConfig(width=int(p.pop("width")), height=int(p.pop("height")),
                                start=_ints(p.pop("start")), goal=_ints(p.pop("goal")),
                                initial_wind=int(p.pop("initial_wind")), p_stay=float(p.pop("p_stay")),
                                costs=_floats(p.pop("costs")), horizon=H, name=name)
            mdp = build_sailing(cfg)
        elif kind == "navigation":
            cfg = NavigationConfig(width=int(p.pop("width")), height=int(p.pop("height")),
                                   disappearance=_floats(p.pop("disappearance")),
                                   start=_ints(p.pop("start")), goal=_ints(p.pop("goal")),
                                   step_reward=float(p.pop("step_reward")),
                                   goal_reward=float(p.pop("goal_reward")), horizon=H, name=name)
            mdp = build_navigation(cfg)
        elif kind == "sysadmin":
            n = int(p.pop("n"))
            cfg = SysAdminConfig(n=n, edges=_edges(p.pop("edges"), n), p_fail=float(p.pop("p_fail")),
                                 p_infect=float(p.pop("p_infect")), p_reboot=float(p.pop("p_reboot")),
                                 reward_per_running=float(p.pop("reward_per_running")), horizon=H,
                                 explicit=_bool(p.pop("explicit")), name=name)
            mdp = build_sysadmin(cfg)
        else:
            raise ConfigError(f"unknown domain kind {kind!r}")
    except KeyError as e:
        raise ConfigError(f"missing domain key {e.args[0]!r}") from None
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from None
    if p:
        raise ConfigError(f"unknown domain keys: {sorted(p)}")
    return mdp


def load_instance(path: Union[str, Path]) -> GenerativeMdp:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not parser.read(path):
        raise ConfigError(f"cannot read instance file {path}")
    if not parser.has_section("domain"):
        raise ConfigError(f"{path}: missing [domain] section")
    return build_domain(parser["domain"])
