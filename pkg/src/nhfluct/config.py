"""INI-style experiment configuration files.

One experiment per file::

    [experiment]
    distribution = gaussian
    n_grid = 256, 512, 1024
    trials = 200
    seed = 7
    guard_kappa = 2.25
    l = 2

    [statistic:tk]
    kind = trace-kernel
    z = 3
    w = 3

    [check:tk-mean]
    statistic = tk
    field = mean
    target = 0.125
    abs_tol = 0.01

``distribution`` and ``truncate`` may also live in an ``[ensemble]``
section. Complex values use Python syntax (``2.5+1j``); combination arrays
are rows separated by ``;`` (``alphas = 1, 0; 0, 0``). Entry indices are
1-based.
"""

from __future__ import annotations

import configparser
import re
from typing import Dict, Optional

from .errors import ConfigError
from .harness import KINDS, Check, ExperimentConfig, Statistic

_EXPERIMENT_KEYS = {"distribution", "n_grid", "trials", "seed", "guard_kappa", "l", "truncate", "norm_tol"}
_STAT_KEYS = {"kind", "z", "w", "i", "j", "f", "alphas", "betas", "distribution"}
_CHECK_KEYS = {"statistic", "field", "target", "abs_tol", "rel_tol", "min", "max", "trend", "n"}


def _line_of(text: str, section: str, key: Optional[str] = None) -> Optional[int]:
    in_section = False
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            in_section = s[1:-1].strip() == section
            if in_section and key is None:
                return lineno
            continue
        if in_section and key is not None and re.match(rf"{re.escape(key)}\s*[=:]", s):
            return lineno
    return None


class _Reader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";;"))
        self.cp.optionxform = str
        try:
            self.cp.read_string(text, source=source)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise ConfigError(f"{source}: {exc}".replace("\n", " "), line=line) from None

    def fail(self, section, key, msg):
        line = _line_of(self.text, section, key) or _line_of(self.text, section)
        where = f"{self.source}:{line}" if line else self.source
        field = f"{section}.{key}" if key else section
        raise ConfigError(f"{where}: [{section}] {key or ''}: {msg}".replace(" : ", ": "), field=field, line=line)

    def get(self, section, key, conv, default=..., required=False):
        sec = self.cp[section] if self.cp.has_section(section) else {}
        if key not in sec:
            if required or default is ...:
                self.fail(section, key, f"missing required field {key!r}")
            return default
        raw = sec[key].strip()
        try:
            return conv(raw)
        except (ValueError, TypeError) as exc:
            self.fail(section, key, f"invalid value {raw!r} ({exc})")

    def check_keys(self, section, allowed):
        for k in self.cp[section]:
            if k not in allowed:
                self.fail(section, k, f"unknown field {k!r}; allowed: {sorted(allowed)}")


def _int_list(s: str):
    vals = tuple(int(x) for x in re.split(r"[,\s]+", s.strip("[] ")) if x)
    if not vals:
        raise ValueError("empty list")
    return vals


def _bool(s: str) -> bool:
    t = s.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected true/false")


def _complex(s: str) -> complex:
    return complex(s.replace(" ", ""))


def _array(s: str):
    rows = [r for r in s.split(";") if r.strip()]
    out = tuple(tuple(_complex(x) for x in r.split(",") if x.strip()) for r in rows)
    if len({len(r) for r in out}) != 1:
        raise ValueError("ragged array")
    return out


def parse_config(text: str, source: str = "<config>", seed: Optional[int] = None) -> ExperimentConfig:
    """Parse config text into a validated :class:`ExperimentConfig`; raises :class:`ConfigError`."""
    rd = _Reader(text, source)
    if not rd.cp.has_section("experiment"):
        raise ConfigError(f"{source}: missing [experiment] section", field="experiment")
    rd.check_keys("experiment", _EXPERIMENT_KEYS)
    if rd.cp.has_section("ensemble"):
        rd.check_keys("ensemble", {"distribution", "truncate"})
    ens = "ensemble" if rd.cp.has_section("ensemble") and "distribution" in rd.cp["ensemble"] else "experiment"
    kw: Dict = dict(
        n_grid=rd.get("experiment", "n_grid", _int_list, required=True),
        trials=rd.get("experiment", "trials", int, required=True),
        seed=rd.get("experiment", "seed", int, 0),
        guard_kappa=rd.get("experiment", "guard_kappa", float, 2.25),
        l=rd.get("experiment", "l", int, 2),
        norm_tol=rd.get("experiment", "norm_tol", float, 1e-4),
        distribution=rd.get(ens, "distribution", str, "gaussian"),
        truncate=rd.get("ensemble" if rd.cp.has_section("ensemble") else "experiment", "truncate", _bool, False),
    )
    if seed is not None:
        kw["seed"] = int(seed)
    stats = []
    checks = []
    for section in rd.cp.sections():
        head, _, name = section.partition(":")
        if head == "statistic":
            rd.check_keys(section, _STAT_KEYS)
            kind = rd.get(section, "kind", str, required=True)
            if kind not in KINDS:
                rd.fail(section, "kind", f"unknown statistic kind {kind!r}; choose from {list(KINDS)}")
            stats.append(
                Statistic(
                    kind=kind,
                    id=name.strip(),
                    z=rd.get(section, "z", _complex, None),
                    w=rd.get(section, "w", _complex, None),
                    i=rd.get(section, "i", int, 1),
                    j=rd.get(section, "j", int, 2),
                    f=rd.get(section, "f", str, None),
                    alphas=rd.get(section, "alphas", _array, None),
                    betas=rd.get(section, "betas", _array, None),
                    distribution=rd.get(section, "distribution", str, None),
                )
            )
        elif head == "check":
            rd.check_keys(section, _CHECK_KEYS)
            checks.append(
                Check(
                    name=name.strip() or section,
                    statistic=rd.get(section, "statistic", str, required=True),
                    field=rd.get(section, "field", str, required=True),
                    target=rd.get(section, "target", _complex, None),
                    abs_tol=rd.get(section, "abs_tol", float, None),
                    rel_tol=rd.get(section, "rel_tol", float, None),
                    min=rd.get(section, "min", float, None),
                    max=rd.get(section, "max", float, None),
                    trend=rd.get(section, "trend", str, None),
                    n=rd.get(section, "n", int, None),
                )
            )
        elif head not in ("experiment", "ensemble"):
            rd.fail(section, None, "unknown section")
    cfg = ExperimentConfig(statistics=tuple(stats), checks=tuple(checks), **kw)
    try:
        return cfg.validate()
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}", field=exc.field) from None
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path, seed: Optional[int] = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text, str(path), seed)
