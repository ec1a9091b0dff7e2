"""Problem configuration documents.

A problem lives in a plain-text document of nested sections with key-value
pairs (INI syntax):

    [domain]
    xmin = -10
    xmax = 10
    ymin = -1.25
    ymax = 1.25

    [constants]
    a_hat = 0.8
    b_hat = 1

    [metric]        ; optional, defaults to the Euclidean background
    h11 = 1
    h12 = 0
    h22 = 1

    [wind]
    w1 = a_hat * (b_hat - y**2)**2
    w2 = 0

    [speed]
    u = cos(y)

Field values are expression strings over x, y and the named constants.
Constants are kept verbatim as decimal strings so a load/dump round trip is
bit-exact.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, ExpressionError
from .fields import (MetricField, NavigationData, Rect, ScalarField,
                     VectorField)

_REQUIRED = {
    "domain": ("xmin", "xmax", "ymin", "ymax"),
    "wind": ("w1", "w2"),
    "speed": ("u",),
}


@dataclass
class ProblemConfig:
    """Parsed problem document plus the raw strings needed to re-emit it."""

    data: NavigationData
    constants: dict[str, str]        # raw decimal strings, order preserved
    sections: dict[str, dict[str, str]]
    source: str | None = None

    def dump(self) -> str:
        """Serialize back to document text; constants round-trip bit-exactly."""
        lines = []
        for name, kv in self.sections.items():
            lines.append(f"[{name}]")
            for k, v in kv.items():
                lines.append(f"{k} = {v}")
            lines.append("")
        return "\n".join(lines)


def _parse_number(raw: str, section: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from None


def loads_problem(text: str, source: str | None = None) -> ProblemConfig:
    """Parse a problem document from a string."""
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source or "<string>")
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("content before the first section header",
                          line=e.lineno) from None
    except configparser.ParsingError as e:
        line = e.errors[0][0] if e.errors else None
        raise ConfigError(f"malformed document: {e.message.splitlines()[0]}",
                          line=line) from None

    sections = {name: dict(cp.items(name)) for name in cp.sections()}
    for sec, keys in _REQUIRED.items():
        if sec not in sections:
            raise ConfigError(f"missing section [{sec}]")
        for k in keys:
            if k not in sections[sec]:
                raise ConfigError(f"missing key {k!r} in section [{sec}]")
    if "metric" in sections:
        for k in ("h11", "h12", "h22"):
            if k not in sections["metric"]:
                raise ConfigError(f"missing key {k!r} in section [metric]")

    constants = dict(sections.get("constants", {}))
    const_values = {k: _parse_number(v, "constants", k)
                    for k, v in constants.items()}

    dom = sections["domain"]
    try:
        domain = Rect(_parse_number(dom["xmin"], "domain", "xmin"),
                      _parse_number(dom["xmax"], "domain", "xmax"),
                      _parse_number(dom["ymin"], "domain", "ymin"),
                      _parse_number(dom["ymax"], "domain", "ymax"))
    except ValueError as e:
        raise ConfigError(f"bad domain rectangle: {e}") from None

    def field(section: str, key: str) -> ScalarField:
        try:
            return ScalarField.from_expression(sections[section][key],
                                               const_values)
        except ExpressionError as e:
            raise ConfigError(f"[{section}] {key}: {e}") from None

    if "metric" in sections:
        h = MetricField(field("metric", "h11"), field("metric", "h12"),
                        field("metric", "h22"))
    else:
        h = MetricField.euclidean()
    wind = VectorField(field("wind", "w1"), field("wind", "w2"))
    speed = field("speed", "u")

    data = NavigationData(h, wind, speed, domain)
    return ProblemConfig(data, constants, sections, source)


def load_problem(path: str | Path) -> ProblemConfig:
    """Parse a problem document from a file."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {p}: {e.strerror}") from None
    return loads_problem(text, source=str(p))
