"""Plain-text configuration: `key = value` lines, `#` comments.

Command-line flags carry the same key names and override file values.
Missing keys fall back to defaults (natural units m = T = hbar = 1);
present-but-invalid values are errors naming the offending key.
"""

from __future__ import annotations

__all__ = [
    "ConfigError",
    "parse_config_text",
    "load_config_file",
    "coerce",
    "SCHEMAS",
]


class ConfigError(ValueError):
    """Carries the offending key so front ends can emit `error: <key>: <msg>`."""

    def __init__(self, key: str, msg: str) -> None:
        self.key = key
        self.msg = msg
        super().__init__(f"{key}: {msg}")


def parse_config_text(text: str) -> dict:
    """Raw key -> string-value mapping; later duplicates win."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}", f"expected `key = value`, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}", "missing key before `=`")
        out[key] = value.strip()
    return out


def load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_config_text(text)


def _float(raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"not a number: {raw!r}") from None


def positive_float(raw: str) -> float:
    v = _float(raw)
    if not v > 0:
        raise ValueError(f"must be positive, got {raw!r}")
    return v


def nonneg_float(raw: str) -> float:
    v = _float(raw)
    if v < 0:
        raise ValueError(f"must be nonnegative, got {raw!r}")
    return v


def any_float(raw: str) -> float:
    return _float(raw)


def positive_int(raw: str) -> int:
    try:
        v = int(raw)
    except ValueError:
        raise ValueError(f"not an integer: {raw!r}") from None
    if v <= 0:
        raise ValueError(f"must be a positive integer, got {raw!r}")
    return v


def choice(*options: str):
    def convert(raw: str) -> str:
        if raw not in options:
            raise ValueError(f"expected one of {', '.join(options)}; got {raw!r}")
        return raw

    return convert


def float_list(raw: str) -> tuple:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(_float(p) for p in parts)


def dims_pair(raw: str) -> tuple:
    # accepts 2x3 or 2,3
    sep = "x" if "x" in raw else ","
    parts = [p.strip() for p in raw.split(sep)]
    if len(parts) != 2:
        raise ValueError(f"expected DPxDE, got {raw!r}")
    try:
        dp, de = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"expected DPxDE, got {raw!r}") from None
    if dp < 2 or de < 2:
        raise ValueError("both dimensions must be at least 2")
    return dp, de


_UNITS = {
    "m": (positive_float, 1.0),
    "T": (positive_float, 1.0),
    "hbar": (positive_float, 1.0),
}

# key -> (converter, default); default None means optional with no value
SCHEMAS = {
    "sql": {
        **_UNITS,
        "L": (positive_float, None),
        "F": (nonneg_float, 0.0),
        "D": (nonneg_float, 0.0),
    },
    "simulate": {
        **_UNITS,
        "state": (choice("cat", "gaussian"), "cat"),
        "mode": (choice("grid", "analytic"), "grid"),
        "D": (nonneg_float, None),
        "L": (positive_float, None),
        "sigma_x": (positive_float, None),
        "nx": (positive_int, 512),
        "np": (positive_int, None),
        "steps": (positive_int, 64),
    },
    "detect": {
        **_UNITS,
        "family": (choice("noncontractive", "contractive", "cat"), "noncontractive"),
        "D_alt": (nonneg_float, None),
        "L": (positive_float, None),
        "n_sigma": (positive_int, 41),
        "n_r": (positive_int, 41),
        "r_max": (positive_float, 0.999),
    },
    "first-order": {
        "dims": (dims_pair, (2, 3)),
        "seed": (positive_int, 42),
        "eps": (float_list, (0.1, 0.03, 0.01, 0.003, 0.001)),
        "t": (positive_float, 1.0),
    },
    "scale-hbar": {
        **_UNITS,
        "L": (positive_float, None),
        "F": (nonneg_float, 0.0),
        "D": (nonneg_float, 0.0),
        "kappa": (float_list, (1.0, 0.1, 0.01)),
    },
}


def coerce(command: str, raw: dict) -> dict:
    """Validate raw string values against a command's schema.

    Returns a fully-populated typed dict (defaults filled in). Unknown keys
    and unparsable values raise ConfigError naming the key.
    """
    schema = SCHEMAS[command]
    out: dict = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(key, f"unknown key for `{command}`")
        if value == "":
            raise ConfigError(key, "empty value")
        converter = schema[key][0]
        try:
            out[key] = converter(value)
        except ValueError as exc:
            raise ConfigError(key, str(exc)) from None
    for key, (_, default) in schema.items():
        if key not in out:
            out[key] = default
    return out
