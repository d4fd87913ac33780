"""Flat dotted-key run configuration.

One file per run, lines of ``section.key = value``; ``#`` starts a comment.
The canonical text (sorted keys, normalised spacing) is what gets hashed
into reports, so identical configurations hash identically no matter how
the file was formatted or which flags supplied the overrides.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

__all__ = ["ConfigError", "RunConfig", "parse_config"]


class ConfigError(ValueError):
    """A configuration problem, message prefixed with the offending key."""


def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into a flat dict (later lines win)."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = value
    return out


@dataclass
class RunConfig:
    """Typed access to the flat key space, with field-path error messages."""

    raw: dict[str, str] = field(default_factory=dict)

    # -- plumbing ----------------------------------------------------------

    def canonical_text(self) -> str:
        return "\n".join(f"{k} = {self.raw[k]}" for k in sorted(self.raw)) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def has(self, key: str) -> bool:
        return key in self.raw

    def check_keys(self, command: str, allowed: Sequence[str]) -> None:
        """Reject unknown keys under the command's own section."""
        prefix = command + "."
        allowed_set = set(allowed)
        for key in self.raw:
            if key.startswith(prefix) and key not in allowed_set:
                raise ConfigError(f"{key}: unknown key for command '{command}'")

    # -- typed getters ------------------------------------------------------

    def _require(self, key: str) -> str:
        if key not in self.raw:
            raise ConfigError(f"{key}: required")
        return self.raw[key]

    def get_str(
        self,
        key: str,
        default: Optional[str] = None,
        choices: Optional[Sequence[str]] = None,
    ) -> str:
        value = self.raw.get(key, default)
        if value is None:
            value = self._require(key)
        if choices is not None and value not in choices:
            raise ConfigError(f"{key}: must be one of {sorted(choices)}, got {value!r}")
        return value

    def get_int(
        self,
        key: str,
        default: Optional[int] = None,
        lo: Optional[int] = None,
        hi: Optional[int] = None,
    ) -> int:
        raw = self.raw.get(key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{key}: required")
            value = default
        else:
            try:
                value = int(raw)
            except ValueError:
                raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
        if lo is not None and value < lo:
            raise ConfigError(f"{key}: must be >= {lo}, got {value}")
        if hi is not None and value > hi:
            raise ConfigError(f"{key}: must be <= {hi}, got {value}")
        return value

    def get_float(
        self,
        key: str,
        default: Optional[float] = None,
        lo: Optional[float] = None,
        hi: Optional[float] = None,
    ) -> float:
        raw = self.raw.get(key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{key}: required")
            value = default
        else:
            try:
                value = float(raw)
            except ValueError:
                raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
        if lo is not None and not value >= lo:
            raise ConfigError(f"{key}: must be >= {lo}, got {value}")
        if hi is not None and not value <= hi:
            raise ConfigError(f"{key}: must be <= {hi}, got {value}")
        return value

    def get_bool(self, key: str, default: bool) -> bool:
        raw = self.raw.get(key)
        if raw is None:
            return default
        lowered = raw.lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")

    def get_floats(self, key: str) -> tuple[float, ...]:
        raw = self._require(key)
        try:
            values = tuple(float(part) for part in raw.split(",") if part.strip())
        except ValueError:
            raise ConfigError(f"{key}: expected comma-separated numbers, got {raw!r}") from None
        if not values:
            raise ConfigError(f"{key}: empty list")
        return values

    def get_levels(self, key: str, default: Optional[str] = None) -> list[int]:
        """``a:b`` (inclusive, ascending) or an explicit comma list."""
        raw = self.raw.get(key, default)
        if raw is None:
            raise ConfigError(f"{key}: required")
        try:
            if ":" in raw:
                lo_s, hi_s = raw.split(":", 1)
                lo, hi = int(lo_s), int(hi_s)
                if lo > hi:
                    raise ConfigError(
                        f"{key}: range {raw!r} is reversed (write low:high)"
                    )
                return list(range(lo, hi + 1))
            return [int(part) for part in raw.split(",") if part.strip()]
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"{key}: expected 'low:high' or a comma list, got {raw!r}") from None
