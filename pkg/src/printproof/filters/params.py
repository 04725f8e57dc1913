"""Filter parameter sets. Defaults are the shipped analysis configuration;
validation raises InvalidParameter with the offending field name so the CLI
and HTTP layers can point at it."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from ..core import CHANNELS, digest_params
from ..errors import InvalidParameter


def _check_int(field: str, value, lo: int, hi: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidParameter(field, f"{field} must be an integer")
    if value < lo or (hi is not None and value > hi):
        bound = f">= {lo}" if hi is None else f"in {lo}..{hi}"
        raise InvalidParameter(field, f"{field} must be {bound}, got {value}")
    return value


@dataclass(frozen=True)
class ElaParams:
    quality: int = 75
    scale: int = 50
    contrast: int = 20

    def __post_init__(self):
        _check_int("quality", self.quality, 1, 100)
        _check_int("scale", self.scale, 0, 100)
        _check_int("contrast", self.contrast, 0, 100)

    def digest(self) -> str:
        return digest_params("ela", asdict(self))


@dataclass(frozen=True)
class LgaParams:
    intensity: int = 95
    channel: str = "blue"
    normalized: bool = True

    def __post_init__(self):
        _check_int("intensity", self.intensity, 0, 100)
        if self.channel not in CHANNELS:
            raise InvalidParameter("channel", f"channel must be one of {CHANNELS}")
        if not isinstance(self.normalized, bool):
            raise InvalidParameter("normalized", "normalized must be a boolean")

    def digest(self) -> str:
        return digest_params("lga", asdict(self))


@dataclass(frozen=True)
class NoiseParams:
    radius: int = 1
    gain: float = 8.0

    def __post_init__(self):
        _check_int("radius", self.radius, 1, 64)
        if not isinstance(self.gain, (int, float)) or isinstance(self.gain, bool) \
                or not self.gain > 0:
            raise InvalidParameter("gain", "gain must be > 0")

    def digest(self) -> str:
        return digest_params("noise", {"radius": self.radius, "gain": float(self.gain)})


@dataclass(frozen=True)
class PcaParams:
    component: int = 1
    mode: str = "distance"

    def __post_init__(self):
        _check_int("component", self.component, 1, 3)
        if self.mode not in ("projection", "distance"):
            raise InvalidParameter("mode", "mode must be projection or distance")

    def digest(self) -> str:
        return digest_params("pca", asdict(self))

    @property
    def kind(self) -> str:
        return f"pca_{self.mode}"
