"""Benchmark problems and the name registry used by the benchmark runner."""

from .._validation import ConfigurationError
from .constants import CONSTANTS_VERSION
from .lasertag import LaserTag, lasertag_model
from .lightdark import LightDark, lightdark_model
from .subhunt import SubHunt, subhunt_model
from .vdptag import VdpTag, rk4_step, vdp_field, vdp_model

ENVIRONMENTS = ("lightdark", "lasertag", "subhunt", "vdptag", "vdptag-discrete")


def make_env(name: str, seed=None, **overrides):
    """Build the registered problem ``name``.

    ``seed`` only matters for problems with per-episode layout (Laser Tag
    obstacles); ``overrides`` replace entries of the pinned constants.
    """
    if name == "lightdark":
        return LightDark(**overrides)
    if name == "lasertag":
        return LaserTag(seed=seed, **overrides)
    if name == "subhunt":
        return SubHunt(**overrides)
    if name == "vdptag":
        return VdpTag(discretize_actions=False, **overrides)
    if name == "vdptag-discrete":
        return VdpTag(discretize_actions=True, **overrides)
    raise ConfigurationError(f"unknown environment {name!r}; known: {list(ENVIRONMENTS)}")


__all__ = [
    "CONSTANTS_VERSION",
    "ENVIRONMENTS",
    "LaserTag",
    "LightDark",
    "SubHunt",
    "VdpTag",
    "lasertag_model",
    "lightdark_model",
    "make_env",
    "rk4_step",
    "subhunt_model",
    "vdp_field",
    "vdp_model",
]
