"""Python access to the llz core library."""

import json

from ._core import (
    Group,
    InvalidParameter,
    SignRegime,
    TestFunction,
    UnsupportedArgument,
    __version__,
    delta_min,
    density_integral,
    dirac_weight,
    ensemble_density,
    eta,
    gaussian_mass,
    gaussian_moment,
    kappa,
    nonvanishing_bound,
    parse_group,
    subcommands,
)
from ._core import run as _run


def run(subcommand, **options):
    """Run a CLI subcommand in memory. Option values may be any type with a str().

    JSON artifacts are decoded; other artifacts are returned as text.
    """
    opts = {k: _format(v) for k, v in options.items()}
    result = _run(subcommand, opts)
    result["artifacts"] = {
        name: json.loads(text) if name.endswith(".json") else text
        for name, text in result["artifacts"].items()
    }
    return result


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_format(v) for v in value)
    return str(value)


__all__ = [
    "Group",
    "InvalidParameter",
    "SignRegime",
    "TestFunction",
    "UnsupportedArgument",
    "__version__",
    "delta_min",
    "density_integral",
    "dirac_weight",
    "ensemble_density",
    "eta",
    "gaussian_mass",
    "gaussian_moment",
    "kappa",
    "nonvanishing_bound",
    "parse_group",
    "run",
    "subcommands",
]
