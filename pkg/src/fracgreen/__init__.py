"""Green's functions of the 2D space-fractional Schrodinger equation.

Modules: ``specfun`` (gamma, Bessel, Struve), ``foxh`` (Fox H-functions),
``green_td`` / ``green_ti`` (time-dependent and time-independent Green's
functions), ``scattering`` (Born approximation), ``oracle`` (independent
quadrature checks), ``verify`` (acceptance suite) and ``cli``.
"""

try:
    from importlib.metadata import PackageNotFoundError, version

    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .errors import (
    ConditionsViolated,
    FarFieldViolation,
    FracGreenError,
    GammaPoleError,
    InapplicableExpansion,
    NoConvergence,
    PrecisionBudgetExceeded,
    RegimeWarning,
    SingularityError,
    UnderResolved,
)
from .foxh import HFunctionSpec, evaluate, parse_spec
from .green_td import FractionalParams, SpacetimeSeparation, green_td
from .green_ti import TIContext, green_ti

__all__ = [
    "__version__",
    "ConditionsViolated",
    "FarFieldViolation",
    "FracGreenError",
    "GammaPoleError",
    "InapplicableExpansion",
    "NoConvergence",
    "PrecisionBudgetExceeded",
    "RegimeWarning",
    "SingularityError",
    "UnderResolved",
    "HFunctionSpec",
    "evaluate",
    "parse_spec",
    "FractionalParams",
    "SpacetimeSeparation",
    "green_td",
    "TIContext",
    "green_ti",
]
