"""Distance distribution functions, triangle-function constructions on them,
and diagnostics for which function classes those constructions preserve."""

from .classify import CLASS_ORDER, DDFClass, Membership, classify
from .ddf import (
    bottom,
    from_qsup,
    is_ddf,
    loads_ddf,
    make_ddf,
    make_step,
    qinf,
    qsup,
    sup_of,
    top,
)
from .experiments import (
    ALL_THEOREMS,
    CLASSES,
    Direction,
    Instance,
    TheoremReport,
    closure_experiment,
    run_suite,
)
from .pl import INF, PL
from .witnesses import (
    witness_prop43,
    witness_prop44,
    witness_thm38,
    witness_thm42,
    witness_thm49,
)

__all__ = [
    "ALL_THEOREMS",
    "CLASSES",
    "CLASS_ORDER",
    "DDFClass",
    "Direction",
    "INF",
    "Instance",
    "Membership",
    "PL",
    "TheoremReport",
    "bottom",
    "classify",
    "closure_experiment",
    "from_qsup",
    "is_ddf",
    "loads_ddf",
    "make_ddf",
    "make_step",
    "qinf",
    "qsup",
    "run_suite",
    "sup_of",
    "top",
    "witness_prop43",
    "witness_prop44",
    "witness_thm38",
    "witness_thm42",
    "witness_thm49",
]

__version__ = "0.1.0"
