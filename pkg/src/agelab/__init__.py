"""Exact Baker-map dynamics and Liouvillian wave packets in the age representation."""

__version__ = "0.1.0"

from .baker_core import (  # noqa: E402
    BitTape,
    CylinderSpec,
    WalshExpansion,
    WalshIndexSet,
    baker_forward,
    baker_inverse,
    koopman_apply,
    measure_cylinder,
)
from .hardy_continuous import plus_mass, psi_split, theorem_sweep  # noqa: E402
from .hardy_discrete import absorption_time, split_by_age  # noqa: E402
from .liouville_packets import (  # noqa: E402
    DensityKernel,
    EnergyGrid,
    NuSigmaGrid,
    evolve_age,
    evolve_nu,
    from_age,
    to_age,
)

__all__ = [
    "__version__",
    "BitTape",
    "CylinderSpec",
    "WalshExpansion",
    "WalshIndexSet",
    "baker_forward",
    "baker_inverse",
    "koopman_apply",
    "measure_cylinder",
    "plus_mass",
    "psi_split",
    "theorem_sweep",
    "absorption_time",
    "split_by_age",
    "DensityKernel",
    "EnergyGrid",
    "NuSigmaGrid",
    "evolve_age",
    "evolve_nu",
    "from_age",
    "to_age",
]
