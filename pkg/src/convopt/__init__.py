"""Global maximization through convex convolution surrogates and sign descent."""

from .kernel import Kernel1D, KernelND
from .objective import Objective, SupportBox, get_objective
from .rescale import PowerLift, suggest_power
from .trace import Trace

__all__ = ["Kernel1D", "KernelND", "Objective", "SupportBox", "get_objective", "PowerLift",
           "suggest_power", "Trace"]
__version__ = "0.1.0"
