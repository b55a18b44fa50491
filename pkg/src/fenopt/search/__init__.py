"""Population search: DE, SHADE, GA baseline, quasi-Newton local search,
and the SHADE + local-search hybrid with intelligent restarts."""

from .records import RunRecord
from .problems import (BudgetTracker, FenestrationProblem, ShiftedRastrigin,
                       ShiftedSphere)
from .de import de_run, de_step
from .shade import ShadeMemory, shade_step
from .lbfgsb import finite_difference_gradient, local_search
from .ga import GAConfig, ga_run
from .hybrid import HybridConfig, hybrid_run

__all__ = [
    "RunRecord", "BudgetTracker", "FenestrationProblem", "ShiftedSphere",
    "ShiftedRastrigin", "de_run", "de_step", "ShadeMemory", "shade_step",
    "finite_difference_gradient", "local_search", "GAConfig", "ga_run",
    "HybridConfig", "hybrid_run",
]
