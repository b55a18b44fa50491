"""fenopt: fenestration design optimization toolkit.

Rule-generated window/shading design spaces, a built-in single-zone
hourly thermal evaluator, a weighted penalty/satisfaction fitness, and a
success-history-adaptive differential evolution hybrid with quasi-Newton
local search, exposed through a FastAPI service and a thin CLI.
"""

from importlib import resources

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a bundled data file (catalog, geometry, schedules, weather)."""
    return resources.files("fenopt.data").joinpath(name)
