"""Toolkit-wide numeric settings shared by the library and the command line."""

from pydantic import BaseModel, ConfigDict, Field

DEFAULT_TOL: float = 1e-9
DEFAULT_MAX_CONDITION: float = 1e12
DEFAULT_MAX_ORDER: int = 64
DEFAULT_BOUND: int = 2
DEFAULT_JOBS: int = 1


class ToolkitConfig(BaseModel):
    """Tolerances and limits threaded through a command-line invocation."""

    model_config = ConfigDict(frozen=True)

    tol: float = Field(DEFAULT_TOL, gt=0.0, description="Tolerance for Siegel and period-basis validity checks")
    max_condition: float = Field(DEFAULT_MAX_CONDITION, gt=1.0, description="Largest condition number accepted for the normalising block")
    max_order: int = Field(DEFAULT_MAX_ORDER, ge=1, description="Largest cokernel order enumerated coset by coset")
    bound: int = Field(DEFAULT_BOUND, ge=0, description="Entry radius for bounded matrix searches")
    jobs: int = Field(DEFAULT_JOBS, ge=1, description="Worker processes for searches (output order is unaffected)")
