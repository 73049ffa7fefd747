"""Implicit finite-difference solver for a coupled nonlocal reaction-diffusion system."""

from .config import PRESETS, RunConfig, resolve_config
from .energy import (DecayFit, EnergyRecorder, EnergyTrace, decay_condition, energy,
                     fit_decay_rate, poincare_constant, predicted_rate)
from .errors import (BlowUpError, ConfigError, EvaluationError, FitDomainError,
                     InvalidGridError, ModelAssumptionError, NonlocalRDError, SamplingError,
                     SimulationError, SingularSystemError, StabilityError)
from .grid import Field, Grid1D, build_grid, nonlocal_form, sample_initial
from .model import (ConstantDiffusion, CustomReaction, DiffusionSpec, ReactionSpec,
                    coupling_source, diffusion_coefficient, lipschitz_estimate, no_reaction)
from .oracles import (DenseSystem, cross_check, dense_solve, exact_heat_mode,
                      explicit_euler_step)
from .stepper import FieldPair, SchemeConfig, StepReport, assemble, simulate, step
from .tridiag import ThomasWorkspace, TridiagonalSystem, dominance_margin, thomas_solve

__version__ = "0.1.0"
