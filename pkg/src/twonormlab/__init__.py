"""Numerical laboratory for finite-dimensional linear 2-normed spaces.

Gram-form and product 2-norms with their axioms, bounded b-linear
functionals with four equivalent norm computations, constructive
norm-preserving extension through the admissible-value interval, duality
recovery of the 2-norm, uniform boundedness of families, and b-weak*
convergence of sequences, all checked numerically at desk scale.
"""

from .axioms import AxiomCheck, AxiomReport, check_axioms
from .errors import (
    DegenerateAnchorError,
    DomainError,
    InfeasibleExtensionError,
    InputError,
    PreconditionError,
    SpecFormatError,
    TwoNormError,
    UnboundedFunctionalError,
    UnboundedObjectiveError,
)
from .extension import (
    ExtensionStep,
    ExtensionTrace,
    default_completion,
    duality_ratios,
    extend_full,
    extend_one_step,
    interval,
    norming_functional,
    recover_two_norm,
)
from .families import (
    FunctionalFamily,
    TotalSet,
    pointwise_bound,
    uniform_bound,
    weakstar_criterion,
    weakstar_limit,
)
from .fileio import load_family, load_functional, load_space
from .functionals import (
    BLinearFunctional,
    ContinuityReport,
    WitnessCheck,
    check_b_sequential_continuity,
    check_epsilon_delta_continuity,
    evaluate,
    functional_norm,
    is_bounded,
    lipschitz_residual,
    norm_formulas,
)
from .product import product, split_cauchy, split_vector
from .spaces import (
    Ball,
    GramSpace,
    ProductSpace,
    Subspace,
    TwoNormSpace,
    Vector,
    converges_to,
    in_ball,
    is_cauchy,
    linearly_dependent,
    reverse_triangle_residual,
    standard_basis,
    two_norm,
)
from .suites import run_suite, suite_tolerances

__version__ = "0.1.0"

__all__ = [
    "AxiomCheck",
    "AxiomReport",
    "Ball",
    "BLinearFunctional",
    "ContinuityReport",
    "DegenerateAnchorError",
    "DomainError",
    "ExtensionStep",
    "ExtensionTrace",
    "FunctionalFamily",
    "GramSpace",
    "InfeasibleExtensionError",
    "InputError",
    "PreconditionError",
    "ProductSpace",
    "SpecFormatError",
    "Subspace",
    "TotalSet",
    "TwoNormError",
    "TwoNormSpace",
    "UnboundedFunctionalError",
    "UnboundedObjectiveError",
    "Vector",
    "WitnessCheck",
    "check_axioms",
    "check_b_sequential_continuity",
    "check_epsilon_delta_continuity",
    "converges_to",
    "default_completion",
    "duality_ratios",
    "evaluate",
    "extend_full",
    "extend_one_step",
    "functional_norm",
    "in_ball",
    "interval",
    "is_bounded",
    "is_cauchy",
    "linearly_dependent",
    "lipschitz_residual",
    "load_family",
    "load_functional",
    "load_space",
    "norm_formulas",
    "norming_functional",
    "pointwise_bound",
    "product",
    "recover_two_norm",
    "reverse_triangle_residual",
    "run_suite",
    "split_cauchy",
    "split_vector",
    "standard_basis",
    "suite_tolerances",
    "two_norm",
    "uniform_bound",
    "weakstar_criterion",
    "weakstar_limit",
]
