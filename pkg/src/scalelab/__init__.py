"""scalelab: a unit-aware dimensional-analysis and scaling-law workbench.

Derive power-law forms from dimensional constraints over exact rationals,
compute dimensionless-group bases, solve and chain monomial scaling
relations, fit power laws to data in log space with covariates and
diagnostics, and run a casebook of classic worked predictions behind a
command-line interface.
"""

from .algebra import (
    DimMatrix,
    PiGroup,
    ScalingRelation,
    chain,
    check_exponent_bound,
    pi_basis,
    solve_balance,
    solve_target_exponents,
)
from .casebook import (
    BlastConfig,
    CaseReport,
    blast_radius,
    blast_yield,
    hull_speed,
    kleiber_chain_demo,
    roast_time,
    terminal_velocity_scale,
)
from .csvio import dump_csv, load_csv, save_csv
from .errors import (
    CapacityError,
    CollinearityError,
    DataError,
    DerivationError,
    DimensionMismatchError,
    InconsistentDimensionsError,
    QuantityParseError,
    RelationError,
    ScaleLabError,
    UnderdeterminedError,
    UnknownUnitError,
)
from .regression import (
    DataSet,
    FitResult,
    ModelSpec,
    fit_power_law,
    fit_quadratic_log,
    fit_with_covariates,
    residual_distance_ratio,
    transform_under_unit_change,
)
from .svgplot import PlotSpec, emit_svg_plot
from .units import (
    Dimension,
    Quantity,
    Unit,
    UnitRegistry,
    convert,
    default_registry,
    dim_combine,
    log_ratio,
    parse_quantity,
)

__version__ = "0.1.0"
