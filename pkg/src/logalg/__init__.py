"""Exact computer algebra for logarithmic vector fields, metrics and Lie algebroids on affine charts."""
from . import algebroids, cohomology, exact, forms, loggeom, metrics
from .algebroids import (
    LieAlgebroid,
    PoissonStructure,
    abelian_algebroid,
    characteristic_foliation,
    from_poisson,
    hamiltonian_field,
    image_metric,
    invariant_functions,
    jacobi_check,
    kernel_split,
    l_invariance_check,
    tangent_algebroid,
    zero_algebroid,
)
from .cohomology import (
    CECochain,
    CoefficientModule,
    TruncationWindow,
    bott_connection,
    ce_differential,
    d_squared_check,
    log_deRham_generators,
    truncated_cohomology_ranks,
)
from .errors import *  # noqa: F401,F403
from .exact import (
    GaussianRational,
    Ideal,
    Poly,
    RationalFunction,
    Submodule,
    module_equal,
    module_member,
    parse_poly,
    syzygy_module,
)
from .forms import DiffForm, Foliation, VectorField, apply, involutivity_check, lie_bracket
from .loggeom import (
    DivisorChart,
    cond1_check,
    log_derivations,
    normal_module,
    saito_free_check,
    tangential_projection,
    zero_module,
)
from .metrics import (
    BilinearMetric,
    ChartConnection,
    Connection,
    GroupAction,
    HermitianMetric,
    group_invariance_check,
    induced_connection_on_Y,
    koszul_christoffel,
    levi_civita_check,
    quotient_metric,
    standard_bilinear,
    standard_connection,
    standard_hermitian,
    two_canonical_L_connections,
)

__version__ = "0.1.0"
