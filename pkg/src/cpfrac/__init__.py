"""cpfrac: ductile transgranular fracture of single crystals.

Gradient-extended crystal plasticity coupled to a micromorphic AT2
phase-field fracture model with locally enforced damage irreversibility,
discretized with linear simplex finite elements and solved by a two-set
staggered scheme.
"""

from .materials import (
    InhomogeneitySpec,
    MaterialParams,
    SlipSystem,
    bump,
    fcc_slip_catalog,
    yield_reduction,
)
from .pointwise import (
    LocalInput,
    LocalOutput,
    LocalSolveError,
    PointState,
    degradation_ge,
    dissipation_increment,
    kappa,
    local_phasefield_solve,
    local_plastic_solve,
    schmid_stresses,
    yield_value,
)
from .tensors import (
    DegenerateKinematicsError,
    ElasticConstants,
    elastic_cauchy_green,
    elastic_second_pk,
    first_pk,
    mandel_stress,
    neo_hookean_energy,
)

__version__ = "0.1.0"
