"""Exact computations for one-sided Markov shifts: cohomology of locally
constant potentials, Bowen-Franks invariants, dynamical zeta series,
transducer-given orbit equivalences and one-sided suspension flows."""

from .errors import *  # noqa: F401,F403
from .shift import (
    BlockGraph,
    PeriodicOrbit,
    Point,
    ShiftSpace,
    count_periodic,
    higher_block,
    orbits_up_to,
    parse_word,
    periodic_orbits,
    periodic_points,
    shift,
    validate_shift,
)
from .cohomology import (
    LocallyConstantFn,
    OrderUnitCertificate,
    birkhoff,
    coboundary_of,
    cohomologous,
    combine,
    compose_shift,
    eval_fn,
    is_coboundary,
    min_cycle_mean,
    order_unit,
    positivity_witness,
)
from .invariants import (
    PointedAbelianGroup,
    SNFResult,
    bowen_franks,
    determinant,
    one_sided_floweq,
    pointed_iso_exists,
    smith_normal_form,
)
from .zeta import (
    FormalSeries,
    LaurentPoly,
    exp_series,
    series_of_reciprocal,
    transfer_matrix,
    weighted_trace,
    zeta_det,
    zeta_series,
    zeta_series_det,
)
from .coe import (
    COEPair,
    Transducer,
    VerificationReport,
    apply,
    beta,
    birkhoff_transfer_check,
    identity_pair,
    paper_example,
    psi,
    psi_inverse,
    sample_points,
    transfer_ceilings,
    verify_coe,
    xi,
)
from .suspension import (
    SuspensionPoint,
    SuspensionTriplet,
    Transport,
    canonical_form,
    cycle_point,
    equivalent,
    flow,
    normalize,
    orbit_length,
    retime,
    standard_triplet,
    transport,
    validate_triplet,
)

__version__ = "0.1.0"
