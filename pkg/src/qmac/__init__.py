"""Capacity regions of quantum and classical multiple-access channels.

Numerical toolkit for two- and three-sender channel coding: Kraus-channel
simulation, Holevo quantities, convex rate-region geometry (halfspace
intersection, Minkowski sums), classical-channel capacity via Blahut-Arimoto,
and the dense-coding protocols that separate joint use of channels from their
separate (Minkowski-sum) use.
"""

from qmac.hilbert import (
    PAULIS,
    DensityOperator,
    PureState,
    basis_state,
    bell_state,
    entropy_directional_derivative,
    hermitian_eigenvalues,
    maximally_mixed,
    partial_trace,
    permute_systems,
    product_state,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
)
from qmac.channels import (
    KrausChannel,
    apply,
    compose,
    controlled_pauli_unitary,
    depolarizing,
    gamma_p,
    identity_channel,
    phi_p,
    psi_id,
    tensor_channels,
)
from qmac.infoq import (
    Ensemble,
    MacInfoTriple,
    SearchConfig,
    chi1_bruteforce,
    chi1_closed_form,
    chi2_prime_closed_form,
    chi2_prime_protocol,
    dense_coding_rate,
    entropy_max_check,
    holevo_chi,
    mac_mutual_informations,
    min_output_entropy_scan,
    remote_dc_rate,
    superadditivity_gap,
)
from qmac.regions import (
    Halfspace,
    RateRegion2D,
    SamplingConfig,
    achievable_region,
    contains,
    convex_hull,
    hausdorff_distance,
    known_region,
    minkowski_sum,
    pentagon_from_ensembles,
    region_from_halfspaces,
    strict_subset,
    subset,
)
from qmac.cmac import (
    ClassicalMac,
    additivity_check,
    blahut_arimoto,
    bsc_pair_mac,
    gamma_entangled_rb,
    gamma_rb_bound,
    gamma_single_copy_rb,
    identity_mac,
    lambda2_channel,
    mac_region,
    product_mac,
    region_additivity_demo,
    xor_mac,
)

__version__ = "0.1.0"
