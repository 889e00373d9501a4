"""G-concurrence and monogamy of entanglement for tripartite qudit states."""
from .errors import EntanglementError, InvalidStateError, MalformedStateFileError, NotPSDError
from .kernels import BACKEND
from .measures import (GValue, MonotoneVector, concurrence_monotones, det_superadditivity_check,
                       g_concurrence_marginal, g_concurrence_pure, monotones_from_spectrum)
from .monogamy import (CampaignSummary, MonogamyReport, all_pivots, ckw_concurrence_residual,
                       monogamy_residual, verify_campaign)
from .roof import (EnsembleDecomposition, RoofConfig, RoofResult, decomposition_profile,
                   roof_upper_bound)
from .tensor import (BipartitePureState, DensityMatrix, PureTripartiteState, SchmidtDecomposition,
                     haar_random_tripartite, make_tripartite, partial_trace, psd_determinant,
                     schmidt_decompose)
from .zoo import antisymmetric_chi, ghz, w_class, w_state

__version__ = "0.1.0"
