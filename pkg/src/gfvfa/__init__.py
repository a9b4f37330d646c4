"""Graph fractional vertex-frequency analysis.

Fractional graph Fourier transforms, graph chirps, vertex-frequency energy
distributions and their MSE-optimal filtering.
"""

from .chirp import ChirpSignal, chirp, chirp_matrix, chirp_rate_shift, compose_multichirp
from .distributions import (EnergyDistribution, SpectralKernel, choi_williams_kernel, delta_kernel,
                            frequency_marginal, gfed, gfgd, gfgd_dual, shannon_entropy,
                            vertex_marginal)
from .filtering import (FilterTransfer, NoiseModel, apply_filter, closed_form_mean,
                        closed_form_second_moment, metrics, optimal_transfer,
                        reconstruct_from_marginal, wiener_baseline)
from .graph import Graph, GraphError, community_graph, cycle_graph, knn_graph, sensor_graph
from .kernels import BACKEND
from .spectral import (EigenBasis, FrftOperator, cycle_dft_basis, dfrft_reference, gfrft,
                       gfrft_matrix, graph_basis, graph_from_signal, gft, igfrft, igft)

__version__ = "0.1.0"

__all__ = [
    "ChirpSignal", "chirp", "chirp_matrix", "chirp_rate_shift", "compose_multichirp",
    "EnergyDistribution", "SpectralKernel", "choi_williams_kernel", "delta_kernel",
    "frequency_marginal", "gfed", "gfgd", "gfgd_dual", "shannon_entropy", "vertex_marginal",
    "FilterTransfer", "NoiseModel", "apply_filter", "closed_form_mean",
    "closed_form_second_moment", "metrics", "optimal_transfer", "reconstruct_from_marginal",
    "wiener_baseline", "Graph", "GraphError", "community_graph", "cycle_graph", "knn_graph",
    "sensor_graph", "BACKEND", "EigenBasis", "FrftOperator", "cycle_dft_basis",
    "dfrft_reference", "gfrft", "gfrft_matrix", "graph_basis", "graph_from_signal", "gft",
    "igfrft", "igft", "__version__",
]
