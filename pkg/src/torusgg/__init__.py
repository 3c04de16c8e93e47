"""Sparse l-infinity random geometric graphs on high-dimensional tori.

Simulation (seeded Poisson clouds, edge filtrations, component queries),
evaluation of additive and multi-additive graph functionals, exact limit
predictions (constraint-polytope volumes, scaling constants, Poisson and
Brownian limits), and a statistical verification harness.
"""

from . import asymptotics, euler_regime, functionals, harness, homology
from .asymptotics import (AsymptoticProfile, brownian_time_change,
                          mecke_exact_subgraph_mean, poisson_intensity,
                          predicted_cov, predicted_mean, rho, support_profile,
                          v_exact, v_monte_carlo)
from .gilbert import (Component, FiltrationGraph, build_filtration,
                      components_at, pair_backend, snapshot_sequence)
from .graphs import (SmallGraph, automorphism_count, canonical_code,
                     count_embeddings, enumerate_connected, format_graph,
                     parse_graph)
from .harness import ExperimentConfig, run_replications
from .torus import (PointCloud, WindowSpec, expected_point_count,
                    sample_poisson_cloud, wrap_distance)

__version__ = "0.1.0"
